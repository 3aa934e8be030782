#include "dynamics/dynamics.hpp"

#include <cmath>
#include <random>

#include "core/constants.hpp"
#include "core/errors.hpp"
#include "core/parallel.hpp"

namespace fluxtorque::dynamics {

namespace {

namespace cn = fluxtorque::constants;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Marsaglia polar normals on top of mt19937_64; keeps trajectories
// reproducible across standard libraries for a given seed.
class NormalSource {
 public:
  explicit NormalSource(std::uint64_t seed) : gen_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

 private:
  double uniform() {
    return (gen_() >> 11) * 0x1.0p-53;  // [0, 1)
  }
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

struct TrajectoryStats {
  double sum = 0.0, sumsq = 0.0;
  long n = 0;
  double sum_h1 = 0.0, sumsq_h1 = 0.0;
  long n_h1 = 0;
  std::vector<TrajectorySample> recorded;
};

}  // namespace

void GasEnvironment::validate() const {
  if (!(pressure >= 0)) throw ConfigError("GasEnvironment.pressure must be >= 0");
  if (!(molecule_mass > 0)) throw ConfigError("GasEnvironment.molecule_mass must be > 0");
  if (!(temperature > 0)) throw ConfigError("GasEnvironment.temperature must be > 0");
}

double damping_coefficient(double radius, const GasEnvironment& gas) {
  if (!(radius > 0)) throw ConfigError("damping_coefficient: radius must be > 0");
  gas.validate();
  const double diameter = 2.0 * radius;
  const double d4 = diameter * diameter * diameter * diameter;
  const double vth = std::sqrt(2.0 * gas.molecule_mass / (cn::pi * cn::k_B * gas.temperature));
  return gas.pressure * cn::pi * d4 / 11.976 * vth;
}

double moment_of_inertia(const materials::ParticleSpec& spec) {
  spec.validate();
  const double mass = 4.0 / 3.0 * cn::pi * std::pow(spec.radius, 3) * spec.mass_density;
  return 0.4 * mass * spec.radius * spec.radius;
}

double gravity_weight(const materials::ParticleSpec& spec) {
  spec.validate();
  return 4.0 / 3.0 * cn::pi * std::pow(spec.radius, 3) * spec.mass_density * cn::g_earth;
}

double steady_state_omega(double torque, double gamma) {
  if (gamma == 0.0) {
    throw DynamicsError("steady_state_omega: gamma = 0 gives unbounded spin");
  }
  return torque / gamma;
}

void LangevinConfig::validate() const {
  if (!(inertia > 0)) throw ConfigError("LangevinConfig.inertia must be > 0");
  if (!(gamma >= 0)) throw ConfigError("LangevinConfig.gamma must be >= 0");
  if (!(T_e >= 0)) throw ConfigError("LangevinConfig.T_e must be >= 0");
  if (!(dt > 0) || steps <= 0 || n_trajectories <= 0) {
    throw ConfigError("LangevinConfig: dt, steps, n_trajectories must be positive");
  }
  if (!(transient_fraction >= 0 && transient_fraction < 1)) {
    throw ConfigError("LangevinConfig.transient_fraction must be in [0, 1)");
  }
  if (gamma > 0 && dt > inertia / gamma / 100.0) {
    throw DynamicsError("LangevinConfig: dt must be <= (I/gamma)/100 for stability");
  }
}

EnsembleStats simulate_langevin(const LangevinConfig& cfg, const TorqueFn& torque, int n_jobs) {
  cfg.validate();
  const double inv_I = 1.0 / cfg.inertia;
  const double drift = cfg.gamma * inv_I;
  const double noise_amp =
      std::sqrt(2.0 * cfg.gamma * cn::k_B * cfg.T_e) * inv_I * std::sqrt(cfg.dt);
  const long first_sample = static_cast<long>(cfg.transient_fraction * cfg.steps);
  const long half_mark = first_sample + (cfg.steps - first_sample) / 2;

  std::vector<TrajectoryStats> stats(cfg.n_trajectories);
  parallel_for(static_cast<std::size_t>(cfg.n_trajectories), n_jobs, [&](std::size_t idx) {
    NormalSource rng(splitmix64(cfg.seed ^ (0x51a7e5eedULL + idx)));
    TrajectoryStats& st = stats[idx];
    const bool record =
        static_cast<int>(idx) < cfg.record_trajectories && cfg.record_stride > 0;
    double omega = cfg.omega0;
    for (long step = 0; step < cfg.steps; ++step) {
      const double m = torque ? torque(omega) : 0.0;
      omega += m * inv_I * cfg.dt - drift * omega * cfg.dt + noise_amp * rng.next();
      if (step >= first_sample) {
        st.sum += omega;
        st.sumsq += omega * omega;
        ++st.n;
        if (step < half_mark) {
          st.sum_h1 += omega;
          st.sumsq_h1 += omega * omega;
          ++st.n_h1;
        }
      }
      if (record && step % cfg.record_stride == 0) {
        st.recorded.push_back({(step + 1) * cfg.dt, omega});
      }
    }
  });

  EnsembleStats out;
  double sum = 0.0, sumsq = 0.0, sum_h1 = 0.0, sumsq_h1 = 0.0;
  long n = 0, n_h1 = 0;
  for (const auto& st : stats) {
    sum += st.sum;
    sumsq += st.sumsq;
    n += st.n;
    sum_h1 += st.sum_h1;
    sumsq_h1 += st.sumsq_h1;
    n_h1 += st.n_h1;
    if (!st.recorded.empty()) out.recorded.push_back(st.recorded);
  }
  out.n_samples = n;
  out.mean = sum / std::max<long>(n, 1);
  out.variance = sumsq / std::max<long>(n, 1) - out.mean * out.mean;
  const double sum_h2 = sum - sum_h1, sumsq_h2 = sumsq - sumsq_h1;
  const long n_h2 = n - n_h1;
  out.mean_first_half = sum_h1 / std::max<long>(n_h1, 1);
  out.mean_second_half = sum_h2 / std::max<long>(n_h2, 1);
  out.variance_first_half =
      sumsq_h1 / std::max<long>(n_h1, 1) - out.mean_first_half * out.mean_first_half;
  out.variance_second_half =
      sumsq_h2 / std::max<long>(n_h2, 1) - out.mean_second_half * out.mean_second_half;
  return out;
}

}  // namespace fluxtorque::dynamics
