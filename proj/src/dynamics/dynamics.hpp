#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "materials/materials.hpp"

namespace fluxtorque::dynamics {

struct GasEnvironment {
  double pressure = 0.0;            // Pa (torr converted at config parse)
  double molecule_mass = 4.8e-26;   // kg
  double temperature = 300.0;       // K

  void validate() const;
};

// Rotational drag coefficient gamma (N m s): p pi (2R)^4 / 11.976 *
// sqrt(2 m_gas / (pi k_B T)). The damping torque is -gamma * Omega.
double damping_coefficient(double radius, const GasEnvironment& gas);

// (2/5) m R^2 for the solid sphere.
double moment_of_inertia(const materials::ParticleSpec& spec);

// (4/3) pi R^3 rho g, g = 9.81 m/s^2.
double gravity_weight(const materials::ParticleSpec& spec);

// Omega_ss = M_x / gamma; throws DynamicsError when gamma == 0.
double steady_state_omega(double torque, double gamma);

// Torque as a function of the current spin velocity; wraps either the static
// value or an interpolated rotating-frame evaluation.
using TorqueFn = std::function<double(double omega_spin)>;

struct LangevinConfig {
  double inertia = 0.0;      // kg m^2
  double gamma = 0.0;        // N m s
  double T_e = 300.0;        // K
  double dt = 0.0;           // s; must satisfy dt <= (I/gamma)/100
  long steps = 0;
  int n_trajectories = 1;
  std::uint64_t seed = 0;
  double omega0 = 0.0;       // initial spin, rad/s
  // statistics window: samples from the last (1 - transient_fraction) of the run
  double transient_fraction = 0.5;
  // optional trajectory recording (first record_trajectories trajectories,
  // every record_stride steps)
  int record_trajectories = 0;
  long record_stride = 0;

  void validate() const;
};

struct TrajectorySample {
  double time = 0.0;
  double omega = 0.0;
};

struct EnsembleStats {
  double mean = 0.0;       // <Omega> over the stationary window and ensemble
  double variance = 0.0;   // Var(Omega), same window
  long n_samples = 0;
  // stationarity diagnostics: window split in two halves
  double mean_first_half = 0.0;
  double mean_second_half = 0.0;
  double variance_first_half = 0.0;
  double variance_second_half = 0.0;
  std::vector<std::vector<TrajectorySample>> recorded;  // per recorded trajectory
};

// Euler-Maruyama integration of
//   dOmega = (M(Omega)/I) dt - (gamma/I) Omega dt + sqrt(2 gamma k_B T_e / I^2) dW
// over n_trajectories independent trajectories. Deterministic for a fixed
// seed: per-trajectory generators are mt19937_64 seeded by splitmix64(seed,
// index), normals by the Marsaglia polar method, and the ensemble reduction
// runs in index order.
EnsembleStats simulate_langevin(const LangevinConfig& cfg, const TorqueFn& torque,
                                int n_jobs = 1);

}  // namespace fluxtorque::dynamics
