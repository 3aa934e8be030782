#include "dispersion/dispersion.hpp"

#include <algorithm>
#include <cmath>

#include "core/constants.hpp"
#include "core/errors.hpp"
#include "fresnel/fresnel.hpp"

namespace fluxtorque::dispersion {

namespace {

namespace cn = fluxtorque::constants;

double im_rpp(const materials::Substrate& substrate, materials::ResponseModel model, double w,
              double k_par, double phi) {
  fresnel::ModeCoords mode = fresnel::mode_coords(w, k_par, phi);
  fresnel::ReflectionMatrix r;
  if (model == materials::ResponseModel::nonlocal) {
    r = fresnel::reflect_nonlocal(substrate.model, mode);
  } else {
    r = fresnel::reflect_local(substrate.model, mode);
  }
  return r.r_pp.imag();
}

double golden_max(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while ((b - a) > rel_tol * b) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

// Real part of the transverse permittivity eps1 (perpendicular to B) and the
// gyrotropy magnitude g, lossless skeleton used for asymptote roots.
double re_eps1(const materials::GyrotropicModel& m, double w) {
  Eigen::Matrix3cd eps = materials::epsilon_substrate(m, w);
  // eps1 = eigenvalue transverse to b: project out the b axis
  Eigen::Vector3d b = m.b_direction;
  Eigen::Vector3d u = std::abs(b.z()) < 0.9 ? b.cross(Eigen::Vector3d::UnitZ()).normalized()
                                            : b.cross(Eigen::Vector3d::UnitX()).normalized();
  return (u.transpose() * (eps * u))(0).real();
}

double re_g(const materials::GyrotropicModel& m, double w) {
  const double wc = m.cyclotron_freq;
  const std::complex<double> wt(w, m.drude_damping);
  const double wp2 = m.plasma_freq * m.plasma_freq;
  return (wp2 * wc / (w * (wt * wt - wc * wc))).real();
}

void bisect_roots(const std::function<double(double)>& f, double a, double b, int scan,
                  std::vector<double>& out) {
  double prev_w = a, prev_f = f(a);
  for (int i = 1; i <= scan; ++i) {
    double w = a * std::pow(b / a, double(i) / scan);
    double fw = f(w);
    if (std::isfinite(prev_f) && std::isfinite(fw) && prev_f * fw < 0.0) {
      double lo = prev_w, hi = w;
      for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        if (f(lo) * f(mid) <= 0.0) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      out.push_back(0.5 * (lo + hi));
    }
    prev_w = w;
    prev_f = fw;
  }
}

std::pair<double, double> auto_window(const materials::GyrotropicModel& m) {
  // generous window around the plasma edge and phonon resonances
  double w_hi = std::max(m.plasma_freq / std::sqrt(m.eps_inf), 1e12);
  double w_lo = w_hi;
  for (const auto& ph : m.phonons) {
    w_hi = std::max(w_hi, 1.6 * ph.resonance);
    w_lo = std::min(w_lo, 0.5 * ph.resonance);
  }
  return {0.2 * w_lo, 1.8 * w_hi};
}

}  // namespace

std::vector<double> surface_asymptotes(const materials::GyrotropicModel& model, double w_min,
                                       double w_max) {
  std::vector<double> roots;
  bisect_roots([&](double w) { return re_eps1(model, w) + 1.0; }, w_min, w_max, 400, roots);
  if (model.cyclotron_freq > 0) {
    bisect_roots([&](double w) { return re_eps1(model, w) + 1.0 + re_g(model, w); }, w_min, w_max,
                 400, roots);
    bisect_roots([&](double w) { return re_eps1(model, w) + 1.0 - re_g(model, w); }, w_min, w_max,
                 400, roots);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::vector<BranchPoint> trace_branch(const materials::Substrate& substrate, double phi,
                                      double k_min, double k_max, int n_points,
                                      materials::ResponseModel model, const TraceOptions& opts) {
  if (!(k_min > 0) || !(k_max > k_min) || n_points < 2) {
    throw ConfigError("trace_branch: need 0 < k_min < k_max and n_points >= 2");
  }
  auto [w_lo, w_hi] = auto_window(substrate.model);
  if (opts.w_min > 0) w_lo = opts.w_min;
  if (opts.w_max > 0) w_hi = opts.w_max;

  std::vector<BranchPoint> out;
  double prev_omega = 0.0;
  double noise_floor = 0.0;
  for (int i = 0; i < n_points; ++i) {
    double k = k_min * std::pow(k_max / k_min, n_points == 1 ? 0.0 : double(i) / (n_points - 1));
    double a = w_lo, b = w_hi;
    // stay above the light line
    double w_light = k * cn::c0;
    if (b > 0.98 * w_light) b = 0.98 * w_light;
    if (!(b > a)) {
      continue;  // k below the light line for the whole window
    }
    double w_peak, f_peak;
    if (prev_omega == 0.0) {
      // coarse scan for the first point
      double best_w = a, best_f = -1e300;
      for (int j = 0; j <= opts.scan_points; ++j) {
        double w = a * std::pow(b / a, double(j) / opts.scan_points);
        double f = im_rpp(substrate, model, w, k, phi);
        if (f > best_f) {
          best_f = f;
          best_w = w;
        }
      }
      double lo = std::max(a, best_w * 0.92), hi = std::min(b, best_w * 1.08);
      w_peak = golden_max([&](double w) { return im_rpp(substrate, model, w, k, phi); }, lo, hi,
                          opts.rel_tol);
      noise_floor = 1e-4 * best_f;
    } else {
      double lo = std::max(a, prev_omega * 0.85), hi = std::min(b, prev_omega * 1.18);
      w_peak = golden_max([&](double w) { return im_rpp(substrate, model, w, k, phi); }, lo, hi,
                          opts.rel_tol);
    }
    f_peak = im_rpp(substrate, model, w_peak, k, phi);
    BranchPoint bp;
    bp.k_par = k;
    bp.phi = phi;
    bp.omega = w_peak;
    bp.model = model;
    // classify against the lowest phonon resonance; below it the mode is
    // carried by free carriers (SPP), inside/above the phonon gap by the
    // lattice (SPhP)
    double w_phonon = 1e300;
    for (const auto& ph : substrate.model.phonons) w_phonon = std::min(w_phonon, ph.resonance);
    bp.branch = (w_peak < w_phonon) ? Branch::SPP : Branch::SPhP;
    if (f_peak < noise_floor) {
      bp.lost = true;
      out.push_back(bp);
      break;  // truncated trace
    }
    out.push_back(bp);
    prev_omega = w_peak;
  }
  return out;
}

std::vector<double> seed_frequencies(const materials::Substrate& substrate,
                                     const materials::ParticleSpec& particle) {
  auto [w_lo, w_hi] = auto_window(substrate.model);
  std::vector<double> seeds = surface_asymptotes(substrate.model, w_lo, w_hi);
  for (const auto& osc : particle.oscillators) seeds.push_back(osc.resonance);
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end(),
                          [](double a, double b) { return std::abs(a - b) <= 1e-6 * b; }),
              seeds.end());
  return seeds;
}

}  // namespace fluxtorque::dispersion
