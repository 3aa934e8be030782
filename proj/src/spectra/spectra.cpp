#include "spectra/spectra.hpp"

#include <cmath>

#include "core/constants.hpp"
#include "core/errors.hpp"
#include "dispersion/dispersion.hpp"
#include "greens/greens.hpp"

namespace fluxtorque::spectra {

namespace {

namespace cn = fluxtorque::constants;
using Complex = std::complex<double>;
using ModeVec = Eigen::Array<double, kNumModeComponents, 1>;

// Reflected-part integrals of the canonical vector at one frequency.
struct ModeIntegrals {
  Eigen::ArrayXd value, error, l1;
  bool converged = true;
};

ModeIntegrals integrate_mode_vector(const materials::Substrate& substrate, double d,
                                    double omega, const quadrature::QuadConfig& cfg) {
  quadrature::ModeIntegrandFn fn = [&](const fresnel::ModeCoords& mode, double* out) {
    fresnel::ReflectionMatrix r = fresnel::reflect(substrate, mode);
    ModeVec v = mode_integrand_vector(r, mode, d);
    for (int c = 0; c < kNumModeComponents; ++c) out[c] = v[c];
  };
  quadrature::KPhiResult res = quadrature::integrate_kphi(kNumModeComponents, fn, omega, d, cfg);
  return {res.value, res.error, res.l1, res.converged};
}

struct Prefactors {
  double dTheta;      // Theta(T_p) - Theta(T_e), J
  double sumTheta;    // for F_z (thermal or full, per options)
  double im_alpha;    // m^3
  double k0;
};

Prefactors prefactors(const materials::ParticleSpec& particle, const ThermalState& thermal,
                      double omega, const SpectraOptions& opts) {
  Prefactors p;
  p.k0 = omega / cn::c0;
  p.dTheta = theta(omega, thermal.T_p) - theta(omega, thermal.T_e);
  if (opts.fz_include_zero_point) {
    p.sumTheta = theta(omega, thermal.T_p) + theta(omega, thermal.T_e);
  } else {
    p.sumTheta = theta_thermal(omega, thermal.T_p) + theta_thermal(omega, thermal.T_e);
  }
  p.im_alpha = materials::polarizability(particle, omega).imag();
  return p;
}

// Assemble a SpectralPoint from the integrated canonical vector. The
// reflected integrals carry the factor 2 of the two-sided fluctuation
// spectral density; the vacuum exchange term is k0^3/pi.
SpectralPoint assemble_point(double omega, const Prefactors& pf, const Eigen::ArrayXd& I,
                             const Eigen::ArrayXd& err, unsigned mask, bool converged,
                             double vacuum_share = 1.0) {
  SpectralPoint out;
  out.omega = omega;
  out.converged = converged;
  const double k0 = pf.k0;
  const double fxy_pref = -pf.dTheta * (k0 / cn::c0) * pf.im_alpha * 2.0;
  if (mask & kMaskP) {
    out.P = pf.dTheta * k0 * k0 * pf.im_alpha *
            (vacuum_share * k0 / cn::pi + 2.0 * I[kCompP]);
    out.err_P = std::abs(pf.dTheta * k0 * k0 * pf.im_alpha * 2.0) * err[kCompP];
  }
  if (mask & kMaskFx) {
    out.F.x() = fxy_pref * I[kCompFx];
    out.err_F.x() = std::abs(fxy_pref) * err[kCompFx];
  }
  if (mask & kMaskFy) {
    out.F.y() = fxy_pref * I[kCompFy];
    out.err_F.y() = std::abs(fxy_pref) * err[kCompFy];
  }
  if (mask & kMaskFz) {
    const double fz_pref = -pf.sumTheta * (k0 / cn::c0) * pf.im_alpha * 2.0;
    out.F.z() = fz_pref * I[kCompFz];
    out.err_F.z() = std::abs(fz_pref) * err[kCompFz];
  }
  if (mask & kMaskMx) {
    out.M.x() = fxy_pref * I[kCompMx];
    out.err_M.x() = std::abs(fxy_pref) * err[kCompMx];
  }
  if (mask & kMaskMy) {
    out.M.y() = fxy_pref * I[kCompMy];
    out.err_M.y() = std::abs(fxy_pref) * err[kCompMy];
  }
  if (mask & kMaskMz) {
    out.M.z() = -fxy_pref * I[kCompMz];  // Eq. (5) carries the opposite sign
    out.err_M.z() = std::abs(fxy_pref) * err[kCompMz];
  }
  return out;
}

}  // namespace

void ThermalState::validate() const {
  if (!(T_p >= 0) || !(T_e >= 0)) throw ConfigError("temperatures must be >= 0");
}

double theta(double omega, double T) {
  if (!(omega > 0)) throw ConfigError("theta: omega must be > 0");
  const double zp = 0.5 * cn::hbar * omega;
  return zp + theta_thermal(omega, T);
}

double theta_thermal(double omega, double T) {
  if (T <= 0.0) return 0.0;
  const double x = cn::hbar * omega / (cn::k_B * T);
  if (x > 700.0) return 0.0;
  return cn::hbar * omega / std::expm1(x);
}

ModeVec mode_integrand_vector(const fresnel::ReflectionMatrix& refl,
                              const fresnel::ModeCoords& mode, double d) {
  const double k = mode.k_par;
  const double k0 = mode.k0;
  const Complex kz = mode.k_z;
  const double cp = std::cos(mode.phi), sp = std::sin(mode.phi);
  const double kap2 = (k / k0) * (k / k0);
  const Complex e = std::exp(Complex(0, 2) * kz * d);
  const Complex F = refl.r_ss + refl.r_pp * (2.0 * kap2 - 1.0);
  const double pi2_8 = 8.0 * cn::pi * cn::pi;
  const Complex i(0, 1);

  ModeVec v;
  const Complex base = i * k * e * F / pi2_8;
  v[kCompP] = (base / kz).imag();
  v[kCompFx] = (i * (k * k * cp) * e * F / (pi2_8 * kz)).imag();
  v[kCompFy] = (i * (k * k * sp) * e * F / (pi2_8 * kz)).imag();
  v[kCompFz] = base.imag();
  const double mpre = k * k / (pi2_8 * k0);
  const double im_cross = ((refl.r_sp - refl.r_ps) * e / kz).imag();
  const double im_rpp_e = (refl.r_pp * e).imag();
  v[kCompMx] = mpre * (cp * im_cross + 2.0 / k0 * sp * im_rpp_e);
  v[kCompMy] = mpre * (sp * im_cross - 2.0 / k0 * cp * im_rpp_e);
  v[kCompMz] = k / (pi2_8 * k0) * ((refl.r_sp + refl.r_ps) * e).imag();
  const Complex gpre = i * e / (2.0 * kz);
  const Complex kzh = kz / k0;
  v[kCompGtYY] = (k / (4.0 * cn::pi * cn::pi)) *
                 (gpre * (refl.r_ss * cp * cp + (refl.r_ps - refl.r_sp) * kzh * sp * cp -
                          refl.r_pp * kzh * kzh * sp * sp))
                     .imag();
  v[kCompGtZZ] = (k / (4.0 * cn::pi * cn::pi)) * (gpre * refl.r_pp * kap2).imag();
  return v;
}

SpectralPoint spectral_density(const materials::Substrate& substrate,
                               const materials::ParticleSpec& particle,
                               const ThermalState& thermal, double d, double omega,
                               const quadrature::QuadConfig& cfg, unsigned mask,
                               const SpectraOptions& opts) {
  if (!(d > 0)) throw ConfigError("spectral_density: d must be > 0");
  thermal.validate();
  Prefactors pf = prefactors(particle, thermal, omega, opts);
  // equilibrium null: every difference-prefactor density is exactly zero
  unsigned effective = mask;
  if (pf.dTheta == 0.0) effective &= kMaskFz;
  if (effective == 0 || pf.im_alpha == 0.0) {
    SpectralPoint out;
    out.omega = omega;
    return out;
  }
  ModeIntegrals mi = integrate_mode_vector(substrate, d, omega, cfg);
  SpectralPoint out = assemble_point(omega, pf, mi.value, mi.error, effective, mi.converged);
  if (!mi.converged) {
    double achieved = 0.0;
    for (int c = 0; c < kNumModeComponents; ++c) {
      achieved = std::max(achieved,
                          mi.error[c] / std::max(std::abs(mi.value[c]), 1e-9 * mi.l1[c]));
    }
    throw QuadratureError("spectral_density: mode quadrature did not converge", achieved);
  }
  return out;
}

std::pair<SpectralPoint, SpectralPoint> spectral_density_split(
    const materials::Substrate& substrate, const materials::ParticleSpec& particle,
    const ThermalState& thermal, double d, double omega, const quadrature::QuadConfig& cfg,
    unsigned mask, const SpectraOptions& opts) {
  if (!(d > 0)) throw ConfigError("spectral_density_split: d must be > 0");
  thermal.validate();
  Prefactors pf = prefactors(particle, thermal, omega, opts);
  unsigned effective = mask;
  if (pf.dTheta == 0.0) effective &= kMaskFz;
  if (effective == 0 || pf.im_alpha == 0.0) {
    SpectralPoint z;
    z.omega = omega;
    return {z, z};
  }
  quadrature::ModeIntegrandFn fn = [&](const fresnel::ModeCoords& mode, double* out) {
    fresnel::ReflectionMatrix r = fresnel::reflect(substrate, mode);
    ModeVec v = mode_integrand_vector(r, mode, d);
    for (int c = 0; c < kNumModeComponents; ++c) out[c] = v[c];
  };
  auto [red, blue] = quadrature::integrate_kphi_split(kNumModeComponents, fn, omega, d, cfg);
  SpectralPoint pr =
      assemble_point(omega, pf, red.value, red.error, effective, red.converged, 0.5);
  SpectralPoint pb =
      assemble_point(omega, pf, blue.value, blue.error, effective, blue.converged, 0.5);
  return {pr, pb};
}

double power_density(const materials::Substrate& s, const materials::ParticleSpec& p,
                     const ThermalState& t, double d, double omega,
                     const quadrature::QuadConfig& cfg) {
  return spectral_density(s, p, t, d, omega, cfg, kMaskP).P;
}

double force_density(Axis axis, const materials::Substrate& s, const materials::ParticleSpec& p,
                     const ThermalState& t, double d, double omega,
                     const quadrature::QuadConfig& cfg, const SpectraOptions& opts) {
  unsigned mask = axis == Axis::x ? kMaskFx : axis == Axis::y ? kMaskFy : kMaskFz;
  return spectral_density(s, p, t, d, omega, cfg, mask, opts).F[static_cast<int>(axis)];
}

double torque_density(Axis axis, const materials::Substrate& s, const materials::ParticleSpec& p,
                      const ThermalState& t, double d, double omega,
                      const quadrature::QuadConfig& cfg) {
  unsigned mask = axis == Axis::x ? kMaskMx : axis == Axis::y ? kMaskMy : kMaskMz;
  return spectral_density(s, p, t, d, omega, cfg, mask).M[static_cast<int>(axis)];
}

Eigen::Vector3d photon_spin(const fresnel::ReflectionMatrix& refl,
                            const fresnel::ModeCoords& mode, double d) {
  ModeVec v = mode_integrand_vector(refl, mode, d);
  const double denom = v[kCompP];
  const double scale = std::abs(v[kCompMx]) + std::abs(v[kCompMy]) + std::abs(v[kCompMz]);
  if (std::abs(denom) < 1e-300 || std::abs(denom) * 1e12 < scale) {
    throw SingularityError("photon_spin: vanishing photon-number denominator");
  }
  return Eigen::Vector3d(v[kCompMx] / denom, v[kCompMy] / denom, -v[kCompMz] / denom);
}

double rotating_torque_x(const materials::Substrate& s, const materials::ParticleSpec& p,
                         const ThermalState& t, double d, double omega, double Omega,
                         const quadrature::QuadConfig& cfg) {
  if (!(d > 0)) throw ConfigError("rotating_torque_x: d must be > 0");
  if (!(std::abs(Omega) < omega)) {
    throw ConfigError("rotating_torque_x: |Omega| must be < omega");
  }
  t.validate();
  const double w_plus = omega + Omega;
  const double w_minus = omega - Omega;

  ModeIntegrals at_w = integrate_mode_vector(s, d, omega, cfg);
  ModeIntegrals at_plus = (Omega == 0.0) ? at_w : integrate_mode_vector(s, d, w_plus, cfg);
  ModeIntegrals at_minus = (Omega == 0.0) ? at_w : integrate_mode_vector(s, d, w_minus, cfg);
  if (!(at_w.converged && at_plus.converged && at_minus.converged)) {
    throw QuadratureError("rotating_torque_x: mode quadrature did not converge", 0.0);
  }

  const double im_a_w = materials::polarizability(p, omega).imag();
  const double im_a_plus = materials::polarizability(p, w_plus).imag();
  const double im_a_minus = materials::polarizability(p, w_minus).imag();
  const double theta_e = theta(omega, t.T_e);
  const double theta_p = theta(omega, t.T_p);
  const double c2 = cn::c0 * cn::c0;

  // environment-fluctuation part (alpha at omega +- Omega, G^t at omega)
  const double re_gt_a = omega * omega * at_w.value[kCompMx];  // Re(Gt_yz - Gt_zy) / mu0
  const double im_gt_sum = omega * omega * (at_w.value[kCompGtYY] + at_w.value[kCompGtZZ]);
  double mx_e = (theta_e / (omega * c2)) *
                ((im_a_minus + im_a_plus) * re_gt_a + im_gt_sum * (im_a_minus - im_a_plus));

  // particle-fluctuation part (alpha at omega, G^t at omega +- Omega)
  const double gsum_minus =
      w_minus * w_minus * (at_minus.value[kCompGtYY] + at_minus.value[kCompGtZZ]);
  const double gsum_plus =
      w_plus * w_plus * (at_plus.value[kCompGtYY] + at_plus.value[kCompGtZZ]);
  const double ga_minus = w_minus * w_minus * at_minus.value[kCompMx];
  const double ga_plus = w_plus * w_plus * at_plus.value[kCompMx];
  double mx_p =
      (theta_p * im_a_w / (omega * c2)) * (gsum_minus - gsum_plus - ga_plus - ga_minus);

  // direct vacuum parts
  const double c3 = c2 * cn::c0;
  double mx_e_vac =
      2.0 * omega * omega / (3.0 * cn::pi * c3) * (im_a_minus - im_a_plus) * theta_e;
  double mx_p_vac = 2.0 * (std::pow(w_minus, 3) - std::pow(w_plus, 3)) /
                    (3.0 * cn::pi * omega * c3) * im_a_w * theta_p;

  return mx_e + mx_p + mx_e_vac + mx_p_vac;
}

std::vector<double> frohlich_frequencies(const materials::ParticleSpec& particle, double w_min,
                                         double w_max) {
  std::vector<double> out;
  const int scan = 600;
  double prev_w = w_min;
  double prev_f = materials::epsilon_particle(particle, w_min).real() + 2.0;
  for (int i = 1; i <= scan; ++i) {
    double w = w_min * std::pow(w_max / w_min, double(i) / scan);
    double f = materials::epsilon_particle(particle, w).real() + 2.0;
    if (prev_f * f < 0.0) {
      double lo = prev_w, hi = w;
      for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = materials::epsilon_particle(particle, mid).real() + 2.0;
        double fl = materials::epsilon_particle(particle, lo).real() + 2.0;
        if (fl * fm <= 0.0) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      out.push_back(0.5 * (lo + hi));
    }
    prev_w = w;
    prev_f = f;
  }
  return out;
}

WrenchTotals integrate_totals(const materials::Substrate& substrate,
                              const materials::ParticleSpec& particle,
                              const ThermalState& thermal, double d, double w_min, double w_max,
                              const quadrature::QuadConfig& cfg, unsigned mask,
                              const SpectraOptions& opts, int n_jobs,
                              std::vector<double> extra_seeds) {
  if (!(d > 0)) throw ConfigError("integrate_totals: d must be > 0");
  thermal.validate();

  std::vector<double> seeds = dispersion::seed_frequencies(substrate, particle);
  std::vector<double> froh = frohlich_frequencies(particle, w_min, w_max);
  seeds.insert(seeds.end(), froh.begin(), froh.end());
  seeds.insert(seeds.end(), extra_seeds.begin(), extra_seeds.end());

  long evals = 0;
  auto density = [&](double w) {
    SpectralPoint pt = spectral_density(substrate, particle, thermal, d, w, cfg, mask, opts);
    Eigen::ArrayXd v(7);
    v << pt.P, pt.F.x(), pt.F.y(), pt.F.z(), pt.M.x(), pt.M.y(), pt.M.z();
    return v;
  };
  const double tail_scale =
      cn::k_B * std::max({thermal.T_p, thermal.T_e, 1.0}) / cn::hbar;
  quadrature::OmegaResult r =
      quadrature::integrate_omega(7, density, w_min, w_max, seeds, cfg, n_jobs, tail_scale);
  evals = r.evaluations;

  WrenchTotals out;
  const double inv_pi = 1.0 / cn::pi;
  out.P = r.value[0] * inv_pi;
  out.F = Eigen::Vector3d(r.value[1], r.value[2], r.value[3]) * inv_pi;
  out.M = Eigen::Vector3d(r.value[4], r.value[5], r.value[6]) * inv_pi;
  out.err_P = r.error[0] * inv_pi;
  out.err_F = Eigen::Vector3d(r.error[1], r.error[2], r.error[3]) * inv_pi;
  out.err_M = Eigen::Vector3d(r.error[4], r.error[5], r.error[6]) * inv_pi;
  out.evaluations = evals;
  out.converged = r.converged;

  // tail-domination guard
  Eigen::ArrayXd vals(7), errs(7);
  vals << out.P, out.F.x(), out.F.y(), out.F.z(), out.M.x(), out.M.y(), out.M.z();
  errs << out.err_P, out.err_F.x(), out.err_F.y(), out.err_F.z(), out.err_M.x(), out.err_M.y(),
      out.err_M.z();
  double scale = vals.abs().maxCoeff();
  for (int c = 0; c < 7; ++c) {
    double tail = r.tail_bound[c] * inv_pi;
    if (tail > 10.0 * std::max(errs[c], cfg.rel_tol * std::max(std::abs(vals[c]), 1e-9 * scale))) {
      throw QuadratureError("integrate_totals: omega window too small (tail-dominated)", tail);
    }
  }
  return out;
}

}  // namespace fluxtorque::spectra
