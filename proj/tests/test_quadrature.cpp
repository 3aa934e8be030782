#include <doctest.h>

#include <cmath>

#include "core/constants.hpp"
#include "core/errors.hpp"
#include "quadrature/quadrature.hpp"

using namespace fluxtorque;
namespace cn = fluxtorque::constants;

namespace {

// closed form of int_0^inf dk int_0^2pi dphi k e^{-2|k_z| d}:
// propagating substitution u = sqrt(k0^2-k^2), evanescent v = sqrt(k^2-k0^2)
double decay_integral_closed_form(double k0, double d) {
  auto ramp = [&](double X) {
    // int_0^X u e^{-2ud} du
    return (1.0 - (1.0 + 2.0 * d * X) * std::exp(-2.0 * d * X)) / (4.0 * d * d);
  };
  double prop = ramp(k0);
  double evan = 1.0 / (4.0 * d * d);  // X -> inf
  return 2.0 * cn::pi * (prop + evan);
}

}  // namespace

TEST_CASE("integrate_kphi: exponential-decay closed form") {
  double w = 3e13, k0 = w / cn::c0;
  for (double d : {5e-8, 3e-7, 2e-6}) {
    quadrature::QuadConfig cfg;
    cfg.rel_tol = 1e-8;
    cfg.k_par_max_factor = 60.0;
    auto r = quadrature::integrate_kphi_scalar(
        [&](const fresnel::ModeCoords& m) {
          double akz = std::abs(m.k_z);
          return m.k_par * std::exp(-2.0 * akz * d);
        },
        w, d, cfg);
    double ref = decay_integral_closed_form(k0, d);
    CHECK(std::abs(r.value - ref) < 1e-6 * ref);
    CHECK(std::abs(r.value - ref) < 10.0 * r.error + 1e-6 * ref);
  }
}

TEST_CASE("integrate_kphi: pure sin(phi) integrand cancels to roundoff") {
  double w = 3e13, d = 3e-7;
  quadrature::QuadConfig cfg;
  auto r = quadrature::integrate_kphi_scalar(
      [&](const fresnel::ModeCoords& m) {
        return std::sin(m.phi) * m.k_par * std::exp(-2.0 * std::abs(m.k_z) * d);
      },
      w, d, cfg);
  double scale = decay_integral_closed_form(w / cn::c0, d);
  CHECK(std::abs(r.value) < 1e-14 * scale);
}

TEST_CASE("integrate_kphi: halving rel_tol moves the result by less than the error estimate") {
  double w = 2.5e13, d = 1.5e-7, k0 = w / cn::c0;
  auto integrand = [&](const fresnel::ModeCoords& m) {
    // sharp lorentzian ridge in k to force refinement
    double x = (m.k_par - 6.0 * k0) / (0.1 * k0);
    return m.k_par * std::exp(-2.0 * std::abs(m.k_z) * d) *
           (1.0 + 5.0 / (1.0 + x * x)) * (1.0 + 0.3 * std::cos(m.phi));
  };
  quadrature::QuadConfig cfg;
  for (double tol : {1e-4, 1e-5, 1e-6}) {
    cfg.rel_tol = tol;
    auto r1 = quadrature::integrate_kphi_scalar(integrand, w, d, cfg);
    cfg.rel_tol = tol / 2.0;
    auto r2 = quadrature::integrate_kphi_scalar(integrand, w, d, cfg);
    CHECK(std::abs(r1.value - r2.value) <= r1.error + 1e-12 * std::abs(r1.value));
  }
}

TEST_CASE("integrate_kphi: cutoff adequacy, k_par_max_factor 40 vs 80") {
  double w = 2.5e13, d = 2e-7;
  auto integrand = [&](const fresnel::ModeCoords& m) {
    return m.k_par * std::exp(-2.0 * std::abs(m.k_z) * d);
  };
  quadrature::QuadConfig cfg;
  cfg.rel_tol = 1e-8;
  cfg.k_par_max_factor = 40.0;
  auto r40 = quadrature::integrate_kphi_scalar(integrand, w, d, cfg);
  cfg.k_par_max_factor = 80.0;
  auto r80 = quadrature::integrate_kphi_scalar(integrand, w, d, cfg);
  CHECK(std::abs(r80.value - r40.value) <= r40.error + 1e-12 * std::abs(r40.value));
}

TEST_CASE("integrate_kphi_split: halves sum to the full integral") {
  double w = 2.5e13, d = 2e-7;
  quadrature::ModeIntegrandFn fn = [&](const fresnel::ModeCoords& m, double* out) {
    out[0] = m.k_par * std::exp(-2.0 * std::abs(m.k_z) * d) * (1.0 + 0.9 * std::sin(m.phi));
  };
  quadrature::QuadConfig cfg;
  auto full = quadrature::integrate_kphi(1, fn, w, d, cfg);
  auto [fwd, bwd] = quadrature::integrate_kphi_split(1, fn, w, d, cfg);
  CHECK(std::abs(fwd.value[0] + bwd.value[0] - full.value[0]) <
        1e-6 * std::abs(full.value[0]));
  CHECK(fwd.value[0] > bwd.value[0]);  // sin-weighted: forward half dominates
}

TEST_CASE("integrate_omega: Lorentzian against the arctan closed form") {
  double w0 = 3e13, gamma = 2e11;
  auto density = [&](double w) { return 1.0 / (1.0 + std::pow((w - w0) / gamma, 2)); };
  quadrature::QuadConfig cfg;
  cfg.rel_tol = 1e-8;
  double a = 1e13, b = 1e14;
  auto r = quadrature::integrate_omega_scalar(density, a, b, {w0}, cfg);
  double ref = gamma * (std::atan((b - w0) / gamma) - std::atan((a - w0) / gamma));
  CHECK(std::abs(r.value - ref) < 1e-7 * ref);
}

TEST_CASE("integrate_omega: zero density integrates to zero") {
  quadrature::QuadConfig cfg;
  auto r = quadrature::integrate_omega_scalar([](double) { return 0.0; }, 1e12, 1e14, {}, cfg);
  CHECK(r.value == 0.0);
}

TEST_CASE("integrate_omega: narrow peak off the seed points is still resolved") {
  double w0 = 4.3e13, gamma = 5e10;  // very narrow, no seed supplied at w0
  auto density = [&](double w) { return 1.0 / (1.0 + std::pow((w - w0) / gamma, 2)); };
  quadrature::QuadConfig cfg;
  cfg.rel_tol = 1e-6;
  cfg.max_subdivisions = 2000;
  auto r = quadrature::integrate_omega_scalar(density, 1e13, 1e14, {2e13, 8e13}, cfg);
  double ref = gamma * (std::atan((1e14 - w0) / gamma) - std::atan((1e13 - w0) / gamma));
  CHECK(std::abs(r.value - ref) < 1e-4 * ref);
}

TEST_CASE("QuadConfig validation") {
  quadrature::QuadConfig cfg;
  cfg.rel_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.k_par_max_factor = 5.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.phi_order = 8;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
