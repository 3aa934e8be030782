#include <doctest.h>

#include <random>

#include "core/constants.hpp"
#include "core/errors.hpp"
#include "greens/greens.hpp"
#include "materials/materials.hpp"
#include "quadrature/quadrature.hpp"
#include "oracles.hpp"

using namespace fluxtorque;
namespace cn = fluxtorque::constants;
using Complex = std::complex<double>;

TEST_CASE("greens integrand: zero reflection gives the zero tensor") {
  auto mode = fresnel::mode_coords(2e13, 5e4, 1.1);
  fresnel::ReflectionMatrix r{0, 0, 0, 0};
  CHECK(greens::greens_reflected_integrand(r, mode, 1e-6).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("greens integrand: light line is a singularity error") {
  double w = 2e13;
  auto mode = fresnel::mode_coords(w, w / cn::c0, 0.0);
  fresnel::ReflectionMatrix r{0.1, 0, 0, 0.2};
  CHECK_THROWS_AS(greens::greens_reflected_integrand(r, mode, 1e-6), SingularityError);
}

TEST_CASE("greens integrand: trace identity for random inputs") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0), uw(1e13, 5e13),
      ulogk(std::log(0.05), std::log(50.0)), uphi(0, 2 * cn::pi), ud(1e-8, 2e-6);
  for (int i = 0; i < 1000; ++i) {
    double w = uw(rng);
    double k0 = w / cn::c0;
    auto mode = fresnel::mode_coords(w, std::exp(ulogk(rng)) * k0, uphi(rng));
    fresnel::ReflectionMatrix r{Complex(u(rng), u(rng)), Complex(u(rng), u(rng)),
                                Complex(u(rng), u(rng)), Complex(u(rng), u(rng))};
    double d = ud(rng);
    Eigen::Matrix3cd g = greens::greens_reflected_integrand(r, mode, d);
    double kap2 = mode.k_par / k0 * (mode.k_par / k0);
    Complex expected = Complex(0, 1) * std::exp(Complex(0, 2) * mode.k_z * d) /
                       (2.0 * mode.k_z) * (r.r_ss + r.r_pp * (2.0 * kap2 - 1.0));
    CHECK(std::abs(g.trace() - expected) <= 1e-12 * std::abs(expected));
  }
}

TEST_CASE("greens integrand: evanescent decay under d -> d + delta") {
  double w = 2.4e13, k0 = w / cn::c0;
  auto mode = fresnel::mode_coords(w, 7.0 * k0, 0.8);
  fresnel::ReflectionMatrix r{Complex(0.3, 0.1), Complex(-0.05, 0.02), Complex(0.04, -0.01),
                              Complex(0.8, 0.45)};
  double d = 3e-7, delta = 1.3e-7;
  auto g1 = greens::greens_reflected_integrand(r, mode, d);
  auto g2 = greens::greens_reflected_integrand(r, mode, d + delta);
  double factor = std::exp(-2.0 * mode.k_z.imag() * delta);
  CHECK((g2 - factor * g1).cwiseAbs().maxCoeff() < 1e-14 * g1.cwiseAbs().maxCoeff());
}

TEST_CASE("greens: perfect-mirror k-integral matches the image-dipole closed form") {
  // r_ss = -1, r_pp = +1 constant: the integral over d^2 k / (2 pi)^2 of the
  // reflected integrand is the free-space Green's function of the image
  // dipole at distance 2d, mirrored.
  double w = 2.4e13;
  double d = 2.5e-7;
  quadrature::QuadConfig cfg;
  cfg.rel_tol = 1e-9;
  cfg.k_par_max_factor = 60;
  quadrature::ModeIntegrandFn fn = [&](const fresnel::ModeCoords& mode, double* out) {
    fresnel::ReflectionMatrix r{-1.0, 0.0, 0.0, 1.0};
    Eigen::Matrix3cd g = greens::greens_reflected_integrand(r, mode, d);
    double measure = mode.k_par / (4.0 * cn::pi * cn::pi);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        out[2 * (3 * i + j)] = measure * g(i, j).real();
        out[2 * (3 * i + j) + 1] = measure * g(i, j).imag();
      }
    }
  };
  auto res = quadrature::integrate_kphi(18, fn, w, d, cfg);
  Eigen::Matrix3cd gref = oracles::image_dipole_greens(w, d);
  double scale = gref.cwiseAbs().maxCoeff();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      Complex got(res.value[2 * (3 * i + j)], res.value[2 * (3 * i + j) + 1]);
      CHECK(std::abs(got - gref(i, j)) < 1e-6 * scale);
    }
  }
}

TEST_CASE("greens: vacuum propagating Im-trace integral reproduces the LDOS factor") {
  // Integrating Im tr of the vacuum part (i/2kz)(e_s e_s^T + e_p+ e_p+^T)
  // over propagating k gives k0/(2 pi); the engine's vacuum exchange factor
  // is omega^3/(pi c^3) = 2 k0^2 times that.
  double w = 3e13, k0 = w / cn::c0;
  quadrature::QuadConfig cfg;
  cfg.rel_tol = 1e-9;
  quadrature::ModeIntegrandFn fn = [&](const fresnel::ModeCoords& mode, double* out) {
    if (mode.k_par >= k0) {
      out[0] = 0.0;
      return;
    }
    auto b = fresnel::polarization_basis(mode);
    Complex epp2 = b.e_p_up(0) * b.e_p_up(0) + b.e_p_up(1) * b.e_p_up(1) +
                   b.e_p_up(2) * b.e_p_up(2);
    Complex tr = Complex(0, 1) / (2.0 * mode.k_z) * (1.0 + epp2);
    out[0] = mode.k_par / (4.0 * cn::pi * cn::pi) * tr.imag();
  };
  auto res = quadrature::integrate_kphi(1, fn, w, 1e-6, cfg);
  double im_tr_vac = res.value[0];
  CHECK(std::abs(2.0 * k0 * k0 * im_tr_vac - greens::vacuum_ldos_factor(w)) <
        1e-6 * greens::vacuum_ldos_factor(w));
}

TEST_CASE("vacuum_ldos_factor: cubic scaling") {
  CHECK(greens::vacuum_ldos_factor(2e13) == doctest::Approx(8.0 * greens::vacuum_ldos_factor(1e13)));
}

TEST_CASE("greens: B = 0 torque-null precursor over phi") {
  // for an isotropic substrate the phi-integral of G_yz - G_zy vanishes
  auto sub = materials::make_substrate(
      materials::default_material_db().substrate("InSb-n-doped"), {0, 0, 0},
      materials::ResponseModel::local);
  double w = 2.4e13, k0 = w / cn::c0, d = 3e-7;
  double kpar = 4.0 * k0;
  Complex acc = 0.0;
  int n = 32;
  double biggest = 0.0;
  for (int j = 0; j < n; ++j) {
    auto mode = fresnel::mode_coords(w, kpar, 2.0 * cn::pi * j / n);
    auto r = fresnel::reflect_local(sub.model, mode);
    auto g = greens::greens_reflected_integrand(r, mode, d);
    acc += g(1, 2) - g(2, 1);
    biggest = std::max(biggest, std::abs(g(1, 2)) + std::abs(g(2, 1)));
  }
  CHECK(std::abs(acc) / n < 1e-9 * biggest);
}
