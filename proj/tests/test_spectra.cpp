#include <doctest.h>

#include <random>

#include "core/constants.hpp"
#include "core/errors.hpp"
#include "greens/greens.hpp"
#include "materials/materials.hpp"
#include "spectra/spectra.hpp"
#include "oracles.hpp"

using namespace fluxtorque;
namespace cn = fluxtorque::constants;
using Complex = std::complex<double>;

namespace {

materials::Substrate insb(double b, Eigen::Vector3d dir,
                          materials::ResponseModel resp = materials::ResponseModel::local) {
  return materials::make_substrate(materials::default_material_db().substrate("InSb-n-doped"),
                                   b * dir.normalized(), resp);
}

materials::ParticleSpec nacl() { return materials::default_material_db().particle("NaCl"); }

quadrature::QuadConfig fast_cfg() {
  quadrature::QuadConfig cfg;
  cfg.rel_tol = 1e-5;
  cfg.phi_order = 32;
  return cfg;
}

}  // namespace

TEST_CASE("theta: zero-point, classical and quantum limits") {
  double w = 1e14;
  CHECK(spectra::theta(w, 0.0) == 0.5 * cn::hbar * w);
  // classical limit hbar w << k T
  double T = 300.0, wl = 1e9;
  double x = cn::hbar * wl / (cn::k_B * T);
  CHECK(std::abs(spectra::theta(wl, T) - cn::k_B * T) / (cn::k_B * T) < x);
  // extended-precision reference
  for (double om : {1e13, 1e14, 5e14}) {
    double ref = oracles::theta_reference(om, 300.0);
    CHECK(std::abs(spectra::theta(om, 300.0) - ref) < 1e-12 * ref);
  }
  // deep quantum tail: no NaN, falls back to the zero-point value
  double w_big = 700.0 * cn::k_B * 1.0 / cn::hbar * 1.5;
  double th = spectra::theta(w_big, 1.0);
  CHECK(std::isfinite(th));
  CHECK(th == 0.5 * cn::hbar * w_big);
}

TEST_CASE("spectral_density: equilibrium null is exact") {
  auto sub = insb(1.0, Eigen::Vector3d::UnitX());
  auto pt = spectra::spectral_density(sub, nacl(), {300.0, 300.0}, 3e-7, 2.5e13, fast_cfg(),
                                      spectra::kMaskLateral);
  CHECK(pt.P == 0.0);
  CHECK(pt.F.x() == 0.0);
  CHECK(pt.F.y() == 0.0);
  CHECK(pt.M.x() == 0.0);
  CHECK(pt.M.y() == 0.0);
  CHECK(pt.M.z() == 0.0);
}

TEST_CASE("spectral_density: vacuum substrate leaves only the direct exchange term") {
  materials::SubstrateRecord rec;  // eps = 1: no interface
  rec.eps_inf = 1.0;
  auto sub = materials::make_substrate(rec, {0, 0, 0}, materials::ResponseModel::local);
  double w = 4.2e13, d = 3e-7;
  spectra::ThermalState th{310.0, 300.0};
  double P = spectra::power_density(sub, nacl(), th, d, w, fast_cfg());
  double dtheta = spectra::theta(w, th.T_p) - spectra::theta(w, th.T_e);
  double expected = greens::vacuum_ldos_factor(w) *
                    materials::polarizability(nacl(), w).imag() * dtheta;
  CHECK(std::abs(P - expected) < 1e-6 * std::abs(expected));
}

TEST_CASE("spectral_density: perfect-mirror power matches the image-dipole oracle") {
  materials::SubstrateRecord rec;
  rec.eps_inf = 1.0;
  rec.carrier_density = 1e32;  // overwhelming carrier response ~ PEC
  rec.effective_mass_ratio = 1.0;
  rec.drude_damping = 1e13;
  auto sub = materials::make_substrate(rec, {0, 0, 0}, materials::ResponseModel::local);
  double w = 2.6e13, d = 4e-7;
  spectra::ThermalState th{320.0, 300.0};
  auto cfg = fast_cfg();
  cfg.rel_tol = 1e-7;
  double P = spectra::power_density(sub, nacl(), th, d, w, cfg);
  double k0 = w / cn::c0;
  double dtheta = spectra::theta(w, th.T_p) - spectra::theta(w, th.T_e);
  double im_alpha = materials::polarizability(nacl(), w).imag();
  Complex im_tr = oracles::image_dipole_greens(w, d).trace();
  double expected = dtheta * k0 * k0 * im_alpha * (k0 / cn::pi + 2.0 * im_tr.imag());
  CHECK(std::abs(P - expected) < 2e-3 * std::abs(expected));
}

TEST_CASE("mode integrands: momentum-bookkeeping identity per mode") {
  auto sub = insb(1.0, Eigen::Vector3d::UnitX());
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> uw(1.6e13, 4.4e13), uphi(0, 2 * cn::pi),
      ulogk(std::log(0.05), std::log(40.0));
  double d = 3e-7;
  for (int i = 0; i < 1000; ++i) {
    double w = uw(rng);
    double k0 = w / cn::c0;
    auto mode = fresnel::mode_coords(w, std::exp(ulogk(rng)) * k0, uphi(rng));
    auto r = fresnel::reflect_local(sub.model, mode);
    auto v = spectra::mode_integrand_vector(r, mode, d);
    // F integrands equal the P integrand weighted by the photon momentum
    // over the photon energy, with the emission recoil sign
    double fy_expected = v[spectra::kCompP] * mode.k_par * std::sin(mode.phi);
    double fx_expected = v[spectra::kCompP] * mode.k_par * std::cos(mode.phi);
    double scale = std::abs(v[spectra::kCompP]) * mode.k_par + 1e-300;
    CHECK(std::abs(v[spectra::kCompFy] - fy_expected) <= 1e-12 * scale);
    CHECK(std::abs(v[spectra::kCompFx] - fx_expected) <= 1e-12 * scale);
  }
}

TEST_CASE("spectral_density: B = 0 reciprocity nulls") {
  auto sub = insb(0.0, Eigen::Vector3d::UnitX());
  spectra::ThermalState th{310.0, 300.0};
  double d = 3e-7;
  auto cfg = fast_cfg();
  for (double w : {2.2e13, 2.62e13, 3.0e13}) {
    auto pt = spectra::spectral_density(sub, nacl(), th, d, w, cfg);
    double fz = std::abs(pt.F.z());
    CHECK(std::abs(pt.F.y()) < 1e-10 * fz);
    CHECK(std::abs(pt.F.x()) < 1e-10 * fz);
    CHECK(std::abs(pt.M.x()) < 1e-10 * fz * 1e-5);  // different units; compare loosely
    CHECK(std::abs(pt.M.y()) < 1e-10 * fz * 1e-5);
  }
}

TEST_CASE("spectral_density: Voigt nulls for B along x") {
  auto sub = insb(1.0, Eigen::Vector3d::UnitX());
  spectra::ThermalState th{310.0, 300.0};
  double d = 3e-7;
  auto cfg = fast_cfg();
  for (double w : {2.3e13, 2.62e13}) {
    auto pt = spectra::spectral_density(sub, nacl(), th, d, w, cfg);
    // F_x, M_y, M_z vanish; F_y, M_x generally do not
    CHECK(std::abs(pt.F.x()) < 1e-8 * std::abs(pt.F.z()) + pt.err_F.x());
    CHECK(std::abs(pt.M.y()) < 1e-8 * std::abs(pt.M.x()) + pt.err_M.y());
    CHECK(std::abs(pt.M.z()) < 1e-8 * std::abs(pt.M.x()) + pt.err_M.z());
    CHECK(std::abs(pt.F.y()) > 0.0);
    CHECK(std::abs(pt.M.x()) > 0.0);
  }
}

TEST_CASE("spectral_density: linear in Im alpha") {
  auto sub = insb(1.0, Eigen::Vector3d::UnitX());
  spectra::ThermalState th{310.0, 300.0};
  double d = 3e-7, w = 2.62e13;
  auto cfg = fast_cfg();
  auto p1 = nacl();
  auto p2 = materials::default_material_db().particle("AgBr");
  double P1 = spectra::power_density(sub, p1, th, d, w, cfg);
  double P2 = spectra::power_density(sub, p2, th, d, w, cfg);
  double ia1 = materials::polarizability(p1, w).imag();
  double ia2 = materials::polarizability(p2, w).imag();
  CHECK(std::abs(P1 / ia1 - P2 / ia2) < 1e-12 * std::abs(P1 / ia1));
}

TEST_CASE("photon_spin: evanescent transcription and large-k asymptote") {
  auto sub = insb(1.0, Eigen::Vector3d::UnitX());
  double w = 2.5e13, k0 = w / cn::c0, d = 3e-7;

  SUBCASE("independent evanescent transcription") {
    for (double kf : {3.0, 10.0}) {
      for (double phi : {0.4, 1.8, 4.0}) {
        auto mode = fresnel::mode_coords(w, kf * k0, phi);
        auto r = fresnel::reflect_local(sub.model, mode);
        Eigen::Vector3d spin = spectra::photon_spin(r, mode, d);
        // supplement-style simplified evanescent ratio (k_z = i |k_z|)
        double akz = mode.k_z.imag();
        double kap = mode.k_par / k0;
        double num_x = mode.k_par / (2.0 * k0 * akz) * std::cos(phi) *
                           (-(r.r_sp - r.r_ps)).real() +
                       mode.k_par / (k0 * k0) * std::sin(phi) * r.r_pp.imag();
        double num_y = mode.k_par / (2.0 * k0 * akz) * std::sin(phi) *
                           (-(r.r_sp - r.r_ps)).real() -
                       mode.k_par / (k0 * k0) * std::cos(phi) * r.r_pp.imag();
        double den = r.r_ss.imag() / (2.0 * akz) +
                     r.r_pp.imag() / (2.0 * akz) * (2.0 * kap * kap - 1.0);
        CHECK(spin.x() == doctest::Approx(num_x / den).epsilon(1e-9));
        CHECK(spin.y() == doctest::Approx(num_y / den).epsilon(1e-9));
      }
    }
  }
  SUBCASE("asymptote (sin phi, -cos phi, 0) at k = 100 k0") {
    for (double phi : {0.0, 0.7, 1.57, 2.9, 4.4, 5.9}) {
      auto mode = fresnel::mode_coords(w, 100.0 * k0, phi);
      auto r = fresnel::reflect_local(sub.model, mode);
      Eigen::Vector3d spin = spectra::photon_spin(r, mode, d);
      CHECK(std::abs(spin.x() - std::sin(phi)) < 0.01);
      CHECK(std::abs(spin.y() + std::cos(phi)) < 0.01);
      CHECK(std::abs(spin.z()) < 0.01);
    }
  }
  SUBCASE("monotone convergence in k/k0") {
    double phi = 1.1;
    double prev = 1e9;
    for (double kf : {3.0, 10.0, 30.0, 100.0}) {
      auto mode = fresnel::mode_coords(w, kf * k0, phi);
      auto r = fresnel::reflect_local(sub.model, mode);
      Eigen::Vector3d spin = spectra::photon_spin(r, mode, d);
      double dev = (spin - Eigen::Vector3d(std::sin(phi), -std::cos(phi), 0.0)).norm();
      CHECK(dev < prev);
      prev = dev;
    }
  }
}

TEST_CASE("rotating_torque_x: static consistency and vacuum parts") {
  auto sub = insb(1.0, Eigen::Vector3d::UnitX());
  spectra::ThermalState th{400.0, 300.0};
  double d = 3e-7, w = 2.2e13;
  auto cfg = fast_cfg();

  SUBCASE("Omega = 0 equals the static torque density") {
    double stat = spectra::torque_density(spectra::Axis::x, sub, nacl(), th, d, w, cfg);
    double rot = spectra::rotating_torque_x(sub, nacl(), th, d, w, 0.0, cfg);
    CHECK(std::abs(rot - stat) <= 1e-10 * std::abs(stat));
  }
  SUBCASE("|Omega| must be < omega") {
    CHECK_THROWS_AS(spectra::rotating_torque_x(sub, nacl(), th, d, w, 2.0 * w, cfg),
                    ConfigError);
  }
  SUBCASE("vacuum-only configuration matches the transcribed vacuum terms") {
    materials::SubstrateRecord rec;
    rec.eps_inf = 1.0;
    auto vac = materials::make_substrate(rec, {0, 0, 0}, materials::ResponseModel::local);
    double Omega = 1e12;
    spectra::ThermalState thv{350.0, 0.0};
    double got = spectra::rotating_torque_x(vac, nacl(), thv, d, w, Omega, cfg);
    double wp = w + Omega, wm = w - Omega;
    double ia_w = materials::polarizability(nacl(), w).imag();
    double ia_p = materials::polarizability(nacl(), wp).imag();
    double ia_m = materials::polarizability(nacl(), wm).imag();
    double c3 = cn::c0 * cn::c0 * cn::c0;
    double e_vac = 2.0 * w * w / (3.0 * cn::pi * c3) * (ia_m - ia_p) * spectra::theta(w, 0.0);
    double p_vac = 2.0 * (wm * wm * wm - wp * wp * wp) / (3.0 * cn::pi * w * c3) * ia_w *
                   spectra::theta(w, 350.0);
    CHECK(got == doctest::Approx(e_vac + p_vac).epsilon(1e-12));
    CHECK(p_vac < 0.0);  // opposes the rotation
  }
}

TEST_CASE("integrate_totals: equilibrium totals vanish and Fz responds to the zero-point flag") {
  auto sub = insb(1.0, Eigen::Vector3d::UnitX());
  auto cfg = fast_cfg();
  cfg.rel_tol = 1e-3;
  auto tot = spectra::integrate_totals(sub, nacl(), {300.0, 300.0}, 3e-7, 5e12, 8e13, cfg,
                                       spectra::kMaskLateral);
  CHECK(tot.P == 0.0);
  CHECK(tot.F.x() == 0.0);
  CHECK(tot.F.y() == 0.0);
  CHECK(tot.M.norm() == 0.0);
}

TEST_CASE("integrate_totals: narrowband density against a dense trapezoid oracle") {
  // sharp single-oscillator particle: total ~ resonance peak x linewidth
  materials::ParticleSpec p;
  p.radius = 2e-7;
  p.eps_inf = 2.0;
  p.oscillators = {{2.0, 2.4e13, 2e11}};
  p.mass_density = 3000.0;
  auto sub = insb(1.0, Eigen::Vector3d::UnitX());
  spectra::ThermalState th{330.0, 300.0};
  double d = 3e-7;
  auto cfg = fast_cfg();
  cfg.rel_tol = 1e-4;
  double w_lo = 1.9e13, w_hi = 3.1e13;
  auto tot = spectra::integrate_totals(sub, p, th, d, w_lo, w_hi, cfg, spectra::kMaskP);

  // dense trapezoid sweep of the same density (log-spaced dense near peak)
  int n = 1600;
  double acc = 0.0, prev_w = 0.0, prev_f = 0.0;
  for (int i = 0; i <= n; ++i) {
    double w = w_lo + (w_hi - w_lo) * i / n;
    double f = spectra::power_density(sub, p, th, d, w, cfg);
    if (i > 0) acc += 0.5 * (f + prev_f) * (w - prev_w);
    prev_w = w;
    prev_f = f;
  }
  double oracle = acc / cn::pi;
  CHECK(std::abs(tot.P - oracle) < 2e-3 * std::abs(oracle));
}
