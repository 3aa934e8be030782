#pragma once

// Test-only reference implementations, kept independent of the library code
// paths they check.

#include <Eigen/Dense>
#include <complex>

#include "core/constants.hpp"

namespace oracles {

using Complex = std::complex<double>;
namespace cn = fluxtorque::constants;

// Textbook isotropic Fresnel coefficients in the engine's sign basis
// (derived by hand from tangential E/H continuity with the e_s, e_p+-
// vectors; perfect conductor gives r_ss = -1, r_pp = +1).
inline void isotropic_fresnel(Complex eps, double omega, double k_par, Complex* r_ss,
                              Complex* r_pp) {
  const double k0 = omega / cn::c0;
  Complex kz = k_par <= k0 ? Complex(std::sqrt((k0 - k_par) * (k0 + k_par)), 0.0)
                           : Complex(0.0, std::sqrt((k_par - k0) * (k_par + k0)));
  Complex kz2 = std::sqrt(eps * k0 * k0 - k_par * k_par);
  if (kz2.imag() < 0) kz2 = -kz2;
  *r_ss = (kz - kz2) / (kz + kz2);
  *r_pp = (eps * kz - kz2) / (eps * kz + kz2);
}

// Magnetized Drude + phonon permittivity for B along +z, written in the
// scalar eps1/eps2/eps3 form found in magneto-optics texts.
struct MagnetoDrudeScalars {
  Complex eps1, eps2, eps3;  // tensor: [[e1, i e2, 0], [-i e2, e1, 0], [0, 0, e3]]
};

inline MagnetoDrudeScalars magneto_drude(double eps_inf, double wp, double gamma, double wc,
                                         double S_ph, double wT, double G_ph, double w) {
  const Complex wt(w, gamma);
  const Complex phonon = S_ph * wT * wT / Complex(wT * wT - w * w, -G_ph * w);
  MagnetoDrudeScalars out;
  out.eps1 = eps_inf + phonon - wp * wp * wt / (w * (wt * wt - wc * wc));
  out.eps2 = wp * wp * wc / (w * (wt * wt - wc * wc));
  out.eps3 = eps_inf + phonon - wp * wp / (w * wt);
  return out;
}

// Free-space dyadic Green's function (E = w^2 mu0 G p convention) for a
// separation R along +z, and the image form for a perfect electric mirror.
inline Eigen::Matrix3cd free_space_greens_z(double omega, double R) {
  const double k = omega / cn::c0;
  const Complex ikr(0.0, k * R);
  const Complex expf = std::exp(ikr) / (4.0 * cn::pi * R);
  const Complex i_kr(0.0, 1.0 / (k * R));    // i/(kR)
  const double kr2 = 1.0 / (k * R * k * R);
  const Complex A = 1.0 + i_kr - kr2;
  const Complex B = -1.0 - 3.0 * i_kr + 3.0 * kr2;
  Eigen::Matrix3cd g = Eigen::Matrix3cd::Zero();
  g(0, 0) = g(1, 1) = expf * A;
  g(2, 2) = expf * (A + B);
  return g;
}

inline Eigen::Matrix3cd image_dipole_greens(double omega, double d) {
  Eigen::Matrix3cd g0 = free_space_greens_z(omega, 2.0 * d);
  Eigen::Matrix3d mirror = Eigen::Vector3d(-1.0, -1.0, 1.0).asDiagonal();
  return g0 * mirror.cast<Complex>();
}

// TM reflection from an unmagnetized hydrodynamic plasma half-space with the
// hard-wall boundary condition, as a small 3x3 solve in the plane of
// incidence (independent of the 3D eigenmode machinery).
inline Complex hydro_tm_reflection(Complex eps_bg, double wp, double gamma, double beta,
                                   double omega, double k_par) {
  const double k0 = omega / cn::c0;
  Complex kz = k_par <= k0 ? Complex(std::sqrt(std::abs((k0 - k_par) * (k0 + k_par))), 0.0)
                           : Complex(0.0, std::sqrt((k_par - k0) * (k_par + k0)));
  const Complex eT = eps_bg - wp * wp / (omega * Complex(omega, gamma));
  Complex qT = std::sqrt(eT * k0 * k0 - k_par * k_par);
  if (qT.imag() > 0) qT = -qT;
  const Complex kL2 = (omega * Complex(omega, gamma) - wp * wp / eps_bg) / (beta * beta);
  Complex qL = std::sqrt(kL2 - k_par * k_par);
  if (qL.imag() > 0) qL = -qL;

  // field components (Ex, Ez); phi = 0 plane
  Eigen::Vector2cd ep_m(kz / k0, k_par / k0);    // incident e_p-
  Eigen::Vector2cd ep_p(-kz / k0, k_par / k0);   // reflected e_p+
  Eigen::Vector2cd et(qT / (std::sqrt(eT) * k0), -k_par / (std::sqrt(eT) * k0));
  Complex nL = std::sqrt(k_par * k_par + qL * qL);
  Eigen::Vector2cd el(k_par / nL, qL / nL);
  auto Hy = [](Complex kx, Complex kzv, const Eigen::Vector2cd& E) {
    return kzv * E(0) - kx * E(1);
  };
  Eigen::Matrix3cd A;
  Eigen::Vector3cd b;
  A(0, 0) = ep_p(0);
  A(1, 0) = Hy(k_par, kz, ep_p);
  A(2, 0) = 0.0;
  A(0, 1) = -et(0);
  A(1, 1) = -Hy(k_par, qT, et);
  A(2, 1) = (eT - eps_bg) * et(1);
  A(0, 2) = -el(0);
  A(1, 2) = -Hy(k_par, qL, el);
  A(2, 2) = -eps_bg * el(1);
  b << -ep_m(0), -Hy(k_par, -kz, ep_m), 0.0;
  Eigen::Vector3cd x = A.partialPivLu().solve(b);
  return x(0);
}

// Planck oscillator energy in extended precision.
inline double theta_reference(double omega, double T) {
  const long double hbar = 1.054571817e-34L;
  const long double kb = 1.380649e-23L;
  long double zp = 0.5L * hbar * omega;
  if (T <= 0) return static_cast<double>(zp);
  long double x = hbar * omega / (kb * T);
  if (x > 11000.0L) return static_cast<double>(zp);
  return static_cast<double>(zp + hbar * (long double)omega / (expl(x) - 1.0L));
}

}  // namespace oracles
