#include "greens/greens.hpp"

#include <cmath>

#include "core/constants.hpp"
#include "core/errors.hpp"

namespace fluxtorque::greens {

namespace cn = fluxtorque::constants;
using Complex = std::complex<double>;

Eigen::Matrix3cd greens_reflected_integrand(const fresnel::ReflectionMatrix& refl,
                                            const fresnel::ModeCoords& mode, double d) {
  if (!(d > 0)) throw ConfigError("greens_reflected_integrand: d must be > 0");
  if (mode.k_z == Complex(0.0)) {
    throw SingularityError("greens_reflected_integrand: k_z = 0 (light line)");
  }
  fresnel::PolarizationBasis b = fresnel::polarization_basis(mode);
  const Complex phase = std::exp(Complex(0, 2) * mode.k_z * d);
  const Complex pref = Complex(0, 1) / (2.0 * mode.k_z) * phase;
  Eigen::Matrix3cd dyad =
      (refl.r_ss * b.e_s + refl.r_ps * b.e_p_up) * b.e_s.transpose() +
      (refl.r_sp * b.e_s + refl.r_pp * b.e_p_up) * b.e_p_down.transpose();
  return pref * dyad;
}

double vacuum_ldos_factor(double omega) {
  double k0 = omega / cn::c0;
  return k0 * k0 * k0 / cn::pi;
}

}  // namespace fluxtorque::greens
