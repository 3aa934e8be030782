#pragma once

#include <Eigen/Dense>

#include "fresnel/fresnel.hpp"

namespace fluxtorque::greens {

// Reflected dyadic Green's-function integrand at the particle location,
// per (mode, height d):
//   (i / 2 k_z) e^{2 i k_z d} [ (r_ss e_s+ + r_ps e_p+) e_s-^T
//                             + (r_sp e_s+ + r_pp e_p+) e_p-^T ]
// Bilinear in the four reflection coefficients; trace equals
// (i e^{2 i k_z d} / 2 k_z) [ r_ss + r_pp (2 k_par^2 / k0^2 - 1) ].
// Units 1/m; the d^2k/(2pi)^2 measure belongs to the quadrature layer.
Eigen::Matrix3cd greens_reflected_integrand(const fresnel::ReflectionMatrix& refl,
                                            const fresnel::ModeCoords& mode, double d);

// omega^3 / (pi c^3): the factor multiplying Im(alpha) (Theta_Tp - Theta_Te)
// in the direct particle-vacuum exchange term.
double vacuum_ldos_factor(double omega);

}  // namespace fluxtorque::greens
