#pragma once

#include <Eigen/Dense>
#include <complex>

#include "materials/materials.hpp"

namespace fluxtorque::fresnel {

using Complex = std::complex<double>;

// One plane-wave channel (omega, k_par, phi). Branch convention:
// Im k_z >= 0 always; k_z real >= 0 for k_par < k0, purely imaginary with
// positive imaginary part for k_par > k0.
struct ModeCoords {
  double omega = 0.0;  // rad/s
  double k_par = 0.0;  // 1/m
  double phi = 0.0;    // rad, [0, 2pi)
  double k0 = 0.0;     // omega/c
  Complex k_z;         // 1/m
};

ModeCoords mode_coords(double omega, double k_par, double phi);

// The four Fresnel amplitudes at a given mode; r_jk is the amplitude of the
// j-polarized reflected wave per unit k-polarized incidence.
struct ReflectionMatrix {
  Complex r_ss, r_sp, r_ps, r_pp;
};

// Polarization basis (dimensionless), single source of truth for the signs:
//   e_s    = (sin phi, -cos phi, 0)                       (same up/down)
//   e_p+-  = (-1/k0) (+-k_z cos phi, +-k_z sin phi, -k_par)
struct PolarizationBasis {
  Eigen::Vector3cd e_s;
  Eigen::Vector3cd e_p_up;    // +z-going
  Eigen::Vector3cd e_p_down;  // -z-going
};

PolarizationBasis polarization_basis(const ModeCoords& mode);

// Reflection from the gyrotropic half-space (z < 0): the two transmitted
// eigenmodes are found from the quartic bulk dispersion (companion-matrix
// eigenvalues of the sampled determinant), the decaying/outgoing roots
// (Im q < 0) selected, and tangential-E/H continuity solved as a 4x4 system.
ReflectionMatrix reflect_local(const materials::GyrotropicModel& model, const ModeCoords& mode);

// Same boundary-value problem with the hydrodynamic free-carrier response:
// one additional longitudinal bulk mode and the hard-wall condition of
// vanishing normal free-carrier current at the interface (5x5 system).
// beta = 0 (or below 1e-6 c, where the longitudinal decay length is
// sub-nanometer) delegates to reflect_local.
ReflectionMatrix reflect_nonlocal(const materials::HydrodynamicModel& model,
                                  const ModeCoords& mode);

// Dispatch on the substrate's configured response model.
ReflectionMatrix reflect(const materials::Substrate& substrate, const ModeCoords& mode);

}  // namespace fluxtorque::fresnel
