#pragma once

#include <Eigen/Dense>
#include <optional>

#include "materials/materials.hpp"
#include "fresnel/fresnel.hpp"
#include "quadrature/quadrature.hpp"

namespace fluxtorque::spectra {

struct ThermalState {
  double T_p = 300.0;  // particle, K
  double T_e = 300.0;  // environment (substrate + vacuum), K

  void validate() const;
};

// Mean energy of a harmonic oscillator: hbar w / 2 + hbar w / (e^{hbar w / kT} - 1).
// Stable up to hbar w / k T ~ 700 and beyond (underflows to the zero-point term).
double theta(double omega, double T);

// Thermal part only (Bose occupation), no zero-point energy.
double theta_thermal(double omega, double T);

// Component order of the canonical per-mode integrand vector. Every density
// and the rotating-frame torque integrate this same vector, so quantities
// that are algebraically equal stay numerically identical.
enum ModeComponent {
  kCompP = 0,   // Im[ i k e F / (8 pi^2 k_z) ],  F = r_ss + r_pp (2 kpar^2/k0^2 - 1)
  kCompFx = 1,  // Im[ i k^2 cos(phi) e F / (8 pi^2 k_z) ]
  kCompFy = 2,  // Im[ i k^2 sin(phi) e F / (8 pi^2 k_z) ]
  kCompFz = 3,  // Im[ i k e F / (8 pi^2) ]
  kCompMx = 4,  // (k^2/8pi^2 k0)[cos Im((r_sp-r_ps)e/k_z) + (2/k0) sin Im(r_pp e)]
  kCompMy = 5,  // same with (cos -> sin, sin -> -cos)
  kCompMz = 6,  // (k/8pi^2 k0) Im[(r_sp+r_ps) e]
  kCompGtYY = 7,  // (k/4pi^2) Im[(i e/2k_z)(r_ss c^2 + (r_ps-r_sp)(k_z/k0) s c - r_pp (k_z/k0)^2 s^2)]
  kCompGtZZ = 8,  // (k/4pi^2) Im[(i e/2k_z) r_pp (kpar/k0)^2]
  kNumModeComponents = 9
};

// The canonical vector at one mode (e = e^{2 i k_z d}).
Eigen::Array<double, kNumModeComponents, 1> mode_integrand_vector(
    const fresnel::ReflectionMatrix& refl, const fresnel::ModeCoords& mode, double d);

struct SpectraOptions {
  bool fz_include_zero_point = false;  // F_z uses the Bose part only by default
};

enum ComponentMask : unsigned {
  kMaskP = 1u << 0,
  kMaskFx = 1u << 1,
  kMaskFy = 1u << 2,
  kMaskFz = 1u << 3,
  kMaskMx = 1u << 4,
  kMaskMy = 1u << 5,
  kMaskMz = 1u << 6,
  kMaskAll = 0x7fu,
  kMaskLateral = kMaskP | kMaskFx | kMaskFy | kMaskMx | kMaskMy | kMaskMz,
};

struct SpectralPoint {
  double omega = 0.0;
  // densities: P in W s, F in N s, M in N m s
  double P = 0.0;
  Eigen::Vector3d F = Eigen::Vector3d::Zero();
  Eigen::Vector3d M = Eigen::Vector3d::Zero();
  double err_P = 0.0;
  Eigen::Vector3d err_F = Eigen::Vector3d::Zero();
  Eigen::Vector3d err_M = Eigen::Vector3d::Zero();
  bool converged = true;
};

// All seven spectral densities at one frequency. Components absent from the
// mask are returned as zero. When Theta(T_p) == Theta(T_e) the six
// difference-prefactor densities are identically zero and their mode
// integrals are skipped outright.
SpectralPoint spectral_density(const materials::Substrate& substrate,
                               const materials::ParticleSpec& particle,
                               const ThermalState& thermal, double d, double omega,
                               const quadrature::QuadConfig& cfg, unsigned mask = kMaskAll,
                               const SpectraOptions& opts = {});

// Same point evaluated as the two half-plane partial integrals
// (phi in [0,pi): k_y > 0 "forward"; phi in [pi,2pi): k_y < 0 "backward").
// The vacuum term of P is split evenly.
std::pair<SpectralPoint, SpectralPoint> spectral_density_split(
    const materials::Substrate& substrate, const materials::ParticleSpec& particle,
    const ThermalState& thermal, double d, double omega, const quadrature::QuadConfig& cfg,
    unsigned mask = kMaskAll, const SpectraOptions& opts = {});

// Spec-level single-quantity operations (all ride the same canonical vector).
double power_density(const materials::Substrate& s, const materials::ParticleSpec& p,
                     const ThermalState& t, double d, double omega,
                     const quadrature::QuadConfig& cfg);

enum class Axis { x = 0, y = 1, z = 2 };

double force_density(Axis axis, const materials::Substrate& s, const materials::ParticleSpec& p,
                     const ThermalState& t, double d, double omega,
                     const quadrature::QuadConfig& cfg, const SpectraOptions& opts = {});

double torque_density(Axis axis, const materials::Substrate& s, const materials::ParticleSpec& p,
                      const ThermalState& t, double d, double omega,
                      const quadrature::QuadConfig& cfg);

// Angular momentum carried per exchanged photon at one mode, in units of
// hbar: (v_Mx, v_My, -v_Mz) / v_P of the canonical vector. Tends to
// (sin phi, -cos phi, 0) for k_par >> k0. Throws SingularityError when the
// photon-number denominator vanishes.
Eigen::Vector3d photon_spin(const fresnel::ReflectionMatrix& refl,
                            const fresnel::ModeCoords& mode, double d);

// Angular-velocity-dependent lateral torque density M_x(omega; Omega),
// Theta factors at the lab frequency, alpha at omega +- Omega, plus the
// direct vacuum parts. Reduces to torque_density(x) at Omega = 0.
double rotating_torque_x(const materials::Substrate& s, const materials::ParticleSpec& p,
                         const ThermalState& t, double d, double omega, double Omega,
                         const quadrature::QuadConfig& cfg);

struct WrenchTotals {
  double P = 0.0;                                   // W
  Eigen::Vector3d F = Eigen::Vector3d::Zero();      // N
  Eigen::Vector3d M = Eigen::Vector3d::Zero();      // N m
  double err_P = 0.0;
  Eigen::Vector3d err_F = Eigen::Vector3d::Zero();
  Eigen::Vector3d err_M = Eigen::Vector3d::Zero();
  long evaluations = 0;
  bool converged = true;
};

// Frequency-integrated totals: (1/pi) * integral over [w_min, w_max] of the
// density vector, under the reality convention Q(-w) = conj(Q(w)). The
// window must cover the support of Im(alpha) |dTheta|; a tail estimate
// guards against truncation (throws QuadratureError when tail-dominated).
WrenchTotals integrate_totals(const materials::Substrate& substrate,
                              const materials::ParticleSpec& particle,
                              const ThermalState& thermal, double d, double w_min, double w_max,
                              const quadrature::QuadConfig& cfg, unsigned mask = kMaskAll,
                              const SpectraOptions& opts = {}, int n_jobs = 1,
                              std::vector<double> extra_seeds = {});

// Frequencies where Re eps_particle = -2 (dipolar resonance peaks of
// Im alpha), used to seed the adaptive frequency grid.
std::vector<double> frohlich_frequencies(const materials::ParticleSpec& particle, double w_min,
                                         double w_max);

}  // namespace fluxtorque::spectra
