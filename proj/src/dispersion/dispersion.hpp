#pragma once

#include <vector>

#include "materials/materials.hpp"

namespace fluxtorque::dispersion {

enum class Branch { SPP, SPhP };

struct BranchPoint {
  double k_par = 0.0;  // 1/m
  double phi = 0.0;    // rad
  double omega = 0.0;  // rad/s
  Branch branch = Branch::SPP;
  materials::ResponseModel model = materials::ResponseModel::local;
  bool lost = false;  // peak fell below the noise floor; trace truncated here
};

struct TraceOptions {
  double w_min = 0.0;       // search window; 0 = auto from the material
  double w_max = 0.0;
  double rel_tol = 1e-6;    // golden-section tolerance in omega
  int scan_points = 160;    // coarse scan for the first k point
};

// Trace the surface-polariton branch omega(k_par) at fixed in-plane angle
// phi: at each k_par the polariton is located as the maximizer of
// Im r_pp(omega) on the real axis (lossy definition), refined by
// golden-section search; continuation from the previous k keeps the branch
// coherent. k grid is log-spaced over [k_min, k_max].
std::vector<BranchPoint> trace_branch(const materials::Substrate& substrate, double phi,
                                      double k_min, double k_max, int n_points,
                                      materials::ResponseModel model,
                                      const TraceOptions& opts = {});

// Electrostatic surface-mode asymptotes: roots of Re eps1(w) + 1 = 0 and the
// magnetically split variants Re(eps1 + 1 +- g) = 0.
std::vector<double> surface_asymptotes(const materials::GyrotropicModel& model, double w_min,
                                       double w_max);

// Union of particle oscillator resonances and substrate surface-mode
// asymptote frequencies; seeds the spectra frequency grid.
std::vector<double> seed_frequencies(const materials::Substrate& substrate,
                                     const materials::ParticleSpec& particle);

}  // namespace fluxtorque::dispersion
