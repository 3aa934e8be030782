#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "fresnel/fresnel.hpp"

namespace fluxtorque::quadrature {

struct QuadConfig {
  double rel_tol = 1e-6;
  double abs_tol = 0.0;
  double k_par_max_factor = 40.0;  // k cutoff as a multiple of 1/d
  int max_subdivisions = 400;
  int phi_order = 64;

  void validate() const;  // tolerances > 0 etc.
};

// Writes ncomp real components for one mode into out[0..ncomp).
using ModeIntegrandFn = std::function<void(const fresnel::ModeCoords&, double*)>;

struct KPhiResult {
  Eigen::ArrayXd value;  // ncomp
  Eigen::ArrayXd error;  // ncomp, bounds the quadrature error
  Eigen::ArrayXd l1;     // ncomp, integral of |integrand| (component scale)
  long evaluations = 0;  // mode-function calls
  bool converged = true;
};

// Integral over k_par in [0, k_max] x phi in [0, 2pi), with
// k_max = max(k_par_max_factor / d, 3 k0). The propagating side uses
// k_par = k0 sin(theta), the evanescent side k_par = k0 cosh(u), which
// absorb the integrable 1/k_z light-line edge analytically. phi uses a
// periodic trapezoid of phi_order points with Richardson doubling.
KPhiResult integrate_kphi(int ncomp, const ModeIntegrandFn& f, double omega, double d,
                          const QuadConfig& cfg);

// Same, but reports the two half-plane partial integrals separately:
// out.first integrates phi in [0, pi) (k_y > 0), out.second phi in [pi, 2pi).
std::pair<KPhiResult, KPhiResult> integrate_kphi_split(int ncomp, const ModeIntegrandFn& f,
                                                       double omega, double d,
                                                       const QuadConfig& cfg);

struct OmegaResult {
  Eigen::ArrayXd value;
  Eigen::ArrayXd error;
  Eigen::ArrayXd tail_bound;  // crude bound on the truncated tail
  long evaluations = 0;
  bool converged = true;
};

// Adaptive frequency integration of a vector density over [w_min, w_max],
// with panels pre-split at caller-supplied seed frequencies. Panel nodes are
// evaluated in parallel batches; the reduction order is fixed, so results
// are deterministic for a given configuration.
OmegaResult integrate_omega(int ncomp, const std::function<Eigen::ArrayXd(double)>& density,
                            double w_min, double w_max, std::vector<double> seeds,
                            const QuadConfig& cfg, int n_jobs = 1,
                            double tail_decay_scale = 0.0);

// Scalar conveniences.
struct ValueWithError {
  double value = 0.0;
  double error = 0.0;
};

ValueWithError integrate_kphi_scalar(const std::function<double(const fresnel::ModeCoords&)>& f,
                                     double omega, double d, const QuadConfig& cfg);

ValueWithError integrate_omega_scalar(const std::function<double(double)>& density, double w_min,
                                      double w_max, std::vector<double> seeds,
                                      const QuadConfig& cfg);

}  // namespace fluxtorque::quadrature
