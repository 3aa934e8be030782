#include "fresnel/fresnel.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "core/constants.hpp"
#include "core/errors.hpp"

namespace fluxtorque::fresnel {

namespace {

namespace cn = fluxtorque::constants;
using Eigen::Matrix3cd;
using Eigen::MatrixXcd;
using Eigen::Vector3cd;
using Eigen::VectorXcd;

constexpr double kClusterTol = 1e-4;      // relative root separation treated as degenerate
constexpr double kBetaLocalCutoff = 1e-6; // beta/c below which nonlocal == local numerically

Matrix3cd cross_matrix(const Vector3cd& b) {
  Matrix3cd m;
  m << 0, -b.z(), b.y(), b.z(), 0, -b.x(), -b.y(), b.x(), 0;
  return m;
}

// Plain algebraic products: Eigen's dot() conjugates its first argument and
// its cross() conjugates the result for complex types, neither of which is
// the wave-equation algebra.
Complex bilinear_dot(const Vector3cd& a, const Vector3cd& b) {
  return a(0) * b(0) + a(1) * b(1) + a(2) * b(2);
}

Vector3cd bilinear_cross(const Vector3cd& a, const Vector3cd& b) {
  return Vector3cd(a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2),
                   a(0) * b(1) - a(1) * b(0));
}

// Coefficients a_0..a_deg of a polynomial from samples on a circle of radius
// R (roots of unity); exact for degree <= deg, well-conditioned because the
// node matrix is a scaled DFT.
std::vector<Complex> fit_polynomial(const std::function<Complex(Complex)>& f, int deg, double R) {
  const int N = deg + 1;
  std::vector<Complex> vals(N);
  for (int j = 0; j < N; ++j) {
    double ang = 2.0 * cn::pi * j / N;
    vals[j] = f(R * Complex(std::cos(ang), std::sin(ang)));
  }
  std::vector<Complex> coeffs(N);
  for (int m = 0; m < N; ++m) {
    Complex acc = 0.0;
    for (int j = 0; j < N; ++j) {
      double ang = -2.0 * cn::pi * j * m / N;
      acc += vals[j] * Complex(std::cos(ang), std::sin(ang));
    }
    coeffs[m] = acc / double(N) / std::pow(R, m);
  }
  return coeffs;
}

// Roots of a_0 + a_1 q + ... + a_deg q^deg via the companion matrix.
std::vector<Complex> polynomial_roots(const std::vector<Complex>& a) {
  int deg = static_cast<int>(a.size()) - 1;
  while (deg > 0 && std::abs(a[deg]) == 0.0) --deg;
  if (deg < 1) return {};
  MatrixXcd comp = MatrixXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -a[i] / a[deg];
  Eigen::ComplexEigenSolver<MatrixXcd> es(comp, /*computeEigenvectors=*/false);
  std::vector<Complex> roots(es.eigenvalues().data(), es.eigenvalues().data() + deg);
  return roots;
}

// Newton refinement against the true determinant, for well-separated roots
// only: a double root comes out of the companion matrix as a pair with
// symmetric O(sqrt(eps)) errors whose midpoint is machine-accurate, and
// polishing the pair members independently would destroy that cancellation.
void newton_polish(std::vector<Complex>& roots, const std::function<Complex(Complex)>& f) {
  for (std::size_t i = 0; i < roots.size(); ++i) {
    double min_sep = 1e300;
    for (std::size_t j = 0; j < roots.size(); ++j) {
      if (j != i) min_sep = std::min(min_sep, std::abs(roots[i] - roots[j]));
    }
    if (min_sep < 1e-5 * std::max(1.0, std::abs(roots[i]))) continue;
    Complex& q = roots[i];
    double fq = std::abs(f(q));
    for (int it = 0; it < 4; ++it) {
      double h = 1e-7 * std::max(1.0, std::abs(q));
      Complex d = (f(q + h) - f(q - h)) / (2.0 * h);
      if (d == Complex(0.0)) break;
      Complex step = f(q) / d;
      if (std::abs(step) > 1e-2 * std::max(1.0, std::abs(q))) break;
      Complex q_new = q - step;
      double f_new = std::abs(f(q_new));
      if (!(f_new < 0.5 * fq)) break;  // stop at the evaluation noise floor
      q = q_new;
      fq = f_new;
    }
  }
}

struct SubstrateMode {
  Complex q;        // scaled vertical wavevector (units of k0), Im q < 0
  Vector3cd field;  // E polarization (unit, Hermitian norm)
};

// Group nearby roots, then take as many trailing right-singular vectors of
// W(q_mid) as the cluster holds. Handles the isotropic double root cleanly.
std::vector<SubstrateMode> extract_modes(const std::vector<Complex>& down,
                                         const std::function<Matrix3cd(Complex)>& wave_op,
                                         const ModeCoords& mode) {
  std::vector<SubstrateMode> out;
  std::vector<bool> used(down.size(), false);
  for (std::size_t i = 0; i < down.size(); ++i) {
    if (used[i]) continue;
    std::vector<Complex> cluster{down[i]};
    used[i] = true;
    for (std::size_t j = i + 1; j < down.size(); ++j) {
      if (!used[j] &&
          std::abs(down[j] - down[i]) < kClusterTol * std::max(1.0, std::abs(down[i]))) {
        cluster.push_back(down[j]);
        used[j] = true;
      }
    }
    Complex qm = 0.0;
    for (Complex q : cluster) qm += q;
    qm /= double(cluster.size());
    Matrix3cd W = wave_op(qm);
    Eigen::JacobiSVD<Matrix3cd> svd(W, Eigen::ComputeFullV);
    if (cluster.size() > 3) {
      throw DegenerateModeError("substrate eigenmode cluster larger than 3", mode.omega,
                                mode.k_par, mode.phi);
    }
    for (std::size_t m = 0; m < cluster.size(); ++m) {
      out.push_back({qm, svd.matrixV().col(2 - static_cast<int>(m))});
    }
  }
  // Polarizations must be independent or the boundary system is singular.
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t j = i + 1; j < out.size(); ++j) {
      double c = std::abs(out[i].field.dot(out[j].field));  // Hermitian overlap
      if (c > 0.9999) {
        throw DegenerateModeError("could not separate degenerate substrate eigenmodes",
                                  mode.omega, mode.k_par, mode.phi);
      }
    }
  }
  return out;
}

// Pick n_take downward (Im q < 0) roots; near-real roots in the lossless
// limit are resolved by the sign of the mode's vertical energy flux.
std::vector<Complex> select_downward(std::vector<Complex> roots, std::size_t n_take,
                                     const std::function<Matrix3cd(Complex)>& wave_op,
                                     double kx, double ky, const ModeCoords& mode) {
  auto flux_down = [&](Complex q) {
    Matrix3cd W = wave_op(q);
    Eigen::JacobiSVD<Matrix3cd> svd(W, Eigen::ComputeFullV);
    Vector3cd E = svd.matrixV().col(2);
    Vector3cd k(kx, ky, q);
    Vector3cd H = bilinear_cross(k, E);
    Complex sz = bilinear_cross(E, H.conjugate())(2);
    return sz.real() < 0.0;
  };
  std::sort(roots.begin(), roots.end(),
            [](Complex a, Complex b) { return a.imag() < b.imag(); });
  // Companion-matrix noise on (near-)real double roots reaches ~1e-8, so
  // roots inside the near-real band are classified by flux, not by Im sign.
  std::vector<Complex> down;
  for (Complex q : roots) {
    const double band = 1e-6 * std::max(1.0, std::abs(q));
    if (q.imag() < -band) {
      down.push_back(q);
    } else if (q.imag() <= band && flux_down(q)) {
      down.push_back(q);
    }
    if (down.size() == n_take) break;
  }
  if (down.size() != n_take) {
    throw DegenerateModeError("wrong number of downward substrate eigenmodes", mode.omega,
                              mode.k_par, mode.phi);
  }
  return down;
}

// Solve the boundary-value system for both incident polarizations.
// Rows: Ex, Ey, Hx, Hy continuity (+ optional extra row); columns:
// r_s, r_p, t_1..t_m (+ the extra column entries supplied per mode).
ReflectionMatrix solve_boundary(const ModeCoords& mode,
                                const std::vector<SubstrateMode>& modes,
                                const std::vector<Complex>& extra_row,  // per transmitted mode
                                bool with_extra_row) {
  const int n = 2 + static_cast<int>(modes.size());
  const double kxh = mode.k_par / mode.k0 * std::cos(mode.phi);
  const double kyh = mode.k_par / mode.k0 * std::sin(mode.phi);
  const Complex kzh = mode.k_z / mode.k0;
  PolarizationBasis basis = polarization_basis(mode);
  Vector3cd kh_up(kxh, kyh, kzh), kh_down(kxh, kyh, -kzh);

  MatrixXcd A = MatrixXcd::Zero(n, n);
  auto put_col = [&](int col, const Vector3cd& E, const Vector3cd& k, double sign) {
    Vector3cd H = bilinear_cross(k, E);
    A(0, col) = sign * E(0);
    A(1, col) = sign * E(1);
    A(2, col) = sign * H(0);
    A(3, col) = sign * H(1);
  };
  put_col(0, basis.e_s, kh_up, +1.0);
  put_col(1, basis.e_p_up, kh_up, +1.0);
  for (int m = 0; m < static_cast<int>(modes.size()); ++m) {
    Vector3cd km(kxh, kyh, modes[m].q);
    put_col(2 + m, modes[m].field, km, -1.0);
    if (with_extra_row) A(4, 2 + m) = extra_row[m];
  }

  MatrixXcd B = MatrixXcd::Zero(n, 2);
  auto put_rhs = [&](int col, const Vector3cd& E) {
    Vector3cd H = bilinear_cross(kh_down, E);
    B(0, col) = -E(0);
    B(1, col) = -E(1);
    B(2, col) = -H(0);
    B(3, col) = -H(1);
  };
  put_rhs(0, basis.e_s);
  put_rhs(1, basis.e_p_down);

  Eigen::PartialPivLU<MatrixXcd> lu(A);
  MatrixXcd X = lu.solve(B);
  double resid = (A * X - B).norm() / std::max(1.0, B.norm());
  if (!(resid < 1e-10)) {
    // one step of iterative refinement before giving up
    X += lu.solve(B - A * X);
    resid = (A * X - B).norm() / std::max(1.0, B.norm());
    if (!(resid < 1e-10)) {
      throw SolverError("reflection boundary system residual " + std::to_string(resid) +
                        " exceeds 1e-10");
    }
  }
  ReflectionMatrix r;
  r.r_ss = X(0, 0);
  r.r_ps = X(1, 0);
  r.r_sp = X(0, 1);
  r.r_pp = X(1, 1);
  return r;
}

}  // namespace

ModeCoords mode_coords(double omega, double k_par, double phi) {
  if (!(omega > 0)) throw ConfigError("mode_coords: omega must be > 0");
  if (!(k_par >= 0)) throw ConfigError("mode_coords: k_par must be >= 0");
  ModeCoords m;
  m.omega = omega;
  m.k_par = k_par;
  m.phi = phi;
  m.k0 = omega / cn::c0;
  if (k_par <= m.k0) {
    m.k_z = Complex(std::sqrt(std::max(0.0, (m.k0 - k_par) * (m.k0 + k_par))), 0.0);
  } else {
    m.k_z = Complex(0.0, std::sqrt((k_par - m.k0) * (k_par + m.k0)));
  }
  return m;
}

PolarizationBasis polarization_basis(const ModeCoords& mode) {
  const double cp = std::cos(mode.phi), sp = std::sin(mode.phi);
  const Complex kzh = mode.k_z / mode.k0;
  const double kph = mode.k_par / mode.k0;
  PolarizationBasis b;
  b.e_s = Vector3cd(sp, -cp, 0.0);
  b.e_p_up = -Vector3cd(kzh * cp, kzh * sp, Complex(-kph));
  b.e_p_down = -Vector3cd(-kzh * cp, -kzh * sp, Complex(-kph));
  return b;
}

ReflectionMatrix reflect_local(const materials::GyrotropicModel& model, const ModeCoords& mode) {
  const double kxh = mode.k_par / mode.k0 * std::cos(mode.phi);
  const double kyh = mode.k_par / mode.k0 * std::sin(mode.phi);
  const Matrix3cd eps = materials::epsilon_substrate(model, mode.omega);

  auto wave_op = [&](Complex qh) {
    Vector3cd k(kxh, kyh, qh);
    Complex k2 = bilinear_dot(k, k);
    Matrix3cd W = k * k.transpose();
    W -= k2 * Matrix3cd::Identity();
    W += eps;
    return W;
  };
  auto detf = [&](Complex qh) { return wave_op(qh).determinant(); };

  double R = 2.0 * std::max({1.0, mode.k_par / mode.k0,
                             std::sqrt(eps.cwiseAbs().maxCoeff())});
  std::vector<Complex> coeffs = fit_polynomial(detf, 4, R);
  std::vector<Complex> roots = polynomial_roots(coeffs);
  newton_polish(roots, detf);
  std::vector<Complex> down = select_downward(roots, 2, wave_op, kxh, kyh, mode);
  std::vector<SubstrateMode> modes = extract_modes(down, wave_op, mode);
  return solve_boundary(mode, modes, {}, false);
}

ReflectionMatrix reflect_nonlocal(const materials::HydrodynamicModel& model,
                                  const ModeCoords& mode) {
  if (model.beta < kBetaLocalCutoff * cn::c0) {
    return reflect_local(model, mode);
  }
  const double w = mode.omega;
  const double kxh = mode.k_par / mode.k0 * std::cos(mode.phi);
  const double kyh = mode.k_par / mode.k0 * std::sin(mode.phi);
  const double b2 = (model.beta / cn::c0) * (model.beta / cn::c0);
  const double wp_h2 = (model.plasma_freq / w) * (model.plasma_freq / w);

  // Background (bound) permittivity: eps_inf + phonons, no free carriers.
  materials::GyrotropicModel bound = model;
  bound.plasma_freq = 0.0;
  bound.cyclotron_freq = 0.0;
  const Complex eps_bg = materials::epsilon_substrate(bound, w)(0, 0);

  Matrix3cd A0 = Complex(0, -1) * (1.0 + Complex(0, 1) * model.drude_damping / w) *
                 Matrix3cd::Identity();
  A0 -= (model.cyclotron_freq / w) * cross_matrix(model.b_direction.cast<Complex>());

  auto L_of = [&](const Vector3cd& k) {
    Matrix3cd L = A0;
    L += Complex(0, 1) * b2 * (k * k.transpose());
    return L;
  };
  auto wave_op = [&](Complex qh) {
    Vector3cd k(kxh, kyh, qh);
    Complex k2 = bilinear_dot(k, k);
    Matrix3cd eps = eps_bg * Matrix3cd::Identity();
    eps += Complex(0, 1) * wp_h2 * L_of(k).inverse();
    Matrix3cd W = k * k.transpose();
    W -= k2 * Matrix3cd::Identity();
    W += eps;
    return W;
  };
  // det(W L) is polynomial (degree <= 6 algebraically); fit 8 and trim noise.
  auto det_wl = [&](Complex qh) {
    Vector3cd k(kxh, kyh, qh);
    Complex k2 = bilinear_dot(k, k);
    Matrix3cd T = k * k.transpose();
    T -= k2 * Matrix3cd::Identity();
    T += eps_bg * Matrix3cd::Identity();
    Matrix3cd WL = T * L_of(k);
    WL += Complex(0, 1) * wp_h2 * Matrix3cd::Identity();
    return WL.determinant();
  };

  double R = 2.0 * std::max({3.0, mode.k_par / mode.k0, std::sqrt(std::abs(eps_bg)) + 2.0});
  std::vector<Complex> coeffs = fit_polynomial(det_wl, 8, R);
  double bmax = 0.0;
  for (int j = 0; j <= 8; ++j) bmax = std::max(bmax, std::abs(coeffs[j]) * std::pow(R, j));
  int deg = 8;
  while (deg > 2 && std::abs(coeffs[deg]) * std::pow(R, deg) < 1e-9 * bmax) --deg;
  coeffs.resize(deg + 1);
  std::vector<Complex> roots = polynomial_roots(coeffs);
  newton_polish(roots, det_wl);

  std::vector<Complex> down = select_downward(roots, 3, wave_op, kxh, kyh, mode);
  std::vector<SubstrateMode> modes = extract_modes(down, wave_op, mode);

  // Hard-wall ABC: the normal free-carrier current of the transmitted field
  // vanishes at the interface; J is proportional to L^{-1} E per mode.
  std::vector<Complex> jz;
  jz.reserve(modes.size());
  for (const auto& m : modes) {
    Vector3cd k(kxh, kyh, m.q);
    Vector3cd v = L_of(k).partialPivLu().solve(m.field);
    jz.push_back(v(2));
  }
  return solve_boundary(mode, modes, jz, true);
}

ReflectionMatrix reflect(const materials::Substrate& substrate, const ModeCoords& mode) {
  if (substrate.response == materials::ResponseModel::nonlocal) {
    return reflect_nonlocal(substrate.model, mode);
  }
  return reflect_local(substrate.model, mode);
}

}  // namespace fluxtorque::fresnel
