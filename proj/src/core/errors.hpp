#pragma once

#include <stdexcept>
#include <string>

namespace fluxtorque {

// Invalid model parameters, bad config values, schema violations.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Degenerate substrate eigenmodes that cannot be separated into two
// independent polarizations; carries the offending mode coordinates.
class DegenerateModeError : public std::runtime_error {
 public:
  DegenerateModeError(const std::string& msg, double omega, double k_par, double phi)
      : std::runtime_error(msg), omega(omega), k_par(k_par), phi(phi) {}
  double omega, k_par, phi;
};

// Singular boundary-value system in a reflection solve.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

// Evaluation exactly on the light line (k_z = 0), or at a pole.
class SingularityError : public std::runtime_error {
 public:
  explicit SingularityError(const std::string& msg) : std::runtime_error(msg) {}
};

// Quadrature failed to reach the requested tolerance; carries what it achieved.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& msg, double achieved_tol)
      : std::runtime_error(msg), achieved_tol(achieved_tol) {}
  double achieved_tol;
};

// gamma = 0 in a steady-state spin computation, dt too large, etc.
class DynamicsError : public std::runtime_error {
 public:
  explicit DynamicsError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fluxtorque
