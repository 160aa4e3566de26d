#pragma once

// Shared aliases, tolerances and error types used across the library.

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace phasebound {

using Complex = std::complex<double>;
using VectorXc = Eigen::VectorXcd;
using MatrixXc = Eigen::MatrixXcd;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

// Central numerical tolerances. Values are part of the library contract and
// are exercised by the test suite; do not tune them per call site.
namespace tol {
inline constexpr double hermiticity = 1e-12;      // max |rho - rho^dag| element
inline constexpr double unitarity = 1e-10;        // max |U^dag U - 1| element
inline constexpr double trace_preservation = 1e-12;
inline constexpr double state_norm = 1e-8;        // |norm^2 - 1| for "normalized" inputs
inline constexpr double psd_eigenvalue = -1e-10;  // eigenvalues of density operators
inline constexpr double sld_floor = 1e-12;        // (lam_m + lam_n) <= floor * lam_max dropped
inline constexpr double probability_floor = 1e-14;
inline constexpr double qfim_det_floor = 1e-12;   // det <= floor * trace^2 -> pseudo-inverse
}  // namespace tol

// Defaults of the automatic cutoff policy.
namespace cutoff_policy {
inline constexpr double default_deficit = 1e-10;  // allowed truncated probability mass
inline constexpr int default_guard = 5;           // extra Fock levels beyond the deficit cutoff
}  // namespace cutoff_policy

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid scenario/config input (CLI exit code 1).
struct ConfigError : Error {
  using Error::Error;
};

// Numerical failure: solver breakdown, invariant violation, infeasible cutoff
// (CLI exit code 2).
struct NumericsError : Error {
  using Error::Error;
};

inline double relative_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0.0) return 0.0;
  return std::abs(a - b) / scale;
}

}  // namespace phasebound
