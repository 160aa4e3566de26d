#pragma once

// Classical and quantum Fisher information: pure-state QFI, mixed-state QFI
// via the symmetric logarithmic derivative (in the eigenbasis of rho),
// two-parameter QFI matrices, the sum/difference-phase basis change, and
// Cramer-Rao precision bounds.

#include <cmath>
#include <string>
#include <vector>

#include "phasebound/common.hpp"
#include "phasebound/fock.hpp"

#ifdef PHASEBOUND_USE_LAPACKE
#include <lapacke.h>
#endif

namespace phasebound {

// ---------------------------------------------------------------------------
// Dense Hermitian eigendecomposition (ascending eigenvalues).
// ---------------------------------------------------------------------------

struct EigenSystem {
  Eigen::VectorXd values;
  MatrixXc vectors;  // columns
};

inline EigenSystem hermitian_eigensystem(const MatrixXc& matrix) {
  const Eigen::Index n = matrix.rows();
#ifdef PHASEBOUND_USE_LAPACKE
  if (n > 48) {
    MatrixXc work = matrix;
    Eigen::VectorXd values(n);
    const int info = LAPACKE_zheevd(
        LAPACK_COL_MAJOR, 'V', 'L', static_cast<lapack_int>(n),
        reinterpret_cast<lapack_complex_double*>(work.data()), static_cast<lapack_int>(n),
        values.data());
    if (info == 0) return EigenSystem{std::move(values), std::move(work)};
    // fall through to the Eigen solver on failure
  }
#endif
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(matrix);
  if (es.info() != Eigen::Success)
    throw NumericsError("hermitian_eigensystem: eigendecomposition failed");
  return EigenSystem{es.eigenvalues(), es.eigenvectors()};
}

// ---------------------------------------------------------------------------
// Result types
// ---------------------------------------------------------------------------

struct FisherMatrix {
  std::vector<std::string> labels;  // {"phi"}, {"phi1","phi2"} or {"phi+","phi-"}
  Eigen::MatrixXd values;           // real symmetric PSD, size 1 or 2
  // Diagnostic: weight skipped by the SLD eigenvalue floor (|<m|drho|n>|^2 on
  // dropped pairs) or, for classical_fisher, the derivative mass on skipped
  // outcomes.
  double dropped_weight = 0.0;

  static FisherMatrix scalar(double f, std::string label = "phi") {
    FisherMatrix out;
    out.labels = {std::move(label)};
    out.values = Eigen::MatrixXd::Constant(1, 1, f);
    return out;
  }

  double scalar_value() const {
    if (values.rows() != 1) throw Error("FisherMatrix: not a scalar");
    return values(0, 0);
  }

  double symmetry_defect() const { return (values - values.transpose()).cwiseAbs().maxCoeff(); }

  int index_of(const std::string& label) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == label) return static_cast<int>(i);
    throw Error("FisherMatrix: unknown parameter label '" + label + "'");
  }
};

struct PrecisionBound {
  std::string parameter;
  double value = 0.0;  // phase uncertainty, radians
  std::uint64_t repetitions = 1;
};

// ---------------------------------------------------------------------------
// Classical Fisher information
// ---------------------------------------------------------------------------

// F = sum_o (dp_o)^2 / p_o over outcomes with p_o >= floor; outcomes below
// the floor are skipped and their |dp| mass reported in dropped_weight.
inline FisherMatrix classical_fisher(const Eigen::VectorXd& probs, const Eigen::VectorXd& dprobs) {
  if (probs.size() != dprobs.size()) throw Error("classical_fisher: table size mismatch");
  if (probs.size() == 0) throw Error("classical_fisher: empty table");
  if (probs.minCoeff() < -1e-12)
    throw NumericsError("classical_fisher: negative probability beyond tolerance");
  if (std::abs(probs.sum() - 1.0) > 1e-6)
    throw NumericsError("classical_fisher: probabilities do not sum to 1 within tolerance");
  if (std::abs(dprobs.sum()) > 1e-8)
    throw NumericsError("classical_fisher: derivative does not sum to 0 within tolerance");
  double f = 0.0, dropped = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    if (probs(i) < tol::probability_floor) {
      dropped += std::abs(dprobs(i));
      continue;
    }
    f += dprobs(i) * dprobs(i) / probs(i);
  }
  FisherMatrix out = FisherMatrix::scalar(f);
  out.dropped_weight = dropped;
  return out;
}

// ---------------------------------------------------------------------------
// Pure-state QFI
// ---------------------------------------------------------------------------

// d|psi>/dphi = -i G |psi| for a Hermitian generator G.
inline FockVector derivative_state(const FockVector& psi, const ModeOperator& generator) {
  if (generator.space != psi.space) throw Error("derivative_state: space mismatch");
  const double herm = (generator.matrix - generator.matrix.adjoint()).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, generator.matrix.cwiseAbs().maxCoeff());
  if (herm > 1e-10 * scale)
    throw NumericsError("derivative_state: generator is not Hermitian within tolerance");
  return FockVector(psi.space, -kI * (generator.matrix * psi.amplitudes));
}

// The density-operator analog: d rho / d phi = -i [G, rho].
inline DensityOperator commutator_derivative(const DensityOperator& rho,
                                             const ModeOperator& generator) {
  if (generator.space != rho.space) throw Error("commutator_derivative: space mismatch");
  MatrixXc gr = generator.matrix * rho.matrix;
  return DensityOperator(rho.space, -kI * (gr - gr.adjoint()));
}

// F_Q = 4 (<dpsi|dpsi> - |<dpsi|psi>|^2).
inline FisherMatrix qfi_pure(const FockVector& psi, const FockVector& dpsi) {
  if (psi.space != dpsi.space) throw Error("qfi_pure: space mismatch");
  if (std::abs(psi.squared_norm() - 1.0) > tol::state_norm)
    throw NumericsError("qfi_pure: state is not normalized within tolerance");
  const double dd = dpsi.amplitudes.squaredNorm();
  const Complex dp = dpsi.amplitudes.dot(psi.amplitudes);
  return FisherMatrix::scalar(4.0 * (dd - std::norm(dp)));
}

// F_ij = 4 Re(<d_i psi|d_j psi> - <d_i psi|psi><psi|d_j psi>).
inline FisherMatrix qfim_pure(const FockVector& psi, const FockVector& dpsi1,
                              const FockVector& dpsi2) {
  if (psi.space != dpsi1.space || psi.space != dpsi2.space) throw Error("qfim_pure: space mismatch");
  if (std::abs(psi.squared_norm() - 1.0) > tol::state_norm)
    throw NumericsError("qfim_pure: state is not normalized within tolerance");
  const FockVector* d[2] = {&dpsi1, &dpsi2};
  FisherMatrix out;
  out.labels = {"phi1", "phi2"};
  out.values.resize(2, 2);
  for (int i = 0; i < 2; ++i) {
    const Complex di_psi = d[i]->amplitudes.dot(psi.amplitudes);
    for (int j = i; j < 2; ++j) {
      const Complex overlap = d[i]->amplitudes.dot(d[j]->amplitudes);
      const Complex psi_dj = psi.amplitudes.dot(d[j]->amplitudes);
      const double entry = 4.0 * (overlap - di_psi * psi_dj).real();
      out.values(i, j) = entry;
      out.values(j, i) = entry;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Mixed-state QFI via the symmetric logarithmic derivative
// ---------------------------------------------------------------------------

namespace detail {

inline void validate_sld_inputs(const DensityOperator& rho, const DensityOperator& drho) {
  if (rho.space != drho.space) throw Error("qfi_mixed: space mismatch");
  if (rho.hermiticity_defect() > tol::hermiticity * std::max(1.0, rho.matrix.cwiseAbs().maxCoeff()))
    throw NumericsError("qfi_mixed: rho is not Hermitian within tolerance");
  if (std::abs(rho.trace_real() - 1.0) > 1e-6)
    throw NumericsError("qfi_mixed: rho trace deviates from 1 beyond tolerance");
  const double dscale = std::max(1.0, drho.matrix.cwiseAbs().maxCoeff());
  if (drho.hermiticity_defect() > 1e-9 * dscale)
    throw NumericsError("qfi_mixed: drho is not Hermitian within tolerance");
  if (std::abs(drho.matrix.trace()) > 1e-8 * dscale)
    throw NumericsError("qfi_mixed: drho is not traceless within tolerance");
}

}  // namespace detail

// F_Q = sum_{m,n : lam_m + lam_n > floor} 2 |<m|drho|n>|^2 / (lam_m + lam_n)
// over the eigenbasis of rho. Pairs below the floor are dropped; their
// |<m|drho|n>|^2 weight is reported. Reduces to qfi_pure on rank-1 rho.
inline FisherMatrix qfi_mixed(const DensityOperator& rho, const DensityOperator& drho) {
  detail::validate_sld_inputs(rho, drho);
  EigenSystem eig = hermitian_eigensystem(rho.matrix);
  const double lam_max = eig.values.cwiseAbs().maxCoeff();
  if (eig.values.minCoeff() < -1e-8 * std::max(lam_max, 1.0))
    throw NumericsError("qfi_mixed: rho has a significantly negative eigenvalue");
  const double floor = tol::sld_floor * lam_max;
  MatrixXc d = eig.vectors.adjoint() * drho.matrix * eig.vectors;
  double f = 0.0, dropped = 0.0;
  const Eigen::Index n = eig.values.size();
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      const double denom = std::max(eig.values(a), 0.0) + std::max(eig.values(b), 0.0);
      const double w = std::norm(d(a, b));
      if (denom <= floor) {
        dropped += w;
        continue;
      }
      f += 2.0 * w / denom;
    }
  }
  FisherMatrix out = FisherMatrix::scalar(f);
  out.dropped_weight = dropped;
  return out;
}

// Matrix version: F_jk = sum 2 Re[<m|d_j rho|n><n|d_k rho|m>] / (lam_m+lam_n).
inline FisherMatrix qfim_mixed(const DensityOperator& rho, const DensityOperator& drho1,
                               const DensityOperator& drho2) {
  detail::validate_sld_inputs(rho, drho1);
  detail::validate_sld_inputs(rho, drho2);
  EigenSystem eig = hermitian_eigensystem(rho.matrix);
  const double lam_max = eig.values.cwiseAbs().maxCoeff();
  if (eig.values.minCoeff() < -1e-8 * std::max(lam_max, 1.0))
    throw NumericsError("qfim_mixed: rho has a significantly negative eigenvalue");
  const double floor = tol::sld_floor * lam_max;
  MatrixXc d1 = eig.vectors.adjoint() * drho1.matrix * eig.vectors;
  MatrixXc d2 = eig.vectors.adjoint() * drho2.matrix * eig.vectors;
  Eigen::Matrix2d f = Eigen::Matrix2d::Zero();
  double dropped = 0.0;
  const Eigen::Index n = eig.values.size();
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      const double denom = std::max(eig.values(a), 0.0) + std::max(eig.values(b), 0.0);
      if (denom <= floor) {
        dropped += std::norm(d1(a, b)) + std::norm(d2(a, b));
        continue;
      }
      const double f11 = 2.0 * std::norm(d1(a, b)) / denom;
      const double f22 = 2.0 * std::norm(d2(a, b)) / denom;
      const double f12 = 2.0 * (d1(a, b) * std::conj(d2(a, b))).real() / denom;
      f(0, 0) += f11;
      f(1, 1) += f22;
      f(0, 1) += f12;
    }
  }
  f(1, 0) = f(0, 1);
  FisherMatrix out;
  out.labels = {"phi1", "phi2"};
  out.values = f;
  out.dropped_weight = dropped;
  return out;
}

// ---------------------------------------------------------------------------
// Basis change between (phi1, phi2) and (phi+, phi-) = (phi1 + phi2, phi1 - phi2)
// ---------------------------------------------------------------------------

// Congruence transform F_pm = J^T F J with J = d(phi1,phi2)/d(phi+,phi-)
// = [[1/2, 1/2], [1/2, -1/2]].
inline FisherMatrix to_plus_minus(const FisherMatrix& f) {
  if (f.values.rows() != 2) throw Error("to_plus_minus: expects a 2x2 matrix");
  Eigen::Matrix2d j;
  j << 0.5, 0.5, 0.5, -0.5;
  FisherMatrix out;
  out.labels = {"phi+", "phi-"};
  out.values = j.transpose() * f.values * j;
  out.dropped_weight = f.dropped_weight;
  return out;
}

// Inverse transform back to (phi1, phi2); J^{-1} = 2J.
inline FisherMatrix from_plus_minus(const FisherMatrix& f) {
  if (f.values.rows() != 2) throw Error("from_plus_minus: expects a 2x2 matrix");
  Eigen::Matrix2d jinv;
  jinv << 1.0, 1.0, 1.0, -1.0;
  FisherMatrix out;
  out.labels = {"phi1", "phi2"};
  out.values = jinv.transpose() * f.values * jinv;
  out.dropped_weight = f.dropped_weight;
  return out;
}

// ---------------------------------------------------------------------------
// Cramer-Rao bounds
// ---------------------------------------------------------------------------

struct Inverse2x2Report {
  double condition = 0.0;
  bool pseudo_inverse = false;
};

// Adjugate inverse with a condition-number report; falls back to the
// Moore-Penrose pseudo-inverse when det <= floor * trace^2 (degenerate QFIMs
// occur at tau in {0, 1} and at beta = 0).
inline Eigen::Matrix2d invert_2x2(const Eigen::Matrix2d& f, Inverse2x2Report* report = nullptr) {
  const double det = f(0, 0) * f(1, 1) - f(0, 1) * f(1, 0);
  const double tr = f.trace();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(f);
  const double lmin = std::abs(es.eigenvalues()(0)), lmax = std::abs(es.eigenvalues()(1));
  if (report) report->condition = lmin > 0.0 ? lmax / lmin : std::numeric_limits<double>::infinity();
  if (det > tol::qfim_det_floor * tr * tr) {
    Eigen::Matrix2d inv;
    inv << f(1, 1), -f(0, 1), -f(1, 0), f(0, 0);
    return inv / det;
  }
  if (report) report->pseudo_inverse = true;
  Eigen::Matrix2d inv = Eigen::Matrix2d::Zero();
  for (int i = 0; i < 2; ++i) {
    const double lam = es.eigenvalues()(i);
    if (lam > 1e-12 * std::max(lmax, 1.0))
      inv += es.eigenvectors().col(i) * es.eigenvectors().col(i).transpose() / lam;
  }
  return inv;
}

// delta phi_i = sqrt((F^{-1})_{ii} / k); for scalar F, delta = 1/sqrt(k F).
inline PrecisionBound crb_bound(const FisherMatrix& f, const std::string& parameter,
                                std::uint64_t k = 1) {
  if (k == 0) throw Error("crb_bound: repetitions must be positive");
  const int idx = f.index_of(parameter);
  double inv_ii = 0.0;
  if (f.values.rows() == 1) {
    const double val = f.scalar_value();
    if (val <= 0.0) throw NumericsError("crb_bound: parameter not identifiable (zero information)");
    inv_ii = 1.0 / val;
  } else {
    Inverse2x2Report report;
    const Eigen::Matrix2d inv = invert_2x2(f.values, &report);
    if (report.pseudo_inverse) {
      // Pseudo-inverse rule: a parameter whose row lies in the kernel carries
      // no information at all.
      const double row_norm = f.values.row(idx).norm();
      if (row_norm <= 1e-12 * std::max(f.values.trace(), 1.0))
        throw NumericsError("crb_bound: parameter not identifiable (kernel of the QFIM)");
    }
    inv_ii = inv(idx, idx);
    if (inv_ii <= 0.0) throw NumericsError("crb_bound: parameter not identifiable");
  }
  return PrecisionBound{parameter, std::sqrt(inv_ii / static_cast<double>(k)), k};
}

}  // namespace phasebound
