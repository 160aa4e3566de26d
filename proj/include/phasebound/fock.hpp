#pragma once

// Truncated Fock-space representation of multi-mode bosonic states and
// operators: basis bookkeeping, ladder/number operators, tensor products,
// partial trace and total-photon-number sector utilities.
//
// Basis ordering is fixed everywhere in the library: lexicographic in the
// occupation numbers (n_0, ..., n_{M-1}) with mode 0 the slowest index, i.e.
// flat = ((n_0 * (c_1+1) + n_1) * (c_2+1) + n_2) ...   All modules consume
// this convention; none re-derive it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "phasebound/common.hpp"

namespace phasebound {

class FockSpace {
 public:
  FockSpace() = default;

  explicit FockSpace(std::vector<int> cutoffs) : cutoffs_(std::move(cutoffs)) {
    if (cutoffs_.empty()) throw Error("FockSpace: need at least one mode");
    strides_.resize(cutoffs_.size());
    std::int64_t dim = 1;
    for (int m = static_cast<int>(cutoffs_.size()) - 1; m >= 0; --m) {
      if (cutoffs_[m] < 0) throw Error("FockSpace: negative cutoff");
      strides_[m] = dim;
      dim *= cutoffs_[m] + 1;
      if (dim > kMaxDimension)
        throw NumericsError("FockSpace: dimension exceeds feasibility limit (cutoff infeasible)");
    }
    dim_ = dim;
  }

  static FockSpace single_mode(int cutoff) { return FockSpace(std::vector<int>{cutoff}); }

  int mode_count() const { return static_cast<int>(cutoffs_.size()); }
  int cutoff(int mode) const { return cutoffs_.at(mode); }
  const std::vector<int>& cutoffs() const { return cutoffs_; }
  Eigen::Index dim() const { return static_cast<Eigen::Index>(dim_); }

  Eigen::Index index_of(std::span<const int> occupations) const {
    if (static_cast<int>(occupations.size()) != mode_count())
      throw Error("FockSpace::index_of: occupation list has wrong length");
    std::int64_t idx = 0;
    for (int m = 0; m < mode_count(); ++m) {
      if (occupations[m] < 0 || occupations[m] > cutoffs_[m])
        throw Error("FockSpace::index_of: occupation out of range");
      idx += occupations[m] * strides_[m];
    }
    return static_cast<Eigen::Index>(idx);
  }

  int occupation(Eigen::Index flat, int mode) const {
    return static_cast<int>((flat / strides_.at(mode)) % (cutoffs_[mode] + 1));
  }

  std::vector<int> occupations(Eigen::Index flat) const {
    std::vector<int> occ(mode_count());
    for (int m = 0; m < mode_count(); ++m) occ[m] = occupation(flat, m);
    return occ;
  }

  int total_photons(Eigen::Index flat) const {
    int total = 0;
    for (int m = 0; m < mode_count(); ++m) total += occupation(flat, m);
    return total;
  }

  int total_photons(Eigen::Index flat, std::span<const int> modes) const {
    int total = 0;
    for (int m : modes) total += occupation(flat, m);
    return total;
  }

  Eigen::Index stride(int mode) const { return static_cast<Eigen::Index>(strides_.at(mode)); }

  FockSpace tensor_with(const FockSpace& other) const {
    std::vector<int> cut = cutoffs_;
    cut.insert(cut.end(), other.cutoffs_.begin(), other.cutoffs_.end());
    return FockSpace(std::move(cut));
  }

  bool operator==(const FockSpace& other) const { return cutoffs_ == other.cutoffs_; }
  bool operator!=(const FockSpace& other) const { return !(*this == other); }

  static constexpr std::int64_t kMaxDimension = 1 << 26;

 private:
  std::vector<int> cutoffs_;
  std::vector<std::int64_t> strides_;
  std::int64_t dim_ = 0;
};

// Pure state: complex amplitudes over the truncated basis. Physical states
// carry squared norm 1 - deficit, where the deficit is the truncated
// probability mass; constructors track it instead of renormalizing.
struct FockVector {
  FockSpace space;
  VectorXc amplitudes;

  FockVector() = default;
  FockVector(FockSpace s, VectorXc a) : space(std::move(s)), amplitudes(std::move(a)) {
    if (amplitudes.size() != space.dim()) throw Error("FockVector: amplitude length mismatch");
  }

  static FockVector vacuum(const FockSpace& s) {
    VectorXc a = VectorXc::Zero(s.dim());
    a(0) = 1.0;
    return FockVector(s, std::move(a));
  }

  static FockVector basis_state(const FockSpace& s, std::span<const int> occupations) {
    VectorXc a = VectorXc::Zero(s.dim());
    a(s.index_of(occupations)) = 1.0;
    return FockVector(s, std::move(a));
  }

  double squared_norm() const { return amplitudes.squaredNorm(); }
  double deficit() const { return 1.0 - squared_norm(); }
};

struct DensityOperator {
  FockSpace space;
  MatrixXc matrix;

  DensityOperator() = default;
  DensityOperator(FockSpace s, MatrixXc m) : space(std::move(s)), matrix(std::move(m)) {
    if (matrix.rows() != space.dim() || matrix.cols() != space.dim())
      throw Error("DensityOperator: matrix size mismatch");
  }

  double trace_real() const { return matrix.trace().real(); }

  double hermiticity_defect() const {
    return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
  }
};

struct ModeOperator {
  FockSpace space;
  MatrixXc matrix;
  bool unitary_flag = false;

  ModeOperator() = default;
  ModeOperator(FockSpace s, MatrixXc m, bool unitary = false)
      : space(std::move(s)), matrix(std::move(m)), unitary_flag(unitary) {
    if (matrix.rows() != space.dim() || matrix.cols() != space.dim())
      throw Error("ModeOperator: matrix size mismatch");
  }

  ModeOperator adjoint() const { return ModeOperator(space, matrix.adjoint(), unitary_flag); }

  double unitarity_defect() const {
    MatrixXc d = matrix.adjoint() * matrix;
    d.diagonal().array() -= 1.0;
    return d.cwiseAbs().maxCoeff();
  }
};

// --- ladder and number operators -------------------------------------------

// <n-1| a |n> = sqrt(n) on the designated mode, identity on the others.
inline ModeOperator annihilation_op(const FockSpace& space, int mode) {
  if (mode < 0 || mode >= space.mode_count()) throw Error("annihilation_op: mode out of range");
  MatrixXc m = MatrixXc::Zero(space.dim(), space.dim());
  const Eigen::Index stride = space.stride(mode);
  for (Eigen::Index j = 0; j < space.dim(); ++j) {
    const int n = space.occupation(j, mode);
    if (n > 0) m(j - stride, j) = std::sqrt(static_cast<double>(n));
  }
  return ModeOperator(space, std::move(m));
}

inline ModeOperator creation_op(const FockSpace& space, int mode) {
  ModeOperator a = annihilation_op(space, mode);
  return ModeOperator(space, a.matrix.adjoint());
}

inline ModeOperator number_op(const FockSpace& space, int mode) {
  if (mode < 0 || mode >= space.mode_count()) throw Error("number_op: mode out of range");
  MatrixXc m = MatrixXc::Zero(space.dim(), space.dim());
  for (Eigen::Index j = 0; j < space.dim(); ++j)
    m(j, j) = static_cast<double>(space.occupation(j, mode));
  return ModeOperator(space, std::move(m));
}

inline ModeOperator total_number_op(const FockSpace& space) {
  MatrixXc m = MatrixXc::Zero(space.dim(), space.dim());
  for (Eigen::Index j = 0; j < space.dim(); ++j)
    m(j, j) = static_cast<double>(space.total_photons(j));
  return ModeOperator(space, std::move(m));
}

// --- tensor products ---------------------------------------------------------

inline FockVector tensor(const FockVector& v1, const FockVector& v2) {
  FockSpace joint = v1.space.tensor_with(v2.space);
  VectorXc amps(joint.dim());
  const Eigen::Index d2 = v2.space.dim();
  for (Eigen::Index i = 0; i < v1.space.dim(); ++i)
    amps.segment(i * d2, d2) = v1.amplitudes(i) * v2.amplitudes;
  return FockVector(std::move(joint), std::move(amps));
}

inline MatrixXc kronecker(const MatrixXc& a, const MatrixXc& b) {
  MatrixXc out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline ModeOperator tensor(const ModeOperator& a, const ModeOperator& b) {
  return ModeOperator(a.space.tensor_with(b.space), kronecker(a.matrix, b.matrix),
                      a.unitary_flag && b.unitary_flag);
}

inline DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  return DensityOperator(a.space.tensor_with(b.space), kronecker(a.matrix, b.matrix));
}

// --- applying operators -------------------------------------------------------

inline FockVector apply(const ModeOperator& op, const FockVector& v) {
  if (op.space != v.space) throw Error("apply: operator/state space mismatch");
  return FockVector(v.space, op.matrix * v.amplitudes);
}

// U rho U^dag (or general sandwich K rho K^dag for non-unitary K).
inline DensityOperator sandwich(const ModeOperator& op, const DensityOperator& rho) {
  if (op.space != rho.space) throw Error("sandwich: operator/state space mismatch");
  return DensityOperator(rho.space, op.matrix * rho.matrix * op.matrix.adjoint());
}

inline Complex expectation(const FockVector& v, const ModeOperator& op) {
  return v.amplitudes.dot(op.matrix * v.amplitudes);  // Eigen dot conjugates the left factor
}

inline Complex expectation(const DensityOperator& rho, const ModeOperator& op) {
  return (rho.matrix * op.matrix).trace();
}

inline DensityOperator outer(const FockVector& v) {
  return DensityOperator(v.space, v.amplitudes * v.amplitudes.adjoint());
}

// --- partial trace -----------------------------------------------------------

// Trace out every mode not in `keep`. Kept modes retain their relative order.
inline DensityOperator partial_trace(const DensityOperator& rho, std::span<const int> keep) {
  if (keep.empty()) throw Error("partial_trace: keep set must be nonempty");
  const FockSpace& space = rho.space;
  std::vector<int> keep_sorted(keep.begin(), keep.end());
  std::sort(keep_sorted.begin(), keep_sorted.end());
  for (int m : keep_sorted)
    if (m < 0 || m >= space.mode_count()) throw Error("partial_trace: mode out of range");
  std::vector<int> traced;
  for (int m = 0; m < space.mode_count(); ++m)
    if (!std::binary_search(keep_sorted.begin(), keep_sorted.end(), m)) traced.push_back(m);

  std::vector<int> kept_cutoffs;
  for (int m : keep_sorted) kept_cutoffs.push_back(space.cutoff(m));
  FockSpace out_space(kept_cutoffs);

  // Strides of kept/traced modes in the original flat index.
  const int nk = static_cast<int>(keep_sorted.size());
  std::vector<Eigen::Index> kstride(nk), kout_stride(nk);
  for (int i = 0; i < nk; ++i) {
    kstride[i] = space.stride(keep_sorted[i]);
    kout_stride[i] = out_space.stride(i);
  }

  // Enumerate the traced-subsystem basis as flat offsets.
  std::vector<Eigen::Index> traced_offsets{0};
  for (int m : traced) {
    std::vector<Eigen::Index> next;
    next.reserve(traced_offsets.size() * (space.cutoff(m) + 1));
    for (Eigen::Index base : traced_offsets)
      for (int n = 0; n <= space.cutoff(m); ++n) next.push_back(base + n * space.stride(m));
    traced_offsets = std::move(next);
  }

  MatrixXc out = MatrixXc::Zero(out_space.dim(), out_space.dim());
  // Iterate kept-row and kept-column occupations via the output space index.
  for (Eigen::Index r = 0; r < out_space.dim(); ++r) {
    Eigen::Index row_base = 0;
    for (int i = 0; i < nk; ++i) row_base += ((r / kout_stride[i]) % (kept_cutoffs[i] + 1)) * kstride[i];
    for (Eigen::Index c = 0; c < out_space.dim(); ++c) {
      Eigen::Index col_base = 0;
      for (int i = 0; i < nk; ++i) col_base += ((c / kout_stride[i]) % (kept_cutoffs[i] + 1)) * kstride[i];
      Complex sum = 0.0;
      for (Eigen::Index t : traced_offsets) sum += rho.matrix(row_base + t, col_base + t);
      out(r, c) = sum;
    }
  }
  return DensityOperator(std::move(out_space), std::move(out));
}

// --- total-photon-number sectors ----------------------------------------------

// Flat indices grouped by total photon number over `modes`; element N of the
// result lists the indices with total N. Sector bases underpin the
// beam-splitter construction and the phase-averaged (dephased) states.
inline std::vector<std::vector<Eigen::Index>> sector_indices(const FockSpace& space,
                                                             std::span<const int> modes) {
  int max_total = 0;
  for (int m : modes) {
    if (m < 0 || m >= space.mode_count()) throw Error("sector_indices: mode out of range");
    max_total += space.cutoff(m);
  }
  std::vector<std::vector<Eigen::Index>> sectors(max_total + 1);
  for (Eigen::Index j = 0; j < space.dim(); ++j)
    sectors[space.total_photons(j, modes)].push_back(j);
  return sectors;
}

inline std::vector<std::vector<Eigen::Index>> sector_indices(const FockSpace& space) {
  std::vector<int> all(space.mode_count());
  std::iota(all.begin(), all.end(), 0);
  return sector_indices(space, all);
}

}  // namespace phasebound
