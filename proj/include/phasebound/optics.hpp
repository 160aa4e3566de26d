#pragma once

// Interferometer elements: beam splitter, phase-shift unitaries for the
// supported generator conventions, and photon-loss channels.

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "phasebound/common.hpp"
#include "phasebound/fock.hpp"

namespace phasebound {

// Which mode(s) carry the phase shift.
enum class GeneratorConvention {
  kUpperOnly,   // exp(-i phi n_a)
  kSymmetric,   // exp(-i phi/2 n_a + i phi/2 n_b)
  kTwoParam,    // independent phases against an external reference
};

// ---------------------------------------------------------------------------
// Beam splitter
//
// B_tau = exp[-i asin(sqrt(tau)) (a^dag b + a b^dag)] is block diagonal in the
// total photon number N of the two coupled modes. Within the sector
// {|k, N-k>} the generator is the real symmetric tridiagonal matrix with
// couplings sqrt((k+1)(N-k)); each block is the exact matrix exponential
// obtained from that generator's eigendecomposition. The eigenbasis is
// independent of tau, so it is cached and shared across the library.
// ---------------------------------------------------------------------------

struct SectorRotationEig {
  Eigen::VectorXd values;   // eigenvalues of a^dag b + a b^dag on the sector
  Eigen::MatrixXd vectors;  // real orthogonal eigenvectors (columns)
};

// Eigendecomposition of the sector generator restricted to k in [lo, hi]
// (k = photon count in the first mode; hi = N - lo' for clipped sectors).
inline SectorRotationEig sector_rotation_eig_uncached(int total, int lo, int hi) {
  const int size = hi - lo + 1;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(size);
  Eigen::VectorXd sub(std::max(size - 1, 0));
  for (int k = lo; k < hi; ++k)
    sub(k - lo) = std::sqrt(static_cast<double>(k + 1) * static_cast<double>(total - k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success)
    throw NumericsError("beam_splitter: tridiagonal eigendecomposition failed");
  return SectorRotationEig{es.eigenvalues(), es.eigenvectors()};
}

// Cached full-sector (lo = 0, hi = N) eigenbases.
inline const SectorRotationEig& sector_rotation_eig(int total) {
  static std::mutex mutex;
  static std::vector<std::unique_ptr<SectorRotationEig>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  if (total >= static_cast<int>(cache.size())) cache.resize(total + 1);
  if (!cache[total])
    cache[total] = std::make_unique<SectorRotationEig>(sector_rotation_eig_uncached(total, 0, total));
  return *cache[total];
}

// Dense block exp(-i xi G) for the sector [lo, hi] of total N.
inline MatrixXc beam_splitter_block(double xi, int total, int lo, int hi) {
  SectorRotationEig local;
  const SectorRotationEig* eig;
  if (lo == 0 && hi == total) {
    eig = &sector_rotation_eig(total);
  } else {
    local = sector_rotation_eig_uncached(total, lo, hi);
    eig = &local;
  }
  const Eigen::Index n = eig->values.size();
  VectorXc phases(n);
  for (Eigen::Index i = 0; i < n; ++i) phases(i) = std::exp(-kI * xi * eig->values(i));
  return eig->vectors.cast<Complex>() * phases.asDiagonal() * eig->vectors.transpose().cast<Complex>();
}

// Apply exp(-i xi G) to the coefficients of one sector in place (basis
// ordered by ascending k). Cost O(size^2), no block matrix formed.
inline void apply_beam_splitter_block(double xi, int total, int lo, int hi,
                                      Eigen::Ref<VectorXc> coeffs) {
  SectorRotationEig local;
  const SectorRotationEig* eig;
  if (lo == 0 && hi == total) {
    eig = &sector_rotation_eig(total);
  } else {
    local = sector_rotation_eig_uncached(total, lo, hi);
    eig = &local;
  }
  VectorXc w = eig->vectors.transpose().cast<Complex>() * coeffs;
  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) *= std::exp(-kI * xi * eig->values(i));
  coeffs = eig->vectors.cast<Complex>() * w;
}

// Full dense beam splitter acting on the designated pair of modes.
inline ModeOperator beam_splitter(double tau, const FockSpace& space, std::pair<int, int> modes) {
  if (tau < 0.0 || tau > 1.0) throw Error("beam_splitter: tau must lie in [0, 1]");
  const int ma = modes.first, mb = modes.second;
  if (ma == mb || ma < 0 || mb < 0 || ma >= space.mode_count() || mb >= space.mode_count())
    throw Error("beam_splitter: invalid mode pair");
  const double xi = std::asin(std::sqrt(tau));
  const int ca = space.cutoff(ma), cb = space.cutoff(mb);
  const Eigen::Index sa = space.stride(ma), sb = space.stride(mb);

  MatrixXc m = MatrixXc::Zero(space.dim(), space.dim());
  // Iterate spectator configurations: all flat indices with n_ma = n_mb = 0.
  for (Eigen::Index base = 0; base < space.dim(); ++base) {
    if (space.occupation(base, ma) != 0 || space.occupation(base, mb) != 0) continue;
    for (int total = 0; total <= ca + cb; ++total) {
      const int lo = std::max(0, total - cb), hi = std::min(total, ca);
      if (lo > hi) continue;
      MatrixXc block = beam_splitter_block(xi, total, lo, hi);
      for (int kr = lo; kr <= hi; ++kr)
        for (int kc = lo; kc <= hi; ++kc)
          m(base + kr * sa + (total - kr) * sb, base + kc * sa + (total - kc) * sb) =
              block(kr - lo, kc - lo);
    }
  }
  return ModeOperator(space, std::move(m), /*unitary=*/true);
}

inline ModeOperator beam_splitter(double tau, const FockSpace& space) {
  if (space.mode_count() < 2) throw Error("beam_splitter: space needs two modes");
  return beam_splitter(tau, space, {0, 1});
}

// ---------------------------------------------------------------------------
// Phase-shift unitaries and their generators
// ---------------------------------------------------------------------------

// Hermitian generator G such that U_phi = exp(-i phi G) for the single-phase
// conventions: n_a for kUpperOnly, (n_a - n_b)/2 for kSymmetric.
inline ModeOperator phase_generator(GeneratorConvention convention, const FockSpace& space) {
  if (space.mode_count() < 2) throw Error("phase_generator: space needs two modes");
  MatrixXc m = MatrixXc::Zero(space.dim(), space.dim());
  for (Eigen::Index j = 0; j < space.dim(); ++j) {
    const double na = space.occupation(j, 0), nb = space.occupation(j, 1);
    switch (convention) {
      case GeneratorConvention::kUpperOnly: m(j, j) = na; break;
      case GeneratorConvention::kSymmetric: m(j, j) = 0.5 * (na - nb); break;
      case GeneratorConvention::kTwoParam:
        throw Error("phase_generator: two-parameter convention has a generator per phase");
    }
  }
  return ModeOperator(space, std::move(m));
}

inline ModeOperator phase_unitary(double phi, GeneratorConvention convention,
                                  const FockSpace& space) {
  if (!std::isfinite(phi)) throw Error("phase_unitary: phase must be finite");
  ModeOperator g = phase_generator(convention, space);
  MatrixXc m = MatrixXc::Zero(space.dim(), space.dim());
  for (Eigen::Index j = 0; j < space.dim(); ++j) m(j, j) = std::exp(-kI * phi * g.matrix(j, j));
  return ModeOperator(space, std::move(m), /*unitary=*/true);
}

// V_theta^x = exp(-i theta x^dag x) on one designated mode.
inline ModeOperator mode_phase_unitary(double theta, int mode, const FockSpace& space) {
  if (!std::isfinite(theta)) throw Error("mode_phase_unitary: phase must be finite");
  if (mode < 0 || mode >= space.mode_count()) throw Error("mode_phase_unitary: mode out of range");
  MatrixXc m = MatrixXc::Zero(space.dim(), space.dim());
  for (Eigen::Index j = 0; j < space.dim(); ++j)
    m(j, j) = std::exp(-kI * theta * static_cast<double>(space.occupation(j, mode)));
  return ModeOperator(space, std::move(m), /*unitary=*/true);
}

// Independent phases (phi1 on mode 0, phi2 on mode 1) for the two-parameter
// convention.
inline std::pair<ModeOperator, ModeOperator> phase_unitary_two_param(double phi1, double phi2,
                                                                     const FockSpace& space) {
  return {mode_phase_unitary(phi1, 0, space), mode_phase_unitary(phi2, 1, space)};
}

// ---------------------------------------------------------------------------
// Photon loss
// ---------------------------------------------------------------------------

struct LossModel {
  double eta = 1.0;             // power transmission per lossy mode
  std::vector<int> lossy_modes;  // modes subject to loss

  LossModel() = default;
  LossModel(double eta_, std::vector<int> modes) : eta(eta_), lossy_modes(std::move(modes)) {
    if (eta < 0.0 || eta > 1.0) throw Error("LossModel: eta must lie in [0, 1]");
  }
};

// Amplitude of the single-mode Kraus element K_l at input level n:
// <n-l| K_l |n> = sqrt(C(n,l) (1-eta)^l eta^(n-l)); evaluated in log space so
// large binomials never overflow.
inline double loss_kraus_amplitude(double eta, int n, int l) {
  if (l < 0 || l > n) return 0.0;
  if (eta >= 1.0) return l == 0 ? 1.0 : 0.0;
  if (eta <= 0.0) return l == n ? 1.0 : 0.0;
  const double log_binom = std::lgamma(n + 1.0) - std::lgamma(l + 1.0) - std::lgamma(n - l + 1.0);
  return std::exp(0.5 * (log_binom + l * std::log1p(-eta) + (n - l) * std::log(eta)));
}

// The cutoff+1 Kraus matrices of the single-mode pure-loss channel.
inline std::vector<Eigen::MatrixXd> loss_kraus(double eta, int cutoff) {
  std::vector<Eigen::MatrixXd> kraus;
  kraus.reserve(cutoff + 1);
  for (int l = 0; l <= cutoff; ++l) {
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(cutoff + 1, cutoff + 1);
    for (int n = l; n <= cutoff; ++n) k(n - l, n) = loss_kraus_amplitude(eta, n, l);
    kraus.push_back(std::move(k));
  }
  return kraus;
}

// Pure-loss channel on a single-mode density matrix.
inline MatrixXc loss_single_mode(const MatrixXc& rho, double eta) {
  const int cutoff = static_cast<int>(rho.rows()) - 1;
  if (eta >= 1.0) return rho;
  MatrixXc out = MatrixXc::Zero(rho.rows(), rho.cols());
  for (int l = 0; l <= cutoff; ++l) {
    for (int n = l; n <= cutoff; ++n) {
      const double en = loss_kraus_amplitude(eta, n, l);
      if (en == 0.0) continue;
      for (int m = l; m <= cutoff; ++m) {
        const double em = loss_kraus_amplitude(eta, m, l);
        if (em == 0.0) continue;
        out(n - l, m - l) += en * em * rho(n, m);
      }
    }
  }
  return out;
}

// Kraus-sum pure-loss channel with transmission eta applied to each
// designated mode of a multi-mode density operator. Trace preserving on the
// truncated space (loss only moves population toward the vacuum).
inline DensityOperator loss_channel(const DensityOperator& rho, const LossModel& model) {
  if (model.eta < 0.0 || model.eta > 1.0) throw Error("loss_channel: eta must lie in [0, 1]");
  MatrixXc current = rho.matrix;
  const FockSpace& space = rho.space;
  if (model.eta < 1.0) {
    for (int mode : model.lossy_modes) {
      if (mode < 0 || mode >= space.mode_count()) throw Error("loss_channel: mode out of range");
      const int cutoff = space.cutoff(mode);
      const Eigen::Index stride = space.stride(mode);
      // Per-level amplitudes e_l(n), reused across the flat-index loops.
      Eigen::MatrixXd amp(cutoff + 1, cutoff + 1);  // amp(l, n)
      for (int l = 0; l <= cutoff; ++l)
        for (int n = 0; n <= cutoff; ++n) amp(l, n) = loss_kraus_amplitude(model.eta, n, l);
      MatrixXc next = MatrixXc::Zero(space.dim(), space.dim());
      for (int l = 0; l <= cutoff; ++l) {
        const Eigen::Index shift = l * stride;
        for (Eigen::Index i = 0; i < space.dim(); ++i) {
          const int ni = space.occupation(i, mode);
          if (ni < l) continue;
          const double ei = amp(l, ni);
          if (ei == 0.0) continue;
          for (Eigen::Index j = 0; j < space.dim(); ++j) {
            const int nj = space.occupation(j, mode);
            if (nj < l) continue;
            const double ej = amp(l, nj);
            if (ej == 0.0) continue;
            next(i - shift, j - shift) += ei * ej * current(i, j);
          }
        }
      }
      current = std::move(next);
    }
  }
  return DensityOperator(space, std::move(current));
}

}  // namespace phasebound
