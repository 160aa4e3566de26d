#pragma once

// Input-state construction (coherent, squeezed vacuum, products) together
// with the automatic cutoff policy and common-phase dephasing.

#include <cmath>
#include <optional>
#include <vector>

#include "phasebound/common.hpp"
#include "phasebound/fock.hpp"

namespace phasebound {

// ---------------------------------------------------------------------------
// Photon-number distributions and the automatic cutoff policy.
//
// Cutoffs are chosen per scenario: the smallest level such that the truncated
// probability mass of the constructed input falls below `deficit`, plus a
// guard band of extra levels. The two interferometer modes share a cutoff
// sized from the *total* photon-number distribution of the input product, so
// that every populated total-number sector fits inside the truncated space
// and the beam splitter stays exactly unitary on it. Reference-beam modes get
// their own cutoff |beta|^2 + 6*sqrt(|beta|^2+1).
// ---------------------------------------------------------------------------

// Poisson photon-number probabilities of |alpha> up to `max_n`.
inline std::vector<double> coherent_number_pmf(double alpha_sq, int max_n) {
  std::vector<double> p(max_n + 1);
  p[0] = std::exp(-alpha_sq);
  for (int n = 1; n <= max_n; ++n) p[n] = p[n - 1] * alpha_sq / n;
  return p;
}

// Squeezed-vacuum photon-number probabilities (even levels only populated):
// p_{2k} = (2k)! / (2^k k!)^2 * tanh(s)^{2k} / cosh(s).
inline std::vector<double> squeezed_number_pmf(double r_mag, int max_n) {
  std::vector<double> p(max_n + 1, 0.0);
  const double t2 = std::tanh(r_mag) * std::tanh(r_mag);
  double even = 1.0 / std::cosh(r_mag);
  p[0] = even;
  for (int k = 1; 2 * k <= max_n; ++k) {
    even *= t2 * (2.0 * k - 1.0) / (2.0 * k);
    p[2 * k] = even;
  }
  return p;
}

namespace detail {

inline int pmf_cutoff(const std::vector<double>& pmf, double deficit) {
  double tail = 1.0;
  for (std::size_t n = 0; n < pmf.size(); ++n) {
    tail -= pmf[n];
    if (tail < deficit) return static_cast<int>(n);
  }
  throw NumericsError("cutoff policy: requested deficit unreachable within scan range");
}

// A safe upper bound for pmf scans; generous tails so the deficit search
// always terminates for desk-scale parameters.
inline int pmf_scan_length(double mean) {
  return static_cast<int>(std::ceil(mean + 12.0 * std::sqrt(mean + 1.0) + 60.0));
}

}  // namespace detail

inline int auto_cutoff_coherent(double alpha_mag, double deficit = cutoff_policy::default_deficit,
                                int guard = cutoff_policy::default_guard) {
  const double mu = alpha_mag * alpha_mag;
  auto pmf = coherent_number_pmf(mu, detail::pmf_scan_length(mu));
  return detail::pmf_cutoff(pmf, deficit) + guard;
}

inline int auto_cutoff_squeezed(double r_mag, double deficit = cutoff_policy::default_deficit,
                                int guard = cutoff_policy::default_guard) {
  const double mean = std::sinh(r_mag) * std::sinh(r_mag);
  // Squeezed tails are heavy: p_{2k} ~ tanh^{2k}; scan far enough.
  const double t2 = std::min(std::tanh(r_mag) * std::tanh(r_mag), 0.999);
  int scan = detail::pmf_scan_length(mean);
  if (t2 > 1e-12) {
    const double k_needed = std::log(deficit * 1e-3) / std::log(t2);
    scan = std::max(scan, 2 * static_cast<int>(std::ceil(k_needed)) + 8);
  }
  auto pmf = squeezed_number_pmf(r_mag, scan);
  return detail::pmf_cutoff(pmf, deficit) + guard;
}

// Shared cutoff for the two interferometer modes: sized from the total
// photon-number distribution of squeezed (x) coherent, so all populated
// sectors are fully contained after any beam splitter.
inline int auto_cutoff_interferometer(double alpha_mag, double r_mag,
                                      double deficit = cutoff_policy::default_deficit,
                                      int guard = cutoff_policy::default_guard) {
  const double mean = alpha_mag * alpha_mag + std::sinh(r_mag) * std::sinh(r_mag);
  const double t2 = std::min(std::tanh(r_mag) * std::tanh(r_mag), 0.999);
  int scan = detail::pmf_scan_length(mean);
  if (t2 > 1e-12)
    scan = std::max(scan, 2 * static_cast<int>(std::ceil(std::log(deficit * 1e-4) / std::log(t2))) + 16);
  auto pa = squeezed_number_pmf(r_mag, scan);
  auto pb = coherent_number_pmf(alpha_mag * alpha_mag, scan);
  std::vector<double> total(scan + 1, 0.0);  // truncated convolution; tail handled by deficit test
  for (int i = 0; i <= scan; ++i) {
    if (pa[i] == 0.0) continue;
    for (int j = 0; i + j <= scan; ++j) total[i + j] += pa[i] * pb[j];
  }
  return detail::pmf_cutoff(total, deficit) + guard;
}

// Reference-beam cutoff: mean + six standard deviations of the Poisson count.
inline int auto_cutoff_reference(double beta_mag, int guard = 0) {
  const double mu = beta_mag * beta_mag;
  return static_cast<int>(std::ceil(mu + 6.0 * std::sqrt(mu + 1.0))) + guard;
}

// ---------------------------------------------------------------------------
// Single-mode states
// ---------------------------------------------------------------------------

// Coherent state amplitudes c_n = exp(-|alpha|^2/2) alpha^n / sqrt(n!).
inline FockVector coherent_state(Complex alpha, const FockSpace& space) {
  if (space.mode_count() != 1) throw Error("coherent_state: expects a single-mode space");
  const int cut = space.cutoff(0);
  VectorXc amps(cut + 1);
  amps(0) = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n <= cut; ++n) amps(n) = amps(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  FockVector v(space, std::move(amps));
  if (v.deficit() > 1e-6)
    throw NumericsError("coherent_state: cutoff too small for requested amplitude");
  return v;
}

// Squeezed vacuum exp[r*/2 a^2 - r/2 a^dag^2]|0>, closed-form Fock
// coefficients c_{2k} = (-e^{i arg r} tanh|r|)^k sqrt((2k)!) / (2^k k!) / sqrt(cosh|r|).
// Odd amplitudes vanish identically.
inline FockVector squeezed_vacuum(Complex r, const FockSpace& space) {
  if (space.mode_count() != 1) throw Error("squeezed_vacuum: expects a single-mode space");
  const int cut = space.cutoff(0);
  const double s = std::abs(r);
  VectorXc amps = VectorXc::Zero(cut + 1);
  amps(0) = 1.0 / std::sqrt(std::cosh(s));
  if (s > 0.0) {
    const Complex phase = r / s;  // e^{i arg r}
    const Complex factor = -phase * std::tanh(s);
    Complex c = amps(0);
    for (int k = 1; 2 * k <= cut; ++k) {
      // c_{2k} = c_{2(k-1)} * factor * sqrt((2k-1)/(2k)) * (ratio of sqrt-factorials)
      c *= factor * std::sqrt((2.0 * k - 1.0) / (2.0 * k));
      amps(2 * k) = c;
    }
  }
  FockVector v(space, std::move(amps));
  if (v.deficit() > 1e-6)
    throw NumericsError("squeezed_vacuum: cutoff too small for requested squeezing");
  return v;
}

// ---------------------------------------------------------------------------
// Interferometer input
// ---------------------------------------------------------------------------

// Squeezed vacuum enters the upper input mode (index 0), the coherent beam
// the lower one (index 1); `swap_inputs` exchanges them. With
// `apply_default_phases` the relative input phase is fixed to the optimal
// choice r -> |r|, alpha -> i|alpha| (and beta -> |beta|).
struct InputParams {
  Complex alpha{0.0, 0.0};
  Complex r{0.0, 0.0};
  std::optional<Complex> beta;
  bool apply_default_phases = true;
  bool swap_inputs = false;

  double mean_photons() const {  // interferometer modes only
    const double sh = std::sinh(std::abs(r));
    return std::norm(alpha) + sh * sh;
  }

  Complex effective_alpha() const { return apply_default_phases ? kI * std::abs(alpha) : alpha; }
  Complex effective_r() const { return apply_default_phases ? Complex(std::abs(r), 0.0) : r; }
  std::optional<Complex> effective_beta() const {
    if (!beta) return std::nullopt;
    return apply_default_phases ? Complex(std::abs(*beta), 0.0) : *beta;
  }
};

// Product input state on a 2-mode (or 3-mode, when beta is present) space.
inline FockVector interferometer_input(const InputParams& params, const FockSpace& space) {
  const bool with_ref = params.beta.has_value();
  if (space.mode_count() != (with_ref ? 3 : 2))
    throw Error("interferometer_input: space has wrong mode count for the given parameters");
  FockVector sq = squeezed_vacuum(params.effective_r(), FockSpace::single_mode(space.cutoff(0)));
  FockVector coh = coherent_state(params.effective_alpha(), FockSpace::single_mode(space.cutoff(1)));
  FockVector two = params.swap_inputs
                       ? tensor(coherent_state(params.effective_alpha(),
                                               FockSpace::single_mode(space.cutoff(0))),
                                squeezed_vacuum(params.effective_r(),
                                                FockSpace::single_mode(space.cutoff(1))))
                       : tensor(sq, coh);
  if (!with_ref) return two;
  FockVector ref = coherent_state(*params.effective_beta(), FockSpace::single_mode(space.cutoff(2)));
  return tensor(two, ref);
}

// Convenience: space sized by the automatic policy for the given parameters.
inline FockSpace auto_space(const InputParams& params,
                            double deficit = cutoff_policy::default_deficit,
                            int guard = cutoff_policy::default_guard) {
  const int c_ab = auto_cutoff_interferometer(std::abs(params.alpha), std::abs(params.r), deficit, guard);
  std::vector<int> cutoffs{c_ab, c_ab};
  if (params.beta) cutoffs.push_back(auto_cutoff_reference(std::abs(*params.beta)));
  return FockSpace(std::move(cutoffs));
}

// ---------------------------------------------------------------------------
// Common-phase dephasing
// ---------------------------------------------------------------------------

// Average over a common phase on `modes`: rho = sum_N P_N |psi><psi| P_N with
// P_N the projector onto total photon number N over those modes. This equals
// the integral (1/2pi) int dtheta V_theta |psi><psi| V_theta^dag exactly; the
// integral annihilates every coherence between total-number sectors.
inline DensityOperator dephase_common(const FockVector& state, std::span<const int> modes) {
  if (modes.empty()) throw Error("dephase_common: mode set must be nonempty");
  auto sectors = sector_indices(state.space, modes);
  MatrixXc rho = MatrixXc::Zero(state.space.dim(), state.space.dim());
  for (const auto& sector : sectors) {
    for (Eigen::Index i : sector)
      for (Eigen::Index j : sector)
        rho(i, j) += state.amplitudes(i) * std::conj(state.amplitudes(j));
  }
  return DensityOperator(state.space, std::move(rho));
}

inline DensityOperator dephase_common(const FockVector& state) {
  std::vector<int> all(state.space.mode_count());
  for (int m = 0; m < state.space.mode_count(); ++m) all[m] = m;
  return dephase_common(state, all);
}

// Same projection applied to an existing density operator (zero out
// coherences between total-number sectors over `modes`).
inline DensityOperator dephase_common(const DensityOperator& rho, std::span<const int> modes) {
  if (modes.empty()) throw Error("dephase_common: mode set must be nonempty");
  auto sectors = sector_indices(rho.space, modes);
  MatrixXc out = MatrixXc::Zero(rho.space.dim(), rho.space.dim());
  for (const auto& sector : sectors)
    for (Eigen::Index i : sector)
      for (Eigen::Index j : sector) out(i, j) = rho.matrix(i, j);
  return DensityOperator(rho.space, std::move(out));
}

}  // namespace phasebound
