#pragma once

// Analytic benchmark formulas for the lossless interferometer with a
// squeezed-vacuum (x) coherent input at the optimal relative phase
// (r real, alpha = i|alpha|). These are evaluated verbatim in double
// precision and serve as oracles for the numerical paths and as fast
// evaluators in lossless sweeps.

#include <cmath>

#include "phasebound/common.hpp"
#include "phasebound/fisher.hpp"

namespace phasebound::closed_forms {

struct ClosedFormInputs {
  double alpha_mag = 0.0;  // |alpha| >= 0
  double r_mag = 0.0;      // |r| >= 0
  double tau = 0.5;        // power transmission in [0, 1]
};

inline void validate(const ClosedFormInputs& in) {
  if (in.alpha_mag < 0.0 || in.r_mag < 0.0) throw Error("closed_forms: magnitudes must be >= 0");
  if (in.tau < 0.0 || in.tau > 1.0) throw Error("closed_forms: tau must lie in [0, 1]");
}

// Shared interference term 4 tau (1-tau) (|alpha|^2 e^{2r} + sinh^2 r),
// common to every phase-shift convention.
inline double common_info(const ClosedFormInputs& in) {
  validate(in);
  const double sh = std::sinh(in.r_mag);
  return 4.0 * in.tau * (1.0 - in.tau) *
         (in.alpha_mag * in.alpha_mag * std::exp(2.0 * in.r_mag) + sh * sh);
}

// QFI with the phase in the upper arm only:
// 4 tau^2 |alpha|^2 + 2 (1-tau)^2 sinh^2(2r) + common term.
inline double qfi_upper_arm(const ClosedFormInputs& in) {
  validate(in);
  const double s2 = std::sinh(2.0 * in.r_mag);
  return 4.0 * in.tau * in.tau * in.alpha_mag * in.alpha_mag +
         2.0 * (1.0 - in.tau) * (1.0 - in.tau) * s2 * s2 + common_info(in);
}

// QFI with the phase split symmetrically between the arms:
// (1-2tau)^2 [|alpha|^2 + sinh^2(2r)/2] + common term.
inline double qfi_symmetric(const ClosedFormInputs& in) {
  validate(in);
  const double s2 = std::sinh(2.0 * in.r_mag);
  const double d = 1.0 - 2.0 * in.tau;
  return d * d * (in.alpha_mag * in.alpha_mag + 0.5 * s2 * s2) + common_info(in);
}

// QFI of the phase-averaged (no external reference) state at the optimal
// tau = 1/2: |alpha|^2 e^{2r} + sinh^2 r.
inline double qfi_phase_averaged(const ClosedFormInputs& in) {
  validate(in);
  const double sh = std::sinh(in.r_mag);
  return in.alpha_mag * in.alpha_mag * std::exp(2.0 * in.r_mag) + sh * sh;
}

// Two-phase QFI matrix in the (phi+, phi-) basis:
//   [[ G,          (1-2tau) H            ],
//    [ (1-2tau) H, (1-2tau)^2 G + common ]]
// with G = |alpha|^2 + sinh^2(2r)/2 and H = sinh^2(2r)/2 - |alpha|^2.
inline FisherMatrix qfim_plus_minus(const ClosedFormInputs& in) {
  validate(in);
  const double s2 = std::sinh(2.0 * in.r_mag);
  const double g = in.alpha_mag * in.alpha_mag + 0.5 * s2 * s2;
  const double h = 0.5 * s2 * s2 - in.alpha_mag * in.alpha_mag;
  const double d = 1.0 - 2.0 * in.tau;
  FisherMatrix out;
  out.labels = {"phi+", "phi-"};
  out.values.resize(2, 2);
  out.values << g, d * h, d * h, d * d * g + common_info(in);
  return out;
}

}  // namespace phasebound::closed_forms
