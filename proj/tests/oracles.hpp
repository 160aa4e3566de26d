#pragma once

// Test-only oracles: independent computation routes used to freeze expected
// values. Each deliberately avoids the implementation path it checks.

#include <cmath>
#include <complex>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "phasebound/common.hpp"
#include "phasebound/fock.hpp"
#include "phasebound/optics.hpp"
#include "phasebound/states.hpp"

namespace oracles {

using phasebound::Complex;
using phasebound::MatrixXc;
using phasebound::VectorXc;

// Kronecker product by direct index arithmetic (independent of the library's
// tensor/stride bookkeeping): out[(i1*d2 + i2), (j1*d2 + j2)] = a(i1,j1) b(i2,j2).
inline MatrixXc naive_kron(const MatrixXc& a, const MatrixXc& b) {
  MatrixXc out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i1 = 0; i1 < a.rows(); ++i1)
    for (Eigen::Index i2 = 0; i2 < b.rows(); ++i2)
      for (Eigen::Index j1 = 0; j1 < a.cols(); ++j1)
        for (Eigen::Index j2 = 0; j2 < b.cols(); ++j2)
          out(i1 * b.rows() + i2, j1 * b.cols() + j2) = a(i1, j1) * b(i2, j2);
  return out;
}

// Coherent amplitudes by direct series evaluation in extended precision:
// c_n = exp(-|a|^2/2 + n log a - lgamma(n+1)/2), no recurrences.
inline VectorXc coherent_series_long_double(Complex alpha, int cutoff) {
  VectorXc amps(cutoff + 1);
  const long double mag = std::abs(std::complex<long double>(alpha.real(), alpha.imag()));
  const long double arg = std::atan2((long double)alpha.imag(), (long double)alpha.real());
  for (int n = 0; n <= cutoff; ++n) {
    const long double log_mod =
        -0.5L * mag * mag + n * std::log(mag > 0 ? mag : 1.0L) - 0.5L * std::lgamma((long double)n + 1.0L);
    const long double mod = (mag == 0.0L && n > 0) ? 0.0L : std::exp(log_mod);
    amps(n) = Complex(static_cast<double>(mod * std::cos(n * arg)),
                      static_cast<double>(mod * std::sin(n * arg)));
  }
  return amps;
}

// Squeezed vacuum by exponentiating the truncated generator
// (r*/2) a^2 - (r/2) a^dag^2 and applying it to the vacuum.
inline VectorXc squeezed_via_expm(Complex r, int cutoff) {
  using phasebound::FockSpace;
  FockSpace space = FockSpace::single_mode(cutoff);
  MatrixXc a = phasebound::annihilation_op(space, 0).matrix;
  MatrixXc gen = 0.5 * std::conj(r) * (a * a) - 0.5 * r * (a.adjoint() * a.adjoint());
  MatrixXc u = gen.exp();
  VectorXc vac = VectorXc::Zero(cutoff + 1);
  vac(0) = 1.0;
  return u * vac;
}

// Common-phase dephasing via 256-point trapezoidal quadrature of
// (1/2pi) int dtheta V_theta |psi><psi| V_theta^dag over the given modes.
inline MatrixXc dephase_by_quadrature(const phasebound::FockVector& psi,
                                      const std::vector<int>& modes, int points = 256) {
  const auto& space = psi.space;
  MatrixXc rho = MatrixXc::Zero(space.dim(), space.dim());
  for (int p = 0; p < points; ++p) {
    const double theta = 2.0 * phasebound::kPi * p / points;
    VectorXc rotated(space.dim());
    for (Eigen::Index j = 0; j < space.dim(); ++j) {
      int total = 0;
      for (int m : modes) total += space.occupation(j, m);
      rotated(j) = std::exp(-phasebound::kI * theta * (double)total) * psi.amplitudes(j);
    }
    rho += rotated * rotated.adjoint();
  }
  return rho / static_cast<double>(points);
}

// Photon loss realized as a beam splitter coupling to a vacuum environment
// followed by a partial trace. A transmission-eta loss corresponds to a
// cross-coupling tau = 1 - eta in the library's beam-splitter convention.
inline phasebound::DensityOperator loss_via_environment(const phasebound::DensityOperator& rho_1mode,
                                                        double eta) {
  using namespace phasebound;
  const int cutoff = rho_1mode.space.cutoff(0);
  FockSpace joint({cutoff, cutoff});
  DensityOperator env(FockSpace::single_mode(cutoff),
                      [&] {
                        MatrixXc v = MatrixXc::Zero(cutoff + 1, cutoff + 1);
                        v(0, 0) = 1.0;
                        return v;
                      }());
  DensityOperator joint_rho = tensor(rho_1mode, env);
  ModeOperator bs = beam_splitter(1.0 - eta, joint, {0, 1});
  DensityOperator mixed = sandwich(bs, joint_rho);
  const int keep[] = {0};
  return partial_trace(mixed, keep);
}

// Single-photon beam-splitter block by scalar trigonometry: the generator on
// {|1,0>, |0,1>} is the Pauli-x matrix, so exp(-i xi sigma_x) =
// cos(xi) 1 - i sin(xi) sigma_x.
inline Eigen::Matrix2cd single_photon_block(double tau) {
  const double xi = std::asin(std::sqrt(tau));
  Eigen::Matrix2cd out;
  const Complex c = std::cos(xi), ms = -phasebound::kI * std::sin(xi);
  out << c, ms, ms, c;
  return out;
}

// Central finite difference of a state-valued map.
template <typename F>
inline VectorXc central_difference(F&& state_at, double phi, double step = 1e-5) {
  VectorXc plus = state_at(phi + step);
  VectorXc minus = state_at(phi - step);
  return (plus - minus) / (2.0 * step);
}

}  // namespace oracles
