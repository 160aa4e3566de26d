#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "phasebound/fock.hpp"
#include "phasebound/optics.hpp"
#include "phasebound/states.hpp"

using namespace phasebound;

TEST_CASE("beam splitter basics") {
  FockSpace space({6, 6});
  SECTION("tau = 0 is the identity") {
    ModeOperator bs = beam_splitter(0.0, space);
    REQUIRE((bs.matrix - MatrixXc::Identity(space.dim(), space.dim())).cwiseAbs().maxCoeff() <
            1e-14);
  }
  SECTION("unitary on the truncated space") {
    ModeOperator bs = beam_splitter(0.3, space);
    REQUIRE(bs.unitary_flag);
    REQUIRE(bs.unitarity_defect() < 1e-10);
    MatrixXc prod = bs.matrix * bs.matrix.adjoint();
    prod.diagonal().array() -= 1.0;
    REQUIRE(prod.cwiseAbs().maxCoeff() < 1e-10);
  }
  SECTION("conserves total photon number") {
    InputParams p;
    p.alpha = 0.7;
    p.r = 0.3;
    FockSpace s = auto_space(p);
    FockVector v = interferometer_input(p, s);
    FockVector out = apply(beam_splitter(0.42, s), v);
    const double before = expectation(v, total_number_op(s)).real();
    const double after = expectation(out, total_number_op(s)).real();
    REQUIRE(std::abs(before - after) <= 1e-12 * std::max(1.0, before));
  }
  SECTION("single-photon block matches the scalar trig oracle and fixes the tau port") {
    const double tau = 0.3;
    Eigen::Matrix2cd expected = oracles::single_photon_block(tau);
    ModeOperator bs = beam_splitter(tau, space);
    const int occ10[] = {1, 0};
    const int occ01[] = {0, 1};
    const Eigen::Index i10 = space.index_of(occ10), i01 = space.index_of(occ01);
    REQUIRE(std::abs(bs.matrix(i10, i10) - expected(0, 0)) < 1e-14);
    REQUIRE(std::abs(bs.matrix(i01, i10) - expected(1, 0)) < 1e-14);
    // The cross port carries tau, the straight port 1 - tau, summing to 1.
    const double cross = std::norm(bs.matrix(i01, i10));
    const double straight = std::norm(bs.matrix(i10, i10));
    REQUIRE(cross == Catch::Approx(tau).margin(1e-14));
    REQUIRE(cross + straight == Catch::Approx(1.0).margin(1e-14));
  }
  SECTION("tau out of range is rejected") {
    REQUIRE_THROWS_AS(beam_splitter(-0.1, space), Error);
    REQUIRE_THROWS_AS(beam_splitter(1.1, space), Error);
  }
}

TEST_CASE("beam splitter on a designated pair within a three-mode space") {
  FockSpace space({2, 2, 2});
  ModeOperator bs01 = beam_splitter(0.4, space, {0, 1});
  // Against the embedded two-mode operator.
  ModeOperator bs2 = beam_splitter(0.4, FockSpace({2, 2}));
  MatrixXc expected = oracles::naive_kron(bs2.matrix, MatrixXc::Identity(3, 3));
  REQUIRE((bs01.matrix - expected).cwiseAbs().maxCoeff() < 1e-13);
  REQUIRE(bs01.unitarity_defect() < 1e-10);
}

TEST_CASE("phase unitaries") {
  FockSpace space({3, 3});
  SECTION("phi = 0 is the identity") {
    ModeOperator u = phase_unitary(0.0, GeneratorConvention::kUpperOnly, space);
    REQUIRE((u.matrix - MatrixXc::Identity(space.dim(), space.dim())).cwiseAbs().maxCoeff() <
            1e-15);
  }
  SECTION("upper-arm action is exp(-i phi n_a)") {
    const double phi = 0.9;
    ModeOperator u = phase_unitary(phi, GeneratorConvention::kUpperOnly, space);
    for (Eigen::Index j = 0; j < space.dim(); ++j) {
      const Complex expected = std::exp(-kI * phi * (double)space.occupation(j, 0));
      REQUIRE(std::abs(u.matrix(j, j) - expected) < 1e-14);
    }
  }
  SECTION("symmetric convention equals the two half-phases") {
    const double phi = 0.63;
    ModeOperator u = phase_unitary(phi, GeneratorConvention::kSymmetric, space);
    auto [va, vb] = phase_unitary_two_param(phi / 2.0, -phi / 2.0, space);
    REQUIRE((u.matrix - va.matrix * vb.matrix).cwiseAbs().maxCoeff() < 1e-14);
  }
  SECTION("generators match their unitaries by finite differences") {
    for (auto conv : {GeneratorConvention::kUpperOnly, GeneratorConvention::kSymmetric}) {
      ModeOperator g = phase_generator(conv, space);
      const double h = 1e-6;
      MatrixXc diff = (phase_unitary(h, conv, space).matrix -
                       phase_unitary(-h, conv, space).matrix) /
                      (2.0 * h);
      REQUIRE((diff + kI * g.matrix).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_CASE("loss channel") {
  SECTION("eta = 1 is the identity channel") {
    InputParams p;
    p.alpha = 0.8;
    FockSpace space = auto_space(p);
    DensityOperator rho = outer(interferometer_input(p, space));
    DensityOperator out = loss_channel(rho, LossModel(1.0, {0, 1}));
    REQUIRE((out.matrix - rho.matrix).cwiseAbs().maxCoeff() == 0.0);
  }
  SECTION("eta = 0 maps the lossy mode to vacuum, preserving the rest") {
    const Complex alpha(0.9, 0.1);
    FockSpace sa = FockSpace::single_mode(8), sb = FockSpace::single_mode(8);
    DensityOperator rho =
        tensor(outer(coherent_state(alpha, sa)), outer(coherent_state(0.5, sb)));
    DensityOperator out = loss_channel(rho, LossModel(0.0, {0}));
    const int keep0[] = {0};
    const int keep1[] = {1};
    DensityOperator lossy_mode = partial_trace(out, keep0);
    REQUIRE(std::abs(lossy_mode.matrix(0, 0).real() - 1.0) < 1e-12);
    DensityOperator other = partial_trace(out, keep1);
    REQUIRE((other.matrix - outer(coherent_state(0.5, sb)).matrix).cwiseAbs().maxCoeff() < 1e-12);
  }
  SECTION("coherent state contracts to |sqrt(eta) alpha>") {
    const double eta = 0.8;
    const Complex alpha(1.2, 0.0);
    FockSpace space = FockSpace::single_mode(auto_cutoff_coherent(std::abs(alpha)) + 4);
    DensityOperator rho = outer(coherent_state(alpha, space));
    DensityOperator out = loss_channel(rho, LossModel(eta, {0}));
    DensityOperator expected = outer(coherent_state(std::sqrt(eta) * alpha, space));
    REQUIRE((out.matrix - expected.matrix).cwiseAbs().maxCoeff() < 1e-10);
  }
  SECTION("matches the beam-splitter-plus-partial-trace oracle") {
    const double eta = 0.65;
    FockSpace space = FockSpace::single_mode(14);
    DensityOperator rho = outer(squeezed_vacuum(0.45, space));
    DensityOperator kraus_result = loss_channel(rho, LossModel(eta, {0}));
    DensityOperator env_result = oracles::loss_via_environment(rho, eta);
    REQUIRE((kraus_result.matrix - env_result.matrix).cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE(std::abs(kraus_result.trace_real() - 1.0) < 1e-12);
  }
  SECTION("Kraus completeness on the truncated space") {
    const int cutoff = 12;
    auto kraus = loss_kraus(0.7, cutoff);
    REQUIRE(kraus.size() == static_cast<std::size_t>(cutoff + 1));
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(cutoff + 1, cutoff + 1);
    for (const auto& k : kraus) sum += k.transpose() * k;
    sum.diagonal().array() -= 1.0;
    REQUIRE(sum.cwiseAbs().maxCoeff() < 1e-12);
  }
  SECTION("semigroup property loss(eta1) o loss(eta2) = loss(eta1 eta2)") {
    InputParams p;
    p.alpha = 0.7;
    p.r = 0.3;
    FockSpace space = auto_space(p);
    DensityOperator rho = dephase_common(interferometer_input(p, space));
    DensityOperator seq =
        loss_channel(loss_channel(rho, LossModel(0.9, {0, 1})), LossModel(0.8, {0, 1}));
    DensityOperator direct = loss_channel(rho, LossModel(0.72, {0, 1}));
    REQUIRE((seq.matrix - direct.matrix).cwiseAbs().maxCoeff() < 1e-10);
  }
  SECTION("equal-arm loss commutes with the relative phase shift") {
    InputParams p;
    p.alpha = 0.8;
    p.r = 0.25;
    FockSpace space = auto_space(p);
    DensityOperator rho = outer(apply(beam_splitter(0.5, space), interferometer_input(p, space)));
    ModeOperator u = phase_unitary(0.4, GeneratorConvention::kUpperOnly, space);
    LossModel loss(0.8, {0, 1});
    DensityOperator loss_first = sandwich(u, loss_channel(rho, loss));
    DensityOperator loss_last = loss_channel(sandwich(u, rho), loss);
    REQUIRE((loss_first.matrix - loss_last.matrix).cwiseAbs().maxCoeff() < 1e-12);
  }
  SECTION("equal-arm loss commutes with the beam splitter") {
    InputParams p;
    p.alpha = 0.8;
    p.r = 0.25;
    FockSpace space = auto_space(p);
    DensityOperator rho = outer(interferometer_input(p, space));
    ModeOperator bs = beam_splitter(0.3, space);
    LossModel loss(0.75, {0, 1});
    DensityOperator loss_first = sandwich(bs, loss_channel(rho, loss));
    DensityOperator loss_last = loss_channel(sandwich(bs, rho), loss);
    REQUIRE((loss_first.matrix - loss_last.matrix).cwiseAbs().maxCoeff() < 1e-11);
  }
  SECTION("loss then trace-out matches Kraus sum through partial_trace") {
    // Cross-module: environment construction vs Kraus sum on a two-mode input.
    InputParams p;
    p.alpha = 0.6;
    p.r = 0.2;
    FockSpace space = auto_space(p);
    const int keep[] = {0};
    DensityOperator rho = partial_trace(dephase_common(interferometer_input(p, space)), keep);
    DensityOperator kraus_result = loss_channel(rho, LossModel(0.8, {0}));
    DensityOperator env_result = oracles::loss_via_environment(rho, 0.8);
    REQUIRE((kraus_result.matrix - env_result.matrix).cwiseAbs().maxCoeff() < 1e-12);
  }
}
