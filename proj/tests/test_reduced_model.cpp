#include <gtest/gtest.h>

#include <cmath>

#include "optoent/errors.hpp"
#include "optoent/reduced_model.hpp"
#include "test_support.hpp"

namespace optoent {
namespace {

using test::rel_diff;

SteadyState bare_state(double delta_a_eff, double n_s) {
  SteadyState ss;
  ss.delta_a_eff = delta_a_eff;
  ss.n_s = n_s;
  ss.a_s = complex{0.0, -std::sqrt(n_s)};
  return ss;
}

TEST(EffectiveRates, PurcellRateOnResonance) {
  const SystemParams p = test::reference_setup().params;
  const ReducedModel rm = effective_rates(bare_state(0.0, 0.0), p);
  EXPECT_LT(rel_diff(rm.gamma_b, 4.0 * p.g * p.g / p.kappa), 1e-15);
  EXPECT_DOUBLE_EQ(rm.Gamma_b, p.gamma + rm.gamma_b);
}

TEST(EffectiveRates, PurcellRateHalvesAtHalfLinewidth) {
  const SystemParams p = test::reference_setup().params;
  const double on = effective_rates(bare_state(0.0, 10.0), p).gamma_b;
  const double off = effective_rates(bare_state(0.5 * p.kappa, 10.0), p).gamma_b;
  EXPECT_LT(rel_diff(off, 0.5 * on), 1e-14);
}

TEST(EffectiveRates, EmptyCavityHasNoMechanicalCoupling) {
  const SystemParams p = test::reference_setup().params;
  const ReducedModel rm = effective_rates(bare_state(3e10, 0.0), p);
  EXPECT_EQ(rm.G, 0.0);
  EXPECT_EQ(rm.gamma_c, 0.0);
  EXPECT_EQ(std::abs(rm.G_bc), 0.0);
  EXPECT_EQ(rm.dw_m, 0.0);
}

TEST(EffectiveRates, Identities) {
  for (double delta : {0.0, 0.4, 0.7, 1.0, 1.3}) {
    const SystemParams p = test::reference_params(delta, 2.0, 70.0);
    const SteadyState ss = solve_steady_state(p);
    const ReducedModel rm = effective_rates(ss, p);
    const double root = std::sqrt(rm.gamma_b * rm.gamma_c);
    EXPECT_LT(rel_diff(std::norm(rm.lambda_b), rm.gamma_b), 1e-12);
    EXPECT_LT(rel_diff(std::norm(rm.lambda_c), rm.gamma_c), 1e-12);
    EXPECT_LT(rel_diff(rm.G_bc.real(), root), 1e-12);
    EXPECT_LT(rel_diff(rm.G_bc.imag(), root * 2.0 * ss.delta_a_eff / p.kappa), 1e-12);
    EXPECT_LT(rel_diff(rm.gamma_c / rm.gamma_b, rm.G * rm.G / (p.g * p.g)), 1e-12);
    EXPECT_LT(rel_diff(rm.dw_m, 2.0 * rm.gamma_c * ss.delta_a_eff / p.kappa), 1e-15);
  }
}

TEST(BuildR, MechanicalFrequencyEntry) {
  const SystemParams p = test::reference_params(0.7, 2.0, 70.0);
  const ReducedModel rm = reduce(solve_steady_state(p), p);
  EXPECT_EQ(rm.R(2, 3), p.omega_m);
  EXPECT_EQ(rm.R(2, 2), -0.5 * p.gamma_m);
  EXPECT_EQ(rm.R(3, 3), -0.5 * p.gamma_m);
  EXPECT_EQ(rm.R(0, 3), 0.0);
  EXPECT_EQ(rm.R(2, 0), 0.0);
}

TEST(BuildR, NoExcitonNonlinearityMakesPairsEqual) {
  SystemParams p = test::reference_params(0.9, 10.0, 70.0);
  p.alpha = 0.0;
  const ReducedModel rm = reduce(solve_steady_state(p), p);
  EXPECT_EQ(rm.Gamma_b_plus, rm.Gamma_b_minus);
  EXPECT_EQ(rm.Delta_ex_plus, rm.Delta_ex_minus);
}

TEST(BuildR, DecoupledMechanicsIsDampedRotation) {
  const SystemParams p = test::reference_setup().params;
  const ReducedModel rm = reduce(bare_state(0.0, 0.0), p);
  EXPECT_TRUE((rm.R.block<2, 2>(0, 2).isZero()));
  EXPECT_TRUE((rm.R.block<2, 2>(2, 0).isZero()));
  EXPECT_EQ(rm.R(3, 2), -p.omega_m);
}

TEST(BuildR, RederivedSignFlipsOnlyCouplingEntry) {
  const SystemParams p = test::reference_params(0.7, 2.0, 70.0);
  const SteadyState ss = solve_steady_state(p);
  const ReducedModel a = reduce(ss, p, CouplingSign::Printed);
  const ReducedModel b = reduce(ss, p, CouplingSign::Rederived);
  Matrix4 diff = a.R - b.R;
  EXPECT_GT(a.R(0, 2), 0.0);
  EXPECT_EQ(b.R(0, 2), -a.R(0, 2));
  diff(0, 2) = 0.0;
  EXPECT_TRUE(diff.isZero());
  EXPECT_EQ(a.D, b.D);
}

TEST(BuildD, ThermalEntries) {
  SystemParams p = test::reference_setup().params;
  p.n_th = 100.0;
  const ReducedModel rm = reduce(bare_state(0.0, 0.0), p);
  EXPECT_LT(rel_diff(rm.D(2, 2), 0.5 * p.gamma_m * 201.0), 1e-15);
  EXPECT_EQ(rm.D(3, 3), rm.D(2, 2));  // γ_c = 0
  EXPECT_EQ(rm.D(0, 0), 0.5 * rm.Gamma_b);
  EXPECT_EQ(rm.D(1, 3), 0.0);
}

TEST(BuildD, CrossTermAndSymmetry) {
  for (double delta : {0.3, 0.7, 1.1}) {
    const SystemParams p = test::reference_params(delta, 5.0, 70.0);
    const ReducedModel rm = reduce(solve_steady_state(p), p);
    EXPECT_EQ(rm.D, rm.D.transpose());
    EXPECT_LT(rel_diff(rm.D(1, 3), rm.G_bc.real()), 1e-12);
    EXPECT_LT(rel_diff(rm.D(3, 3), 2.0 * rm.gamma_c + rm.D(2, 2)), 1e-15);
    const Eigen::SelfAdjointEigenSolver<Matrix4> es(rm.D);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12 * rm.D.norm());
  }
}

TEST(FullModel, TraceWithoutNonlinearity) {
  SystemParams p = test::reference_params(0.8, 10.0, 70.0);
  p.alpha = 0.0;
  const FullModel fm = full_model_matrices(solve_steady_state(p), p);
  EXPECT_LT(rel_diff(fm.R.trace(), -(p.kappa + p.gamma + p.gamma_m)), 1e-12);
}

TEST(FullModel, NoiseMatrix) {
  const SystemParams p = test::reference_params(0.8, 10.0, 130.0);
  const FullModel fm = full_model_matrices(solve_steady_state(p), p);
  EXPECT_EQ(fm.D(0, 0), 0.5 * p.kappa);
  EXPECT_EQ(fm.D(1, 1), 0.5 * p.kappa);
  EXPECT_EQ(fm.D(2, 2), 0.5 * p.gamma);
  EXPECT_LT(rel_diff(fm.D(4, 4), 0.5 * p.gamma_m * 261.0), 1e-15);
  EXPECT_TRUE((fm.D - Matrix6(fm.D.diagonal().asDiagonal())).isZero());
}

TEST(FullModel, UncoupledModesAreBlockDiagonal) {
  SystemParams p = test::reference_setup().params;
  p.g = 0.0;
  p.g0 = 0.0;
  const FullModel fm = full_model_matrices(bare_state(0.0, 0.0), p);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      if (i / 2 != j / 2) EXPECT_EQ(fm.R(i, j), 0.0) << i << "," << j;
}

TEST(FullModel, MechanicalRotationMatchesReducedModel) {
  const SystemParams p = test::reference_setup().params;
  const SteadyState ss = bare_state(0.0, 0.0);
  const FullModel fm = full_model_matrices(ss, p, -1);
  const ReducedModel rm = reduce(ss, p);
  const Eigen::Matrix2d full_mech = fm.R.block<2, 2>(4, 4);
  const Eigen::Matrix2d reduced_mech = rm.R.block<2, 2>(2, 2);
  EXPECT_EQ(full_mech, reduced_mech);
  EXPECT_EQ(full_model_matrices(ss, p, 1).R(4, 5), -p.omega_m);
}

TEST(FullModel, RejectsBadRotationSign) {
  const SystemParams p = test::reference_setup().params;
  EXPECT_THROW(full_model_matrices(bare_state(0.0, 0.0), p, 0), Error);
}

}  // namespace
}  // namespace optoent
