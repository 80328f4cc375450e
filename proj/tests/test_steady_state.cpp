#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "optoent/errors.hpp"
#include "optoent/steady_state.hpp"
#include "test_support.hpp"

namespace optoent {
namespace {

using test::rel_diff;

SystemParams linear_params(double delta = 0.0) {
  SystemParams p = test::reference_setup().params.with_detuning(delta);
  p.alpha = 0.0;
  p.g0 = 0.0;
  return p;
}

double linear_closed_form(const SystemParams& p) {
  const double re = p.kappa * p.gamma / 4.0 + p.g * p.g - p.delta_a * p.delta_ex;
  const double im = p.kappa * p.delta_ex / 2.0 + p.gamma * p.delta_a / 2.0;
  return p.g * p.g * p.pump_amplitude * p.pump_amplitude / (re * re + im * im);
}

void expect_roots_satisfy_residual(const SystemParams& p, const RootScan& scan) {
  const double eps2 = p.pump_amplitude * p.pump_amplitude;
  for (double r : scan.roots) {
    EXPECT_GE(r, 0.0);
    EXPECT_LT(std::abs(intensity_residual(r, p)), eps2 > 0 ? 1e-8 * eps2 : 1e-20) << "root " << r;
  }
}

TEST(IntensityResidual, DarkStateIsZero) {
  SystemParams p = test::reference_setup().params;
  p.pump_amplitude = 0.0;
  EXPECT_EQ(intensity_residual(0.0, p), 0.0);
}

TEST(IntensityResidual, OriginGivesMinusDriveSquared) {
  const SystemParams p = test::reference_setup().params;
  EXPECT_EQ(intensity_residual(0.0, p), -p.pump_amplitude * p.pump_amplitude);
}

TEST(IntensityResidual, LinearClosedFormIsRoot) {
  const SystemParams p = linear_params();
  const double I = p.g * p.g * p.pump_amplitude * p.pump_amplitude /
                   std::pow(p.kappa * p.gamma / 4.0 + p.g * p.g, 2);
  EXPECT_LT(rel_diff(I, linear_intensity_estimate(p)), 1e-15);
  EXPECT_LT(std::abs(intensity_residual(I, p)), 1e-12 * p.pump_amplitude * p.pump_amplitude);
}

TEST(EffectiveDetunings, ExcitonShiftIsLinearInIntensity) {
  const SystemParams p = test::reference_setup().params.with_detuning(1e11);
  const EffectiveDetunings d = effective_detunings(7.0, p);
  EXPECT_DOUBLE_EQ(d.delta_ex, 1e11 + 2.0 * p.alpha * 7.0);
  EXPECT_LT(d.delta_a, 1e11);  // radiation pressure pulls the cavity detuning down
}

TEST(FindRoots, UndrivenSystemHasZeroRoot) {
  SystemParams p = test::reference_setup().params;
  p.pump_amplitude = 0.0;
  const RootScan scan = find_roots(p);
  ASSERT_EQ(scan.roots.size(), 1u);
  EXPECT_EQ(scan.roots[0], 0.0);
}

TEST(FindRoots, LinearCaseSingleRootMatchesClosedForm) {
  const SystemParams p = linear_params();
  const RootScan scan = find_roots(p);
  ASSERT_EQ(scan.roots.size(), 1u);
  EXPECT_LT(rel_diff(scan.roots[0], linear_closed_form(p)), 1e-10);
}

TEST(FindRoots, LinearCaseOverDetuningGrid) {
  for (int i = 0; i < 100; ++i) {
    const double delta = (-2.0 + 4.0 * i / 99.0) * test::reference_setup().params.omega_m;
    const SystemParams p = linear_params(delta);
    const RootScan scan = find_roots(p);
    ASSERT_EQ(scan.roots.size(), 1u) << "delta index " << i;
    EXPECT_LT(rel_diff(scan.roots[0], linear_closed_form(p)), 1e-10) << "delta index " << i;
  }
}

TEST(FindRoots, MonostableForUnequalDetunings) {
  const double wm = test::reference_setup().params.omega_m;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      SystemParams p = linear_params();
      p.delta_a = (-1.5 + 0.3 * i) * wm;
      p.delta_ex = (-1.5 + 0.3 * j) * wm;
      EXPECT_EQ(find_roots(p).roots.size(), 1u);
    }
  }
}

TEST(FindRoots, Fig2OperatingPointResiduals) {
  const SystemParams p = test::reference_params(1.1, 24.0, 70.0);
  const RootScan scan = find_roots(p);
  EXPECT_TRUE(scan.roots.size() == 1 || scan.roots.size() == 3) << scan.roots.size();
  expect_roots_satisfy_residual(p, scan);
}

TEST(FindRoots, BistableWindowFindsThreeRoots) {
  bool found = false;
  for (double P = 6.0; P <= 16.0; P += 0.25) {
    const SystemParams p = test::reference_params(1.2, P, 100.0);
    const RootScan scan = find_roots(p);
    expect_roots_satisfy_residual(p, scan);
    EXPECT_TRUE(std::is_sorted(scan.roots.begin(), scan.roots.end()));
    if (scan.roots.size() == 3) found = true;
  }
  EXPECT_TRUE(found);
}

TEST(FindRoots, ResidualsAcrossSweepGrid) {
  for (double delta = 0.5; delta <= 1.5; delta += 0.05) {
    for (double P : {1.0, 10.0, 24.0, 50.0}) {
      const SystemParams p = test::reference_params(delta, P, 70.0);
      expect_roots_satisfy_residual(p, find_roots(p));
    }
  }
}

TEST(FindRoots, RejectsCoarseScan) {
  RootScanOptions opts;
  opts.scan_points = 100;
  EXPECT_THROW(find_roots(test::reference_setup().params, opts), Error);
}

TEST(SolveSteadyState, UndrivenFieldsVanish) {
  SystemParams p = test::reference_setup().params;
  p.pump_amplitude = 0.0;
  const SteadyState ss = solve_steady_state(p);
  EXPECT_EQ(ss.intensity, 0.0);
  EXPECT_EQ(std::abs(ss.a_s), 0.0);
  EXPECT_EQ(std::abs(ss.b_s), 0.0);
  EXPECT_EQ(std::abs(ss.c_s), 0.0);
}

TEST(SolveSteadyState, NoOptomechanicsMeansNoMechanicalField) {
  SystemParams p = test::reference_params(1.0, 24.0, 70.0);
  p.g0 = 0.0;
  EXPECT_EQ(std::abs(solve_steady_state(p).c_s), 0.0);
}

TEST(SolveSteadyState, InvariantsAcrossOperatingPoints) {
  for (double delta : {0.0, 0.5, 0.9, 1.1, 1.3}) {
    for (double P : {1.0, 24.0, 45.0}) {
      const SystemParams p = test::reference_params(delta, P, 70.0);
      const SteadyState ss = solve_steady_state(p);
      ASSERT_GT(ss.intensity, 0.0);
      EXPECT_LT(rel_diff(std::norm(ss.b_s), ss.intensity), 1e-8);
      EXPECT_NEAR(std::arg(ss.a_s), -std::numbers::pi / 2.0, 1e-10);
      EXPECT_LT(rel_diff(std::norm(ss.a_s), ss.n_s), 1e-12);
      // |a|² from the exciton equation: |γ/2 + iΔ̃_ex|² I / g².
      const double gx = 0.5 * p.gamma;
      const double from_b = (gx * gx + ss.delta_ex_eff * ss.delta_ex_eff) * ss.intensity / (p.g * p.g);
      EXPECT_LT(rel_diff(from_b, ss.n_s), 1e-8);
      const complex lhs = complex{0.5 * p.gamma_m, p.omega_m} * ss.c_s;
      const complex rhs = complex{0.0, p.g0 * ss.n_s};
      EXPECT_LT(std::abs(lhs - rhs) / std::abs(rhs), 1e-10);
      const EffectiveDetunings d = effective_detunings(ss.intensity, p);
      EXPECT_EQ(d.delta_a, ss.delta_a_eff);
      EXPECT_EQ(d.delta_ex, ss.delta_ex_eff);
    }
  }
}

TEST(SolveSteadyState, DoublingDriveQuadruplesIntensityInLinearCase) {
  SystemParams p = linear_params(0.3e11);
  const double I1 = solve_steady_state(p).intensity;
  p.pump_amplitude *= 2.0;
  EXPECT_LT(rel_diff(solve_steady_state(p).intensity, 4.0 * I1), 1e-10);
}

TEST(SolveSteadyState, BranchSelection) {
  SystemParams bistable;
  for (double P = 6.0; P <= 16.0; P += 0.25) {
    bistable = test::reference_params(1.2, P, 100.0);
    if (find_roots(bistable).roots.size() == 3) break;
  }
  const SteadyState lo = solve_steady_state(bistable, BranchPolicy::lowest());
  const SteadyState hi = solve_steady_state(bistable, BranchPolicy::highest());
  const SteadyState mid = solve_steady_state(bistable, BranchPolicy::index(1));
  ASSERT_EQ(lo.n_roots, 3u);
  EXPECT_LT(lo.intensity, mid.intensity);
  EXPECT_LT(mid.intensity, hi.intensity);
  EXPECT_EQ(hi.branch, 2u);
  try {
    solve_steady_state(bistable, BranchPolicy::index(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BranchOutOfRange);
  }
}

TEST(BranchPolicy, Parse) {
  EXPECT_EQ(BranchPolicy::parse("lowest").select(3), 0u);
  EXPECT_EQ(BranchPolicy::parse("highest").select(3), 2u);
  EXPECT_EQ(BranchPolicy::parse("1").select(3), 1u);
  EXPECT_THROW(BranchPolicy::parse("middle"), Error);
  EXPECT_THROW(BranchPolicy::parse("-1"), Error);
  EXPECT_EQ(BranchPolicy::parse("2").to_string(), "2");
}

}  // namespace
}  // namespace optoent
