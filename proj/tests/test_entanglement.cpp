#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "optoent/entanglement.hpp"
#include "optoent/errors.hpp"
#include "test_support.hpp"

namespace optoent {
namespace {

Eigen::Matrix4d tmsv(double r, double thermal = 0.0) {
  ModeBlocks b;
  b.a = (0.5 * std::cosh(2.0 * r) + thermal) * Eigen::Matrix2d::Identity();
  b.b = b.a;
  b.ab = 0.5 * std::sinh(2.0 * r) * Eigen::Vector2d(1.0, -1.0).asDiagonal();
  return assemble(b);
}

Eigen::Matrix2d local_symplectic(double theta, double squeeze) {
  Eigen::Matrix2d rot;
  rot << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  const Eigen::Matrix2d sq = Eigen::Vector2d(std::exp(-squeeze), std::exp(squeeze)).asDiagonal();
  return rot * sq;
}

TEST(LogNegativity, VacuumIsExactlyZero) {
  const EntanglementResult r = log_negativity(MatrixX(0.5 * MatrixX::Identity(4, 4)));
  EXPECT_EQ(r.log_negativity, 0.0);
  EXPECT_EQ(r.chi, 0.5);
}

TEST(LogNegativity, TwoModeSqueezedVacuum) {
  for (double r : {0.25, 0.5, 1.0}) {
    const EntanglementResult res = log_negativity(MatrixX(tmsv(r)));
    EXPECT_NEAR(res.log_negativity, 2.0 * r, 1e-10) << r;
    EXPECT_NEAR(res.chi, 0.5 * std::exp(-2.0 * r), 1e-12);
  }
}

TEST(LogNegativity, ThermalProductStatesAreSeparable) {
  for (double n : {0.0, 1.0, 70.0, 1e4}) {
    const MatrixX V = (n + 0.5) * MatrixX::Identity(4, 4);
    EXPECT_EQ(log_negativity(V).log_negativity, 0.0);
  }
  MatrixX V = MatrixX::Identity(4, 4);
  V.diagonal() << 0.5, 0.5, 100.5, 100.5;
  EXPECT_EQ(log_negativity(V).log_negativity, 0.0);
}

TEST(LogNegativity, MonotoneInSqueezing) {
  double prev = -1.0;
  for (int k = 0; k <= 20; ++k) {
    const double en = log_negativity(MatrixX(tmsv(0.1 * k))).log_negativity;
    EXPECT_GT(en, prev - 1e-15);
    prev = en;
  }
}

TEST(LogNegativity, InvariantUnderLocalSymplectics) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Matrix4d V = tmsv(1.2 * u(rng), 0.3 * u(rng));
    Eigen::Matrix4d S = Eigen::Matrix4d::Zero();
    S.topLeftCorner<2, 2>() = local_symplectic(6.3 * u(rng), u(rng) - 0.5);
    S.bottomRightCorner<2, 2>() = local_symplectic(6.3 * u(rng), u(rng) - 0.5);
    const double before = log_negativity(MatrixX(V)).log_negativity;
    const double after = log_negativity(MatrixX(S * V * S.transpose())).log_negativity;
    EXPECT_NEAR(after, before, 1e-10) << trial;
  }
}

TEST(LogNegativity, SymmetricUnderModeSwap) {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::Matrix4d V = tmsv(u(rng), 0.2 * u(rng));
    V(0, 0) += u(rng);
    V(3, 3) += 2.0 * u(rng);
    ModeBlocks b = partition(V);
    ModeBlocks swapped{b.b, b.a, b.ab.transpose()};
    EXPECT_NEAR(log_negativity(MatrixX(assemble(swapped))).log_negativity,
                log_negativity(MatrixX(V)).log_negativity, 1e-12);
  }
}

TEST(LogNegativity, PositiveExactlyWhenPartialTransposeIsUnphysical) {
  const Eigen::Matrix4d flip = Eigen::Vector4d(1.0, 1.0, 1.0, -1.0).asDiagonal();
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int entangled = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Matrix4d V = tmsv(0.6 * u(rng), 0.4 * u(rng));
    const double en = log_negativity(MatrixX(V)).log_negativity;
    const CovarianceMatrix pt(MatrixX(flip * V * flip));
    if (std::abs(pt.physicality_margin()) < 1e-9) continue;  // on the boundary
    EXPECT_EQ(en > 0.0, !pt.is_physical(0.0)) << trial;
    entangled += en > 0.0;
  }
  EXPECT_GT(entangled, 10);
  EXPECT_LT(entangled, 90);
}

TEST(LogNegativity, LargeVarianceStaysAccurate) {
  // Variances ~1e6 with χ = 0.3: the naive (σ − √disc)/2 is off by ~5e-4 here.
  const double a = 1e6, c = a - 0.3;
  ModeBlocks b;
  b.a = a * Eigen::Matrix2d::Identity();
  b.b = b.a;
  b.ab = c * Eigen::Vector2d(1.0, -1.0).asDiagonal();
  const EntanglementResult r = log_negativity(MatrixX(assemble(b)));
  EXPECT_LT(test::rel_diff(r.chi, 0.3), 1e-8);
  EXPECT_NEAR(r.log_negativity, -std::log(0.6), 1e-8);
}

TEST(Partition, RoundTrip) {
  Eigen::Matrix4d V = tmsv(0.3, 0.1);
  V(0, 1) = V(1, 0) = 0.05;
  const ModeBlocks b = partition(V);
  EXPECT_EQ(b.ab(0, 0), V(0, 2));
  EXPECT_EQ(assemble(b), V);
}

TEST(Partition, RejectsWrongShape) {
  try {
    partition(MatrixX::Identity(6, 6));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(LogNegativity, RejectsNegativeChiSquared) {
  MatrixX V = MatrixX::Identity(4, 4);
  V(3, 3) = -1.0;
  try {
    log_negativity(V);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonPhysicalCovariance);
  }
}

}  // namespace
}  // namespace optoent
