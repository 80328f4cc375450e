// Frozen values from an independent high-precision implementation of the
// same model (mpmath / SciPy), computed once and pasted here.
#include <gtest/gtest.h>

#include <cmath>

#include "optoent/sweeps.hpp"
#include "optoent/units.hpp"
#include "test_support.hpp"

namespace optoent {
namespace {

using test::rel_diff;

TEST(Oracle, PhotonEnergyAt777nm) {
  EXPECT_LT(rel_diff(units::photon_energy(777e-9), 2.5565583747090457e-19), 1e-15);
}

TEST(Oracle, PumpAmplitudeAt24uW) {
  EXPECT_LT(rel_diff(test::reference_setup().params.pump_amplitude, 4333040635663.0547), 1e-14);
}

TEST(Oracle, ThermalOccupationAt96p5K) {
  EXPECT_LT(rel_diff(thermal_occupation(96.5, units::angular(20e9)), 100.03751615350284), 1e-12);
}

TEST(Oracle, PurcellRateOnResonance) {
  const SystemParams p = test::reference_setup().params;
  EXPECT_LT(rel_diff(4.0 * p.g * p.g / p.kappa, 4547913708.021976), 1e-14);
}

TEST(Oracle, LinearIntensityEstimate) {
  EXPECT_LT(rel_diff(linear_intensity_estimate(test::reference_setup().params), 39831.05782515817),
            1e-13);
}

class ReducedPointOracle : public ::testing::Test {
 protected:
  // Δ = 0.7 ω_m, P = 2 µW, n_th = 70, printed drift matrix.
  const SystemParams p = test::reference_params(0.7, 2.0, 70.0);
  const PointEvaluation ev = evaluate(p);
};

TEST_F(ReducedPointOracle, SteadyState) {
  ASSERT_TRUE(ev.point.usable()) << ev.message;
  EXPECT_LT(rel_diff(ev.steady->intensity, 2.8930044309335345), 1e-10);
  EXPECT_LT(rel_diff(ev.steady->n_s, 98.45523441773202), 1e-10);
  EXPECT_LT(rel_diff(ev.steady->delta_a_eff, 79302694861.2366), 1e-12);
  EXPECT_LT(rel_diff(ev.reduced->G, 13715825604.330986), 1e-10);
}

TEST_F(ReducedPointOracle, Rates) {
  EXPECT_LT(rel_diff(ev.reduced->gamma_b, 2792029447.334855), 1e-12);
  EXPECT_LT(rel_diff(ev.reduced->gamma_c, 2309838858.4976554), 1e-10);
}

TEST_F(ReducedPointOracle, DriftSpectrum) {
  const std::complex<double> expected[4] = {
      {-2399628882.114319, -86933177924.0083},
      {-2399628882.114319, 86933177924.0083},
      {-4719174.886463165, -127430796121.50739},
      {-4719174.886463165, 127430796121.50739},
  };
  for (int k = 0; k < 4; ++k) {
    EXPECT_LT(std::abs(ev.point.eig_r[k] - expected[k]), 1e-9 * std::abs(expected[k])) << k;
  }
}

TEST_F(ReducedPointOracle, Covariance) {
  Eigen::Matrix4d expected;
  expected << 1.131557976200632, -0.20673414291478204, -6.474933215604206, -13.914250572757611,
      -0.2067341429150, 1.0145063290389116, -9.528348018520502, 10.006436510692645,
      -6.47493321559827, -9.52834801852477, 356.50095893833895, 0.01896602756549381,
      -13.91425057276044, 10.00643651068846, 0.0189660277217, 366.5978647911821;
  const MatrixX& v = ev.covariance->matrix();
  EXPECT_LT((v - expected).norm() / expected.norm(), 1e-9);
}

TEST_F(ReducedPointOracle, LogNegativity) {
  EXPECT_NEAR(ev.point.log_negativity, 0.029347620526966305, 1e-9);
  EXPECT_LT(rel_diff(ev.point.chi, 0.48553941942476025), 1e-9);
}

}  // namespace
}  // namespace optoent
