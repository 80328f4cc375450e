#pragma once

#include <array>
#include <complex>

#include <Eigen/Dense>

#include "optoent/linalg.hpp"

namespace optoent {

/// 2×2 blocks of a two-mode covariance matrix [[a, ab], [abᵀ, b]].
struct ModeBlocks {
  Eigen::Matrix2d a = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d b = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d ab = Eigen::Matrix2d::Zero();
};

/// Throws Error(DimensionMismatch) unless V is 4×4.
ModeBlocks partition(const MatrixX& V);
Eigen::Matrix4d assemble(const ModeBlocks& blocks);

struct EntanglementResult {
  double log_negativity = 0.0;  ///< E_N = max(0, −ln 2χ), natural log
  double chi = 0.0;             ///< smallest symplectic eigenvalue of the partial transpose
  double sigma = 0.0;           ///< det V_A + det V_B − 2 det V_AB
  double det_v = 0.0;
  bool stable = true;           ///< filled in by the pipeline; true for a bare covariance
  std::array<std::complex<double>, 4> eig_r{};
};

/// χ = 2^{−1/2}[σ − sqrt(σ² − 4 det V)]^{1/2}, evaluated in the equivalent
/// form χ² = 2 det V/(σ + sqrt(σ² − 4 det V)). Discriminants down to −1e-9·σ²
/// are clamped to zero; anything more negative, or a negative χ², throws
/// Error(NonPhysicalCovariance).
EntanglementResult log_negativity(const MatrixX& V);
inline EntanglementResult log_negativity(const CovarianceMatrix& V) {
  return log_negativity(V.matrix());
}

}  // namespace optoent
