#include "optoent/entanglement.hpp"

#include <cmath>
#include <string>

#include "optoent/errors.hpp"

namespace optoent {

ModeBlocks partition(const MatrixX& V) {
  if (V.rows() != 4 || V.cols() != 4) {
    throw Error(ErrorCode::DimensionMismatch,
                "expected a 4x4 covariance, got " + std::to_string(V.rows()) + "x" +
                    std::to_string(V.cols()));
  }
  ModeBlocks blocks;
  blocks.a = V.topLeftCorner<2, 2>();
  blocks.b = V.bottomRightCorner<2, 2>();
  blocks.ab = V.topRightCorner<2, 2>();
  return blocks;
}

Eigen::Matrix4d assemble(const ModeBlocks& blocks) {
  Eigen::Matrix4d V;
  V << blocks.a, blocks.ab, blocks.ab.transpose(), blocks.b;
  return V;
}

EntanglementResult log_negativity(const MatrixX& V) {
  const ModeBlocks blocks = partition(V);
  EntanglementResult result;
  result.sigma = blocks.a.determinant() + blocks.b.determinant() - 2.0 * blocks.ab.determinant();
  result.det_v = V.determinant();

  double disc = result.sigma * result.sigma - 4.0 * result.det_v;
  if (disc < 0.0) {
    if (disc < -1e-9 * result.sigma * result.sigma) {
      throw Error(ErrorCode::NonPhysicalCovariance,
                  "sigma^2 - 4 det V = " + std::to_string(disc) + " is negative");
    }
    disc = 0.0;
  }
  // (σ − √disc)/2 rewritten as 2 det V/(σ + √disc): same value, but free of
  // the cancellation that destroys it when V is large (σ ≫ χ²).
  const double chi_sq = 2.0 * result.det_v / (result.sigma + std::sqrt(disc));
  if (!(chi_sq > 0.0)) {
    throw Error(ErrorCode::NonPhysicalCovariance,
                "partial-transpose symplectic eigenvalue squared is " + std::to_string(chi_sq));
  }
  result.chi = std::sqrt(chi_sq);
  result.log_negativity = std::max(0.0, -std::log(2.0 * result.chi));
  return result;
}

}  // namespace optoent
