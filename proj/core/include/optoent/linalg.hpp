#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace optoent {

using MatrixX = Eigen::MatrixXd;

/// All eigenvalues of a small real matrix: balancing, Householder reduction
/// to Hessenberg form, then Francis double-shift QR. Sorted by real part
/// ascending, ties by imaginary part. Throws Error(NoConvergence).
std::vector<std::complex<double>> eigenvalues(const MatrixX& m);

struct StabilityReport {
  bool stable = false;
  double margin = 0.0;  ///< max_i Re λ_i; stable iff negative
  std::vector<std::complex<double>> eigenvalues;
};

/// Stable iff every eigenvalue of R has a strictly negative real part.
StabilityReport check_stability(const MatrixX& R);
inline bool is_stable(const MatrixX& R) { return check_stability(R).stable; }

/// Symmetric 2n×2n quadrature covariance, ordering (x1, y1, x2, y2, ...).
/// Vacuum has variance 1/2 per quadrature.
class CovarianceMatrix {
 public:
  /// Symmetrizes the input. Throws DimensionMismatch for non-square or odd sizes.
  explicit CovarianceMatrix(const MatrixX& m);

  int modes() const noexcept { return static_cast<int>(m_.rows() / 2); }
  const MatrixX& matrix() const noexcept { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  /// Smallest eigenvalue of M + (i/2)Ω. Negative means the uncertainty
  /// relation is violated; callers treat this as a warning.
  double physicality_margin() const;
  bool is_physical(double tolerance = 1e-9) const;

 private:
  MatrixX m_;
};

/// Standard symplectic form ⊕ [[0, 1], [−1, 0]] for n modes.
MatrixX symplectic_form(int modes);

/// ‖RV + VRᵀ + D‖_F / (‖R‖_F‖V‖_F + ‖D‖_F).
double lyapunov_residual(const MatrixX& R, const MatrixX& V, const MatrixX& D);

/// Solves RV + VRᵀ = −D by vectorizing into (I⊗R + R⊗I) vec(V) = −vec(D) and
/// dense LU with partial pivoting. Throws UnstableDrift if R is not stable and
/// SingularSystem when a pivot falls below 1e-12 of the largest entry.
CovarianceMatrix solve_lyapunov(const MatrixX& R, const MatrixX& D);

/// Largest singular value.
double spectral_norm(const MatrixX& m);

/// One classic RK4 step of dV/dt = RV + VRᵀ + D.
MatrixX rk4_moment_step(const MatrixX& R, const MatrixX& D, const MatrixX& V, double dt);

struct MomentIntegration {
  CovarianceMatrix covariance;
  double time = 0.0;             ///< time reached
  unsigned long long steps = 0;  ///< RK4 steps taken
  double derivative_norm = 0.0;  ///< ‖dV/dt‖_F at the end
};

/// V after `steps` RK4 steps of size dt, composed by repeated squaring of the
/// (affine) one-step map. Carried in long double.
MatrixX rk4_moment_steps(const MatrixX& R, const MatrixX& D, const MatrixX& V0, double dt,
                         unsigned long long steps);

/// Integrates dV/dt = RV + VRᵀ + D with fixed-step RK4 from V0 until
/// ‖dV/dt‖_F < 1e-12‖D‖_F or t_end. Because the right-hand side is affine in V
/// the step map is composed by repeated squaring; the iterates are the plain
/// RK4 iterates after 1, 3, 7, ... steps. The state is held in long double:
/// in double the rounding floor of RV + VRᵀ + D, about ‖R‖‖V‖·eps, sits above
/// the stopping threshold for realistic parameters. dt ≤ 0 picks 0.01/‖R‖₂.
/// Throws UnstableDrift, InvalidArgument (dt too large) or NotConverged.
MomentIntegration integrate_moments_detailed(const MatrixX& R, const MatrixX& D,
                                             const MatrixX& V0, double t_end, double dt = 0.0);

CovarianceMatrix integrate_moments(const MatrixX& R, const MatrixX& D, const MatrixX& V0,
                                   double t_end, double dt = 0.0);

}  // namespace optoent
