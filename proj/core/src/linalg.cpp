#include "optoent/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "optoent/errors.hpp"

namespace optoent {
namespace {

void require_square(const MatrixX& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " must be a non-empty square matrix");
  }
}

double sign_of(double magnitude, double s) { return s >= 0.0 ? std::abs(magnitude) : -std::abs(magnitude); }

// Parlett-Reinsch balancing with radix-2 scaling (exact in floating point).
void balance(MatrixX& a) {
  constexpr double radix = 2.0;
  constexpr double sqrdx = radix * radix;
  const Eigen::Index n = a.rows();
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double r = 0.0, c = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

void reduce_to_hessenberg(MatrixX& a) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k + 2 < n; ++k) {
    const Eigen::Index len = n - k - 1;
    Eigen::VectorXd v = a.col(k).tail(len);
    const double norm = v.norm();
    if (norm == 0.0) continue;
    const double alpha = v(0) >= 0.0 ? -norm : norm;
    v(0) -= alpha;
    const double vnorm = v.norm();
    if (vnorm == 0.0) continue;
    v /= vnorm;
    // H = I − 2vvᵀ applied on both sides.
    a.bottomRows(len) -= 2.0 * v * (v.transpose() * a.bottomRows(len));
    a.rightCols(len) -= 2.0 * (a.rightCols(len) * v) * v.transpose();
    a.col(k).tail(len - 1).setZero();
    a(k + 1, k) = alpha;
  }
}

// Francis double-shift QR on an upper Hessenberg matrix (destroys `a`).
std::vector<std::complex<double>> hessenberg_qr(MatrixX& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<std::complex<double>> out(n);
  double anorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(a(i, j));

  int nn = n - 1;
  double t = 0.0;
  double p = 0.0, q = 0.0, r = 0.0, s = 0.0, w = 0.0, x = 0.0, y = 0.0, z = 0.0;
  while (nn >= 0) {
    int its = 0;
    int l = 0;
    do {
      for (l = nn; l > 0; --l) {
        s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(a(l, l - 1)) + s == s) {
          a(l, l - 1) = 0.0;
          break;
        }
      }
      x = a(nn, nn);
      if (l == nn) {  // one root
        out[nn] = {x + t, 0.0};
        --nn;
      } else {
        y = a(nn - 1, nn - 1);
        w = a(nn, nn - 1) * a(nn - 1, nn);
        if (l == nn - 1) {  // two roots
          p = 0.5 * (y - x);
          q = p * p + w;
          z = std::sqrt(std::abs(q));
          x += t;
          if (q >= 0.0) {
            z = p + sign_of(z, p);
            out[nn - 1] = out[nn] = {x + z, 0.0};
            if (z != 0.0) out[nn] = {x - w / z, 0.0};
          } else {
            out[nn - 1] = {x + p, z};
            out[nn] = {x + p, -z};
          }
          nn -= 2;
        } else {
          if (its == 60) throw Error(ErrorCode::NoConvergence, "QR iteration did not converge");
          if (its == 10 || its == 20 || its == 40) {  // exceptional shift
            t += x;
            for (int i = 0; i <= nn; ++i) a(i, i) -= x;
            s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
            y = x = 0.75 * s;
            w = -0.4375 * s * s;
          }
          ++its;
          int m = nn - 2;
          for (; m >= l; --m) {
            z = a(m, m);
            r = x - z;
            s = y - z;
            p = (r * s - w) / a(m + 1, m) + a(m, m + 1);
            q = a(m + 1, m + 1) - z - r - s;
            r = a(m + 2, m + 1);
            s = std::abs(p) + std::abs(q) + std::abs(r);
            p /= s;
            q /= s;
            r /= s;
            if (m == l) break;
            const double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
            const double v = std::abs(p) * (std::abs(a(m - 1, m - 1)) + std::abs(z) +
                                            std::abs(a(m + 1, m + 1)));
            if (u + v == v) break;
          }
          for (int i = m; i < nn - 1; ++i) {
            a(i + 2, i) = 0.0;
            if (i != m) a(i + 2, i - 1) = 0.0;
          }
          for (int k = m; k < nn; ++k) {
            if (k != m) {
              p = a(k, k - 1);
              q = a(k + 1, k - 1);
              r = 0.0;
              if (k + 1 != nn) r = a(k + 2, k - 1);
              if ((x = std::abs(p) + std::abs(q) + std::abs(r)) != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            if ((s = sign_of(std::sqrt(p * p + q * q + r * r), p)) != 0.0) {
              if (k == m) {
                if (l != m) a(k, k - 1) = -a(k, k - 1);
              } else {
                a(k, k - 1) = -s * x;
              }
              p += s;
              x = p / s;
              y = q / s;
              z = r / s;
              q /= p;
              r /= p;
              for (int j = k; j <= nn; ++j) {
                p = a(k, j) + q * a(k + 1, j);
                if (k + 1 != nn) {
                  p += r * a(k + 2, j);
                  a(k + 2, j) -= p * z;
                }
                a(k + 1, j) -= p * y;
                a(k, j) -= p * x;
              }
              const int mmin = nn < k + 3 ? nn : k + 3;
              for (int i = l; i <= mmin; ++i) {
                p = x * a(i, k) + y * a(i, k + 1);
                if (k + 1 != nn) {
                  p += z * a(i, k + 2);
                  a(i, k + 2) -= p * r;
                }
                a(i, k + 1) -= p * q;
                a(i, k) -= p;
              }
            }
          }
        }
      }
    } while (l + 1 < nn);
  }
  return out;
}

// (I⊗R + R⊗I) for column-major vec: vec(RV + VRᵀ).
MatrixX lyapunov_operator(const MatrixX& R) {
  const Eigen::Index n = R.rows();
  MatrixX K = MatrixX::Zero(n * n, n * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index row = i + j * n;
      for (Eigen::Index k = 0; k < n; ++k) {
        K(row, k + j * n) += R(i, k);  // (RV)_ij = Σ_k R_ik V_kj
        K(row, i + k * n) += R(j, k);  // (VRᵀ)_ij = Σ_k V_ik R_jk
      }
    }
  }
  return K;
}

Eigen::VectorXd lu_solve(MatrixX A, Eigen::VectorXd b, double relative_pivot_tol) {
  const Eigen::Index n = A.rows();
  const double scale = A.cwiseAbs().maxCoeff();
  if (scale == 0.0) throw Error(ErrorCode::SingularSystem, "zero Lyapunov operator");
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index piv = k;
    A.col(k).tail(n - k).cwiseAbs().maxCoeff(&piv);
    piv += k;
    if (std::abs(A(piv, k)) < relative_pivot_tol * scale) {
      throw Error(ErrorCode::SingularSystem,
                  "Lyapunov operator is singular (eigenvalue pair summing to ~0)");
    }
    if (piv != k) {
      A.row(k).swap(A.row(piv));
      std::swap(b(k), b(piv));
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const double f = A(i, k) / A(k, k);
      if (f == 0.0) continue;
      A.row(i).tail(n - k - 1) -= f * A.row(k).tail(n - k - 1);
      b(i) -= f * b(k);
    }
  }
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    double acc = b(i);
    for (Eigen::Index j = i + 1; j < n; ++j) acc -= A(i, j) * b(j);
    b(i) = acc / A(i, i);
  }
  return b;
}

MatrixX symmetrized(const MatrixX& m) { return 0.5 * (m + m.transpose()); }

MatrixX moment_derivative(const MatrixX& R, const MatrixX& D, const MatrixX& V) {
  return R * V + V * R.transpose() + D;
}

void require_stable(const MatrixX& R) {
  const auto report = check_stability(R);
  if (!report.stable) {
    throw Error(ErrorCode::UnstableDrift,
                "drift matrix has an eigenvalue with Re = " + std::to_string(report.margin) + " >= 0");
  }
}

}  // namespace

std::vector<std::complex<double>> eigenvalues(const MatrixX& m) {
  require_square(m, "eigenvalue input");
  if (!m.allFinite()) throw Error(ErrorCode::InvalidArgument, "matrix has non-finite entries");
  MatrixX a = m;
  if (a.rows() == 1) return {{a(0, 0), 0.0}};
  balance(a);
  reduce_to_hessenberg(a);
  auto values = hessenberg_qr(a);
  std::sort(values.begin(), values.end(), [](const auto& l, const auto& r) {
    return l.real() != r.real() ? l.real() < r.real() : l.imag() < r.imag();
  });
  return values;
}

StabilityReport check_stability(const MatrixX& R) {
  StabilityReport report;
  report.eigenvalues = eigenvalues(R);
  report.margin = report.eigenvalues.front().real();
  for (const auto& v : report.eigenvalues) report.margin = std::max(report.margin, v.real());
  report.stable = report.margin < 0.0;
  return report;
}

CovarianceMatrix::CovarianceMatrix(const MatrixX& m) {
  require_square(m, "covariance matrix");
  if (m.rows() % 2 != 0) {
    throw Error(ErrorCode::DimensionMismatch, "covariance matrix needs an even dimension");
  }
  m_ = symmetrized(m);
}

double CovarianceMatrix::physicality_margin() const {
  const Eigen::MatrixXcd h =
      m_.cast<std::complex<double>>() +
      std::complex<double>(0.0, 0.5) * symplectic_form(modes()).cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool CovarianceMatrix::is_physical(double tolerance) const {
  return physicality_margin() >= -tolerance * std::max(1.0, m_.norm());
}

MatrixX symplectic_form(int modes) {
  MatrixX omega = MatrixX::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

double lyapunov_residual(const MatrixX& R, const MatrixX& V, const MatrixX& D) {
  const double denom = R.norm() * V.norm() + D.norm();
  const double num = moment_derivative(R, D, V).norm();
  return denom > 0.0 ? num / denom : num;
}

CovarianceMatrix solve_lyapunov(const MatrixX& R, const MatrixX& D) {
  require_square(R, "R");
  if (D.rows() != R.rows() || D.cols() != R.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "R and D must have the same shape");
  }
  require_stable(R);
  const Eigen::Index n = R.rows();
  const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(D.data(), n * n);
  const Eigen::VectorXd v = lu_solve(lyapunov_operator(R), rhs, 1e-12);
  return CovarianceMatrix(Eigen::Map<const MatrixX>(v.data(), n, n));
}

double spectral_norm(const MatrixX& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<MatrixX> svd(m);
  return svd.singularValues()(0);
}

MatrixX rk4_moment_step(const MatrixX& R, const MatrixX& D, const MatrixX& V, double dt) {
  const MatrixX k1 = moment_derivative(R, D, V);
  const MatrixX k2 = moment_derivative(R, D, V + 0.5 * dt * k1);
  const MatrixX k3 = moment_derivative(R, D, V + 0.5 * dt * k2);
  const MatrixX k4 = moment_derivative(R, D, V + dt * k3);
  return V + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

namespace {

using MatrixL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using VectorL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

// One fixed-step RK4 step of v' = Lv + d, written as v <- Pv + c, held in
// extended precision. Composing the map with itself doubles the step count.
struct AffineStep {
  MatrixL P;
  VectorL c;
  unsigned long long steps = 1;

  AffineStep squared() const { return {P * P, P * c + c, 2 * steps}; }
  VectorL apply(const VectorL& v) const { return P * v + c; }
};

struct MomentSystem {
  Eigen::Index n = 0;
  MatrixL R, D;
  AffineStep step;

  MomentSystem(const MatrixX& r, const MatrixX& d, double dt) : n(r.rows()) {
    R = r.cast<long double>();
    D = d.cast<long double>();
    const Eigen::Index N = n * n;
    // P = sum_{k<=4} (hL)^k/k!,  c = h sum_{k<=3} (hL)^k/(k+1)! d.
    const MatrixL hL = static_cast<long double>(dt) * lyapunov_operator(r).cast<long double>();
    const MatrixL I = MatrixL::Identity(N, N);
    const MatrixL hL2 = hL * hL;
    const MatrixL hL3 = hL2 * hL;
    const VectorL dv = Eigen::Map<const VectorL>(D.data(), N);
    step.P = I + hL + hL2 / 2.0L + hL3 / 6.0L + hL3 * hL / 24.0L;
    step.c = static_cast<long double>(dt) * ((I + hL / 2.0L + hL2 / 6.0L + hL3 / 24.0L) * dv);
  }

  VectorL symmetrize(const VectorL& v) const {
    const MatrixL m = Eigen::Map<const MatrixL>(v.data(), n, n);
    const MatrixL s = 0.5L * (m + m.transpose());
    return Eigen::Map<const VectorL>(s.data(), n * n);
  }

  double derivative_norm(const VectorL& v) const {
    const MatrixL V = Eigen::Map<const MatrixL>(v.data(), n, n);
    return static_cast<double>((R * V + V * R.transpose() + D).norm());
  }

  MatrixX to_matrix(const VectorL& v) const {
    return Eigen::Map<const MatrixL>(v.data(), n, n).cast<double>();
  }
};

void check_moment_inputs(const MatrixX& R, const MatrixX& D, const MatrixX& V0) {
  require_square(R, "R");
  const Eigen::Index n = R.rows();
  if (D.rows() != n || D.cols() != n || V0.rows() != n || V0.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "R, D and V0 must have the same shape");
  }
}

}  // namespace

MatrixX rk4_moment_steps(const MatrixX& R, const MatrixX& D, const MatrixX& V0, double dt,
                         unsigned long long steps) {
  check_moment_inputs(R, D, V0);
  MomentSystem sys(R, D, dt);
  const MatrixL v0 = V0.cast<long double>();
  VectorL v = sys.symmetrize(Eigen::Map<const VectorL>(v0.data(), v0.size()));
  AffineStep power = sys.step;
  while (steps > 0) {
    if (steps & 1ULL) v = sys.symmetrize(power.apply(v));
    steps >>= 1;
    if (steps > 0) power = power.squared();
  }
  return sys.to_matrix(v);
}

MomentIntegration integrate_moments_detailed(const MatrixX& R, const MatrixX& D,
                                             const MatrixX& V0, double t_end, double dt) {
  check_moment_inputs(R, D, V0);
  require_stable(R);
  const double max_dt = 0.01 / spectral_norm(R);
  if (dt <= 0.0) dt = max_dt;
  if (dt > max_dt * (1.0 + 1e-12)) {
    throw Error(ErrorCode::InvalidArgument, "dt exceeds 0.01/||R||");
  }
  if (!(t_end > 0.0)) throw Error(ErrorCode::InvalidArgument, "t_end must be > 0");

  const double tol = 1e-12 * D.norm();
  MomentSystem sys(R, D, dt);
  const MatrixL v0 = V0.cast<long double>();
  VectorL v = sys.symmetrize(Eigen::Map<const VectorL>(v0.data(), v0.size()));

  MomentIntegration result{CovarianceMatrix(V0), 0.0, 0, sys.derivative_norm(v)};
  auto finish = [&] {
    result.covariance = CovarianceMatrix(sys.to_matrix(v));
    result.time = static_cast<double>(result.steps) * dt;
    return result;
  };
  if (result.derivative_norm < tol) return finish();

  const auto max_steps = static_cast<unsigned long long>(std::floor(t_end / dt));
  auto advance = [&](const AffineStep& s) {
    v = sys.symmetrize(s.apply(v));
    result.steps += s.steps;
    result.derivative_norm = sys.derivative_norm(v);
    return result.derivative_norm < tol;
  };

  // Blocks of 1, 2, 4, ... steps: checks after 1, 3, 7, ... steps.
  std::vector<AffineStep> powers{sys.step};
  while (result.steps + powers.back().steps <= max_steps) {
    if (advance(powers.back())) return finish();
    powers.push_back(powers.back().squared());
  }
  // Spend what is left of the step budget, largest block first.
  for (std::size_t k = powers.size(); k-- > 0;) {
    while (result.steps + powers[k].steps <= max_steps) {
      if (advance(powers[k])) return finish();
    }
  }
  throw Error(ErrorCode::NotConverged,
              "moment integration reached t_end with ||dV/dt|| = " +
                  std::to_string(result.derivative_norm));
}

CovarianceMatrix integrate_moments(const MatrixX& R, const MatrixX& D, const MatrixX& V0,
                                   double t_end, double dt) {
  return integrate_moments_detailed(R, D, V0, t_end, dt).covariance;
}

}  // namespace optoent
