#include "optoent/reduced_model.hpp"

#include <cmath>

#include "optoent/errors.hpp"

namespace optoent {
namespace {

using Matrix3c = Eigen::Matrix3cd;

// Real quadrature drift for ż = A z + B z̄ with z_k = (x_k + i y_k)/√2.
Matrix6 quadrature_drift(const Matrix3c& A, const Matrix3c& B) {
  Matrix6 R;
  for (int k = 0; k < 3; ++k) {
    for (int l = 0; l < 3; ++l) {
      const double ar = A(k, l).real(), ai = A(k, l).imag();
      const double br = B(k, l).real(), bi = B(k, l).imag();
      R(2 * k, 2 * l) = ar + br;
      R(2 * k, 2 * l + 1) = -ai + bi;
      R(2 * k + 1, 2 * l) = ai + bi;
      R(2 * k + 1, 2 * l + 1) = ar - br;
    }
  }
  return R;
}

}  // namespace

ReducedModel effective_rates(const SteadyState& ss, const SystemParams& p) {
  ReducedModel rm;
  const double x = 2.0 * ss.delta_a_eff / p.kappa;  // 2Δ̃_a/κ
  const double lorentz = 1.0 + x * x;

  rm.G = p.g0 * std::sqrt(ss.n_s);
  rm.gamma_b = 4.0 * p.g * p.g / p.kappa / lorentz;
  rm.gamma_c = 4.0 * rm.G * rm.G / p.kappa / lorentz;
  rm.Gamma_b = p.gamma + rm.gamma_b;
  rm.dw_ex = rm.gamma_b * ss.delta_a_eff / p.kappa;
  rm.dw_m = 2.0 * rm.gamma_c * ss.delta_a_eff / p.kappa;

  const complex phase = complex{1.0, x} / std::sqrt(lorentz);
  rm.lambda_b = std::sqrt(rm.gamma_b) * phase;
  rm.lambda_c = std::sqrt(rm.gamma_c) * phase;
  rm.G_bc = std::sqrt(rm.gamma_b * rm.gamma_c) * complex{1.0, x};

  const complex b2 = ss.b_s * ss.b_s;
  rm.Gamma_b_plus = rm.Gamma_b + 4.0 * p.alpha * b2.imag();
  rm.Gamma_b_minus = rm.Gamma_b - 4.0 * p.alpha * b2.imag();
  const double shifted = ss.delta_ex_eff - rm.dw_ex;
  rm.Delta_ex_plus = shifted + 2.0 * p.alpha * b2.real();
  rm.Delta_ex_minus = shifted - 2.0 * p.alpha * b2.real();
  return rm;
}

Matrix4 build_R(const ReducedModel& rm, const SteadyState&, const SystemParams& p,
                CouplingSign sign) {
  const double re = rm.G_bc.real();
  const double im = rm.G_bc.imag();
  const double r13 = sign == CouplingSign::Printed ? re : -re;
  Matrix4 R;
  // clang-format off
  R << -0.5 * rm.Gamma_b_minus, -rm.Delta_ex_plus,          r13,                     0.0,
        rm.Delta_ex_minus,      -0.5 * rm.Gamma_b_plus,     -im,                     0.0,
        0.0,                     0.0,                       -0.5 * p.gamma_m,        p.omega_m,
       -im,                     -re,                        -(p.omega_m + 2.0 * rm.dw_m), -0.5 * p.gamma_m;
  // clang-format on
  return R;
}

Matrix4 build_D(const ReducedModel& rm, const SystemParams& p) {
  const double thermal = 0.5 * p.gamma_m * (2.0 * p.n_th + 1.0);
  const double cross = std::sqrt(rm.gamma_b * rm.gamma_c);
  Matrix4 D = Matrix4::Zero();
  D(0, 0) = 0.5 * rm.Gamma_b;
  D(1, 1) = 0.5 * rm.Gamma_b;
  D(2, 2) = thermal;
  D(3, 3) = 2.0 * rm.gamma_c + thermal;
  D(1, 3) = D(3, 1) = cross;
  return D;
}

ReducedModel reduce(const SteadyState& ss, const SystemParams& p, CouplingSign sign) {
  ReducedModel rm = effective_rates(ss, p);
  rm.R = build_R(rm, ss, p, sign);
  rm.D = build_D(rm, p);
  return rm;
}

FullModel full_model_matrices(const SteadyState& ss, const SystemParams& p, int omega_m_sign) {
  if (omega_m_sign != 1 && omega_m_sign != -1) {
    throw Error(ErrorCode::InvalidArgument, "omega_m_sign must be +1 or -1");
  }
  constexpr int a = 0, b = 1, c = 2;
  const double G = p.g0 * std::sqrt(ss.n_s);
  const complex i{0.0, 1.0};

  Matrix3c A = Matrix3c::Zero();
  Matrix3c B = Matrix3c::Zero();
  // δȧ = (−κ/2 + iΔ̃_a)δa + g δb + G(δc + δc†)
  A(a, a) = complex{-0.5 * p.kappa, ss.delta_a_eff};
  A(a, b) = p.g;
  A(a, c) = G;
  B(a, c) = G;
  // δḃ = (−γ/2 + iΔ̃_ex)δb − g δa − 2iα b̄_s² δb†
  A(b, b) = complex{-0.5 * p.gamma, ss.delta_ex_eff};
  A(b, a) = -p.g;
  B(b, b) = -2.0 * i * p.alpha * ss.b_s * ss.b_s;
  // δċ = (−γ_m/2 ± iω_m)δc + G(δa† − δa)
  A(c, c) = complex{-0.5 * p.gamma_m, omega_m_sign * p.omega_m};
  A(c, a) = -G;
  B(c, a) = G;

  FullModel fm;
  fm.R = quadrature_drift(A, B);
  const double thermal = 0.5 * p.gamma_m * (2.0 * p.n_th + 1.0);
  fm.D.diagonal() << 0.5 * p.kappa, 0.5 * p.kappa, 0.5 * p.gamma, 0.5 * p.gamma, thermal, thermal;
  return fm;
}

}  // namespace optoent
