#pragma once

#include <Eigen/Dense>

#include "optoent/params.hpp"
#include "optoent/steady_state.hpp"

namespace optoent {

using Matrix4 = Eigen::Matrix4d;
using Matrix6 = Eigen::Matrix<double, 6, 6>;

/// Which sign to use for the R(1,3) entry (the Re(G_bc) coupling of x_c into
/// the x_b equation). `Printed` keeps +Re(G_bc); `Rederived` uses −Re(G_bc),
/// which is what eliminating the cavity from the linearized equations gives.
enum class CouplingSign { Printed, Rederived };

/// Exciton-mechanics model after adiabatic elimination of the cavity.
/// Quadrature ordering (x_b, y_b, x_c, y_c).
struct ReducedModel {
  double G = 0.0;               ///< g0·sqrt(n_s) [rad/s]
  double gamma_b = 0.0;         ///< cavity-induced exciton decay [1/s]
  double gamma_c = 0.0;         ///< cavity-induced mechanical decay [1/s]
  double Gamma_b = 0.0;         ///< γ + γ_b
  double dw_ex = 0.0;           ///< exciton shift γ_bΔ̃_a/κ
  double dw_m = 0.0;            ///< mechanical shift 2γ_cΔ̃_a/κ
  complex lambda_b;             ///< exciton noise coupling, |λ_b|² = γ_b
  complex lambda_c;             ///< mechanical noise coupling, |λ_c|² = γ_c
  complex G_bc;                 ///< cross coupling sqrt(γ_bγ_c)(1 + 2iΔ̃_a/κ)
  double Gamma_b_plus = 0.0;    ///< Γ_b + 4α Im(b̄_s²)
  double Gamma_b_minus = 0.0;   ///< Γ_b − 4α Im(b̄_s²)
  double Delta_ex_plus = 0.0;   ///< Δ̃_ex − γ_bΔ̃_a/κ + 2α Re(b̄_s²)
  double Delta_ex_minus = 0.0;  ///< Δ̃_ex − γ_bΔ̃_a/κ − 2α Re(b̄_s²)
  Matrix4 R = Matrix4::Zero();
  Matrix4 D = Matrix4::Zero();
};

/// Purcell rates, shifts, noise couplings and G_bc; R and D left zero.
ReducedModel effective_rates(const SteadyState& ss, const SystemParams& p);

Matrix4 build_R(const ReducedModel& rm, const SteadyState& ss, const SystemParams& p,
                CouplingSign sign = CouplingSign::Printed);

Matrix4 build_D(const ReducedModel& rm, const SystemParams& p);

/// effective_rates + build_R + build_D.
ReducedModel reduce(const SteadyState& ss, const SystemParams& p,
                    CouplingSign sign = CouplingSign::Printed);

/// Linearized three-mode model, quadrature ordering (x_a, y_a, x_b, y_b, x_c, y_c).
struct FullModel {
  Matrix6 R = Matrix6::Zero();
  Matrix6 D = Matrix6::Zero();
};

/// Built from the linearized Langevin equations of all three fluctuations.
/// `omega_m_sign` sets the free mechanical evolution δċ = (−γ_m/2 + i·sign·ω_m)δc;
/// −1 matches the reduced model, +1 is the form written for the fluctuations.
FullModel full_model_matrices(const SteadyState& ss, const SystemParams& p,
                              int omega_m_sign = -1);

}  // namespace optoent
