#pragma once

#include "nnl/assembly.hpp"

namespace nnl {

/// Data of the interior-only reformulation of the Robin problem
///   ℒu = f in Ω,   (1−α)𝒩u + α u = g on Γ,   α: Γ → [0,1].
///
/// Eliminating the boundary values through the flux condition — each u_k,
/// k ∈ Γ, satisfies u_k = c_k (g_k + (1−α_k) Σ_i u_i w(k,i)/vol) with
/// c_k = 1 / ((1−α_k) S'_k + α_k) and S'_k = Σ_i w(i,k)/vol — turns the
/// coupled system into an interior problem with
///   * a modified pair kernel  γ_α(i,j) = w(i,j) + Σ_{k∈Γ} (1−α_k) c_k w(i,k) w(k,j) / vol
///     (direct interaction plus one bounce off each boundary cell),
///   * a potential  γ_{α,Ω}(i) = [ Σ_{k∈Γ} α_k c_k w(k,i) + Σ_{k∈Γ̂\Γ} w(k,i) ] / vol,
///   * a lifted source  g_Γ(i) = Σ_{k∈Γ} c_k g_k w(i,k) / vol.
/// The elimination is exact at the weight-table level: the interior system
/// built from these quantities is the Schur complement of the coupled one,
/// entry for entry.
struct RobinKernelSet {
    /// Pair weights γ_α(i,j) over interior dofs, both orientations stored,
    /// no diagonal (diagonal terms cancel inside the diffusion operator).
    Eigen::SparseMatrix<double, Eigen::RowMajor> gamma_alpha;
    Eigen::VectorXd gamma_alpha_omega; ///< potential, one value per interior dof
    Eigen::VectorXd g_source;          ///< lifted boundary source, per interior dof
    Eigen::VectorXd c_weights;         ///< c_k per Γ dof
    Eigen::VectorXd alpha;             ///< copy of the Robin coefficient on Γ
    Eigen::VectorXd g;                 ///< copy of the boundary data on Γ
};

/// Builds the interior reformulation for coefficient alpha and data g (one
/// value per Γ cell each).  Valid for general, possibly nonsymmetric, weight
/// tables.  Throws HypothesisError if alpha leaves [0,1] or some denominator
/// (1−α_k)S'_k + α_k falls below denom_threshold (on detected Γ cells the
/// denominator is at least min(S'_k, 1) > 0 for admissible alpha).
RobinKernelSet robin_transform(const Grid& grid, const QuadratureTable& table,
                               const Eigen::VectorXd& alpha, const Eigen::VectorXd& g,
                               double denom_threshold = 1e-12);

/// Recovers the eliminated boundary values from an interior solution:
///   u_k = c_k ( g_k + (1−α_k) Σ_i u_i w(k,i)/vol ),  k ∈ Γ.
Eigen::VectorXd robin_boundary_values(const Grid& grid, const QuadratureTable& table,
                                      const RobinKernelSet& set,
                                      const Eigen::VectorXd& u_omega);

} // namespace nnl
