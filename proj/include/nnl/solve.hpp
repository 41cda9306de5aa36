#pragma once

#include "nnl/robin.hpp"

namespace nnl {

enum class SolveStatus {
    Converged = 0,
    Incompatible = 1, ///< data violates the solvability condition; projected problem solved
    Singular = 2,     ///< system has no stable factorization / iteration, no solution returned
    Unsupported = 3,  ///< hypotheses for the requested solver fail (e.g. no coercivity margin)
};
std::string to_string(SolveStatus s);

struct SolveOptions {
    double cg_tol = 1e-12;        ///< relative residual target for iterative paths
    int direct_size_limit = 20000; ///< above this many unknowns, switch to iterative solvers
    double compat_tol = 1e-10;     ///< relative size of the compatibility defect tolerated
    int max_iterations = -1;       ///< iterative cap; -1 means 10·n
};

struct SolveReport {
    DiscreteField solution;          ///< over all active dofs
    double multiplier = 0.0;         ///< mean-constraint multiplier (pure flux problems)
    double residual_2norm = 0.0;     ///< ‖A u − b‖₂ of the system actually solved
    double compatibility_defect = 0.0; ///< ∫_Ω f + ∫_boundary g (0 required for pure flux data)
    int iterations = 0;              ///< 0 for direct factorizations
    SolveStatus status = SolveStatus::Converged;
};

/// ∫_Ω f dx + ∫ g dy over the boundary cells: the exact discrete counterpart
/// of the flux-problem solvability condition.  f has one value per interior
/// dof, g one per boundary dof (Γ then Γ̂\Γ).
double compatibility_defect(const Grid& grid, const Eigen::VectorXd& f, const Eigen::VectorXd& g);

/// Pure flux problem  ℒu = f in Ω,  𝒩u = g outside, for symmetric kernels.
/// Solved as the mean-constrained saddle system [K m; mᵀ 0][u; μ] = [b; 0]
/// with m the interior volume vector, which simultaneously fixes the additive
/// constant and projects incompatible data (μ = defect / λ(Ω)).  Status is
/// Incompatible when the defect exceeds compat_tol relative to the data size;
/// the projected solution is still returned.
SolveReport solve_neumann(const Grid& grid, const QuadratureTable& table, const Kernel& kernel,
                          const Eigen::VectorXd& f, const Eigen::VectorXd& g,
                          const SolveOptions& opts = {});

/// Zero-order-regularized problem  ℒu + κu = f in Ω,  𝒩u = g outside, with
/// κ ≥ 0 and κ > 0 somewhere; the system matrix K + diag(κ·vol) is positive
/// definite on constants again, so no compatibility condition applies.
SolveReport solve_regularized(const Grid& grid, const QuadratureTable& table, const Kernel& kernel,
                              const Eigen::VectorXd& f, const Eigen::VectorXd& g,
                              const Eigen::VectorXd& kappa, const SolveOptions& opts = {});

/// Flux problem for general (nonsymmetric) kernels with interior potential
/// alpha ≥ 0:  ℒu + αu = f in Ω,  𝒩u = g outside.  Gated by the computable
/// coercivity certificate: without a positive margin the discrete problem may
/// be unstable and the solver reports Unsupported instead of guessing.
SolveReport solve_nonsymmetric(const Grid& grid, const QuadratureTable& table,
                               const Kernel& kernel, const Eigen::VectorXd& f,
                               const Eigen::VectorXd& g, const Eigen::VectorXd& alpha,
                               const SolveOptions& opts = {});

/// Variational problem in the zero-extension space: find u supported in Ω
/// with ⟨u, v⟩_{V₀} = ∫_Ω f v for all v, i.e. D₀ u = f·vol with D₀ the
/// zero-extension Gram matrix.  Exterior values of the returned field are 0.
SolveReport solve_dirichlet_v0(const Grid& grid, const QuadratureTable& table,
                               const Kernel& kernel, const Eigen::VectorXd& f,
                               const SolveOptions& opts = {});

/// Robin problem  ℒu = f in Ω,  (1−α)𝒩u + αu = g on Γ, for symmetric
/// kernels, via the exact interior reformulation (see robin_transform):
///   (K_{γ_α} + diag(γ_{α,Ω} vol)) u_Ω = (f + g_Γ)·vol,
/// then boundary recovery through the eliminated flux condition.  For α ≡ 0
/// the potential vanishes identically and the mean-constrained saddle variant
/// of the interior system is used (pure flux regime).
SolveReport solve_robin_regional(const Grid& grid, const QuadratureTable& table,
                                 const Kernel& kernel, const Eigen::VectorXd& f,
                                 const Eigen::VectorXd& alpha, const Eigen::VectorXd& g,
                                 const SolveOptions& opts = {});

/// Data of a flux problem transported to homogeneous boundary conditions.
/// With g̃_k = g_k / ρ_k, ρ_k = Σ_i w(i,k)/vol the incoming kernel mass, the
/// lifted field g̃·χ_boundary satisfies 𝒩(g̃χ) = g and ℒ(g̃χ) = f − f_new
/// exactly at the table level, so u solves (f, g) iff u − g̃χ solves
/// (f_new, 0); equivalently the homogeneous solution ũ yields u = ũ + g̃χ.
struct TransformedProblem {
    Eigen::VectorXd f_new;   ///< modified interior data, f_i + Σ_k g̃_k w(i,k)/vol
    DiscreteField g_lift;    ///< g̃ on boundary dofs, 0 on Ω
    double defect_original = 0.0;    ///< ∫f + ∫g
    double defect_transformed = 0.0; ///< ∫f_new; equals the original defect exactly
};

/// Builds the homogenizing lift.  Boundary cells with no incoming mass (or a
/// quadrature blow-up beyond 1/epsilon_gamma) admit no lift; nonzero g there
/// raises HypothesisError.
TransformedProblem transform_nonhom_to_hom(const Grid& grid, const QuadratureTable& table,
                                           const Eigen::VectorXd& f, const Eigen::VectorXd& g);

} // namespace nnl
