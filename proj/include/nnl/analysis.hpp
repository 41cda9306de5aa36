#pragma once

#include <optional>

#include "nnl/trace.hpp"
#include "nnl/robin.hpp"
#include "nnl/eig.hpp"

namespace nnl {

/// A numerically certified constant together with the theoretical bound it
/// is checked against (when one is available).
struct ConstantReport {
    std::string name;
    double value = 0.0;
    bool infinite = false;            ///< the supremum is unbounded (value then meaningless)
    std::optional<double> bound;      ///< theoretical upper bound, if the theory provides one
    std::string bound_provenance;     ///< closed-form expression behind `bound`
    std::string method;               ///< how `value` was computed
    double margin = 0.0;              ///< bound − value (when both finite)
};

/// Integration-by-parts check.  The first-order form
///   B(u,v) = ½ Σ_{i,j∈Ω} (u_i w(j,i) − u_j w(i,j))(v_i − v_j)
///          + Σ_{i∈Ω, k∉Ω} (u_i w(k,i) − u_k w(i,k))(v_i − v_k)
///          + Σ_{i∈Ω} α_i u_i v_i vol
/// must equal Σ_Ω (ℒu + αu) v vol + Σ_boundary (𝒩u) v vol for every pair of
/// fields and any weight table — the discrete Gauss-Green identity.  The two
/// sides are evaluated by structurally different code paths (pair-difference
/// loop vs row-sum operator applications).
struct GreenReport {
    double form_value = 0.0;      ///< B(u,v)
    double operator_value = 0.0;  ///< Σ(ℒu+αu)v vol + Σ(𝒩u)v vol
    double residual = 0.0;        ///< |form − operator|
    double residual_special = 0.0; ///< defect of the v ≡ 1 case: |Σℒu vol + Σ𝒩u vol|
};
GreenReport verify_green_identity(const Grid& grid, const QuadratureTable& table,
                                  const DiscreteField& u, const DiscreteField& v,
                                  const Eigen::VectorXd& alpha = Eigen::VectorXd());

/// Sharp constant in  2λ(Ω)‖u − ū_Ω‖²_{L²(Ω)} ≤ C |u|²_V  over fields on the
/// active cells: the largest eigenvalue of the pencil
/// 2(λ(Ω)M_Ω − m mᵀ) x = λ D x on the complement of constants, D the
/// V-seminorm Gram matrix.  Kernels whose seminorm misses some nonconstant
/// direction give an unbounded constant (infinite flag).
ConstantReport estimate_poincare(const Grid& grid, const QuadratureTable& table);

/// The two computable sufficient conditions for a Poincaré constant:
///   uniform_mass = ∫ min_{x∈Ω} γ(y, x) dy over all retained cells y
///     (if positive, C ≤ 2λ(Ω)/uniform_mass), and
///   pair_mass = min over interior pairs with |x−y| < pair_distance of
///     ∫ min(γ(z,x), γ(z,y)) dz over retained cells z
///     (a chain/overlap condition; positivity certifies finiteness).
/// Both evaluate the kernel at cell centers directly.
struct PoincareSufficiency {
    double uniform_mass = 0.0;
    double pair_mass = 0.0;
    double pair_distance = 0.0;
    std::optional<double> bound; ///< 2λ(Ω)/uniform_mass when uniform_mass > 0
};
PoincareSufficiency check_poincare_sufficient_conditions(const Grid& grid, const Kernel& kernel,
                                                         double pair_distance);

/// Sharp constant in  ‖u‖²_{L²(Ω)} ≤ C |u|²_{V₀}  over interior fields
/// (zero-extension energy): largest eigenvalue of M_Ω x = λ D₀ x.  Kernels
/// that vanish outside Ω leave constants energy-free and the constant is
/// infinite.
ConstantReport estimate_friedrichs(const Grid& grid, const QuadratureTable& table);

/// Operator norm of the trace V → L²(Γ, w) with the variant-1 weight at
/// shift c, squared: largest eigenvalue of T x = λ G x on fields supported
/// on Ω ∪ Γ, where T = diag(w_k vol) on Γ dofs and G is the V-norm Gram
/// matrix.  Theory bounds the square by 2·max{1/(essinf_x ∫_Γ γ(z,x)dz + c), 1}.
ConstantReport trace_operator_norm(const Grid& grid, const QuadratureTable& table, double c);

/// Consistency of the Robin interior reformulation: applies the coupled
/// operator rows (with boundary values eliminated through the flux condition)
/// and the reformulated interior operator to deterministic probe fields and
/// reports the largest entry-wise discrepancy, together with the defect of
/// the exact source-mass identity Σ g_Γ vol = Σ_{k∈Γ} g_k vol that holds when
/// α ≡ 0.
struct RobinIdentityReport {
    double elimination_residual = 0.0;   ///< max row discrepancy over probes
    double compatibility_residual = 0.0; ///< |Σ g_Γ vol − Σ g vol| (α ≡ 0 exact)
};
RobinIdentityReport verify_robin_identity(const Grid& grid, const QuadratureTable& table,
                                          const Eigen::VectorXd& alpha, const Eigen::VectorXd& g);

/// The three norm relations tying the interior space V₁ (L² plus the
/// α = 0 bounce-kernel seminorm), the zero-extension space V₀ and V:
///   isometry_residual:  |⟨u,u⟩_{V₀} − ‖ext₀(u|_Ω)‖²_V|    (exact identity),
///   extension_ratio:    ‖ũ‖_V / ‖u|_Ω‖_{V₁} ≤ 1 for the weighted-average
///                       extension ũ (energy-minimizing boundary values),
///   restriction_ratio:  ‖u|_Ω‖_{V₁} / ‖u‖_V ≤ 2 for any field u.
/// Ratios are of norms (not squares); 0/0 is reported as 0.
struct EmbeddingReport {
    double isometry_residual = 0.0;
    double extension_ratio = 0.0;
    double restriction_ratio = 0.0;
};
EmbeddingReport verify_regional_embeddings(const Grid& grid, const QuadratureTable& table,
                                           const Kernel& kernel, const DiscreteField& u);

/// Computable coercivity certificate for the nonsymmetric energy form with
/// interior potential alpha: with C = sup w(k,i)/w(i,k) over boundary pairs
/// (the worst orientation ratio of the kernel across ∂Ω, +∞ if mass flows
/// only one way somewhere), each interior cell carries the certified value
///   val_i = α_i + (1/2vol) Σ_{j∈Ω} (w(j,i) − w(i,j))
///               − (C+1)/(2vol) Σ_{k∉Ω} |w(k,i) − w(i,k)|,
/// and margin = min_i val_i.  A positive margin certifies unique solvability
/// of the nonsymmetric problem; symmetric kernels give val ≡ α exactly.
struct NonsymCoercivity {
    double margin = 0.0;
    double orientation_bound = 0.0;
    bool orientation_bound_infinite = false;
    Eigen::VectorXd pointwise; ///< val_i per interior dof
};
NonsymCoercivity check_nonsym_coercivity(const Grid& grid, const QuadratureTable& table,
                                         const Eigen::VectorXd& alpha);

/// Interior seminorm of the V₁ space: the ordered pair energy of the α = 0
/// bounce kernel, Σ_{pairs} (γ₀(i,j)+γ₀(j,i))(u_i−u_j)².  Exposed separately
/// because several embedding statements are phrased through it.
double v1_norm_squared(const Grid& grid, const QuadratureTable& table,
                       const RobinKernelSet& zero_alpha_set, const Eigen::VectorXd& u_omega);

} // namespace nnl
