#pragma once

#include "nnl/assembly.hpp"

namespace nnl {

/// Incoming boundary mass seen from each interior cell, restricted to the
/// two-sided boundary part:  D_i = (1/vol) Σ_{k∈Γ} w(i,k) ≈ ∫_Γ γ(z, x_i) dz.
/// This is the natural normalizer for trace weights: interior cells that
/// communicate strongly with Γ contribute less per unit of kernel mass.
Eigen::VectorXd interior_boundary_density(const Grid& grid, const QuadratureTable& table);

/// Weight function on Γ against which the trace is square-integrable.
/// Two variants:
///   1 (normalized):  w_k = (1/vol) Σ_{i∈Ω} w(i,k) / (D_i + c), the midpoint
///     rule for ∫_Ω γ(y,x) / (∫_Γ γ(z,x)dz + c) dx.  Satisfies the exact
///     budget Σ_k w_k·vol ≤ λ(Ω) whenever c ≥ 0; requires c > 0 unless every
///     interior cell sees Γ (D_i > 0 for all i), otherwise the weight is
///     degenerate and a HypothesisError requests a positive shift.
///   2 (plain mass):  w_k = (1/vol) Σ_{i∈Ω} w(i,k) ≈ ∫_Ω γ(y,x) dx; the c
///     argument is ignored.
/// Returns one value per Γ dof (in dof order).
Eigen::VectorXd trace_weights(const Grid& grid, const QuadratureTable& table, int variant,
                              double c = 0.0);

/// Squared boundary-space norm controlling extensions from Γ:
///   ‖v‖²_W = Σ_{k∈Γ} v_k² w_k vol
///          + Σ_{k≠l∈Γ} (v_k − v_l)² Σ_{i∈Ω} w(i,k) w(i,l) / (vol (D_i + c)),
/// with w the variant-1 weight at the same shift c.  The double sum runs over
/// ordered pairs.  Dense in the boundary size; intended for the moderate Γ
/// counts of verification runs.
double w_norm_squared(const Grid& grid, const QuadratureTable& table, double c,
                      const Eigen::VectorXd& v_gamma);

/// Kernel-smoothing extension of boundary data v: Γ → ℝ into Ω,
///   E(v)_i = Σ_{k∈Γ} v_k w(i,k) / (vol (D_i + c)),
/// the midpoint rule for ∫_Γ v(s)γ(s,x)ds / (∫_Γ γ(z,x)dz + c).  Interior
/// cells that see no boundary mass (and c = 0) receive 0.  The returned field
/// carries E(v) on Ω, v on Γ and 0 on the outflow-only cells, so its trace is
/// exactly v.
DiscreteField extend_smoothing(const Grid& grid, const QuadratureTable& table, double c,
                               const Eigen::VectorXd& v_gamma);

/// The part of the V-energy of a field that the W-norm controls:
///   ‖u‖²_{L²(Ω)} + Σ_{i∈Ω, k∉Ω} w(i,k) (u_i − u_k)².
/// For u = extend_smoothing(v) this is ≤ max{1+2c, 2}·‖v‖²_W, exactly at the
/// discrete level.
double extension_energy(const Grid& grid, const QuadratureTable& table, const DiscreteField& u);

/// Extension of boundary data by zero: 0 on Ω, v on Γ, 0 on Γ̂\Γ.  Its
/// V-energy equals the variant-2 weighted L²(Γ) norm of v exactly:
///   ‖ext_zero(v)‖²_V = Σ_k v_k² vol w^{(2)}_k.
DiscreteField ext_zero(const Grid& grid, const Eigen::VectorXd& v_gamma);

/// Extension of an interior field by its incoming-kernel weighted average,
///   ũ_k = Σ_{i∈Ω} u_i w(i,k) / Σ_{i∈Ω} w(i,k)   (0 where no mass arrives),
/// applied on every boundary cell.  This is the energy-minimizing choice of
/// boundary values pair-by-pair, which is what makes the restriction /
/// extension norm inequalities hold with their stated constants exactly.
DiscreteField extend_weighted_average(const Grid& grid, const QuadratureTable& table,
                                      const DiscreteField& u);

/// Size of the two relative-oscillation functionals whose finiteness
/// certifies that the trace reaches all of the boundary space W.  With
/// k(s,x) = γ(s,x) / (∫_Γ γ(z,x)dz + c), the functionals are
///   e1 = sup_{x∈Ω} ∫_Ω ∫_Γ (k(s,x)−k(s,y))²/(k(s,x)+k(s,y)) ds γ(y,x) dy,
///   e2 = the same expression with the sup taken over y,
/// where integrand terms with k(s,x)+k(s,y) = 0 are dropped.  Kernels whose
/// x-dependence is flat give exactly 0.
struct SurjectivityCheck {
    double e1 = 0.0;
    double e2 = 0.0;
};
SurjectivityCheck check_trace_surjectivity_condition(const Grid& grid,
                                                     const QuadratureTable& table, double c);

} // namespace nnl
