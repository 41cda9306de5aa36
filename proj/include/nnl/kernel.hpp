#pragma once

#include <functional>
#include <optional>
#include <string>

#include "nnl/domain.hpp"

namespace nnl {

/// Radial power-law structure γ(y,x) = amplitude · ‖x−y‖^(−exponent) inside the
/// horizon. Carried as metadata by make_fractional so pair integration can use
/// exact antiderivatives near the singularity (1-D) instead of quadrature.
struct PowerLaw {
    double amplitude = 1.0;
    double exponent = 0.0;
};

/// Interaction kernel γ. eval(a,b) returns γ(a,b) — note the argument order:
/// the operator ℒu(x) = ∫ u(x)γ(x,y) − u(y)γ(y,x) dy pairs the *first* slot
/// with the point mass sits at. Kernels must be measurable and nonnegative;
/// constructors sample-check nonnegativity but cannot prove it.
struct Kernel {
    int dim = 1;

    /// Pointwise evaluation γ(a,b). Must be finite wherever called; pair
    /// integration never evaluates at a==b for kernels with a declared
    /// singular_exponent.
    std::function<double(const Point&, const Point&)> eval;

    /// Declared symmetry γ(a,b) = γ(b,a). Enables the symmetric assembly
    /// paths and Γ̂ = Γ.
    bool symmetric = false;

    /// Interaction radius: γ(a,b) = 0 whenever ‖a−b‖ ≥ horizon. Unset means
    /// no compact support is promised (e.g. fractional kernels).
    std::optional<double> horizon;

    /// β with γ ~ ‖x−y‖^(−β) as y→x. Unset means bounded near the diagonal.
    /// Pair integration requires β < dim + 1 for touching cells (integrability
    /// of the double integral); larger exponents are rejected as unsupported.
    std::optional<double> singular_exponent;

    /// Regional kernel: vanishes whenever either argument is outside Ω, so
    /// Γ = ∅ and the Neumann operator carries no information.
    bool regional = false;

    std::string label;

    /// Set when the kernel is exactly amplitude·r^(−exponent) within the
    /// horizon; unlocks closed-form near-diagonal cell-pair integrals.
    std::optional<PowerLaw> power_law;
};

/// Constant kernel truncated at radius delta:
///   γ(a,b) = amplitude · 1{‖a−b‖ < delta}.
/// Symmetric, bounded, horizon = delta. Throws ContractError for
/// delta ≤ 0 or amplitude < 0.
Kernel make_truncated_constant(double delta, double amplitude, int dim);

/// Fractional-type kernel γ(a,b) = ‖a−b‖^(−dim−2s), s ∈ (0,1).
/// Symmetric, no horizon, singular_exponent = dim+2s, power-law metadata set.
/// Throws ContractError unless 0 < s < 1 (and dim+2s < dim+1, i.e. s < 1/2,
/// is required later by pair integration for touching cells).
Kernel make_fractional(double s, int dim);

/// Transposed kernel γᵀ(a,b) = γ(b,a). Involutive; preserves horizon and
/// singularity metadata; symmetric kernels are returned unchanged.
Kernel transpose(const Kernel& gamma);

/// Symmetrization outside Ω×Ω: keeps η on Ω×Ω and replaces the value on pairs
/// with at least one argument outside Ω by ½(η(a,b) + η(b,a)). Used to build
/// kernels that are symmetric across the boundary while keeping an asymmetric
/// interior part.
Kernel symmetrize_outside(const Kernel& eta, const OmegaSpec& omega);

/// Auxiliary comparison kernel from the nonsymmetric well-posedness theory:
///   γ̃(y,x) = max{ γ(y,x), (γ(x,y) − γ(y,x))² / k(y,x) }
/// for a caller-supplied positive kernel k. Where k vanishes the second
/// argument of the max is treated as +∞ unless the numerator also vanishes
/// (then γ̃ = γ). The overload without k uses k ≡ 1.
Kernel tilde_gamma(const Kernel& gamma, const Kernel& k);
Kernel tilde_gamma(const Kernel& gamma);

/// Sample-based sanity check used by constructors and tests: evaluates the
/// kernel on a deterministic scatter of point pairs in [-box,box]^dim and
/// throws ContractError on a negative or non-finite value (diagonal excluded
/// for singular kernels).
void check_kernel_samples(const Kernel& gamma, double box_halfwidth);

} // namespace nnl
