#pragma once

#include <Eigen/Sparse>

#include "nnl/field.hpp"
#include "nnl/pair_table.hpp"

namespace nnl {

/// Symmetric graph-difference quadratic form
///
///   Q(u, v) = Σ_pairs c_p (u_a − u_b)(v_a − v_b) + Σ_k d_k u_k v_k,
///
/// stored as an explicit pair list so that
///   * Q(1, v) = Σ d_k v_k exactly (the pair part annihilates constants in
///     floating point, not just in exact arithmetic), and
///   * Q(u, u) ≥ 0 exactly when all c_p, d_k ≥ 0.
/// This is the backbone for stiffness matrices, energy (semi)norms and Gram
/// matrices where the discrete counterparts of integration-by-parts
/// identities must hold to rounding accuracy.
struct DifferenceForm {
    int n = 0;                   ///< number of dofs
    std::vector<int> a, b;       ///< pair endpoints, a[p] < b[p]
    std::vector<double> c;       ///< pair coefficients
    Eigen::VectorXd diag;        ///< pointwise (potential) coefficients, size n

    explicit DifferenceForm(int n_dofs = 0) : n(n_dofs), diag(Eigen::VectorXd::Zero(n_dofs)) {}

    void add_pair(int i, int j, double coeff) {
        if (i == j) throw ContractError("DifferenceForm: pair endpoints must differ");
        a.push_back(std::min(i, j));
        b.push_back(std::max(i, j));
        c.push_back(coeff);
    }

    /// y = A u where A is the matrix of the form.
    Eigen::VectorXd apply(const Eigen::VectorXd& u) const;
    /// Q(u, u).
    double energy(const Eigen::VectorXd& u) const;
    /// Q(u, v).
    double energy(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;
    /// Assembled sparse matrix (symmetric, both triangles stored).
    Eigen::SparseMatrix<double> matrix() const;
};

/// Energy form of the diffusion operator for symmetric kernels, over all
/// active dofs.  Pair coefficients: interior pair {i,j} ⊂ Ω gets
/// (w(i,j)+w(j,i))/2, interior–boundary pair {i,k} gets w(i,k).  Its matrix K
/// satisfies, exactly at the quadrature level,
///   (K u)_i = vol·(ℒu)_i   on interior rows,
///   (K u)_k = vol·(𝒩u)_k   on boundary rows,
/// so a single assembly serves both the interior equation and the flux
/// condition.  Requires a symmetric kernel (the two halves of the identity
/// split otherwise).
DifferenceForm stiffness_form(const Grid& grid, const QuadratureTable& table, const Kernel& kernel);

/// Seminorm part of the V-norm, over all active dofs:
///   |u|²_V = Σ_{i∈Ω, j≠i} w(i,j) (u_i − u_j)²
/// as unordered pairs (interior pair coefficient w(i,j)+w(j,i), boundary pair
/// coefficient w(i,k)).  ‖u‖²_V = ‖u‖²_{L²(Ω)} + |u|²_V.
DifferenceForm v_seminorm_form(const Grid& grid, const QuadratureTable& table);

/// Gram form of the zero-extension energy on interior dofs only:
///   |u|²_{V₀} = Σ_{i,j∈Ω pairs} (w(i,j)+w(j,i)) (u_i − u_j)² + Σ_i u_i² Σ_{k∉Ω} w(i,k),
/// i.e. the V-seminorm of u extended by zero outside Ω.
DifferenceForm v0_gram_form(const Grid& grid, const QuadratureTable& table);

/// Matrix of the (generally nonsymmetric) energy form associated with the
/// operator pair (ℒ + α, 𝒩): row block i ∈ Ω carries vol·(ℒu + α u)_i, row
/// block k ∉ Ω carries vol·(𝒩u)_k.  Built from the antisymmetrized
/// first-order form, so row sums reproduce the operators exactly for any
/// weight table; for symmetric kernels it reduces to the stiffness matrix
/// plus the α potential.  alpha is a field over active dofs (only the
/// interior block is read).
Eigen::SparseMatrix<double> assemble_nonsym(const Grid& grid, const QuadratureTable& table,
                                            const Eigen::VectorXd& alpha);

/// Diffusion operator applied pointwise on interior cells,
///   (ℒu)_i = [ u_i Σ_{a≠i} w(a,i) − Σ_{a≠i} u_a w(i,a) ] / vol,
/// the midpoint discretization of ∫ u(x)γ(x,y) − u(y)γ(y,x) dy.  Works for
/// arbitrary (nonsymmetric) tables.  Returns interior values only.
Eigen::VectorXd apply_diffusion(const Grid& grid, const QuadratureTable& table,
                                const DiscreteField& u);

/// Nonlocal flux on boundary cells,
///   (𝒩u)_k = [ u_k Σ_{i∈Ω} w(i,k) − Σ_{i∈Ω} u_i w(k,i) ] / vol,
/// the midpoint discretization of ∫_Ω u(y)γ(y,x) − u(x)γ(x,y) dx for y
/// outside Ω.  On cells reached only in the outgoing orientation the first
/// sum vanishes at the weight level, so the reduced flux −∫_Ω u(x)γ(x,y)dx
/// emerges automatically.  Returns boundary-block values (Γ then Γ̂\Γ).
Eigen::VectorXd apply_flux(const Grid& grid, const QuadratureTable& table, const DiscreteField& u);

/// Diagonal of the L²(Ω) mass matrix over all active dofs: vol on interior
/// dofs, 0 on boundary dofs (or vol everywhere with include_boundary).
Eigen::VectorXd mass_diagonal(const Grid& grid, bool include_boundary = false);

} // namespace nnl
