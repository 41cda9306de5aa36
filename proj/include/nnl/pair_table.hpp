#pragma once

#include <Eigen/Sparse>

#include "nnl/grid.hpp"

namespace nnl {

/// Shared cell-pair quadrature table over active dofs.
///
/// Orientation convention (used by every operator in the workbench):
///   w(a,b) = ∫_{x∈C_a} ∫_{y∈C_b} γ(y,x) dy dx,
/// i.e. the kernel's FIRST argument lives in the column cell; the midpoint
/// value is vol²·γ(c_b, c_a). Rows of Ω dofs hold all active columns; rows of
/// Γ/Γ̂ dofs hold only Ω columns (no boundary–boundary integral appears in any
/// form of the theory). Diagonal entries are never stored: each consumer pairs
/// w with a difference factor that vanishes there.
///
/// Everything downstream — ℒ, 𝒩, 𝔅, 𝔅̃, Gram matrices, trace weights, Robin
/// transform — is derived from this one table. That is what makes the
/// divergence/Green/Robin identities exact at machine precision discretely.
struct QuadratureTable {
    Eigen::SparseMatrix<double, Eigen::RowMajor> w;
    /// Same sparsity as w; value = static_cast<double>(QuadMethod)+1.
    Eigen::SparseMatrix<double, Eigen::RowMajor> method;
    /// Per active dof k: Σ_{i∈Ω} w(i,k)/vol ≈ ∫_Ω γ(c_k, x) dx
    /// (the Γ-defining integral; Robin/trace denominators).
    Eigen::VectorXd row_sum_first;
    /// Per active dof k: Σ_{i∈Ω} w(k,i)/vol ≈ ∫_Ω γ(x, c_k) dx.
    Eigen::VectorXd row_sum_second;
    /// Neglected tail ∫_{‖z‖>R} γ for power-law kernels (diagnostic; 0 otherwise).
    double truncated_tail_mass = 0;
    /// Σ of all stored weights; the natural scale for exactness tolerances.
    double total_pair_mass = 0;

    QuadMethod method_of(int a, int b) const {
        double m = method.coeff(a, b);
        return m == 0 ? QuadMethod::Midpoint : static_cast<QuadMethod>(static_cast<int>(m) - 1);
    }
};

/// Builds the table for all needed pairs (Ω×active and Γ̂×Ω), dropping pairs
/// whose weights in both orientations are ≤ grid.epsilon_gamma.
QuadratureTable build_pair_table(const Grid& grid, const Kernel& kernel);

/// Single ordered pair weight w(i,j) between two grid cells (by cell index,
/// not dof). Exposed for oracle tests and diagnostics.
double cell_pair_weight(const Grid& grid, const Kernel& kernel, int cell_i, int cell_j);

} // namespace nnl
