#pragma once

#include <functional>

#include "nnl/grid.hpp"

namespace nnl {

/// Piecewise-constant function on the active cells (Ω ∪ Γ ∪ Γ̂\Γ) of a grid:
/// one value per dof in the grid's dof order (Ω block, Γ block, Γ̂\Γ block).
/// Fields representing data supported on a subset (f on Ω, g on Γ, …) carry
/// zeros elsewhere.
struct DiscreteField {
    const Grid* grid = nullptr;
    Eigen::VectorXd values;

    DiscreteField() = default;
    explicit DiscreteField(const Grid& g) : grid(&g), values(Eigen::VectorXd::Zero(g.n_active())) {}
    DiscreteField(const Grid& g, Eigen::VectorXd v) : grid(&g), values(std::move(v)) {
        if (values.size() != g.n_active())
            throw ContractError("DiscreteField: value count must equal active cell count");
    }

    double& operator[](int k) { return values[k]; }
    double operator[](int k) const { return values[k]; }
    int size() const { return static_cast<int>(values.size()); }

    /// Ω-block view (first n_omega dofs).
    auto omega() { return values.head(grid->n_omega); }
    auto omega() const { return values.head(grid->n_omega); }
    /// Boundary-block view (Γ then Γ̂\Γ).
    auto boundary() { return values.tail(grid->n_boundary()); }
    auto boundary() const { return values.tail(grid->n_boundary()); }
    /// Γ-block view.
    auto gamma() { return values.segment(grid->n_omega, grid->n_gamma); }
    auto gamma() const { return values.segment(grid->n_omega, grid->n_gamma); }
};

/// Samples a scalar function of the cell center on the given tags (others 0).
DiscreteField sample_field(const Grid& grid, const std::function<double(const Point&)>& f,
                           bool on_omega = true, bool on_boundary = true);

/// Mean of u over Ω: (Σ_Ω u·vol)/λ(Ω).
double omega_mean(const DiscreteField& u);

/// Subtracts the Ω-mean from all components (the u − u_Ω gauge that fixes
/// the constant freedom of pure-flux problems).
DiscreteField mean_center(const DiscreteField& u);

} // namespace nnl
