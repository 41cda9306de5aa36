#include "nnl/field.hpp"

namespace nnl {

DiscreteField sample_field(const Grid& grid, const std::function<double(const Point&)>& f,
                           bool on_omega, bool on_boundary) {
    DiscreteField u(grid);
    for (int k = 0; k < grid.n_active(); ++k) {
        const bool is_om = grid.is_omega_dof(k);
        if ((is_om && on_omega) || (!is_om && on_boundary)) u.values[k] = f(grid.center_of_dof(k));
    }
    return u;
}

double omega_mean(const DiscreteField& u) {
    const Grid& g = *u.grid;
    if (g.n_omega == 0) throw ContractError("omega_mean: grid has no interior cells");
    // Uniform cell volumes cancel: mean = (Σ u_i vol)/(n vol).
    return u.values.head(g.n_omega).mean();
}

DiscreteField mean_center(const DiscreteField& u) {
    DiscreteField out = u;
    out.values.array() -= omega_mean(u);
    return out;
}

} // namespace nnl
