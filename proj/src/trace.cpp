#include "nnl/trace.hpp"

namespace nnl {

namespace {
using RowIt = Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator;

bool is_gamma_dof(const Grid& grid, int k) {
    return k >= grid.n_omega && k < grid.n_omega + grid.n_gamma;
}
} // namespace

Eigen::VectorXd interior_boundary_density(const Grid& grid, const QuadratureTable& table) {
    const double vol = grid.volume();
    Eigen::VectorXd d = Eigen::VectorXd::Zero(grid.n_omega);
    for (int i = 0; i < grid.n_omega; ++i)
        for (RowIt it(table.w, i); it; ++it)
            if (is_gamma_dof(grid, static_cast<int>(it.col()))) d[i] += it.value() / vol;
    return d;
}

Eigen::VectorXd trace_weights(const Grid& grid, const QuadratureTable& table, int variant,
                              double c) {
    if (variant == 2) return table.row_sum_first.segment(grid.n_omega, grid.n_gamma);
    if (variant != 1) throw ContractError("trace_weights: variant must be 1 or 2");
    if (c < 0.0) throw ContractError("trace_weights: shift c must be nonnegative");
    const Eigen::VectorXd d = interior_boundary_density(grid, table);
    if (c == 0.0 && (d.size() == 0 || d.minCoeff() <= 0.0))
        throw HypothesisError(
            "trace_weights: weight is degenerate (an interior cell receives no mass from the "
            "two-sided boundary); choose a shift c > 0");
    const double vol = grid.volume();
    Eigen::VectorXd w = Eigen::VectorXd::Zero(grid.n_gamma);
    for (int i = 0; i < grid.n_omega; ++i) {
        const double denom = d[i] + c;
        for (RowIt it(table.w, i); it; ++it) {
            const int k = static_cast<int>(it.col());
            if (is_gamma_dof(grid, k)) w[k - grid.n_omega] += it.value() / denom / vol;
        }
    }
    return w;
}

double w_norm_squared(const Grid& grid, const QuadratureTable& table, double c,
                      const Eigen::VectorXd& v_gamma) {
    if (v_gamma.size() != grid.n_gamma)
        throw ContractError("w_norm_squared: data must have one value per Gamma cell");
    const double vol = grid.volume();
    const Eigen::VectorXd w1 = trace_weights(grid, table, 1, c);
    double point = 0.0;
    for (int k = 0; k < grid.n_gamma; ++k) point += v_gamma[k] * v_gamma[k] * w1[k] * vol;

    // q(k,l) = Σ_i w(i,k) w(i,l) / (vol (D_i + c)) = (Ŵᵀ Ŵ)(k,l) with
    // Ŵ(i,k) = w(i,k)/√(vol(D_i+c)).
    const Eigen::VectorXd d = interior_boundary_density(grid, table);
    Eigen::MatrixXd what = Eigen::MatrixXd::Zero(grid.n_omega, grid.n_gamma);
    for (int i = 0; i < grid.n_omega; ++i) {
        const double beta = vol * (d[i] + c);
        if (beta <= 0.0) continue; // no Γ mass reaches this cell and c = 0
        const double scale = 1.0 / std::sqrt(beta);
        for (RowIt it(table.w, i); it; ++it) {
            const int k = static_cast<int>(it.col());
            if (is_gamma_dof(grid, k)) what(i, k - grid.n_omega) = it.value() * scale;
        }
    }
    const Eigen::MatrixXd q = what.transpose() * what;
    double semi = 0.0;
    for (int k = 0; k < grid.n_gamma; ++k)
        for (int l = 0; l < grid.n_gamma; ++l) {
            const double diff = v_gamma[k] - v_gamma[l];
            semi += diff * diff * q(k, l);
        }
    return point + semi;
}

DiscreteField extend_smoothing(const Grid& grid, const QuadratureTable& table, double c,
                               const Eigen::VectorXd& v_gamma) {
    if (v_gamma.size() != grid.n_gamma)
        throw ContractError("extend_smoothing: data must have one value per Gamma cell");
    if (c < 0.0) throw ContractError("extend_smoothing: shift c must be nonnegative");
    const double vol = grid.volume();
    const Eigen::VectorXd d = interior_boundary_density(grid, table);
    DiscreteField out(grid);
    for (int i = 0; i < grid.n_omega; ++i) {
        const double beta = vol * (d[i] + c);
        if (beta <= 0.0) continue;
        double num = 0.0;
        for (RowIt it(table.w, i); it; ++it) {
            const int k = static_cast<int>(it.col());
            if (is_gamma_dof(grid, k)) num += v_gamma[k - grid.n_omega] * it.value();
        }
        out.values[i] = num / beta;
    }
    out.gamma() = v_gamma;
    return out;
}

double extension_energy(const Grid& grid, const QuadratureTable& table, const DiscreteField& u) {
    if (u.size() != grid.n_active()) throw ContractError("extension_energy: field/grid mismatch");
    const double vol = grid.volume();
    double s = 0.0;
    for (int i = 0; i < grid.n_omega; ++i) s += u.values[i] * u.values[i] * vol;
    for (int i = 0; i < grid.n_omega; ++i)
        for (RowIt it(table.w, i); it; ++it) {
            const int k = static_cast<int>(it.col());
            if (k < grid.n_omega) continue;
            const double diff = u.values[i] - u.values[k];
            s += it.value() * diff * diff;
        }
    return s;
}

DiscreteField ext_zero(const Grid& grid, const Eigen::VectorXd& v_gamma) {
    if (v_gamma.size() != grid.n_gamma)
        throw ContractError("ext_zero: data must have one value per Gamma cell");
    DiscreteField out(grid);
    out.gamma() = v_gamma;
    return out;
}

DiscreteField extend_weighted_average(const Grid& grid, const QuadratureTable& table,
                                      const DiscreteField& u) {
    if (u.size() != grid.n_active())
        throw ContractError("extend_weighted_average: field/grid mismatch");
    const int n = grid.n_active();
    Eigen::VectorXd num = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < grid.n_omega; ++i)
        for (RowIt it(table.w, i); it; ++it) {
            const int k = static_cast<int>(it.col());
            if (k >= grid.n_omega) num[k] += u.values[i] * it.value();
        }
    DiscreteField out(grid);
    out.omega() = u.omega();
    const double vol = grid.volume();
    for (int k = grid.n_omega; k < n; ++k) {
        const double mass = vol * table.row_sum_first[k];
        out.values[k] = mass > 0.0 ? num[k] / mass : 0.0;
    }
    return out;
}

SurjectivityCheck check_trace_surjectivity_condition(const Grid& grid,
                                                     const QuadratureTable& table, double c) {
    if (c < 0.0)
        throw ContractError("check_trace_surjectivity_condition: shift c must be nonnegative");
    const double vol = grid.volume();
    const double vol2 = vol * vol;
    const Eigen::VectorXd d = interior_boundary_density(grid, table);

    // kappa(l, i) ≈ k(s_l, x_i) = γ(s_l, x_i) / (∫_Γ γ(z, x_i)dz + c).
    Eigen::MatrixXd kappa = Eigen::MatrixXd::Zero(grid.n_gamma, grid.n_omega);
    for (int i = 0; i < grid.n_omega; ++i) {
        const double denom = d[i] + c;
        if (denom <= 0.0) continue; // then every w(i,l), l∈Γ, vanishes as well
        for (RowIt it(table.w, i); it; ++it) {
            const int k = static_cast<int>(it.col());
            if (is_gamma_dof(grid, k)) kappa(k - grid.n_omega, i) = it.value() / vol2 / denom;
        }
    }

    Eigen::VectorXd acc_first = Eigen::VectorXd::Zero(grid.n_omega);
    Eigen::VectorXd acc_second = Eigen::VectorXd::Zero(grid.n_omega);
    for (int i = 0; i < grid.n_omega; ++i) {
        for (RowIt it(table.w, i); it; ++it) {
            const int j = static_cast<int>(it.col());
            if (j >= grid.n_omega) continue;
            double osc = 0.0; // ∫_Γ (k(s,x_i)−k(s,x_j))² / (k(s,x_i)+k(s,x_j)) ds
            for (int l = 0; l < grid.n_gamma; ++l) {
                const double sum = kappa(l, i) + kappa(l, j);
                if (sum <= 0.0) continue;
                const double diff = kappa(l, i) - kappa(l, j);
                osc += vol * diff * diff / sum;
            }
            acc_first[i] += it.value() * osc;  // γ(y,x_i)dy weight, sup over x
            acc_second[j] += it.value() * osc; // same integrand, sup over y
        }
    }
    SurjectivityCheck out;
    out.e1 = grid.n_omega > 0 ? acc_first.maxCoeff() : 0.0;
    out.e2 = grid.n_omega > 0 ? acc_second.maxCoeff() : 0.0;
    return out;
}

} // namespace nnl
