#include "nnl/robin.hpp"

namespace nnl {

namespace {
using RowIt = Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator;
} // namespace

RobinKernelSet robin_transform(const Grid& grid, const QuadratureTable& table,
                               const Eigen::VectorXd& alpha, const Eigen::VectorXd& g,
                               double denom_threshold) {
    if (alpha.size() != grid.n_gamma || g.size() != grid.n_gamma)
        throw ContractError("robin_transform: alpha and g need one value per Gamma cell");
    for (int k = 0; k < grid.n_gamma; ++k)
        if (!(alpha[k] >= 0.0 && alpha[k] <= 1.0))
            throw HypothesisError("robin_transform: alpha must take values in [0,1]");

    const int n_om = grid.n_omega;
    const double vol = grid.volume();

    RobinKernelSet set;
    set.alpha = alpha;
    set.g = g;
    set.c_weights.resize(grid.n_gamma);
    for (int k = 0; k < grid.n_gamma; ++k) {
        const double sp = table.row_sum_first[n_om + k];
        const double denom = (1.0 - alpha[k]) * sp + alpha[k];
        if (denom < denom_threshold)
            throw HypothesisError(
                "robin_transform: flux-condition denominator (1-alpha)S' + alpha is numerically "
                "zero on a Gamma cell; the boundary value there is not determined");
        set.c_weights[k] = 1.0 / denom;
    }

    // Dense accumulation of γ_α: the boundary bounce couples every interior
    // pair that shares a Γ neighbor, which is close to dense anyway.
    Eigen::MatrixXd wmat = Eigen::MatrixXd::Zero(n_om, n_om);
    for (int i = 0; i < n_om; ++i)
        for (RowIt it(table.w, i); it; ++it)
            if (it.col() < n_om) wmat(i, static_cast<int>(it.col())) = it.value();

    set.gamma_alpha_omega = Eigen::VectorXd::Zero(n_om);
    set.g_source = Eigen::VectorXd::Zero(n_om);

    // Per boundary cell: incoming weights w(i,k) (stored on interior rows)
    // and outgoing weights w(k,j) (stored on the boundary row).
    std::vector<std::vector<std::pair<int, double>>> incoming(grid.n_boundary());
    for (int i = 0; i < n_om; ++i)
        for (RowIt it(table.w, i); it; ++it)
            if (it.col() >= n_om)
                incoming[static_cast<int>(it.col()) - n_om].emplace_back(i, it.value());

    for (int kb = 0; kb < grid.n_boundary(); ++kb) {
        const int row = n_om + kb;
        const bool on_gamma = kb < grid.n_gamma;
        if (on_gamma) {
            const double bounce = (1.0 - alpha[kb]) * set.c_weights[kb] / vol;
            if (bounce != 0.0) {
                for (const auto& [i, w_ik] : incoming[kb])
                    for (RowIt it(table.w, row); it; ++it)
                        wmat(i, static_cast<int>(it.col())) += w_ik * bounce * it.value();
            }
            const double source = set.c_weights[kb] * g[kb] / vol;
            for (const auto& [i, w_ik] : incoming[kb]) set.g_source[i] += source * w_ik;
            const double absorb = alpha[kb] * set.c_weights[kb] / vol;
            for (RowIt it(table.w, row); it; ++it)
                set.gamma_alpha_omega[static_cast<int>(it.col())] += absorb * it.value();
        } else {
            // One-sided cells: no flux condition applies, the full outgoing
            // mass acts as a potential on the interior.
            for (RowIt it(table.w, row); it; ++it)
                set.gamma_alpha_omega[static_cast<int>(it.col())] += it.value() / vol;
        }
    }

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(n_om) * n_om);
    for (int i = 0; i < n_om; ++i)
        for (int j = 0; j < n_om; ++j)
            if (i != j && wmat(i, j) != 0.0) trips.emplace_back(i, j, wmat(i, j));
    set.gamma_alpha.resize(n_om, n_om);
    set.gamma_alpha.setFromTriplets(trips.begin(), trips.end());
    set.gamma_alpha.makeCompressed();
    return set;
}

Eigen::VectorXd robin_boundary_values(const Grid& grid, const QuadratureTable& table,
                                      const RobinKernelSet& set,
                                      const Eigen::VectorXd& u_omega) {
    if (u_omega.size() != grid.n_omega)
        throw ContractError("robin_boundary_values: need one value per interior dof");
    const double vol = grid.volume();
    Eigen::VectorXd out(grid.n_gamma);
    for (int k = 0; k < grid.n_gamma; ++k) {
        double flux_in = 0.0; // Σ_i u_i w(k,i) / vol
        for (RowIt it(table.w, grid.n_omega + k); it; ++it)
            flux_in += u_omega[it.col()] * it.value();
        out[k] = set.c_weights[k] * (set.g[k] + (1.0 - set.alpha[k]) * flux_in / vol);
    }
    return out;
}

} // namespace nnl
