#include "nnl/pair_table.hpp"

#include <cmath>
#include <numbers>

#include "nnl/parallel.hpp"

namespace nnl {

double cell_pair_weight(const Grid& grid, const Kernel& kernel, int cell_i, int cell_j) {
    return integrate_pair(kernel, grid.geom_of_cell(cell_i), grid.geom_of_cell(cell_j)).w_ij;
}

QuadratureTable build_pair_table(const Grid& grid, const Kernel& kernel) {
    const int n = grid.n_active();
    const double vol = grid.volume();
    const double drop = grid.epsilon_gamma;
    const double reach = kernel.horizon
                             ? *kernel.horizon + grid.h * std::sqrt(double(grid.dim)) * 1.001
                             : std::numeric_limits<double>::infinity();

    // Unordered pairs (a<b) with at least one Ω side, partitioned by the lower
    // dof so each worker owns a disjoint slice; per-slice triplet lists are
    // concatenated in slice order, keeping the assembly deterministic.
    using Trip = Eigen::Triplet<double>;
    const int workers = std::max(1, std::min(worker_count(), grid.n_omega));
    std::vector<std::vector<Trip>> wtrip(static_cast<size_t>(workers)),
        mtrip(static_cast<size_t>(workers));

    parallel_for(workers, [&](int slice) {
        auto& wt = wtrip[static_cast<size_t>(slice)];
        auto& mt = mtrip[static_cast<size_t>(slice)];
        for (int a = slice; a < grid.n_omega; a += workers) {
            const CellGeom ga = grid.geom_of_dof(a);
            const Point ca = grid.center_of_dof(a);
            for (int b = a + 1; b < n; ++b) {
                if ((grid.center_of_dof(b) - ca).norm() > reach) continue;
                PairWeights pw = integrate_pair(kernel, ga, grid.geom_of_dof(b));
                if (pw.w_ij <= drop && pw.w_ji <= drop) continue;
                const double mtag = static_cast<double>(pw.method) + 1.0;
                wt.emplace_back(a, b, pw.w_ij);
                wt.emplace_back(b, a, pw.w_ji);
                mt.emplace_back(a, b, mtag);
                mt.emplace_back(b, a, mtag);
            }
        }
    });

    std::vector<Trip> wall, mall;
    for (int s = 0; s < workers; ++s) {
        wall.insert(wall.end(), wtrip[static_cast<size_t>(s)].begin(),
                    wtrip[static_cast<size_t>(s)].end());
        mall.insert(mall.end(), mtrip[static_cast<size_t>(s)].begin(),
                    mtrip[static_cast<size_t>(s)].end());
    }

    QuadratureTable t;
    t.w.resize(n, n);
    t.method.resize(n, n);
    t.w.setFromTriplets(wall.begin(), wall.end());
    t.method.setFromTriplets(mall.begin(), mall.end());
    t.w.makeCompressed();
    t.method.makeCompressed();

    t.row_sum_first = Eigen::VectorXd::Zero(n);
    t.row_sum_second = Eigen::VectorXd::Zero(n);
    t.total_pair_mass = 0;
    for (int a = 0; a < n; ++a) {
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(t.w, a); it; ++it) {
            const int b = static_cast<int>(it.col());
            t.total_pair_mass += it.value();
            // w(a,b) contributes to ∫_Ω γ(c_b, ·) when a∈Ω (first-slot sum at b)
            if (grid.is_omega_dof(a)) t.row_sum_first[b] += it.value() / vol;
            // and to ∫_Ω γ(·, c_a) when b∈Ω (first slot ranges over Ω)
            if (grid.is_omega_dof(b)) t.row_sum_second[a] += it.value() / vol;
        }
    }

    if (kernel.power_law) {
        const double beta = kernel.power_law->exponent, A = kernel.power_law->amplitude;
        const double R = grid.truncation_radius;
        if (grid.dim == 1 && beta > 1)
            t.truncated_tail_mass = 2.0 * A * std::pow(R, 1.0 - beta) / (beta - 1.0);
        else if (grid.dim == 2 && beta > 2)
            t.truncated_tail_mass =
                2.0 * std::numbers::pi * A * std::pow(R, 2.0 - beta) / (beta - 2.0);
    }
    return t;
}

} // namespace nnl
