#include "nnl/assembly.hpp"

namespace nnl {

Eigen::VectorXd DifferenceForm::apply(const Eigen::VectorXd& u) const {
    if (u.size() != n) throw ContractError("DifferenceForm::apply: size mismatch");
    Eigen::VectorXd y = diag.cwiseProduct(u);
    for (std::size_t p = 0; p < c.size(); ++p) {
        const double d = c[p] * (u[a[p]] - u[b[p]]);
        y[a[p]] += d;
        y[b[p]] -= d;
    }
    return y;
}

double DifferenceForm::energy(const Eigen::VectorXd& u) const {
    if (u.size() != n) throw ContractError("DifferenceForm::energy: size mismatch");
    double s = 0.0;
    for (std::size_t p = 0; p < c.size(); ++p) {
        const double d = u[a[p]] - u[b[p]];
        s += c[p] * d * d;
    }
    for (int k = 0; k < n; ++k) s += diag[k] * u[k] * u[k];
    return s;
}

double DifferenceForm::energy(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
    if (u.size() != n || v.size() != n) throw ContractError("DifferenceForm::energy: size mismatch");
    double s = 0.0;
    for (std::size_t p = 0; p < c.size(); ++p)
        s += c[p] * (u[a[p]] - u[b[p]]) * (v[a[p]] - v[b[p]]);
    for (int k = 0; k < n; ++k) s += diag[k] * u[k] * v[k];
    return s;
}

Eigen::SparseMatrix<double> DifferenceForm::matrix() const {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(4 * c.size() + n);
    for (std::size_t p = 0; p < c.size(); ++p) {
        trips.emplace_back(a[p], a[p], c[p]);
        trips.emplace_back(b[p], b[p], c[p]);
        trips.emplace_back(a[p], b[p], -c[p]);
        trips.emplace_back(b[p], a[p], -c[p]);
    }
    for (int k = 0; k < n; ++k)
        if (diag[k] != 0.0) trips.emplace_back(k, k, diag[k]);
    Eigen::SparseMatrix<double> A(n, n);
    A.setFromTriplets(trips.begin(), trips.end());
    A.makeCompressed();
    return A;
}

namespace {

/// Visits every stored unordered pair {a, b} (a < b, a interior by
/// construction of the table) with both orientation weights.
template <class Visitor>
void for_each_pair(const Grid& grid, const QuadratureTable& table, Visitor&& visit) {
    for (int a = 0; a < grid.n_omega; ++a) {
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(table.w, a); it; ++it) {
            const int b = static_cast<int>(it.col());
            if (b <= a) continue;
            visit(a, b, it.value(), table.w.coeff(b, a));
        }
    }
}

} // namespace

DifferenceForm stiffness_form(const Grid& grid, const QuadratureTable& table,
                              const Kernel& kernel) {
    if (!kernel.symmetric)
        throw ContractError(
            "stiffness_form: kernel must be symmetric; use assemble_nonsym for the general form");
    DifferenceForm form(grid.n_active());
    for_each_pair(grid, table, [&](int a, int b, double w_ab, double w_ba) {
        form.add_pair(a, b, b < grid.n_omega ? 0.5 * (w_ab + w_ba) : w_ab);
    });
    return form;
}

DifferenceForm v_seminorm_form(const Grid& grid, const QuadratureTable& table) {
    DifferenceForm form(grid.n_active());
    for_each_pair(grid, table, [&](int a, int b, double w_ab, double w_ba) {
        form.add_pair(a, b, b < grid.n_omega ? w_ab + w_ba : w_ab);
    });
    return form;
}

DifferenceForm v0_gram_form(const Grid& grid, const QuadratureTable& table) {
    DifferenceForm form(grid.n_omega);
    for (int a = 0; a < grid.n_omega; ++a) {
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(table.w, a); it; ++it) {
            const int b = static_cast<int>(it.col());
            if (b >= grid.n_omega) {
                form.diag[a] += it.value(); // zero exterior value: (u_a − 0)² w(a,b)
            } else if (b > a) {
                form.add_pair(a, b, it.value() + table.w.coeff(b, a));
            }
        }
    }
    return form;
}

Eigen::SparseMatrix<double> assemble_nonsym(const Grid& grid, const QuadratureTable& table,
                                            const Eigen::VectorXd& alpha) {
    if (alpha.size() != grid.n_active() && alpha.size() != grid.n_omega)
        throw ContractError("assemble_nonsym: alpha must cover interior (or all active) dofs");
    const int n = grid.n_active();
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(4 * table.w.nonZeros() / 2 + grid.n_omega);
    for_each_pair(grid, table, [&](int a, int b, double w_ab, double w_ba) {
        trips.emplace_back(a, a, w_ba);
        trips.emplace_back(b, b, w_ab);
        trips.emplace_back(a, b, -w_ab);
        trips.emplace_back(b, a, -w_ba);
    });
    const double vol = grid.volume();
    for (int i = 0; i < grid.n_omega; ++i)
        if (alpha[i] != 0.0) trips.emplace_back(i, i, alpha[i] * vol);
    Eigen::SparseMatrix<double> A(n, n);
    A.setFromTriplets(trips.begin(), trips.end());
    A.makeCompressed();
    return A;
}

Eigen::VectorXd apply_diffusion(const Grid& grid, const QuadratureTable& table,
                                const DiscreteField& u) {
    if (u.size() != grid.n_active()) throw ContractError("apply_diffusion: field/grid mismatch");
    const int n = grid.n_active();
    Eigen::VectorXd colsum = Eigen::VectorXd::Zero(n);
    for (int r = 0; r < n; ++r)
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(table.w, r); it; ++it)
            colsum[it.col()] += it.value();
    const double vol = grid.volume();
    Eigen::VectorXd out(grid.n_omega);
    for (int i = 0; i < grid.n_omega; ++i) {
        double row_dot = 0.0;
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(table.w, i); it; ++it)
            row_dot += it.value() * u.values[it.col()];
        out[i] = (u.values[i] * colsum[i] - row_dot) / vol;
    }
    return out;
}

Eigen::VectorXd apply_flux(const Grid& grid, const QuadratureTable& table, const DiscreteField& u) {
    if (u.size() != grid.n_active()) throw ContractError("apply_flux: field/grid mismatch");
    const double vol = grid.volume();
    Eigen::VectorXd out(grid.n_boundary());
    for (int k = grid.n_omega; k < grid.n_active(); ++k) {
        double row_dot = 0.0; // Σ_{i∈Ω} u_i w(k,i); boundary rows only store interior columns
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(table.w, k); it; ++it)
            row_dot += it.value() * u.values[it.col()];
        out[k - grid.n_omega] = u.values[k] * table.row_sum_first[k] - row_dot / vol;
    }
    return out;
}

Eigen::VectorXd mass_diagonal(const Grid& grid, bool include_boundary) {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(grid.n_active());
    const int upto = include_boundary ? grid.n_active() : grid.n_omega;
    d.head(upto).setConstant(grid.volume());
    return d;
}

} // namespace nnl
