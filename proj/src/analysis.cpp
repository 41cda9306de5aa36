#include "nnl/analysis.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace nnl {

namespace {
using RowIt = Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator;

Eigen::VectorXd column_sums(const Eigen::SparseMatrix<double, Eigen::RowMajor>& w) {
    Eigen::VectorXd s = Eigen::VectorXd::Zero(w.cols());
    for (int r = 0; r < w.rows(); ++r)
        for (RowIt it(w, r); it; ++it) s[it.col()] += it.value();
    return s;
}

Eigen::VectorXd expand_alpha(const Grid& grid, const Eigen::VectorXd& alpha) {
    if (alpha.size() == 0) return Eigen::VectorXd::Zero(grid.n_omega);
    if (alpha.size() == grid.n_omega || alpha.size() == grid.n_active())
        return alpha.head(grid.n_omega);
    throw ContractError("alpha must cover the interior dofs");
}
} // namespace

GreenReport verify_green_identity(const Grid& grid, const QuadratureTable& table,
                                  const DiscreteField& u, const DiscreteField& v,
                                  const Eigen::VectorXd& alpha) {
    if (u.size() != grid.n_active() || v.size() != grid.n_active())
        throw ContractError("verify_green_identity: fields must live on the active cells");
    const Eigen::VectorXd a_in = expand_alpha(grid, alpha);
    const double vol = grid.volume();

    // Form side: unordered pairs; the two orientations of an interior pair
    // contribute identical terms, collapsing to one product per pair.
    double form = 0.0;
    for (int i = 0; i < grid.n_omega; ++i) {
        for (RowIt it(table.w, i); it; ++it) {
            const int j = static_cast<int>(it.col());
            if (j <= i) continue;
            const double w_ij = it.value();
            const double w_ji = table.w.coeff(j, i);
            form += (u.values[i] * w_ji - u.values[j] * w_ij) * (v.values[i] - v.values[j]);
        }
    }
    for (int i = 0; i < grid.n_omega; ++i) form += a_in[i] * u.values[i] * v.values[i] * vol;

    // Operator side.
    const Eigen::VectorXd lu = apply_diffusion(grid, table, u);
    const Eigen::VectorXd nu = apply_flux(grid, table, u);
    double op = 0.0;
    for (int i = 0; i < grid.n_omega; ++i)
        op += (lu[i] + a_in[i] * u.values[i]) * v.values[i] * vol;
    for (int k = 0; k < grid.n_boundary(); ++k)
        op += nu[k] * v.values[grid.n_omega + k] * vol;

    GreenReport rep;
    rep.form_value = form;
    rep.operator_value = op;
    rep.residual = std::abs(form - op);
    rep.residual_special = std::abs(lu.sum() * vol + nu.sum() * vol);
    return rep;
}

namespace {
constexpr int kDensePencilLimit = 2500;

void require_dense_size(int n, const char* what) {
    if (n > kDensePencilLimit)
        throw HypothesisError(std::string(what) +
                              ": constant estimation uses dense eigensolves and is limited to " +
                              std::to_string(kDensePencilLimit) + " active cells");
}
} // namespace

ConstantReport estimate_poincare(const Grid& grid, const QuadratureTable& table) {
    const int n = grid.n_active();
    require_dense_size(n, "estimate_poincare");
    const double vol = grid.volume();
    const double lam = grid.omega_measure();

    Eigen::VectorXd m = Eigen::VectorXd::Zero(n);
    m.head(grid.n_omega).setConstant(vol);
    Eigen::MatrixXd p = -2.0 * m * m.transpose();
    for (int i = 0; i < grid.n_omega; ++i) p(i, i) += 2.0 * lam * vol;

    const Eigen::MatrixXd d = Eigen::MatrixXd(v_seminorm_form(grid, table).matrix());
    const Eigen::MatrixXd z = mean_zero_basis(n);
    const PencilEigen pe =
        largest_pencil_eigenvalue(z.transpose() * p * z, z.transpose() * d * z);

    ConstantReport rep;
    rep.name = "poincare";
    rep.method = "generalized eigensolve of the mean-oscillation/V-seminorm pencil "
                 "on the complement of constants";
    rep.value = pe.value;
    rep.infinite = pe.infinite;
    return rep;
}

PoincareSufficiency check_poincare_sufficient_conditions(const Grid& grid, const Kernel& kernel,
                                                         double pair_distance) {
    PoincareSufficiency out;
    out.pair_distance = pair_distance;
    const double vol = grid.volume();
    const int n = grid.n_active();

    double uniform = 0.0;
    for (int y = 0; y < n; ++y) {
        const Point cy = grid.center_of_dof(y);
        double mn = std::numeric_limits<double>::infinity();
        for (int x = 0; x < grid.n_omega; ++x) {
            mn = std::min(mn, kernel.eval(cy, grid.center_of_dof(x)));
            if (mn == 0.0) break;
        }
        if (grid.n_omega > 0) uniform += vol * mn;
    }
    out.uniform_mass = uniform;
    if (uniform > 0.0) out.bound = 2.0 * grid.omega_measure() / uniform;

    double pair_min = std::numeric_limits<double>::infinity();
    for (int x = 0; x < grid.n_omega; ++x) {
        const Point cx = grid.center_of_dof(x);
        for (int y = x + 1; y < grid.n_omega; ++y) {
            const Point cy = grid.center_of_dof(y);
            if ((cx - cy).norm() >= pair_distance) continue;
            double s = 0.0;
            for (int z = 0; z < n; ++z) {
                const Point cz = grid.center_of_dof(z);
                s += vol * std::min(kernel.eval(cz, cx), kernel.eval(cz, cy));
            }
            pair_min = std::min(pair_min, s);
        }
    }
    out.pair_mass = pair_min;
    return out;
}

ConstantReport estimate_friedrichs(const Grid& grid, const QuadratureTable& table) {
    require_dense_size(grid.n_omega, "estimate_friedrichs");
    const Eigen::MatrixXd m =
        (grid.volume() * Eigen::VectorXd::Ones(grid.n_omega)).asDiagonal();
    const Eigen::MatrixXd d0 = Eigen::MatrixXd(v0_gram_form(grid, table).matrix());
    const PencilEigen pe = largest_pencil_eigenvalue(m, d0);

    ConstantReport rep;
    rep.name = "friedrichs";
    rep.method = "generalized eigensolve of the mass/zero-extension-energy pencil";
    rep.value = pe.value;
    rep.infinite = pe.infinite;
    return rep;
}

ConstantReport trace_operator_norm(const Grid& grid, const QuadratureTable& table, double c) {
    const int m = grid.n_omega + grid.n_gamma;
    require_dense_size(m, "trace_operator_norm");
    const double vol = grid.volume();

    const Eigen::VectorXd w1 = trace_weights(grid, table, 1, c);
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int k = 0; k < grid.n_gamma; ++k) t(grid.n_omega + k, grid.n_omega + k) = w1[k] * vol;

    // V-norm Gram on fields vanishing on the outflow-only cells: the full
    // Gram's leading block (pairs into dropped cells survive as diagonal).
    Eigen::MatrixXd g =
        Eigen::MatrixXd(v_seminorm_form(grid, table).matrix()).topLeftCorner(m, m);
    for (int i = 0; i < grid.n_omega; ++i) g(i, i) += vol;

    const PencilEigen pe = largest_pencil_eigenvalue(t, g);
    const double essinf = grid.n_omega > 0
                              ? interior_boundary_density(grid, table).minCoeff()
                              : 0.0;

    ConstantReport rep;
    rep.name = "trace_norm_squared";
    rep.method = "generalized eigensolve of the weighted-trace/V-norm pencil";
    rep.value = pe.value;
    rep.infinite = pe.infinite;
    rep.bound = 2.0 * std::max(1.0 / (essinf + c), 1.0);
    rep.bound_provenance = "2·max{1/(essinf_x ∫_Γ γ(z,x)dz + c), 1}";
    if (!rep.infinite) rep.margin = *rep.bound - rep.value;
    return rep;
}

RobinIdentityReport verify_robin_identity(const Grid& grid, const QuadratureTable& table,
                                          const Eigen::VectorXd& alpha,
                                          const Eigen::VectorXd& g) {
    const RobinKernelSet set = robin_transform(grid, table, alpha, g);
    const int n_om = grid.n_omega;
    const double vol = grid.volume();

    const Eigen::VectorXd colsum_all = column_sums(table.w);
    const Eigen::VectorXd colsum_w = column_sums(set.gamma_alpha);

    std::vector<Eigen::VectorXd> probes;
    probes.push_back(Eigen::VectorXd::Ones(n_om));
    {
        Eigen::VectorXd p(n_om);
        for (int i = 0; i < n_om; ++i) {
            const Point c = grid.center_of_dof(i);
            p[i] = c[0] + 0.5 * c[1];
        }
        probes.push_back(p);
        for (int i = 0; i < n_om; ++i)
            p[i] = std::sin(3.0 * p[i]) + 0.25 * p[i] * p[i];
        probes.push_back(p);
    }
    {
        std::mt19937_64 rng(0x726f62696eULL);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        Eigen::VectorXd p(n_om);
        for (int i = 0; i < n_om; ++i) p[i] = dist(rng);
        probes.push_back(p);
    }

    RobinIdentityReport rep;
    for (const Eigen::VectorXd& u : probes) {
        const Eigen::VectorXd ug = robin_boundary_values(grid, table, set, u);
        for (int i = 0; i < n_om; ++i) {
            // Coupled row i with boundary values eliminated: vol·(ℒu)_i.
            double coupled = u[i] * colsum_all[i];
            for (RowIt it(table.w, i); it; ++it) {
                const int j = static_cast<int>(it.col());
                if (j < n_om)
                    coupled -= u[j] * it.value();
                else if (j < n_om + grid.n_gamma)
                    coupled -= ug[j - n_om] * it.value();
                // outflow-only cells carry no boundary value
            }
            // Interior reformulation row i.
            double regional = u[i] * colsum_w[i];
            for (RowIt it(set.gamma_alpha, i); it; ++it) regional -= u[it.col()] * it.value();
            regional += set.gamma_alpha_omega[i] * vol * u[i] - set.g_source[i] * vol;
            rep.elimination_residual = std::max(rep.elimination_residual,
                                                std::abs(coupled - regional));
        }
    }
    rep.compatibility_residual =
        std::abs(set.g_source.sum() * vol - g.sum() * vol);
    return rep;
}

double v1_norm_squared(const Grid& grid, const QuadratureTable& table,
                       const RobinKernelSet& zero_alpha_set, const Eigen::VectorXd& u_omega) {
    (void)table;
    if (u_omega.size() != grid.n_omega)
        throw ContractError("v1_norm_squared: need one value per interior dof");
    double s = 0.0;
    for (int i = 0; i < grid.n_omega; ++i) {
        for (RowIt it(zero_alpha_set.gamma_alpha, i); it; ++it) {
            const int j = static_cast<int>(it.col());
            if (j <= i) continue;
            const double c = it.value() + zero_alpha_set.gamma_alpha.coeff(j, i);
            const double diff = u_omega[i] - u_omega[j];
            s += c * diff * diff;
        }
    }
    return s;
}

EmbeddingReport verify_regional_embeddings(const Grid& grid, const QuadratureTable& table,
                                           const Kernel& kernel, const DiscreteField& u) {
    if (!kernel.symmetric)
        throw ContractError("verify_regional_embeddings: requires a symmetric kernel");
    if (u.size() != grid.n_active())
        throw ContractError("verify_regional_embeddings: field must live on the active cells");
    const double vol = grid.volume();
    const Eigen::VectorXd u_om = u.omega();

    const DifferenceForm d_full = v_seminorm_form(grid, table);
    const DifferenceForm d_zero = v0_gram_form(grid, table);
    const RobinKernelSet zero_set =
        robin_transform(grid, table, Eigen::VectorXd::Zero(grid.n_gamma),
                        Eigen::VectorXd::Zero(grid.n_gamma));

    const double l2_om = vol * u_om.squaredNorm();
    const double v1_sq = l2_om + v1_norm_squared(grid, table, zero_set, u_om);

    EmbeddingReport rep;
    {
        DiscreteField z(grid);
        z.omega() = u_om;
        const double lhs = l2_om + d_zero.energy(u_om);
        const double rhs = l2_om + d_full.energy(z.values);
        rep.isometry_residual = std::abs(lhs - rhs);
    }
    {
        const DiscreteField tilde = extend_weighted_average(grid, table, u);
        const double v_sq = vol * tilde.omega().squaredNorm() + d_full.energy(tilde.values);
        rep.extension_ratio = v1_sq > 0.0 ? std::sqrt(v_sq / v1_sq) : 0.0;
    }
    {
        const double v_sq = l2_om + d_full.energy(u.values);
        rep.restriction_ratio = v_sq > 0.0 ? std::sqrt(v1_sq / v_sq) : 0.0;
    }
    return rep;
}

NonsymCoercivity check_nonsym_coercivity(const Grid& grid, const QuadratureTable& table,
                                         const Eigen::VectorXd& alpha) {
    const Eigen::VectorXd a_in = expand_alpha(grid, alpha);
    const int n_om = grid.n_omega;
    const double vol = grid.volume();

    NonsymCoercivity out;
    double ratio = 0.0;
    bool infinite = false;
    Eigen::VectorXd basym = Eigen::VectorXd::Zero(n_om);
    Eigen::VectorXd rowsum_om = Eigen::VectorXd::Zero(n_om);
    Eigen::VectorXd colsum_om = Eigen::VectorXd::Zero(n_om);

    for (int i = 0; i < n_om; ++i)
        for (RowIt it(table.w, i); it; ++it) {
            const int j = static_cast<int>(it.col());
            if (j < n_om) {
                rowsum_om[i] += it.value();
                colsum_om[j] += it.value();
            }
        }
    for (int k = n_om; k < grid.n_active(); ++k) {
        for (RowIt it(table.w, k); it; ++it) {
            const int i = static_cast<int>(it.col());
            const double w_ki = it.value();            // outgoing toward Ω
            const double w_ik = table.w.coeff(i, k);   // incoming from Ω
            basym[i] += std::abs(w_ki - w_ik);
            if (w_ik > 0.0)
                ratio = std::max(ratio, w_ki / w_ik);
            else if (w_ki > 0.0)
                infinite = true;
        }
    }

    out.orientation_bound = infinite ? std::numeric_limits<double>::infinity() : ratio;
    out.orientation_bound_infinite = infinite;
    out.pointwise.resize(n_om);
    for (int i = 0; i < n_om; ++i) {
        const double sign_part = (colsum_om[i] - rowsum_om[i]) / (2.0 * vol);
        double penalty;
        if (basym[i] == 0.0)
            penalty = 0.0;
        else if (infinite)
            penalty = std::numeric_limits<double>::infinity();
        else
            penalty = (ratio + 1.0) * basym[i] / (2.0 * vol);
        out.pointwise[i] = a_in[i] + sign_part - penalty;
    }
    out.margin = n_om > 0 ? out.pointwise.minCoeff() : 0.0;
    return out;
}

} // namespace nnl
