#include "nnl/solve.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <Eigen/SparseCholesky>

#include "nnl/analysis.hpp"

namespace nnl {

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return "converged";
        case SolveStatus::Incompatible: return "incompatible";
        case SolveStatus::Singular: return "singular";
        case SolveStatus::Unsupported: return "unsupported";
    }
    return "unknown";
}

double compatibility_defect(const Grid& grid, const Eigen::VectorXd& f,
                            const Eigen::VectorXd& g) {
    if (f.size() != grid.n_omega || g.size() != grid.n_boundary())
        throw ContractError("compatibility_defect: f is interior data, g boundary data");
    return grid.volume() * (f.sum() + g.sum());
}

namespace {

Eigen::VectorXd form_diagonal(const DifferenceForm& form) {
    Eigen::VectorXd d = form.diag;
    for (std::size_t p = 0; p < form.c.size(); ++p) {
        d[form.a[p]] += form.c[p];
        d[form.b[p]] += form.c[p];
    }
    return d;
}

Eigen::VectorXd safe_inverse(const Eigen::VectorXd& d) {
    Eigen::VectorXd inv(d.size());
    for (int i = 0; i < d.size(); ++i) inv[i] = d[i] > 0.0 ? 1.0 / d[i] : 1.0;
    return inv;
}

struct IterResult {
    Eigen::VectorXd x;
    int iterations = 0;
    bool converged = false;
};

/// Jacobi-preconditioned CG; `project` keeps iterates inside the solvable
/// subspace for singular (constant-kernel) systems.
template <class ApplyFn, class ProjectFn>
IterResult preconditioned_cg(ApplyFn&& apply, const Eigen::VectorXd& b,
                             const Eigen::VectorXd& inv_diag, double tol, int maxit,
                             ProjectFn&& project) {
    IterResult res;
    const int n = static_cast<int>(b.size());
    res.x = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd r = b;
    project(r);
    const double bnorm = std::max(r.norm(), 1e-300);
    Eigen::VectorXd z = inv_diag.cwiseProduct(r);
    project(z);
    Eigen::VectorXd p = z;
    double rz = r.dot(z);
    for (int it = 0; it < maxit; ++it) {
        if (r.norm() <= tol * bnorm) {
            res.converged = true;
            return res;
        }
        Eigen::VectorXd ap = apply(p);
        const double pap = p.dot(ap);
        if (!(pap > 0.0)) return res; // lost positivity: caller reports failure
        const double alpha = rz / pap;
        res.x += alpha * p;
        r -= alpha * ap;
        project(r);
        z = inv_diag.cwiseProduct(r);
        project(z);
        const double rz_new = r.dot(z);
        p = z + (rz_new / rz) * p;
        rz = rz_new;
        res.iterations = it + 1;
    }
    res.converged = r.norm() <= tol * bnorm;
    return res;
}

int iteration_cap(const SolveOptions& opts, int n) {
    return opts.max_iterations > 0 ? opts.max_iterations : 10 * std::max(n, 100);
}

/// Mean-constrained solve of K x + μ m = b, mᵀx = 0, for a symmetric
/// positive-semidefinite difference form whose null space is the constants.
SolveReport saddle_solve(const DifferenceForm& k, const Eigen::VectorXd& b,
                         const Eigen::VectorXd& m, double defect_scale,
                         const SolveOptions& opts) {
    SolveReport rep;
    const int n = k.n;
    const double defect = b.sum();
    rep.compatibility_defect = defect;
    rep.multiplier = defect / m.sum();

    if (n + 1 <= opts.direct_size_limit) {
        std::vector<Eigen::Triplet<double>> trips;
        const Eigen::SparseMatrix<double> km = k.matrix();
        trips.reserve(km.nonZeros() + 2 * n);
        for (int c = 0; c < km.outerSize(); ++c)
            for (Eigen::SparseMatrix<double>::InnerIterator it(km, c); it; ++it)
                trips.emplace_back(static_cast<int>(it.row()), c, it.value());
        for (int i = 0; i < n; ++i)
            if (m[i] != 0.0) {
                trips.emplace_back(i, n, m[i]);
                trips.emplace_back(n, i, m[i]);
            }
        Eigen::SparseMatrix<double> sys(n + 1, n + 1);
        sys.setFromTriplets(trips.begin(), trips.end());
        sys.makeCompressed();
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(sys);
        if (lu.info() != Eigen::Success) {
            rep.status = SolveStatus::Singular;
            return rep;
        }
        Eigen::VectorXd rhs(n + 1);
        rhs.head(n) = b;
        rhs[n] = 0.0;
        const Eigen::VectorXd sol = lu.solve(rhs);
        rep.solution.values = sol.head(n);
        rep.multiplier = sol[n];
    } else {
        const Eigen::VectorXd b_proj = b - rep.multiplier * m;
        const Eigen::VectorXd inv_diag = safe_inverse(form_diagonal(k));
        auto project = [](Eigen::VectorXd& v) { v.array() -= v.mean(); };
        IterResult res = preconditioned_cg([&](const Eigen::VectorXd& v) { return k.apply(v); },
                                           b_proj, inv_diag, opts.cg_tol,
                                           iteration_cap(opts, n), project);
        if (!res.converged) {
            rep.status = SolveStatus::Singular;
            return rep;
        }
        // Shift to the representative with zero constrained mean.
        res.x.array() -= m.dot(res.x) / m.sum();
        rep.solution.values = res.x;
        rep.iterations = res.iterations;
    }
    rep.residual_2norm = (k.apply(rep.solution.values) + rep.multiplier * m - b).norm();
    const double rel = std::abs(defect) / std::max(1.0, defect_scale);
    rep.status = rel > opts.compat_tol ? SolveStatus::Incompatible : SolveStatus::Converged;
    return rep;
}

/// Direct or iterative solve of an SPD difference-form system (K + diag)x = b.
SolveReport spd_solve(const DifferenceForm& k, const Eigen::VectorXd& b,
                      const SolveOptions& opts) {
    SolveReport rep;
    const int n = k.n;
    if (n <= opts.direct_size_limit) {
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(k.matrix());
        if (ldlt.info() != Eigen::Success) {
            rep.status = SolveStatus::Singular;
            return rep;
        }
        rep.solution.values = ldlt.solve(b);
    } else {
        const Eigen::VectorXd inv_diag = safe_inverse(form_diagonal(k));
        IterResult res = preconditioned_cg([&](const Eigen::VectorXd& v) { return k.apply(v); },
                                           b, inv_diag, opts.cg_tol, iteration_cap(opts, n),
                                           [](Eigen::VectorXd&) {});
        if (!res.converged) {
            rep.status = SolveStatus::Singular;
            return rep;
        }
        rep.solution.values = res.x;
        rep.iterations = res.iterations;
    }
    rep.residual_2norm = (k.apply(rep.solution.values) - b).norm();
    rep.status = SolveStatus::Converged;
    return rep;
}

Eigen::VectorXd flux_rhs(const Grid& grid, const Eigen::VectorXd& f, const Eigen::VectorXd& g) {
    if (f.size() != grid.n_omega || g.size() != grid.n_boundary())
        throw ContractError("flux problem data: f per interior dof, g per boundary dof");
    Eigen::VectorXd b(grid.n_active());
    b.head(grid.n_omega) = f * grid.volume();
    b.tail(grid.n_boundary()) = g * grid.volume();
    return b;
}

} // namespace

SolveReport solve_neumann(const Grid& grid, const QuadratureTable& table, const Kernel& kernel,
                          const Eigen::VectorXd& f, const Eigen::VectorXd& g,
                          const SolveOptions& opts) {
    const Eigen::VectorXd b = flux_rhs(grid, f, g);
    const DifferenceForm k = stiffness_form(grid, table, kernel);
    Eigen::VectorXd m = Eigen::VectorXd::Zero(grid.n_active());
    m.head(grid.n_omega).setConstant(grid.volume());
    SolveReport rep = saddle_solve(k, b, m, b.lpNorm<1>(), opts);
    if (rep.solution.values.size() == grid.n_active()) rep.solution.grid = &grid;
    return rep;
}

SolveReport solve_regularized(const Grid& grid, const QuadratureTable& table, const Kernel& kernel,
                              const Eigen::VectorXd& f, const Eigen::VectorXd& g,
                              const Eigen::VectorXd& kappa, const SolveOptions& opts) {
    if (kappa.size() != grid.n_omega)
        throw ContractError("solve_regularized: kappa needs one value per interior dof");
    if (kappa.minCoeff() < 0.0)
        throw HypothesisError("solve_regularized: kappa must be nonnegative");
    const Eigen::VectorXd b = flux_rhs(grid, f, g);
    DifferenceForm k = stiffness_form(grid, table, kernel);
    if (kappa.maxCoeff() <= 0.0) {
        SolveReport rep;
        rep.status = SolveStatus::Singular; // no zero-order term anywhere: constants unfixed
        return rep;
    }
    k.diag.head(grid.n_omega) += kappa * grid.volume();
    SolveReport rep = spd_solve(k, b, opts);
    if (rep.solution.values.size() == grid.n_active()) rep.solution.grid = &grid;
    return rep;
}

SolveReport solve_nonsymmetric(const Grid& grid, const QuadratureTable& table,
                               const Kernel& kernel, const Eigen::VectorXd& f,
                               const Eigen::VectorXd& g, const Eigen::VectorXd& alpha,
                               const SolveOptions& opts) {
    (void)kernel;
    const NonsymCoercivity cert = check_nonsym_coercivity(grid, table, alpha);
    SolveReport rep;
    if (!(cert.margin > 0.0)) {
        rep.status = SolveStatus::Unsupported;
        return rep;
    }
    const Eigen::VectorXd b = flux_rhs(grid, f, g);
    Eigen::VectorXd a_in = alpha.size() == grid.n_active() ? alpha.head(grid.n_omega).eval()
                                                           : alpha;
    const Eigen::SparseMatrix<double> a = assemble_nonsym(grid, table, a_in);
    const int n = grid.n_active();
    if (n <= opts.direct_size_limit) {
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(a);
        if (lu.info() != Eigen::Success) {
            rep.status = SolveStatus::Singular;
            return rep;
        }
        rep.solution.values = lu.solve(b);
    } else {
        Eigen::BiCGSTAB<Eigen::SparseMatrix<double>> bicg(a);
        bicg.setTolerance(opts.cg_tol);
        bicg.setMaxIterations(iteration_cap(opts, n));
        rep.solution.values = bicg.solve(b);
        rep.iterations = static_cast<int>(bicg.iterations());
        if (bicg.info() != Eigen::Success) {
            rep.status = SolveStatus::Singular;
            return rep;
        }
    }
    rep.solution.grid = &grid;
    rep.residual_2norm = (a * rep.solution.values - b).norm();
    rep.status = SolveStatus::Converged;
    return rep;
}

SolveReport solve_dirichlet_v0(const Grid& grid, const QuadratureTable& table,
                               const Kernel& kernel, const Eigen::VectorXd& f,
                               const SolveOptions& opts) {
    if (!kernel.symmetric)
        throw ContractError("solve_dirichlet_v0: requires a symmetric kernel");
    if (f.size() != grid.n_omega)
        throw ContractError("solve_dirichlet_v0: f needs one value per interior dof");
    const DifferenceForm d0 = v0_gram_form(grid, table);
    SolveReport rep = spd_solve(d0, f * grid.volume(), opts);
    if (rep.status != SolveStatus::Converged) return rep;
    DiscreteField full(grid);
    full.omega() = rep.solution.values;
    rep.solution = std::move(full);
    return rep;
}

SolveReport solve_robin_regional(const Grid& grid, const QuadratureTable& table,
                                 const Kernel& kernel, const Eigen::VectorXd& f,
                                 const Eigen::VectorXd& alpha, const Eigen::VectorXd& g,
                                 const SolveOptions& opts) {
    if (!kernel.symmetric)
        throw ContractError("solve_robin_regional: requires a symmetric kernel");
    if (f.size() != grid.n_omega)
        throw ContractError("solve_robin_regional: f needs one value per interior dof");
    const RobinKernelSet set = robin_transform(grid, table, alpha, g);
    const int n_om = grid.n_omega;
    const double vol = grid.volume();

    DifferenceForm k(n_om);
    for (int i = 0; i < n_om; ++i)
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(set.gamma_alpha, i);
             it; ++it) {
            const int j = static_cast<int>(it.col());
            if (j > i) k.add_pair(i, j, 0.5 * (it.value() + set.gamma_alpha.coeff(j, i)));
        }
    k.diag = set.gamma_alpha_omega * vol;
    const Eigen::VectorXd b = (f + set.g_source) * vol;

    SolveReport rep;
    if (set.gamma_alpha_omega.maxCoeff() <= 0.0) {
        // Pure flux regime (α ≡ 0, no one-sided absorption): mean-constrained.
        const Eigen::VectorXd m = Eigen::VectorXd::Constant(n_om, vol);
        rep = saddle_solve(k, b, m, b.lpNorm<1>(), opts);
    } else {
        rep = spd_solve(k, b, opts);
    }
    if (rep.status == SolveStatus::Singular) return rep;

    DiscreteField full(grid);
    full.omega() = rep.solution.values;
    full.gamma() = robin_boundary_values(grid, table, set, rep.solution.values);
    rep.solution = std::move(full);
    return rep;
}

TransformedProblem transform_nonhom_to_hom(const Grid& grid, const QuadratureTable& table,
                                           const Eigen::VectorXd& f, const Eigen::VectorXd& g) {
    if (f.size() != grid.n_omega || g.size() != grid.n_boundary())
        throw ContractError("transform_nonhom_to_hom: f per interior dof, g per boundary dof");
    const double vol = grid.volume();
    TransformedProblem out;
    out.g_lift = DiscreteField(grid);
    for (int kb = 0; kb < grid.n_boundary(); ++kb) {
        const double rho = table.row_sum_first[grid.n_omega + kb];
        const bool liftable = rho > grid.epsilon_gamma && rho <= 1.0 / grid.epsilon_gamma;
        if (!liftable) {
            if (g[kb] != 0.0)
                throw HypothesisError(
                    "transform_nonhom_to_hom: boundary datum prescribed on a cell whose incoming "
                    "kernel mass is zero (or numerically unbounded); no lift exists there");
            continue;
        }
        out.g_lift.values[grid.n_omega + kb] = g[kb] / rho;
    }
    out.f_new = f;
    for (int i = 0; i < grid.n_omega; ++i)
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(table.w, i); it; ++it)
            if (it.col() >= grid.n_omega)
                out.f_new[i] += out.g_lift.values[it.col()] * it.value() / vol;
    out.defect_original = vol * (f.sum() + g.sum());
    out.defect_transformed = vol * out.f_new.sum();
    return out;
}

} // namespace nnl
