#include <doctest.h>

#include "nnl/assembly.hpp"
#include "nnl/solve.hpp"
#include "oracles.hpp"

using nnl::DiscreteField;
using nnl::Grid;
using nnl::Kernel;
using nnl::Point;
using nnl::QuadratureTable;
using nnl::SolveStatus;

namespace {

struct Fixture {
    Kernel kernel;
    Grid grid;
    QuadratureTable table;

    explicit Fixture(const Kernel& k, double h = 1.0 / 32)
        : kernel(k),
          grid(nnl::build_grid(nnl::interval(0.0, 1.0), kernel, h, 0.5)),
          table(nnl::build_pair_table(grid, kernel)) {}

    /// Exactly compatible flux data manufactured from a reference field.
    struct Data {
        DiscreteField star;
        Eigen::VectorXd f, g;
    };
    Data manufactured() const {
        DiscreteField star = nnl::sample_field(
            grid, [](const Point& p) { return std::cos(6.283185307179586 * p[0]) + 0.5 * p[0]; });
        return {star, nnl::apply_diffusion(grid, table, star), nnl::apply_flux(grid, table, star)};
    }
};

Kernel skewed_indicator() {
    Kernel k = nnl::make_truncated_constant(0.5, 1.0, 1);
    k.symmetric = false;
    k.label = "skewed-indicator";
    k.eval = [](const Point& a, const Point& b) {
        const double r = std::abs(a[0] - b[0]);
        if (r >= 0.5) return 0.0;
        return a[0] > b[0] ? 1.1 : (a[0] < b[0] ? 0.9 : 1.0);
    };
    return k;
}

Kernel one_sided_indicator() {
    Kernel k;
    k.dim = 1;
    k.symmetric = false;
    k.horizon = 0.5;
    k.label = "one-sided-indicator";
    k.eval = [](const Point& a, const Point& b) {
        return (std::abs(a[0] - b[0]) < 0.5 && a[0] > -0.1) ? 1.0 : 0.0;
    };
    return k;
}

/// Residual of the strong equations, max over all rows.
double flux_residual(const Fixture& f, const DiscreteField& u, const Eigen::VectorXd& rhs_f,
                     const Eigen::VectorXd& rhs_g, const Eigen::VectorXd* kappa = nullptr) {
    Eigen::VectorXd lu = nnl::apply_diffusion(f.grid, f.table, u);
    if (kappa) lu += kappa->cwiseProduct(u.values.head(f.grid.n_omega));
    const Eigen::VectorXd nu = nnl::apply_flux(f.grid, f.table, u);
    return std::max((lu - rhs_f).cwiseAbs().maxCoeff(), (nu - rhs_g).cwiseAbs().maxCoeff());
}

} // namespace

TEST_CASE("compatibility defect is the plain volume-weighted data sum") {
    const Fixture f(nnl::make_truncated_constant(0.5, 1.0, 1));
    Eigen::VectorXd fi = Eigen::VectorXd::Constant(f.grid.n_omega, 2.0);
    Eigen::VectorXd gb = Eigen::VectorXd::Constant(f.grid.n_boundary(), -0.5);
    const double defect = nnl::compatibility_defect(f.grid, fi, gb);
    const double expect = f.grid.volume() * (fi.sum() + gb.sum());
    CHECK(defect == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("pure flux solve: manufactured data is reproduced up to the mean gauge") {
    const Fixture f(nnl::make_truncated_constant(0.5, 1.0, 1));
    const auto data = f.manufactured();
    // Divergence structure makes manufactured data exactly compatible.
    CHECK(std::abs(nnl::compatibility_defect(f.grid, data.f, data.g)) <= 1e-12);

    const nnl::SolveReport r = nnl::solve_neumann(f.grid, f.table, f.kernel, data.f, data.g);
    CHECK(r.status == SolveStatus::Converged);
    const DiscreteField du(f.grid, r.solution.values - data.star.values);
    const DiscreteField centered = nnl::mean_center(du);
    CHECK(centered.values.cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(flux_residual(f, r.solution, data.f, data.g) <= 1e-9);
}

TEST_CASE("pure flux solve: incompatible data is projected and flagged") {
    const Fixture f(nnl::make_truncated_constant(0.5, 1.0, 1));
    const Eigen::VectorXd fi = Eigen::VectorXd::Ones(f.grid.n_omega);
    const Eigen::VectorXd gb = Eigen::VectorXd::Zero(f.grid.n_boundary());
    const nnl::SolveReport r = nnl::solve_neumann(f.grid, f.table, f.kernel, fi, gb);
    CHECK(r.status == SolveStatus::Incompatible);
    CHECK(r.solution.size() == f.grid.n_active());
    CHECK(std::isfinite(r.solution.values.cwiseAbs().maxCoeff()));
    // Projection multiplier equals defect / λ(Ω).
    CHECK(r.multiplier ==
          doctest::Approx(r.compatibility_defect / f.grid.omega_measure()).epsilon(1e-10));
    CHECK(r.compatibility_defect == doctest::Approx(f.grid.omega_measure()).epsilon(1e-12));
}

TEST_CASE("regularized solve: residual, and the zero-order term contracts correctly") {
    const Fixture f(nnl::make_truncated_constant(0.5, 1.0, 1));
    Eigen::VectorXd fi(f.grid.n_omega), kappa(f.grid.n_omega);
    for (int i = 0; i < f.grid.n_omega; ++i) {
        fi[i] = std::sin(3.0 * i);
        kappa[i] = 0.7 + 0.3 * std::cos(2.0 * i);
    }
    Eigen::VectorXd gb(f.grid.n_boundary());
    for (int k = 0; k < gb.size(); ++k) gb[k] = 0.2 * std::cos(4.0 * k);

    const nnl::SolveReport r = nnl::solve_regularized(f.grid, f.table, f.kernel, fi, gb, kappa);
    CHECK(r.status == SolveStatus::Converged);
    CHECK(flux_residual(f, r.solution, fi, gb, &kappa) <= 1e-9);

    Eigen::VectorXd bad = kappa;
    bad[2] = -1e-3;
    CHECK_THROWS_AS(nnl::solve_regularized(f.grid, f.table, f.kernel, fi, gb, bad),
                    nnl::HypothesisError);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(f.grid.n_omega);
    CHECK(nnl::solve_regularized(f.grid, f.table, f.kernel, fi, gb, zero).status ==
          SolveStatus::Singular);
}

TEST_CASE("zero-extension variational solve matches its Gram system") {
    const Fixture f(nnl::make_truncated_constant(0.5, 1.0, 1));
    Eigen::VectorXd fi(f.grid.n_omega);
    for (int i = 0; i < f.grid.n_omega; ++i) fi[i] = 1.0 + std::sin(2.0 * i);
    const nnl::SolveReport r = nnl::solve_dirichlet_v0(f.grid, f.table, f.kernel, fi);
    CHECK(r.status == SolveStatus::Converged);
    CHECK(r.solution.boundary().cwiseAbs().maxCoeff() == 0.0);

    const nnl::DifferenceForm d0 = nnl::v0_gram_form(f.grid, f.table);
    const Eigen::VectorXd res =
        d0.apply(r.solution.values.head(f.grid.n_omega)) - fi * f.grid.volume();
    CHECK(res.cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("nonsymmetric solve: certificate-gated, consistent with the symmetric path") {
    // On a symmetric kernel the certificate is exact (margin = min α) and the
    // solution agrees with the regularized symmetric solver.
    const Fixture sym(nnl::make_truncated_constant(0.5, 1.0, 1));
    const int n_om = sym.grid.n_omega;
    Eigen::VectorXd fi(n_om), alpha = Eigen::VectorXd::Ones(n_om);
    for (int i = 0; i < n_om; ++i) fi[i] = std::cos(3.0 * i);
    Eigen::VectorXd gb = Eigen::VectorXd::Zero(sym.grid.n_boundary());
    for (int k = 0; k < gb.size(); ++k) gb[k] = 0.3 * std::sin(2.0 * k);

    const nnl::SolveReport a =
        nnl::solve_nonsymmetric(sym.grid, sym.table, sym.kernel, fi, gb, alpha);
    const nnl::SolveReport b =
        nnl::solve_regularized(sym.grid, sym.table, sym.kernel, fi, gb, alpha);
    CHECK(a.status == SolveStatus::Converged);
    CHECK((a.solution.values - b.solution.values).cwiseAbs().maxCoeff() <= 1e-9);

    // Mildly skewed kernel: margin stays positive, equations are solved.
    const Fixture skew(skewed_indicator());
    Eigen::VectorXd fs(skew.grid.n_omega), as = Eigen::VectorXd::Ones(skew.grid.n_omega);
    for (int i = 0; i < skew.grid.n_omega; ++i) fs[i] = std::sin(2.0 * i);
    Eigen::VectorXd gs = Eigen::VectorXd::Zero(skew.grid.n_boundary());
    const nnl::SolveReport rs =
        nnl::solve_nonsymmetric(skew.grid, skew.table, skew.kernel, fs, gs, as);
    CHECK(rs.status == SolveStatus::Converged);
    CHECK(flux_residual(skew, rs.solution, fs, gs, &as) <= 1e-9);

    // One-sided kernel: the orientation-ratio constant is infinite, no
    // certificate exists, and the solver declines rather than guessing.
    const Fixture one(one_sided_indicator());
    Eigen::VectorXd fo = Eigen::VectorXd::Ones(one.grid.n_omega);
    const nnl::SolveReport ro =
        nnl::solve_nonsymmetric(one.grid, one.table, one.kernel, fo,
                                Eigen::VectorXd::Zero(one.grid.n_boundary()),
                                Eigen::VectorXd::Ones(one.grid.n_omega));
    CHECK(ro.status == SolveStatus::Unsupported);
}

TEST_CASE("homogenizing transform: exact data identities and solution roundtrip") {
    const Fixture f(nnl::make_truncated_constant(0.5, 1.0, 1));
    const auto data = f.manufactured();
    const nnl::TransformedProblem tp =
        nnl::transform_nonhom_to_hom(f.grid, f.table, data.f, data.g);

    const Eigen::MatrixXd w = Eigen::MatrixXd(f.table.w);
    const double vol = f.grid.volume();
    // f_new from the defining loop.
    for (int i = 0; i < f.grid.n_omega; ++i) {
        double shift = 0.0;
        for (int k = f.grid.n_omega; k < f.grid.n_active(); ++k)
            shift += tp.g_lift[k] * w(i, k) / vol;
        CHECK(tp.f_new[i] == doctest::Approx(data.f[i] + shift).epsilon(1e-12));
    }
    // The lift absorbs the boundary data exactly and only shifts the interior.
    const Eigen::VectorXd n_lift = nnl::apply_flux(f.grid, f.table, tp.g_lift);
    CHECK((n_lift - data.g).cwiseAbs().maxCoeff() <= 1e-13 * (1.0 + data.g.cwiseAbs().maxCoeff()));
    const Eigen::VectorXd l_lift = nnl::apply_diffusion(f.grid, f.table, tp.g_lift);
    CHECK((l_lift - (data.f - tp.f_new)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(tp.defect_transformed == doctest::Approx(tp.defect_original).epsilon(1e-12));

    // Solving the homogeneous problem and adding the lift solves the original.
    const Eigen::VectorXd zero_g = Eigen::VectorXd::Zero(f.grid.n_boundary());
    const nnl::SolveReport hom = nnl::solve_neumann(f.grid, f.table, f.kernel, tp.f_new, zero_g);
    CHECK(hom.status == SolveStatus::Converged);
    const DiscreteField u(f.grid, hom.solution.values + tp.g_lift.values);
    CHECK(flux_residual(f, u, data.f, data.g) <= 1e-8);

    // Boundary cells that receive no interior mass admit no lift.
    const Fixture one(one_sided_indicator());
    CHECK(one.grid.n_gamma_hat_only > 0);
    Eigen::VectorXd go = Eigen::VectorXd::Zero(one.grid.n_boundary());
    go[one.grid.n_boundary() - 1] = 1.0; // an outflow-only cell (Γ̂\Γ block is last)
    CHECK_THROWS_AS(nnl::transform_nonhom_to_hom(one.grid, one.table,
                                                 Eigen::VectorXd::Zero(one.grid.n_omega), go),
                    nnl::HypothesisError);
    go.setZero();
    CHECK_NOTHROW(nnl::transform_nonhom_to_hom(one.grid, one.table,
                                               Eigen::VectorXd::Zero(one.grid.n_omega), go));
}

TEST_CASE("iterative fallback agrees with the direct factorization") {
    const Fixture f(nnl::make_truncated_constant(0.5, 1.0, 1));
    const auto data = f.manufactured();
    nnl::SolveOptions it;
    it.direct_size_limit = 1; // force the iterative path
    const nnl::SolveReport a = nnl::solve_neumann(f.grid, f.table, f.kernel, data.f, data.g, it);
    const nnl::SolveReport b = nnl::solve_neumann(f.grid, f.table, f.kernel, data.f, data.g);
    CHECK(a.status == SolveStatus::Converged);
    CHECK(a.iterations > 0);
    CHECK(b.iterations == 0);
    CHECK((a.solution.values - b.solution.values).cwiseAbs().maxCoeff() <= 1e-8);
}
