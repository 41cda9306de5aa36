#include <doctest.h>

#include "nnl/assembly.hpp"
#include "oracles.hpp"

using nnl::DiscreteField;
using nnl::Grid;
using nnl::Kernel;
using nnl::Point;
using nnl::QuadratureTable;

namespace {

Kernel skewed_indicator() {
    Kernel k = nnl::make_truncated_constant(0.5, 1.0, 1);
    k.symmetric = false;
    k.label = "skewed-indicator";
    k.eval = [](const Point& a, const Point& b) {
        const double r = std::abs(a[0] - b[0]);
        if (r >= 0.5) return 0.0;
        if (a[0] > b[0]) return 1.1;
        if (a[0] < b[0]) return 0.9;
        return 1.0;
    };
    return k;
}

/// Deterministic, structureless test vector over all active dofs.
Eigen::VectorXd wiggle(int n, double phase = 0.0) {
    Eigen::VectorXd u(n);
    for (int i = 0; i < n; ++i) u[i] = std::sin(3.0 * i + phase) + 0.25 * std::cos(7.0 * i);
    return u;
}

struct Fixture {
    Kernel kernel;
    Grid grid;
    QuadratureTable table;
    Eigen::MatrixXd w; // dense copy for the oracle loops

    explicit Fixture(const Kernel& k, double h = 0.125)
        : kernel(k),
          grid(nnl::build_grid(nnl::interval(0.0, 1.0), kernel, h, 0.5)),
          table(nnl::build_pair_table(grid, kernel)),
          w(Eigen::MatrixXd(table.w)) {}
};

} // namespace

TEST_CASE("pointwise operators match their defining dense loops") {
    for (const bool sym : {true, false}) {
        const Fixture f(sym ? nnl::make_truncated_constant(0.5, 1.0, 1) : skewed_indicator());
        const DiscreteField u(f.grid, wiggle(f.grid.n_active()));
        const double scale = 1.0 + f.table.total_pair_mass / f.grid.volume();

        const Eigen::VectorXd lu = nnl::apply_diffusion(f.grid, f.table, u);
        const Eigen::VectorXd lu_ref = oracle::diffusion_loop(f.grid, f.w, u.values);
        CHECK((lu - lu_ref).cwiseAbs().maxCoeff() <= 1e-13 * scale);

        const Eigen::VectorXd nu = nnl::apply_flux(f.grid, f.table, u);
        const Eigen::VectorXd nu_ref = oracle::flux_loop(f.grid, f.w, u.values);
        CHECK((nu - nu_ref).cwiseAbs().maxCoeff() <= 1e-13 * scale);
    }
}

TEST_CASE("difference form: basic algebra and exact constant annihilation") {
    nnl::DifferenceForm q(4);
    q.add_pair(2, 0, 0.3); // endpoints get sorted
    q.add_pair(1, 3, 1.7e-3);
    q.diag << 0.0, 0.5, 0.0, 0.0;
    CHECK(q.a[0] == 0);
    CHECK(q.b[0] == 2);
    CHECK_THROWS_AS(q.add_pair(2, 2, 1.0), nnl::ContractError);

    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(4);
    const Eigen::VectorXd r = q.apply(ones);
    // The pair part cancels bitwise on constants; only the diagonal survives.
    CHECK(r[0] == 0.0);
    CHECK(r[1] == 0.5);
    CHECK(r[2] == 0.0);
    CHECK(r[3] == 0.0);

    const Eigen::VectorXd u = wiggle(4), v = wiggle(4, 1.0);
    CHECK(q.energy(u, v) == doctest::Approx(u.dot(q.apply(v))).epsilon(1e-14));
    CHECK(q.energy(u, v) == doctest::Approx(q.energy(v, u)).epsilon(1e-14));
    CHECK(q.energy(u) == doctest::Approx(u.dot(q.matrix() * u)).epsilon(1e-13));
}

TEST_CASE("stiffness form reproduces vol·ℒ on interior rows and vol·𝒩 on boundary rows") {
    const Fixture f(nnl::make_truncated_constant(0.5, 1.0, 1));
    const nnl::DifferenceForm k = nnl::stiffness_form(f.grid, f.table, f.kernel);
    const DiscreteField u(f.grid, wiggle(f.grid.n_active()));
    const Eigen::VectorXd ku = k.apply(u.values);

    const Eigen::VectorXd lu = oracle::diffusion_loop(f.grid, f.w, u.values);
    const Eigen::VectorXd nu = oracle::flux_loop(f.grid, f.w, u.values);
    const double vol = f.grid.volume();
    const double scale = 1.0 + f.table.total_pair_mass;
    CHECK((ku.head(f.grid.n_omega) - vol * lu).cwiseAbs().maxCoeff() <= 1e-13 * scale);
    CHECK((ku.tail(f.grid.n_boundary()) - vol * nu).cwiseAbs().maxCoeff() <= 1e-13 * scale);

    // Constants are in the kernel of the operator pair — exactly.
    const Eigen::VectorXd k1 = k.apply(Eigen::VectorXd::Ones(f.grid.n_active()));
    CHECK(k1.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("nonsymmetric assembly matches the first-order energy form and the operators") {
    const Fixture f(skewed_indicator());
    const int n = f.grid.n_active();
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < f.grid.n_omega; ++i) alpha[i] = 0.5 + 0.4 * std::sin(5.0 * i);

    const Eigen::SparseMatrix<double> A = nnl::assemble_nonsym(f.grid, f.table, alpha);
    const Eigen::VectorXd u = wiggle(n), v = wiggle(n, 2.0);
    const double bl = oracle::nonsym_form_loop(f.grid, f.w, alpha, u, v);
    CHECK(v.dot(A * u) == doctest::Approx(bl).epsilon(1e-12));

    // Row identity: A u = vol·(ℒu + αu) on Ω rows, vol·𝒩u on boundary rows.
    const Eigen::VectorXd au = A * u;
    const Eigen::VectorXd lu = oracle::diffusion_loop(f.grid, f.w, u);
    const Eigen::VectorXd nu = oracle::flux_loop(f.grid, f.w, u);
    const double vol = f.grid.volume();
    const double scale = 1.0 + f.table.total_pair_mass;
    for (int i = 0; i < f.grid.n_omega; ++i)
        CHECK(std::abs(au[i] - vol * (lu[i] + alpha[i] * u[i])) <= 1e-13 * scale);
    for (int k = f.grid.n_omega; k < n; ++k)
        CHECK(std::abs(au[k] - vol * nu[k - f.grid.n_omega]) <= 1e-13 * scale);
}

TEST_CASE("for symmetric kernels the nonsymmetric assembly collapses to stiffness + potential") {
    const Fixture f(nnl::make_truncated_constant(0.5, 1.0, 1));
    const int n = f.grid.n_active();
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < f.grid.n_omega; ++i) alpha[i] = 1.0 + 0.25 * std::cos(2.0 * i);

    const Eigen::SparseMatrix<double> A = nnl::assemble_nonsym(f.grid, f.table, alpha);
    Eigen::SparseMatrix<double> K = nnl::stiffness_form(f.grid, f.table, f.kernel).matrix();
    const Eigen::VectorXd mass = nnl::mass_diagonal(f.grid);
    Eigen::MatrixXd diff = Eigen::MatrixXd(A) - Eigen::MatrixXd(K);
    for (int i = 0; i < f.grid.n_omega; ++i) diff(i, i) -= alpha[i] * mass[i];
    CHECK(diff.cwiseAbs().maxCoeff() <= 1e-14 * (1.0 + f.table.total_pair_mass));
}

TEST_CASE("energy norms match the defining loops") {
    for (const bool sym : {true, false}) {
        const Fixture f(sym ? nnl::make_truncated_constant(0.5, 1.0, 1) : skewed_indicator());
        const Eigen::VectorXd u = wiggle(f.grid.n_active());
        const double scale = 1.0 + f.table.total_pair_mass;

        const double vsem = nnl::v_seminorm_form(f.grid, f.table).energy(u);
        CHECK(std::abs(vsem - oracle::v_seminorm_loop(f.grid, f.w, u)) <= 1e-12 * scale);

        const Eigen::VectorXd ui = u.head(f.grid.n_omega);
        const double v0 = nnl::v0_gram_form(f.grid, f.table).energy(ui);
        CHECK(std::abs(v0 - oracle::v0_energy_loop(f.grid, f.w, ui)) <= 1e-12 * scale);
    }
}

TEST_CASE("mass diagonal integrates indicator functions of the blocks") {
    const Fixture f(nnl::make_truncated_constant(0.5, 1.0, 1));
    const Eigen::VectorXd m = nnl::mass_diagonal(f.grid);
    CHECK(m.head(f.grid.n_omega).sum() == doctest::Approx(f.grid.omega_measure()).epsilon(1e-14));
    CHECK(m.tail(f.grid.n_boundary()).cwiseAbs().maxCoeff() == 0.0);
    const Eigen::VectorXd mb = nnl::mass_diagonal(f.grid, true);
    CHECK(mb.minCoeff() == f.grid.volume());
    CHECK(mb.maxCoeff() == f.grid.volume());
}
