#include <doctest.h>

#include "nnl/trace.hpp"
#include "oracles.hpp"

using nnl::DiscreteField;
using nnl::Grid;
using nnl::Kernel;
using nnl::QuadratureTable;

namespace {

struct Fixture {
    Kernel kernel;
    Grid grid;
    QuadratureTable table;
    Eigen::MatrixXd w;

    explicit Fixture(double delta, double h = 1.0 / 16)
        : kernel(nnl::make_truncated_constant(delta, 1.0, 1)),
          grid(nnl::build_grid(nnl::interval(0.0, 1.0), kernel, h, delta)),
          table(nnl::build_pair_table(grid, kernel)),
          w(Eigen::MatrixXd(table.w)) {}
};

Eigen::VectorXd boundary_data(int n) {
    Eigen::VectorXd v(n);
    for (int k = 0; k < n; ++k) v[k] = std::cos(2.0 * k) - 0.3 * std::sin(5.0 * k);
    return v;
}

} // namespace

TEST_CASE("trace weights: definitions, budget, and degenerate shift handling") {
    const Fixture f(0.5);
    const double scale = 1.0 + f.table.total_pair_mass;

    const Eigen::VectorXd w1 = nnl::trace_weights(f.grid, f.table, 1, 1.0);
    const Eigen::VectorXd ref = oracle::trace_weights_loop(f.grid, f.w, 1.0);
    CHECK((w1 - ref).cwiseAbs().maxCoeff() <= 1e-14 * scale);

    // Mass budget: Σ_k w_k vol = Σ_i vol·D_i/(D_i+c) ≤ λ(Ω), both exactly
    // (same Fubini swap) and as an inequality.
    const Eigen::VectorXd d = nnl::interior_boundary_density(f.grid, f.table);
    const Eigen::VectorXd d_ref = oracle::density_loop(f.grid, f.w);
    CHECK((d - d_ref).cwiseAbs().maxCoeff() <= 1e-14 * scale);
    double fubini = 0.0;
    for (int i = 0; i < f.grid.n_omega; ++i) fubini += f.grid.volume() * d[i] / (d[i] + 1.0);
    CHECK(w1.sum() * f.grid.volume() == doctest::Approx(fubini).epsilon(1e-13));
    CHECK(w1.sum() * f.grid.volume() <= f.grid.omega_measure() * (1.0 + 1e-12));

    // Variant 2 is the plain incoming-mass density, bitwise.
    const Eigen::VectorXd w2 = nnl::trace_weights(f.grid, f.table, 2);
    const Eigen::VectorXd seg = f.table.row_sum_first.segment(f.grid.n_omega, f.grid.n_gamma);
    CHECK((w2 - seg).cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(nnl::trace_weights(f.grid, f.table, 3), nnl::ContractError);
    CHECK_THROWS_AS(nnl::trace_weights(f.grid, f.table, 1, -0.25), nnl::ContractError);

    // With horizon 1/2 every interior cell of (0,1) receives boundary mass,
    // so the unshifted weight is well defined.
    CHECK_NOTHROW(nnl::trace_weights(f.grid, f.table, 1, 0.0));
    // With horizon 1/4 the middle of the domain is blind to Γ: c = 0 is
    // rejected, any positive shift is accepted.
    const Fixture blind(0.25);
    CHECK(nnl::interior_boundary_density(blind.grid, blind.table).minCoeff() == 0.0);
    CHECK_THROWS_AS(nnl::trace_weights(blind.grid, blind.table, 1, 0.0), nnl::HypothesisError);
    CHECK_NOTHROW(nnl::trace_weights(blind.grid, blind.table, 1, 0.5));
}

TEST_CASE("boundary-space norm matches its defining double loop") {
    const Fixture f(0.5);
    const Eigen::VectorXd v = boundary_data(f.grid.n_gamma);
    const double lib = nnl::w_norm_squared(f.grid, f.table, 1.0, v);
    const double ref = oracle::w_norm_loop(f.grid, f.w, 1.0, v);
    CHECK(lib == doctest::Approx(ref).epsilon(1e-12));
    CHECK_THROWS_AS(nnl::w_norm_squared(f.grid, f.table, 1.0, v.head(3)), nnl::ContractError);
}

TEST_CASE("smoothing extension: values, trace preservation, energy bound") {
    const Fixture f(0.5);
    const Eigen::VectorXd v = boundary_data(f.grid.n_gamma);
    const Eigen::VectorXd d = oracle::density_loop(f.grid, f.w);

    for (const double c : {0.5, 1.0, 2.0}) {
        const DiscreteField e = nnl::extend_smoothing(f.grid, f.table, c, v);
        // Interior values against the defining quotient.
        for (int i = 0; i < f.grid.n_omega; ++i) {
            double num = 0.0;
            for (int k = 0; k < f.grid.n_gamma; ++k)
                num += v[k] * f.w(i, f.grid.n_omega + k);
            CHECK(e[i] == doctest::Approx(num / (f.grid.volume() * (d[i] + c))).epsilon(1e-13));
        }
        // The trace of the extension is the data, bitwise.
        CHECK((e.gamma() - v).cwiseAbs().maxCoeff() == 0.0);
        // Controlled part of the V-energy vs the boundary norm.
        const double energy = nnl::extension_energy(f.grid, f.table, e);
        const double bound = std::max(1.0 + 2.0 * c, 2.0) * nnl::w_norm_squared(f.grid, f.table, c, v);
        CHECK(energy <= bound * (1.0 + 1e-12));
    }
}

TEST_CASE("zero extension is an isometry onto the plain-mass weighted boundary norm") {
    const Fixture f(0.5);
    const Eigen::VectorXd v = boundary_data(f.grid.n_gamma);
    const DiscreteField z = nnl::ext_zero(f.grid, v);
    CHECK(z.omega().cwiseAbs().maxCoeff() == 0.0);

    const double energy = nnl::v_seminorm_form(f.grid, f.table).energy(z.values);
    const Eigen::VectorXd w2 = nnl::trace_weights(f.grid, f.table, 2);
    double ref = 0.0;
    for (int k = 0; k < f.grid.n_gamma; ++k) ref += v[k] * v[k] * w2[k] * f.grid.volume();
    CHECK(energy == doctest::Approx(ref).epsilon(1e-13));
}

TEST_CASE("weighted-average extension reproduces kernel averages and preserves constants") {
    const Fixture f(0.5);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(f.grid.n_active());
    for (int i = 0; i < f.grid.n_omega; ++i) u[i] = std::sin(2.5 * i);
    const DiscreteField ext = nnl::extend_weighted_average(f.grid, f.table, DiscreteField(f.grid, u));
    CHECK((ext.omega() - u.head(f.grid.n_omega)).cwiseAbs().maxCoeff() == 0.0);
    for (int k = f.grid.n_omega; k < f.grid.n_active(); ++k) {
        double num = 0.0, den = 0.0;
        for (int i = 0; i < f.grid.n_omega; ++i) {
            num += u[i] * f.w(i, k);
            den += f.w(i, k);
        }
        CHECK(den > 0.0);
        CHECK(ext[k] == doctest::Approx(num / den).epsilon(1e-13));
    }

    const DiscreteField ones(f.grid, Eigen::VectorXd::Ones(f.grid.n_active()));
    const DiscreteField ext1 = nnl::extend_weighted_average(f.grid, f.table, ones);
    CHECK((ext1.values.array() - 1.0).abs().maxCoeff() <= 1e-15);
}

TEST_CASE("surjectivity functionals: flat kernels give exactly zero, localized ones do not") {
    // Spatially flat kernel: the normalized boundary profile seen from x does
    // not depend on x, so both oscillation functionals vanish bitwise.
    Kernel flat;
    flat.dim = 1;
    flat.symmetric = true;
    flat.label = "uniform";
    flat.eval = [](const nnl::Point&, const nnl::Point&) { return 1.0; };
    const Grid g = nnl::build_grid(nnl::interval(0.0, 1.0), flat, 1.0 / 16, 0.5);
    const QuadratureTable t = nnl::build_pair_table(g, flat);
    const nnl::SurjectivityCheck sc = nnl::check_trace_surjectivity_condition(g, t, 1.0);
    CHECK(sc.e1 == 0.0);
    CHECK(sc.e2 == 0.0);

    const Fixture f(0.5);
    const nnl::SurjectivityCheck loc = nnl::check_trace_surjectivity_condition(f.grid, f.table, 1.0);
    CHECK(loc.e1 > 0.0);
    CHECK(loc.e2 > 0.0);
    CHECK(std::isfinite(loc.e1));
    CHECK(std::isfinite(loc.e2));
}
