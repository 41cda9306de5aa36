#include <doctest.h>

#include "nnl/grid.hpp"

using nnl::Point;

namespace {
nnl::Kernel one_sided_kernel() {
    nnl::Kernel k;
    k.dim = 1;
    k.symmetric = false;
    k.horizon = 0.5;
    k.label = "one-sided";
    k.eval = [](const Point& a, const Point& b) {
        return (std::abs(a[0] - b[0]) < 0.5 && a[0] > -0.1) ? 1.0 : 0.0;
    };
    return k;
}
} // namespace

TEST_CASE("grid over the unit interval: counts, ordering, centers") {
    const nnl::Kernel k = nnl::make_truncated_constant(0.5, 1.0, 1);
    const nnl::Grid g = nnl::build_grid(nnl::interval(0.0, 1.0), k, 0.25, 0.5);

    CHECK(g.n_omega == 4);
    CHECK(g.n_gamma == 4); // collar (−1/2,0) ∪ (1,3/2): two cells per side
    CHECK(g.n_gamma_hat_only == 0);
    CHECK(g.volume() == doctest::Approx(0.25));
    CHECK(g.omega_measure() == doctest::Approx(1.0));
    CHECK(g.epsilon_gamma == doctest::Approx(1e-14 * 0.25));

    // Interior dofs first, cell order, centers at (i+1/2)h.
    for (int i = 0; i < 4; ++i) {
        CHECK(g.tag_of_dof(i) == nnl::CellTag::Omega);
        CHECK(g.center_of_dof(i)[0] == doctest::Approx(0.125 + 0.25 * i));
    }
    for (int kdof = 4; kdof < 8; ++kdof) CHECK(g.tag_of_dof(kdof) == nnl::CellTag::Gamma);

    // cell_to_dof and dof_to_cell are inverse on active cells.
    for (int dof = 0; dof < g.n_active(); ++dof)
        CHECK(g.cell_to_dof[static_cast<size_t>(g.dof_to_cell[dof])] == dof);
}

TEST_CASE("grid in two dimensions: interior square plus interaction ring") {
    const nnl::Kernel k = nnl::make_truncated_constant(0.5, 1.0, 2);
    const nnl::Grid g = nnl::build_grid(nnl::rectangle(0.0, 1.0, 0.0, 1.0), k, 0.5, 0.5);
    CHECK(g.n_omega == 4);
    CHECK(g.n_gamma == 12); // full ring: every ring cell's center is within 3/4 of Ω
    CHECK(g.n_gamma_hat_only == 0);
    CHECK(g.volume() == doctest::Approx(0.25));
}

TEST_CASE("misaligned domain and undersized truncation radius are rejected") {
    const nnl::Kernel k = nnl::make_truncated_constant(0.5, 1.0, 1);
    CHECK_THROWS_AS(nnl::build_grid(nnl::interval(0.0, 1.0), k, 0.3, 0.5), nnl::ContractError);
    CHECK_THROWS_AS(nnl::build_grid(nnl::interval(0.0, 1.0), k, 0.25, 0.25),
                    nnl::ContractError);
}

TEST_CASE("one-sided kernels produce outflow-only boundary cells") {
    const nnl::Grid g = nnl::build_grid(nnl::interval(0.0, 1.0), one_sided_kernel(), 0.03125, 0.5);
    CHECK(g.n_gamma_hat_only > 0);
    // Every outflow-only cell sits in the left collar below the cutoff −0.1.
    for (int dof = g.n_omega + g.n_gamma; dof < g.n_active(); ++dof) {
        CHECK(g.tag_of_dof(dof) == nnl::CellTag::GammaHatOnly);
        CHECK(g.center_of_dof(dof)[0] < -0.1);
    }
    // The right collar is fully two-sided.
    int right_gamma = 0;
    for (int dof = g.n_omega; dof < g.n_omega + g.n_gamma; ++dof)
        if (g.center_of_dof(dof)[0] > 1.0) ++right_gamma;
    CHECK(right_gamma == 16);
}

TEST_CASE("boundary detection is idempotent") {
    const nnl::Kernel k = nnl::make_truncated_constant(0.5, 1.0, 1);
    nnl::Grid g = nnl::build_grid(nnl::interval(0.0, 1.0), k, 0.125, 0.5);
    const int om = g.n_omega, ga = g.n_gamma, ho = g.n_gamma_hat_only;
    const std::vector<int> order = g.dof_to_cell;
    nnl::detect_nonlocal_boundary(g, k, g.epsilon_gamma);
    CHECK(g.n_omega == om);
    CHECK(g.n_gamma == ga);
    CHECK(g.n_gamma_hat_only == ho);
    CHECK(g.dof_to_cell == order);
}
