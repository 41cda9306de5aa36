#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nnl/kernel.hpp"

using nnl::Point;

TEST_CASE("truncated constant kernel: values, metadata, contracts") {
    const nnl::Kernel k = nnl::make_truncated_constant(0.5, 2.0, 1);
    CHECK(k.symmetric);
    CHECK(k.horizon.has_value());
    CHECK(*k.horizon == 0.5);
    CHECK(!k.singular_exponent.has_value());
    CHECK(k.eval(Point(0.0, 0.0), Point(0.49, 0.0)) == 2.0);
    CHECK(k.eval(Point(0.0, 0.0), Point(0.5, 0.0)) == 0.0);
    CHECK(k.eval(Point(0.0, 0.0), Point(-0.3, 0.0)) == 2.0);

    CHECK_THROWS_AS(nnl::make_truncated_constant(0.0, 1.0, 1), nnl::ContractError);
    CHECK_THROWS_AS(nnl::make_truncated_constant(0.5, -1.0, 1), nnl::ContractError);
    CHECK_THROWS_AS(nnl::make_truncated_constant(0.5, 1.0, 3), nnl::ContractError);
}

TEST_CASE("fractional kernel: power law metadata and values") {
    const nnl::Kernel k = nnl::make_fractional(0.25, 1);
    CHECK(k.symmetric);
    CHECK(!k.horizon.has_value());
    REQUIRE(k.singular_exponent.has_value());
    CHECK(*k.singular_exponent == doctest::Approx(1.5));
    REQUIRE(k.power_law.has_value());
    CHECK(k.power_law->exponent == doctest::Approx(1.5));
    const double r = 0.37;
    CHECK(k.eval(Point(0.0, 0.0), Point(r, 0.0)) == doctest::Approx(std::pow(r, -1.5)));

    CHECK_THROWS_AS(nnl::make_fractional(0.0, 1), nnl::ContractError);
    CHECK_THROWS_AS(nnl::make_fractional(1.0, 1), nnl::ContractError);
}

TEST_CASE("transpose swaps the argument order; symmetric kernels pass through") {
    nnl::Kernel skew;
    skew.dim = 1;
    skew.symmetric = false;
    skew.label = "skew";
    skew.eval = [](const Point& a, const Point& b) { return 1.0 + 0.5 * (a[0] - b[0]); };
    const nnl::Kernel t = nnl::transpose(skew);
    const Point p(0.2, 0.0), q(0.7, 0.0);
    CHECK(t.eval(p, q) == skew.eval(q, p));
    CHECK(t.eval(q, p) == skew.eval(p, q));

    const nnl::Kernel sym = nnl::make_truncated_constant(1.0, 1.0, 1);
    const nnl::Kernel ts = nnl::transpose(sym);
    CHECK(ts.eval(p, q) == sym.eval(p, q));
    CHECK(ts.label == sym.label);
}

TEST_CASE("symmetrize_outside keeps the interior part and averages across the boundary") {
    nnl::Kernel eta;
    eta.dim = 1;
    eta.symmetric = false;
    eta.label = "eta";
    eta.eval = [](const Point& a, const Point& b) { return 2.0 + (a[0] - b[0]); };
    const nnl::OmegaSpec om = nnl::interval(0.0, 1.0);
    const nnl::Kernel s = nnl::symmetrize_outside(eta, om);

    const Point in1(0.25, 0.0), in2(0.75, 0.0), out(1.5, 0.0);
    CHECK(s.eval(in1, in2) == eta.eval(in1, in2)); // interior pair unchanged
    CHECK(s.eval(in1, out) == doctest::Approx(0.5 * (eta.eval(in1, out) + eta.eval(out, in1))));
    CHECK(s.eval(in1, out) == s.eval(out, in1)); // symmetric across the boundary
}

TEST_CASE("tilde_gamma majorizes the orientation defect") {
    nnl::Kernel skew;
    skew.dim = 1;
    skew.symmetric = false;
    skew.label = "skew";
    skew.eval = [](const Point& a, const Point& b) { return a[0] > b[0] ? 3.0 : 1.0; };

    const nnl::Kernel tg = nnl::tilde_gamma(skew); // comparison kernel k ≡ 1
    const Point lo(0.0, 0.0), hi(1.0, 0.0);
    // γ(lo,hi) = 1, γ(hi,lo) = 3: defect² = 4, so γ̃(lo,hi) = max{1, 4} = 4.
    CHECK(tg.eval(lo, hi) == 4.0);
    // γ(hi,lo) = 3, defect² = 4: γ̃ = max{3, 4} = 4.
    CHECK(tg.eval(hi, lo) == 4.0);

    nnl::Kernel vanishing;
    vanishing.dim = 1;
    vanishing.symmetric = true;
    vanishing.label = "zero";
    vanishing.eval = [](const Point&, const Point&) { return 0.0; };
    const nnl::Kernel tinf = nnl::tilde_gamma(skew, vanishing);
    CHECK(std::isinf(tinf.eval(lo, hi))); // defect over a vanishing comparison kernel
    // Symmetric γ has zero defect, so the comparison kernel is never consulted.
    const nnl::Kernel sym = nnl::make_truncated_constant(2.0, 2.0, 1);
    const nnl::Kernel tsym = nnl::tilde_gamma(sym, vanishing);
    CHECK(tsym.eval(lo, hi) == 2.0);
}

TEST_CASE("sample check rejects negative kernels") {
    nnl::Kernel bad;
    bad.dim = 1;
    bad.label = "bad";
    bad.eval = [](const Point& a, const Point& b) { return a[0] - b[0]; };
    CHECK_THROWS_AS(nnl::check_kernel_samples(bad, 1.0), nnl::ContractError);
}
