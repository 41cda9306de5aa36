#include "nnl/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace nnl {

const char* to_string(QuadMethod m) {
    switch (m) {
        case QuadMethod::Midpoint: return "midpoint";
        case QuadMethod::Refined: return "refined";
        case QuadMethod::AnalyticAdjacent: return "analytic-adjacent";
    }
    return "?";
}

namespace {

// Componentwise gap/extent between two boxes; dmin/dmax are the distances
// between the nearest and farthest point pairs of the two cells.
void corner_distances(const CellGeom& a, const CellGeom& b, double& dmin, double& dmax) {
    double g2 = 0, m2 = 0;
    for (int ax = 0; ax < a.dim; ++ax) {
        double alo = a.lo[ax], ahi = a.lo[ax] + a.h;
        double blo = b.lo[ax], bhi = b.lo[ax] + b.h;
        double gap = std::max({blo - ahi, alo - bhi, 0.0});
        double ext = std::max(bhi - alo, ahi - blo);
        g2 += gap * gap;
        m2 += ext * ext;
    }
    dmin = std::sqrt(g2);
    dmax = std::sqrt(m2);
}

// One quadrature node list along a single axis: positions and weights that
// integrate over the cell's extent on that axis.
struct AxisRule {
    std::vector<double> x, w;
};

// Standard Gauss–Legendre data on [-1,1].
struct GaussRule {
    int n;
    const double* x;
    const double* w;
};
constexpr double kG2x[] = {-0.5773502691896257, 0.5773502691896257};
constexpr double kG2w[] = {1.0, 1.0};
constexpr double kG4x[] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                           0.8611363115940526};
constexpr double kG4w[] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                           0.3478548451374538};
GaussRule gauss(int n) {
    if (n == 2) return {2, kG2x, kG2w};
    return {4, kG4x, kG4w};
}

void append_gauss_panel(AxisRule& r, double lo, double hi, const GaussRule& g) {
    double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (int q = 0; q < g.n; ++q) {
        r.x.push_back(mid + half * g.x[q]);
        r.w.push_back(half * g.w[q]);
    }
}

// Panels geometrically graded toward one end of [lo, lo+h] (end = +1: grade
// toward lo+h, end = -1: toward lo). `levels` dyadic levels, each split into
// `split` equal Gauss panels. The singular endpoint is approached but never
// evaluated: the innermost sliver keeps its Gauss nodes interior.
AxisRule graded_axis(double lo, double h, int end, int levels, int split, const GaussRule& g) {
    AxisRule r;
    auto panel = [&](double a, double b) {
        double step = (b - a) / split;
        for (int s = 0; s < split; ++s) append_gauss_panel(r, a + s * step, a + (s + 1) * step, g);
    };
    // Offsets from the graded end: h·2^{-k} for k = 0..levels, then the sliver.
    double prev = h;
    for (int k = 1; k <= levels; ++k) {
        double cur = h * std::ldexp(1.0, -k);
        if (end > 0) panel(lo + h - prev, lo + h - cur);
        else panel(lo + cur, lo + prev);
        prev = cur;
    }
    if (end > 0) panel(lo + h - prev, lo + h);
    else panel(lo, lo + prev);
    return r;
}

AxisRule uniform_axis(double lo, double h, int panels, const GaussRule& g) {
    AxisRule r;
    double step = h / panels;
    for (int p = 0; p < panels; ++p) append_gauss_panel(r, lo + p * step, lo + (p + 1) * step, g);
    return r;
}

// Tensor-product evaluation of both kernel orientations over per-axis rules.
PairWeights tensor_integrate(const Kernel& gamma, const AxisRule (&xi)[2], const AxisRule (&yj)[2],
                             int dim, QuadMethod tag) {
    double s_ij = 0, s_ji = 0;
    const bool sym = gamma.symmetric;
    Point x = Point::Zero(), y = Point::Zero();
    const size_t nx0 = xi[0].x.size(), ny0 = yj[0].x.size();
    const size_t nx1 = dim == 2 ? xi[1].x.size() : 1, ny1 = dim == 2 ? yj[1].x.size() : 1;
    for (size_t a = 0; a < nx0; ++a) {
        x[0] = xi[0].x[a];
        for (size_t b = 0; b < nx1; ++b) {
            if (dim == 2) x[1] = xi[1].x[b];
            double wx = xi[0].w[a] * (dim == 2 ? xi[1].w[b] : 1.0);
            for (size_t c = 0; c < ny0; ++c) {
                y[0] = yj[0].x[c];
                for (size_t d = 0; d < ny1; ++d) {
                    if (dim == 2) y[1] = yj[1].x[d];
                    double wxy = wx * yj[0].w[c] * (dim == 2 ? yj[1].w[d] : 1.0);
                    s_ij += wxy * gamma.eval(y, x);
                    if (!sym) s_ji += wxy * gamma.eval(x, y);
                }
            }
        }
    }
    return {s_ij, sym ? s_ij : s_ji, tag};
}

// Exact ∫_{C_i}∫_{C_j} A·|y−x|^{−β} dy dx for 1-D cells of equal width h at
// gap d ≥ 0, via the double antiderivative F2 of t^{−β}:
//   value = A·(F2(d+2h) − 2·F2(d+h) + F2(d)).
double power_law_closed_form_1d(double A, double beta, double d, double h) {
    auto F2 = [beta](double t) -> double {
        if (t <= 0.0) return 0.0; // valid limit for β < 2
        if (std::abs(beta - 1.0) < 1e-13) return t * std::log(t) - t;
        if (std::abs(beta - 2.0) < 1e-13) return -std::log(t);
        return std::pow(t, 2.0 - beta) / ((1.0 - beta) * (2.0 - beta));
    };
    return A * (F2(d + 2.0 * h) - 2.0 * F2(d + h) + F2(d));
}

// Graded tensor rule for a singular kernel on a near pair: every axis where
// the two cell intervals touch is graded toward the shared face from both
// sides; identical or separated axes use uniform panels. The kernel is never
// evaluated at coincident points: distinct cells always disagree on at least
// one graded axis whose nodes stay strictly interior to their panels.
PairWeights graded_pair(const Kernel& gamma, const CellGeom& ci, const CellGeom& cj) {
    const int dim = ci.dim;
    const int levels = dim == 1 ? 30 : 10;
    const int split = dim == 1 ? 2 : 1;
    const GaussRule g = gauss(dim == 1 ? 4 : 2);
    const int uniform_panels = dim == 1 ? 8 : 4;
    const double tol = 1e-12 * ci.h;

    AxisRule xi[2], yj[2];
    for (int ax = 0; ax < dim; ++ax) {
        double ilo = ci.lo[ax], ihi = ci.lo[ax] + ci.h;
        double jlo = cj.lo[ax], jhi = cj.lo[ax] + cj.h;
        if (std::abs(ihi - jlo) <= tol) { // C_i just left of C_j: shared face
            xi[ax] = graded_axis(ilo, ci.h, +1, levels, split, g);
            yj[ax] = graded_axis(jlo, cj.h, -1, levels, split, g);
        } else if (std::abs(jhi - ilo) <= tol) { // C_j just left of C_i
            xi[ax] = graded_axis(ilo, ci.h, -1, levels, split, g);
            yj[ax] = graded_axis(jlo, cj.h, +1, levels, split, g);
        } else {
            xi[ax] = uniform_axis(ilo, ci.h, uniform_panels, g);
            yj[ax] = uniform_axis(jlo, cj.h, uniform_panels, g);
        }
    }
    return tensor_integrate(gamma, xi, yj, dim, QuadMethod::Refined);
}

// Uniform midpoint tensor rule on n×n subcells per cell; used across horizon
// discontinuities where the integrand is bounded but has a jump.
PairWeights subdivided_midpoint(const Kernel& gamma, const CellGeom& ci, const CellGeom& cj,
                                int n) {
    const int dim = ci.dim;
    AxisRule xi[2], yj[2];
    for (int ax = 0; ax < dim; ++ax) {
        double step_i = ci.h / n, step_j = cj.h / n;
        for (int p = 0; p < n; ++p) {
            xi[ax].x.push_back(ci.lo[ax] + (p + 0.5) * step_i);
            xi[ax].w.push_back(step_i);
            yj[ax].x.push_back(cj.lo[ax] + (p + 0.5) * step_j);
            yj[ax].w.push_back(step_j);
        }
    }
    return tensor_integrate(gamma, xi, yj, dim, QuadMethod::Refined);
}

} // namespace

PairWeights integrate_pair(const Kernel& gamma, const CellGeom& ci, const CellGeom& cj) {
    if (!gamma.eval) throw ContractError("integrate_pair: kernel has no eval");
    if (ci.dim != cj.dim || gamma.dim != ci.dim)
        throw ContractError("integrate_pair: dimension mismatch");
    if (std::abs(ci.h - cj.h) > 1e-12 * ci.h)
        throw ContractError("integrate_pair: cells must have equal edge length");

    const int dim = ci.dim;
    const double h = ci.h;
    const double vol = std::pow(h, dim);
    const bool same_cell = (ci.lo - cj.lo).norm() <= 1e-12 * h;

    double dmin, dmax;
    corner_distances(ci, cj, dmin, dmax);
    const double dc = (ci.center() - cj.center()).norm();

    if (gamma.singular_exponent) {
        if (same_cell)
            throw ContractError(
                "integrate_pair: same-cell weight requested for a singular kernel (P0 assembly "
                "never needs it; the (u(x)-u(y)) factor vanishes on the diagonal)");
        const bool touching = dmin <= 1e-12 * h;
        if (touching && *gamma.singular_exponent >= dim + 1.0 - 1e-12)
            throw ContractError(
                "integrate_pair: unsupported kernel — singular_exponent >= dim+1 makes the "
                "touching-cell double integral divergent under P0 (fractional s >= 1/2)");
        if (dc <= 2.0 * h * (1.0 + 1e-12)) {
            // Closed form for 1-D radial power laws, provided the whole pair
            // sits inside the horizon (no truncation inside the pair).
            if (dim == 1 && gamma.power_law &&
                (!gamma.horizon || dmax <= *gamma.horizon * (1.0 - 1e-12))) {
                double v = power_law_closed_form_1d(gamma.power_law->amplitude,
                                                    gamma.power_law->exponent, dmin, h);
                return {v, v, QuadMethod::AnalyticAdjacent};
            }
            return graded_pair(gamma, ci, cj);
        }
        // fall through: separated singular pairs are smooth enough for the
        // horizon/midpoint logic below
    }

    if (gamma.horizon) {
        const double delta = *gamma.horizon;
        if (dmin < delta && delta < dmax)
            return subdivided_midpoint(gamma, ci, cj, dim == 1 ? 16 : 8);
        if (dmin >= delta) return {0.0, 0.0, QuadMethod::Midpoint};
    }

    const Point cci = ci.center(), ccj = cj.center();
    double w_ij = vol * vol * gamma.eval(ccj, cci);
    double w_ji = gamma.symmetric ? w_ij : vol * vol * gamma.eval(cci, ccj);
    return {w_ij, w_ji, QuadMethod::Midpoint};
}

} // namespace nnl
