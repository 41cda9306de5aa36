#pragma once

#include <cstdint>

#include "nnl/domain.hpp"
#include "nnl/kernel.hpp"

namespace nnl {

/// How a cell-pair weight was computed.
///   Midpoint          — vol(i)·vol(j)·γ(c_j,c_i), for well-separated smooth pairs
///   Refined           — subdivided tensor rule: uniform panels across a horizon
///                       discontinuity, or dyadically graded panels toward the
///                       near face/corner for singular kernels
///   AnalyticAdjacent  — exact 1-D closed form for radial power-law kernels on
///                       nearby cells (double antiderivative of r^(−β))
enum class QuadMethod : std::uint8_t { Midpoint = 0, Refined = 1, AnalyticAdjacent = 2 };

const char* to_string(QuadMethod m);

/// Geometry of one uniform grid cell: the box lo + [0,h]^dim.
struct CellGeom {
    Point lo = Point::Zero();
    double h = 0;
    int dim = 1;

    Point center() const {
        Point c = lo;
        for (int a = 0; a < dim; ++a) c[a] += 0.5 * h;
        return c;
    }
};

/// Both orientations of one cell-pair weight, evaluated on a shared node set:
///   w_ij = ∫_{x∈C_i} ∫_{y∈C_j} γ(y,x) dy dx
///   w_ji = ∫_{x∈C_j} ∫_{y∈C_i} γ(y,x) dy dx
/// For symmetric kernels w_ij == w_ji bitwise (the same evaluations are reused).
struct PairWeights {
    double w_ij = 0;
    double w_ji = 0;
    QuadMethod method = QuadMethod::Midpoint;
};

/// Integrates γ over the cell pair (C_i, C_j), dispatching on kernel metadata:
/// midpoint for separated smooth pairs; a subdivided midpoint tensor rule for
/// pairs straddling a horizon discontinuity (min corner distance < δ < max
/// corner distance); the exact closed form for 1-D power-law kernels within
/// 2h of each other; a graded tensor Gauss rule for other singular kernels
/// within 2h. Throws ContractError for a same-cell request with a singular
/// kernel, and for touching cells when singular_exponent ≥ dim+1 (the double
/// integral diverges under P0; such kernels are unsupported).
PairWeights integrate_pair(const Kernel& gamma, const CellGeom& ci, const CellGeom& cj);

} // namespace nnl
