#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "nnl/errors.hpp"

namespace nnl {

/// Spatial point. The workbench supports dim ∈ {1,2}; points are stored as
/// Vector2d with the unused component pinned to 0 in 1-D so kernels can be
/// written uniformly against ‖x−y‖.
using Point = Eigen::Vector2d;

/// Axis-aligned box [lo.x,hi.x] (×[lo.y,hi.y] when dim==2).
struct Box {
    Point lo = Point::Zero();
    Point hi = Point::Zero();
};

/// Domain Ω given as a finite union of disjoint axis-aligned boxes.
/// Disjointness is the caller's responsibility; overlapping boxes would
/// double-count measure().
struct OmegaSpec {
    int dim = 1;
    std::vector<Box> boxes;

    /// Half-open membership test (lo ≤ x < hi per axis) so that a lattice of
    /// cells partitions a union of grid-aligned boxes without double claims.
    bool contains(const Point& x) const {
        for (const Box& b : boxes) {
            bool inside = true;
            for (int a = 0; a < dim; ++a)
                if (!(x[a] >= b.lo[a] && x[a] < b.hi[a])) { inside = false; break; }
            if (inside) return true;
        }
        return false;
    }

    /// Euclidean distance from x to Ω (0 when inside).
    double distance(const Point& x) const {
        if (boxes.empty()) throw ContractError("OmegaSpec: no boxes");
        double best = std::numeric_limits<double>::infinity();
        for (const Box& b : boxes) {
            double d2 = 0;
            for (int a = 0; a < dim; ++a) {
                double d = std::max({b.lo[a] - x[a], x[a] - b.hi[a], 0.0});
                d2 += d * d;
            }
            best = std::min(best, std::sqrt(d2));
        }
        return best;
    }

    /// Lebesgue measure λ(Ω).
    double measure() const {
        double m = 0;
        for (const Box& b : boxes) {
            double v = 1;
            for (int a = 0; a < dim; ++a) v *= (b.hi[a] - b.lo[a]);
            m += v;
        }
        return m;
    }

    /// Componentwise min corner over all boxes: the lattice anchor.
    Point min_corner() const {
        if (boxes.empty()) throw ContractError("OmegaSpec: no boxes");
        Point c = boxes.front().lo;
        for (const Box& b : boxes)
            for (int a = 0; a < dim; ++a) c[a] = std::min(c[a], b.lo[a]);
        return c;
    }

    Point max_corner() const {
        if (boxes.empty()) throw ContractError("OmegaSpec: no boxes");
        Point c = boxes.front().hi;
        for (const Box& b : boxes)
            for (int a = 0; a < dim; ++a) c[a] = std::max(c[a], b.hi[a]);
        return c;
    }

    void validate() const {
        if (dim != 1 && dim != 2) throw ContractError("OmegaSpec: dim must be 1 or 2");
        if (boxes.empty()) throw ContractError("OmegaSpec: at least one box required");
        for (const Box& b : boxes)
            for (int a = 0; a < dim; ++a)
                if (!(b.hi[a] > b.lo[a])) throw ContractError("OmegaSpec: box with hi <= lo");
    }
};

/// Convenience: the interval (lo, hi) as a 1-D domain.
inline OmegaSpec interval(double lo, double hi) {
    OmegaSpec s;
    s.dim = 1;
    Box b;
    b.lo = Point(lo, 0.0);
    b.hi = Point(hi, 0.0);
    s.boxes = {b};
    return s;
}

/// Convenience: the rectangle (x0,x1)×(y0,y1) as a 2-D domain.
inline OmegaSpec rectangle(double x0, double x1, double y0, double y1) {
    OmegaSpec s;
    s.dim = 2;
    Box b;
    b.lo = Point(x0, y0);
    b.hi = Point(x1, y1);
    s.boxes = {b};
    return s;
}

} // namespace nnl
