#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nnl/domain.hpp"
#include "nnl/kernel.hpp"
#include "nnl/quadrature.hpp"

namespace nnl {

/// Region tag of a grid cell.
///   Omega        — cell center in Ω (unknown/test cell)
///   Gamma        — exterior cell with ∫_Ω γ(y,x)dx > ε (Neumann data lives here)
///   GammaHatOnly — exterior cell seen only through the reverse orientation
///                  (∫_Ω γ(y,x)dx ≤ ε < ∫_Ω γ(x,y)dx); empty for symmetric γ
///   Exterior     — retained cell with no interaction mass in either direction
enum class CellTag : std::uint8_t { Omega = 0, Gamma = 1, GammaHatOnly = 2, Exterior = 3 };

const char* to_string(CellTag t);

struct GridCell {
    Eigen::Array2i index = Eigen::Array2i::Zero(); // lattice index (y component 0 in 1-D)
    Point center = Point::Zero();
    CellTag tag = CellTag::Exterior;
};

/// Uniform Cartesian cell decomposition of Ω and its R-neighborhood.
/// Cells are anchored at the componentwise min corner of Ω (so grid-aligned
/// boxes are partitioned exactly) and stored in lexicographic lattice order.
/// Active cells (Omega, Gamma, GammaHatOnly) carry degrees of freedom ordered
/// as: all Omega cells first, then Gamma, then GammaHatOnly, each block in
/// cell order. Exterior cells are retained for diagnostics but carry no dof.
struct Grid {
    int dim = 1;
    double h = 0;
    double truncation_radius = 0;
    double epsilon_gamma = 0;
    OmegaSpec omega;
    Point anchor = Point::Zero();

    std::vector<GridCell> cells;
    std::vector<int> cell_to_dof; // -1 for Exterior
    std::vector<int> dof_to_cell;
    int n_omega = 0, n_gamma = 0, n_gamma_hat_only = 0;

    int n_active() const { return n_omega + n_gamma + n_gamma_hat_only; }
    int n_boundary() const { return n_gamma + n_gamma_hat_only; }
    double volume() const { return std::pow(h, dim); } // uniform cell volume hᵈ
    double omega_measure() const { return n_omega * volume(); }

    CellTag tag_of_dof(int k) const { return cells[static_cast<size_t>(dof_to_cell[k])].tag; }
    const Point& center_of_dof(int k) const {
        return cells[static_cast<size_t>(dof_to_cell[k])].center;
    }
    bool is_omega_dof(int k) const { return k < n_omega; }

    CellGeom geom_of_cell(int cell) const {
        const GridCell& c = cells[static_cast<size_t>(cell)];
        CellGeom g;
        g.dim = dim;
        g.h = h;
        g.lo = anchor;
        for (int a = 0; a < dim; ++a) g.lo[a] += c.index[a] * h;
        return g;
    }
    CellGeom geom_of_dof(int k) const { return geom_of_cell(dof_to_cell[k]); }
};

/// Builds the grid over Ω and its R-neighborhood and tags cells via
/// detect_nonlocal_boundary. epsilon_gamma < 0 selects the default 1e−14·hᵈ.
/// Throws ContractError when R is smaller than the kernel horizon (that would
/// silently delete Γ mass) or when Ω boxes are not aligned to the h-lattice.
Grid build_grid(const OmegaSpec& omega, const Kernel& kernel, double h, double R,
                double epsilon_gamma = -1.0);

/// (Re)assigns boundary tags: exterior cell y becomes Gamma iff the quadrature
/// estimate of ∫_Ω γ(y,x)dx exceeds epsilon_gamma, GammaHatOnly iff only the
/// reverse orientation ∫_Ω γ(x,y)dx does, Exterior otherwise. Rebuilds the dof
/// ordering. Omega tags (cell center in Ω) are never changed.
void detect_nonlocal_boundary(Grid& grid, const Kernel& kernel, double epsilon_gamma);

} // namespace nnl
