#include "nnl/grid.hpp"

#include <cmath>

#include "nnl/parallel.hpp"

namespace nnl {

const char* to_string(CellTag t) {
    switch (t) {
        case CellTag::Omega: return "OMEGA";
        case CellTag::Gamma: return "GAMMA";
        case CellTag::GammaHatOnly: return "GAMMA_HAT_ONLY";
        case CellTag::Exterior: return "EXTERIOR";
    }
    return "?";
}

namespace {

void check_alignment(const OmegaSpec& omega, const Point& anchor, double h) {
    for (const Box& b : omega.boxes)
        for (int a = 0; a < omega.dim; ++a)
            for (double edge : {b.lo[a], b.hi[a]}) {
                double t = (edge - anchor[a]) / h;
                if (std::abs(t - std::round(t)) > 1e-9 * std::max(1.0, std::abs(t)))
                    throw ContractError(
                        "build_grid: domain box edges must lie on the h-lattice anchored at the "
                        "min corner of the domain");
            }
}

void assign_dofs(Grid& g) {
    g.cell_to_dof.assign(g.cells.size(), -1);
    g.dof_to_cell.clear();
    g.n_omega = g.n_gamma = g.n_gamma_hat_only = 0;
    for (CellTag t : {CellTag::Omega, CellTag::Gamma, CellTag::GammaHatOnly}) {
        for (size_t c = 0; c < g.cells.size(); ++c) {
            if (g.cells[c].tag != t) continue;
            g.cell_to_dof[c] = static_cast<int>(g.dof_to_cell.size());
            g.dof_to_cell.push_back(static_cast<int>(c));
            if (t == CellTag::Omega) ++g.n_omega;
            else if (t == CellTag::Gamma) ++g.n_gamma;
            else ++g.n_gamma_hat_only;
        }
    }
}

} // namespace

void detect_nonlocal_boundary(Grid& grid, const Kernel& kernel, double epsilon_gamma) {
    if (epsilon_gamma < 0) throw ContractError("detect_nonlocal_boundary: epsilon_gamma >= 0");
    grid.epsilon_gamma = epsilon_gamma;
    const double vol = grid.volume();

    std::vector<int> omega_cells;
    for (size_t c = 0; c < grid.cells.size(); ++c)
        if (grid.cells[c].tag == CellTag::Omega) omega_cells.push_back(static_cast<int>(c));

    // Only Ω cells within reach can contribute mass to an exterior cell.
    const double reach = kernel.horizon
                             ? *kernel.horizon + grid.h * std::sqrt(double(grid.dim)) * 1.001
                             : std::numeric_limits<double>::infinity();

    std::vector<int> exterior_cells;
    for (size_t c = 0; c < grid.cells.size(); ++c)
        if (grid.cells[c].tag != CellTag::Omega) exterior_cells.push_back(static_cast<int>(c));

    parallel_for(static_cast<int>(exterior_cells.size()), [&](int e) {
        const int c = exterior_cells[static_cast<size_t>(e)];
        GridCell& cell = grid.cells[static_cast<size_t>(c)];
        const CellGeom gk = grid.geom_of_cell(c);
        double mass_in = 0;  // quadrature of ∫_Ω γ(c_k, x) dx · vol
        double mass_out = 0; // quadrature of ∫_Ω γ(x, c_k) dx · vol
        for (int oc : omega_cells) {
            const GridCell& omega_cell = grid.cells[static_cast<size_t>(oc)];
            if ((omega_cell.center - cell.center).norm() > reach) continue;
            PairWeights pw = integrate_pair(kernel, grid.geom_of_cell(oc), gk);
            mass_in += pw.w_ij;  // w(i,k): kernel first slot in C_k
            mass_out += pw.w_ji; // w(k,i): kernel first slot in C_i ⊂ Ω
        }
        const double rho_in = mass_in / vol, rho_out = mass_out / vol;
        if (rho_in > epsilon_gamma) cell.tag = CellTag::Gamma;
        else if (rho_out > epsilon_gamma) cell.tag = CellTag::GammaHatOnly;
        else cell.tag = CellTag::Exterior;
    });

    assign_dofs(grid);
}

Grid build_grid(const OmegaSpec& omega, const Kernel& kernel, double h, double R,
                double epsilon_gamma) {
    omega.validate();
    if (!(h > 0)) throw ContractError("build_grid: h must be positive");
    if (!(R >= 0)) throw ContractError("build_grid: R must be nonnegative");
    if (kernel.dim != omega.dim) throw ContractError("build_grid: kernel/domain dim mismatch");
    if (kernel.horizon && R < *kernel.horizon * (1.0 - 1e-12))
        throw ContractError(
            "build_grid: truncation radius R is smaller than the kernel horizon; this would "
            "silently delete nonlocal boundary mass — choose R >= horizon");

    Grid g;
    g.dim = omega.dim;
    g.h = h;
    g.truncation_radius = R;
    g.omega = omega;
    g.anchor = omega.min_corner();
    check_alignment(omega, g.anchor, h);

    const Point maxc = omega.max_corner();
    int lo[2] = {0, 0}, hi[2] = {0, 0};
    for (int a = 0; a < g.dim; ++a) {
        lo[a] = static_cast<int>(std::floor(-R / h)) - 1;
        hi[a] = static_cast<int>(std::ceil((maxc[a] - g.anchor[a] + R) / h)) + 1;
    }

    const double keep_tol = R * (1.0 + 1e-12) + 1e-14 * h;
    auto consider = [&](int i, int j) {
        GridCell cell;
        cell.index = Eigen::Array2i(i, j);
        cell.center = g.anchor;
        cell.center[0] += (i + 0.5) * h;
        if (g.dim == 2) cell.center[1] += (j + 0.5) * h;
        const bool inside = omega.contains(cell.center);
        if (!inside && omega.distance(cell.center) > keep_tol) return;
        cell.tag = inside ? CellTag::Omega : CellTag::Exterior;
        g.cells.push_back(cell);
    };
    if (g.dim == 1) {
        for (int i = lo[0]; i < hi[0]; ++i) consider(i, 0);
    } else {
        for (int i = lo[0]; i < hi[0]; ++i)
            for (int j = lo[1]; j < hi[1]; ++j) consider(i, j);
    }

    if (epsilon_gamma < 0) epsilon_gamma = 1e-14 * g.volume();
    detect_nonlocal_boundary(g, kernel, epsilon_gamma);
    return g;
}

} // namespace nnl
