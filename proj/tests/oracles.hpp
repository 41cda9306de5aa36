#pragma once

/// Reference values and independent reimplementations used to cross-check the
/// library.  Everything here is written as plain dense loops straight from the
/// defining formulas — no DifferenceForm, no sparse iteration, no shared
/// helper code — so agreement with the library is evidence, not tautology.
/// The closed-form constants were derived by hand and are frozen; tests
/// compare against them, never against values the library produced.

#include <Eigen/Dense>

#include "nnl/grid.hpp"
#include "nnl/pair_table.hpp"

namespace oracle {

// --- frozen closed forms ----------------------------------------------------

/// ∫₀¹ ∫₁² |x−y|^{−3/2} dy dx = 4(2−√2): the pair integral of the 1-D
/// power-law kernel with exponent 3/2 (s = 1/4) over two adjacent unit cells.
inline constexpr double kAdjacentUnitCellsPow32 = 2.34314575050762;

/// Same geometry for the milder exponent 1/2:
/// ∫₀¹ ∫₁² |x−y|^{−1/2} dy dx = (4/3)(2√2 − 2) = (8√2 − 8)/3.
inline constexpr double kAdjacentUnitCellsPow12 = 1.1045694996615868;

/// Separated unit cells, one cell apart, exponent 1/2:
/// ∫₀¹ ∫₂³ |x−y|^{−1/2} dy dx = (4/3)(1 + 3√3 − 4√2).
inline constexpr double kSeparatedUnitCellsPow12 = 0.7190642309523356;

/// Same separated geometry for the exponent 3/2 (s = 1/4):
/// ∫₀¹ ∫₂³ |x−y|^{−3/2} dy dx = 4(2√2 − 1 − √3).
inline constexpr double kSeparatedUnitCellsPow32 = 0.3855052687092512;

/// Normalized trace weight at y = −1/4 for the truncated constant kernel
/// (δ = 1/2, amplitude 1) on Ω = (0,1) with shift c = 1:
///   w(−1/4) = ∫₀^{1/4} dx / (3/2 − x) = ln(6/5).
inline constexpr double kTraceWeightQuarterShift1 = 0.18232155679395463;

/// Plain-mass trace weight at the same point: ∫₀^{1/4} dx = 1/4.
inline constexpr double kTraceMassQuarter = 0.25;

/// Uniform-mass sufficiency integral for the indicator kernel with horizon 2
/// on Ω = (0,1) over the retained band (−2,3):
///   (a) = ∫ min_{x∈Ω} 1{|y−x|<2} dy = 3   (bound 2λ(Ω)/(a) = 2/3).
inline constexpr double kIndicatorUniformMass = 3.0;
inline constexpr double kIndicatorPoincareBound = 2.0 / 3.0;

/// Pairwise-overlap sufficiency integral for the truncated constant kernel
/// (δ = 1/2) at pair distance 1/4: two interior points x < y with y−x < 1/4
/// share the interaction window (y−1/2, x+1/2) ∩ (−1/2, 3/2), whose length is
/// at least 1/2 − 1/4 + min(x,…)… the minimum over admissible pairs is 3/4.
inline constexpr double kK1PairOverlapQuarter = 0.75;

// --- independent dense reimplementations ------------------------------------

/// (ℒu)_i straight from the definition, dense loops, no diagonal-cancellation
/// trick: vol·(ℒu)_i = u_i Σ_{a≠i} w(a,i) − Σ_{a≠i} u_a w(i,a).
inline Eigen::VectorXd diffusion_loop(const nnl::Grid& g, const Eigen::MatrixXd& w,
                                      const Eigen::VectorXd& u) {
    const int n = g.n_active();
    Eigen::VectorXd out(g.n_omega);
    for (int i = 0; i < g.n_omega; ++i) {
        double absorb = 0.0, spread = 0.0;
        for (int a = 0; a < n; ++a) {
            if (a == i) continue;
            absorb += w(a, i);
            spread += u[a] * w(i, a);
        }
        out[i] = (u[i] * absorb - spread) / g.volume();
    }
    return out;
}

/// (𝒩u)_k straight from the definition for boundary dofs:
/// vol·(𝒩u)_k = u_k Σ_{i∈Ω} w(i,k) − Σ_{i∈Ω} u_i w(k,i).
inline Eigen::VectorXd flux_loop(const nnl::Grid& g, const Eigen::MatrixXd& w,
                                 const Eigen::VectorXd& u) {
    Eigen::VectorXd out(g.n_boundary());
    for (int k = g.n_omega; k < g.n_active(); ++k) {
        double incoming = 0.0, dot = 0.0;
        for (int i = 0; i < g.n_omega; ++i) {
            incoming += w(i, k);
            dot += u[i] * w(k, i);
        }
        out[k - g.n_omega] = (u[k] * incoming - dot) / g.volume();
    }
    return out;
}

/// First-order (nonsymmetric) energy form from its definition:
///   B(u,v) = ½ Σ_{i,j∈Ω} (u_i w(j,i) − u_j w(i,j))(v_i − v_j)
///          + Σ_{i∈Ω,k∉Ω} (u_i w(k,i) − u_k w(i,k))(v_i − v_k)
///          + Σ_{i∈Ω} α_i u_i v_i vol.
inline double nonsym_form_loop(const nnl::Grid& g, const Eigen::MatrixXd& w,
                               const Eigen::VectorXd& alpha, const Eigen::VectorXd& u,
                               const Eigen::VectorXd& v) {
    double acc = 0.0;
    for (int i = 0; i < g.n_omega; ++i)
        for (int j = 0; j < g.n_omega; ++j)
            acc += 0.5 * (u[i] * w(j, i) - u[j] * w(i, j)) * (v[i] - v[j]);
    for (int i = 0; i < g.n_omega; ++i)
        for (int k = g.n_omega; k < g.n_active(); ++k)
            acc += (u[i] * w(k, i) - u[k] * w(i, k)) * (v[i] - v[k]);
    for (int i = 0; i < g.n_omega; ++i) acc += alpha[i] * u[i] * v[i] * g.volume();
    return acc;
}

/// V-seminorm from its definition as an ordered sum over the first slot in Ω:
///   |u|²_V = Σ_{i∈Ω} Σ_{j active, j≠i} w(i,j) (u_i − u_j)².
inline double v_seminorm_loop(const nnl::Grid& g, const Eigen::MatrixXd& w,
                              const Eigen::VectorXd& u) {
    double acc = 0.0;
    for (int i = 0; i < g.n_omega; ++i)
        for (int j = 0; j < g.n_active(); ++j) {
            if (j == i) continue;
            const double d = u[i] - u[j];
            acc += w(i, j) * d * d;
        }
    return acc;
}

/// Zero-extension energy: the V-seminorm of u extended by 0 outside Ω.
inline double v0_energy_loop(const nnl::Grid& g, const Eigen::MatrixXd& w,
                             const Eigen::VectorXd& u_omega) {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(g.n_active());
    full.head(g.n_omega) = u_omega;
    return v_seminorm_loop(g, w, full);
}

/// Interior boundary density D_i = (1/vol) Σ_{k∈Γ} w(i,k) by direct loop.
inline Eigen::VectorXd density_loop(const nnl::Grid& g, const Eigen::MatrixXd& w) {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(g.n_omega);
    for (int i = 0; i < g.n_omega; ++i)
        for (int k = g.n_omega; k < g.n_omega + g.n_gamma; ++k) d[i] += w(i, k);
    return d / g.volume();
}

/// Normalized trace weights, variant 1, by direct loop.
inline Eigen::VectorXd trace_weights_loop(const nnl::Grid& g, const Eigen::MatrixXd& w,
                                          double c) {
    const Eigen::VectorXd d = density_loop(g, w);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(g.n_gamma);
    for (int k = 0; k < g.n_gamma; ++k)
        for (int i = 0; i < g.n_omega; ++i)
            out[k] += w(i, g.n_omega + k) / (d[i] + c) / g.volume();
    return out;
}

/// Squared W-norm of boundary data by direct loops from the definition.
inline double w_norm_loop(const nnl::Grid& g, const Eigen::MatrixXd& w, double c,
                          const Eigen::VectorXd& v) {
    const Eigen::VectorXd d = density_loop(g, w);
    const Eigen::VectorXd tw = trace_weights_loop(g, w, c);
    double acc = 0.0;
    for (int k = 0; k < g.n_gamma; ++k) acc += v[k] * v[k] * tw[k] * g.volume();
    for (int k = 0; k < g.n_gamma; ++k)
        for (int l = 0; l < g.n_gamma; ++l) {
            if (l == k) continue;
            double cross = 0.0;
            for (int i = 0; i < g.n_omega; ++i)
                cross += w(i, g.n_omega + k) * w(i, g.n_omega + l) /
                         (g.volume() * (d[i] + c));
            const double diff = v[k] - v[l];
            acc += diff * diff * cross;
        }
    return acc;
}

/// Robin interior reformulation entries by direct loops: modified pair kernel
///   γ_α(i,j) = w(i,j) + Σ_{k∈Γ} (1−α_k) c_k w(i,k) w(k,j) / vol,
/// potential γ_{α,Ω}(i) = [Σ_{k∈Γ} α_k c_k w(k,i) + Σ_{k∈Γ̂\Γ} w(k,i)]/vol and
/// source g_Γ(i) = Σ_{k∈Γ} c_k g_k w(i,k)/vol, with
/// c_k = 1/((1−α_k) S'_k + α_k), S'_k = Σ_i w(i,k)/vol.
struct RobinLoop {
    Eigen::MatrixXd gamma_alpha;      // n_omega × n_omega, zero diagonal
    Eigen::VectorXd potential;        // per interior dof
    Eigen::VectorXd source;           // per interior dof
    Eigen::VectorXd c;                // per Γ dof
};
inline RobinLoop robin_loop(const nnl::Grid& g, const Eigen::MatrixXd& w,
                            const Eigen::VectorXd& alpha, const Eigen::VectorXd& data_g) {
    const int n_om = g.n_omega, n_ga = g.n_gamma;
    const double vol = g.volume();
    RobinLoop r;
    r.c.resize(n_ga);
    for (int k = 0; k < n_ga; ++k) {
        double sp = 0.0;
        for (int i = 0; i < n_om; ++i) sp += w(i, n_om + k) / vol;
        r.c[k] = 1.0 / ((1.0 - alpha[k]) * sp + alpha[k]);
    }
    r.gamma_alpha = Eigen::MatrixXd::Zero(n_om, n_om);
    for (int i = 0; i < n_om; ++i)
        for (int j = 0; j < n_om; ++j) {
            if (i == j) continue;
            double acc = w(i, j);
            for (int k = 0; k < n_ga; ++k)
                acc += (1.0 - alpha[k]) * r.c[k] * w(i, n_om + k) * w(n_om + k, j) / vol;
            r.gamma_alpha(i, j) = acc;
        }
    r.potential = Eigen::VectorXd::Zero(n_om);
    for (int i = 0; i < n_om; ++i) {
        double acc = 0.0;
        for (int k = 0; k < n_ga; ++k) acc += alpha[k] * r.c[k] * w(n_om + k, i);
        for (int k = n_om + n_ga; k < g.n_active(); ++k) acc += w(k, i);
        r.potential[i] = acc / vol;
    }
    r.source = Eigen::VectorXd::Zero(n_om);
    for (int i = 0; i < n_om; ++i) {
        double acc = 0.0;
        for (int k = 0; k < n_ga; ++k) acc += r.c[k] * data_g[k] * w(i, n_om + k);
        r.source[i] = acc / vol;
    }
    return r;
}

/// Brute-force pair weight ∫_{C_i}∫_{C_j} γ(y,x) dy dx by tensor midpoint
/// subdivision with n points per axis and cell.  Slow and simple; used to
/// bound the accuracy of the library's adaptive pair integration.
inline double brute_pair_weight(const nnl::Grid& g, const nnl::Kernel& kernel, int cell_i,
                                int cell_j, int n) {
    const nnl::CellGeom gi = g.geom_of_cell(cell_i);
    const nnl::CellGeom gj = g.geom_of_cell(cell_j);
    const double step = g.h / n;
    const int ny = g.dim == 2 ? n : 1;
    double acc = 0.0;
    for (int ax = 0; ax < n; ++ax)
        for (int ay = 0; ay < ny; ++ay)
            for (int bx = 0; bx < n; ++bx)
                for (int by = 0; by < ny; ++by) {
                    nnl::Point x = gi.lo, y = gj.lo;
                    x[0] += (ax + 0.5) * step;
                    y[0] += (bx + 0.5) * step;
                    if (g.dim == 2) {
                        x[1] += (ay + 0.5) * step;
                        y[1] += (by + 0.5) * step;
                    }
                    acc += kernel.eval(y, x);
                }
    const double sub = std::pow(step, g.dim);
    return acc * sub * sub;
}

} // namespace oracle
