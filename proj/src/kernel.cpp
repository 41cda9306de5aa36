#include "nnl/kernel.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace nnl {

Kernel make_truncated_constant(double delta, double amplitude, int dim) {
    if (!(delta > 0)) throw ContractError("make_truncated_constant: delta must be positive");
    if (!(amplitude >= 0)) throw ContractError("make_truncated_constant: amplitude must be nonnegative");
    if (dim != 1 && dim != 2) throw ContractError("make_truncated_constant: dim must be 1 or 2");
    Kernel k;
    k.dim = dim;
    k.symmetric = true;
    k.horizon = delta;
    k.label = "truncated_constant(delta=" + std::to_string(delta) +
              ",A=" + std::to_string(amplitude) + ")";
    k.eval = [delta, amplitude](const Point& a, const Point& b) {
        return (a - b).norm() < delta ? amplitude : 0.0;
    };
    check_kernel_samples(k, 2.0 * delta);
    return k;
}

Kernel make_fractional(double s, int dim) {
    if (!(s > 0 && s < 1)) throw ContractError("make_fractional: s must lie in (0,1)");
    if (dim != 1 && dim != 2) throw ContractError("make_fractional: dim must be 1 or 2");
    const double beta = dim + 2.0 * s;
    Kernel k;
    k.dim = dim;
    k.symmetric = true;
    k.singular_exponent = beta;
    k.power_law = PowerLaw{1.0, beta};
    k.label = "fractional(s=" + std::to_string(s) + ")";
    k.eval = [beta](const Point& a, const Point& b) {
        double r = (a - b).norm();
        return std::pow(r, -beta); // +inf at r==0; callers avoid the diagonal
    };
    check_kernel_samples(k, 2.0);
    return k;
}

Kernel transpose(const Kernel& gamma) {
    if (!gamma.eval) throw ContractError("transpose: kernel has no eval");
    if (gamma.symmetric) return gamma;
    Kernel k = gamma;
    k.label = "transpose(" + gamma.label + ")";
    auto base = gamma.eval;
    k.eval = [base](const Point& a, const Point& b) { return base(b, a); };
    // Transposition swaps which orientation a power law describes; since the
    // metadata is only used for radial (hence symmetric) kernels it is kept.
    return k;
}

Kernel symmetrize_outside(const Kernel& eta, const OmegaSpec& omega) {
    if (!eta.eval) throw ContractError("symmetrize_outside: kernel has no eval");
    omega.validate();
    if (eta.dim != omega.dim) throw ContractError("symmetrize_outside: dim mismatch");
    Kernel k = eta;
    k.symmetric = false; // symmetric only outside Ω×Ω by construction
    k.label = "symmetrize_outside(" + eta.label + ")";
    auto base = eta.eval;
    OmegaSpec om = omega;
    k.eval = [base, om](const Point& a, const Point& b) {
        if (om.contains(a) && om.contains(b)) return base(a, b);
        return 0.5 * (base(a, b) + base(b, a));
    };
    return k;
}

Kernel tilde_gamma(const Kernel& gamma, const Kernel& k) {
    if (!gamma.eval || !k.eval) throw ContractError("tilde_gamma: kernel has no eval");
    if (gamma.dim != k.dim) throw ContractError("tilde_gamma: dim mismatch");
    Kernel out = gamma;
    out.symmetric = false;
    out.label = "tilde(" + gamma.label + ")";
    auto g = gamma.eval;
    auto kk = k.eval;
    out.eval = [g, kk](const Point& a, const Point& b) {
        double fwd = g(a, b);
        double diff = g(b, a) - fwd;
        if (diff == 0.0) return fwd;
        double denom = kk(a, b);
        if (denom <= 0.0) return std::numeric_limits<double>::infinity();
        return std::max(fwd, diff * diff / denom);
    };
    return out;
}

Kernel tilde_gamma(const Kernel& gamma) {
    Kernel ones;
    ones.dim = gamma.dim;
    ones.symmetric = true;
    ones.label = "one";
    ones.eval = [](const Point&, const Point&) { return 1.0; };
    Kernel out = tilde_gamma(gamma, ones);
    out.label = "tilde(" + gamma.label + ",k=1)";
    return out;
}

void check_kernel_samples(const Kernel& gamma, double box_halfwidth) {
    if (!gamma.eval) throw ContractError("kernel has no eval");
    std::mt19937_64 rng(0x6b65726e); // fixed seed: check is deterministic
    std::uniform_real_distribution<double> u(-box_halfwidth, box_halfwidth);
    for (int trial = 0; trial < 64; ++trial) {
        Point a = Point::Zero(), b = Point::Zero();
        for (int axis = 0; axis < gamma.dim; ++axis) { a[axis] = u(rng); b[axis] = u(rng); }
        if (gamma.singular_exponent && (a - b).norm() < 1e-6) continue;
        double v = gamma.eval(a, b);
        if (std::isnan(v) || v < 0.0)
            throw ContractError("kernel sample check failed: negative or NaN value for '" +
                                gamma.label + "'");
    }
}

} // namespace nnl
