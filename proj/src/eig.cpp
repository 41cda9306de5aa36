#include "nnl/eig.hpp"

#include <limits>

#include "nnl/errors.hpp"

namespace nnl {

namespace {

/// Largest eigenvalue of a regular SPD-pencil, both matrices already reduced
/// to the subspace where B is definite.
double regular_pencil_max(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    const int n = static_cast<int>(a.rows());
    if (n == 0) return 0.0;
    if (n <= 2000) {
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, b, Eigen::Ax_lBx |
                                                                               Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success)
            throw HypothesisError("largest_pencil_eigenvalue: dense eigensolver failed");
        return es.eigenvalues().maxCoeff();
    }
    // Power iteration on B⁻¹(A + σB) with a spectrum shift that makes the
    // target eigenvalue the one of largest modulus.
    Eigen::LDLT<Eigen::MatrixXd> bldlt(b);
    if (bldlt.info() != Eigen::Success)
        throw HypothesisError("largest_pencil_eigenvalue: factorization of the Gram matrix failed");
    // Gershgorin-type bound on |λ|: ‖B⁻¹A‖ estimated through a few matvecs.
    Eigen::VectorXd x = Eigen::VectorXd::Ones(n).normalized();
    double shift = 0.0;
    for (int warm = 0; warm < 5; ++warm) {
        Eigen::VectorXd y = bldlt.solve(a * x);
        shift = std::max(shift, y.norm() / x.norm());
        x = y.normalized();
    }
    shift = 2.0 * shift + 1.0;
    double rho = 0.0;
    x = Eigen::VectorXd::Ones(n).normalized();
    for (int it = 0; it < 20000; ++it) {
        Eigen::VectorXd y = bldlt.solve(a * x) + shift * x;
        y.normalize();
        const double num = y.dot(a * y);
        const double den = y.dot(b * y);
        const double rho_new = num / den;
        if (it > 0 && std::abs(rho_new - rho) <= 1e-8 * std::max(1.0, std::abs(rho_new))) {
            return rho_new;
        }
        rho = rho_new;
        x = y;
    }
    return rho;
}

} // namespace

PencilEigen largest_pencil_eigenvalue(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw ContractError("largest_pencil_eigenvalue: matrices must be square and equally sized");
    const int n = static_cast<int>(a.rows());
    PencilEigen out;
    if (n == 0) return out;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> bes(b);
    if (bes.info() != Eigen::Success)
        throw HypothesisError("largest_pencil_eigenvalue: eigendecomposition of the Gram matrix failed");
    const Eigen::VectorXd bev = bes.eigenvalues();
    const double bmax = std::max(bev.maxCoeff(), 0.0);
    const double bcut = std::max(bmax, 1.0) * n * std::numeric_limits<double>::epsilon() * 64.0;
    const double acut = std::max(a.cwiseAbs().maxCoeff(), 1.0) * n *
                        std::numeric_limits<double>::epsilon() * 64.0;

    int n_def = 0;
    for (int i = 0; i < n; ++i)
        if (bev[i] > bcut) ++n_def;

    if (n_def < n) {
        // Null directions of B on which A is active push the quotient to ∞.
        for (int i = 0; i < n; ++i) {
            if (bev[i] > bcut) continue;
            const Eigen::VectorXd v = bes.eigenvectors().col(i);
            if (std::abs(v.dot(a * v)) > acut) {
                out.infinite = true;
                out.value = std::numeric_limits<double>::infinity();
                return out;
            }
        }
    }
    if (n_def == 0) return out;

    Eigen::MatrixXd z(n, n_def);
    Eigen::VectorXd scale(n_def);
    int c = 0;
    for (int i = 0; i < n; ++i)
        if (bev[i] > bcut) {
            z.col(c) = bes.eigenvectors().col(i);
            scale[c] = bev[i];
            ++c;
        }
    // Reduced pencil: (ZᵀAZ) y = λ diag(ZᵀBZ) y, diagonal by orthogonality.
    const Eigen::MatrixXd ar = z.transpose() * a * z;
    out.value = regular_pencil_max(ar, scale.asDiagonal());
    return out;
}

Eigen::MatrixXd mean_zero_basis(int n) {
    if (n < 1) throw ContractError("mean_zero_basis: need at least one dof");
    Eigen::VectorXd u = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
    Eigen::VectorXd w = u;
    w[0] -= 1.0; // reflector sending the normalized constant onto e₁
    const double nw = w.norm();
    if (nw < 1e-14) return Eigen::MatrixXd::Identity(n, n).rightCols(n - 1);
    w /= nw;
    Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n) - 2.0 * w * w.transpose();
    return h.rightCols(n - 1);
}

} // namespace nnl
