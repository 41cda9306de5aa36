#pragma once

#include <Eigen/Dense>

namespace nnl {

/// Largest eigenvalue of the symmetric pencil A x = λ B x with A, B symmetric
/// and B positive semidefinite.
struct PencilEigen {
    double value = 0.0;   ///< sup of the Rayleigh quotient (meaningful when finite)
    bool infinite = false; ///< true when B has a null direction that A sees
};

/// Computes sup_{x≠0, Bx≠0} xᵀAx / xᵀBx.  B may be singular: directions in
/// its (numerical) null space on which A is active make the supremum
/// infinite; null directions invisible to A are quotiented out.  Dense solve
/// up to moderate sizes, inverse-free power iteration above (relative
/// tolerance 1e-8).
PencilEigen largest_pencil_eigenvalue(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// Orthonormal basis of the orthogonal complement of the constant vector in
/// ℝⁿ (n×(n−1) matrix), via one Householder reflector.  Used to restrict
/// eigenvalue problems to mean-zero fields on uniform grids.
Eigen::MatrixXd mean_zero_basis(int n);

} // namespace nnl
