#pragma once

#include <vector>

#include "permkit/matrix.hpp"

namespace permkit {

/// Determinant. Exact cofactor expansion for n <= 4, LU with partial
/// pivoting otherwise.
double det(const Matrix& m);

/// Scale-aware singularity guard: 1e-12 * max(1, max|entry|)^n.
double singular_tol(const Matrix& m);

/// Inverse. Throws SingularMatrix when |det| <= singular_tol(m).
Matrix inverse(const Matrix& m);

/// Adjugate (transposed cofactor matrix): m * adjugate(m) = det(m) * I.
/// Defined even when det(m) = 0.
Matrix adjugate(const Matrix& m);

/// Coefficients of det(m - lambda I) as a polynomial in lambda, ascending by
/// power; coeffs[n] = (-1)^n. Computed by the Faddeev-LeVerrier recurrence.
std::vector<double> char_poly(const Matrix& m);

/// All eigenvalues. Closed-form (quadratic / trigonometric cubic) for
/// n <= 3, companion-matrix QR iteration otherwise. Sorted by
/// (Re descending, Im descending). Throws NoConvergence if the QR iteration
/// exceeds its cap.
Spectrum eigenvalues(const Matrix& m);

/// Companion-matrix QR route at any n (the generic path of `eigenvalues`,
/// exposed so the closed forms can be cross-checked against it).
Spectrum eigenvalues_companion_qr(const Matrix& m);

/// Max modulus over eigenvalues(m).
double spectral_radius(const Matrix& m);

/// D m D^{-1}; entry (i,j) = d_i m(i,j) / d_j. Throws ZeroDiagonal.
Matrix diag_conjugate(const Diagonal& d, const Matrix& m);

/// Row scaling U m with nonnegative U; entry (i,j) = u_i m(i,j).
/// Throws NegativeScale.
Matrix row_scale(const Diagonal& u, const Matrix& m);

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Eigenvalues ascending; columns of `vectors` are the eigenvectors.
struct SymEigen {
    std::vector<double> values;
    Matrix vectors;
};
SymEigen sym_eigen(const Matrix& m);

}  // namespace permkit
