#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "permkit/matrix.hpp"

namespace permkit {

/// Diagonal scalings derived from the balanced off-diagonal magnitudes
/// (a, b, c) of a unit-diagonal 3x3 matrix:
///   Rho: (b/(b-ac), c/(c-ab), a/(a-bc))  -- requires nonzero denominators
///   Phi: (b/(b+ac), c/(c+ab), a/(a+bc))  -- each in (0,1) for a,b,c in (0,1)
struct SpectralScaling {
    enum class Kind { Rho, Phi } kind;
    std::array<double, 3> entries;

    Diagonal diagonal() const { return Diagonal{entries[0], entries[1], entries[2]}; }
};

struct RhoFactorization {
    SpectralScaling scaling;
    double residual;       // max |char_poly(rho H) - (l-1)^2 (rho1 rho2 rho3 |H| - l)| coefficientwise
    double scaled_det;     // rho1 rho2 rho3 |H|, the third eigenvalue of rho H
};

/// Verify that rho H has eigenvalue 1 with multiplicity 2 for a symmetric
/// unit-diagonal H, by comparing characteristic polynomials. Throws
/// ZeroDenominator when a rho denominator vanishes.
RhoFactorization rho_factorization_check(const Matrix& h, Tol tol = {});

/// Phi entries for strictly positive (a, b, c). Throws NonPositiveInput.
SpectralScaling phi_scaling(double a, double b, double c);

/// The strictly positive Phi used by the one-real-eigenvalue tests, built
/// from the balanced pair magnitudes of the matrix; pairs with exactly one
/// zero member get the positive root of the associated quadratic.
Diagonal dichotomy_phi(const Matrix& a, Tol tol = {});

struct EigenDichotomy {
    int real_count = 0;  // 1 or 3 for real 3x3 input
    std::optional<double> real_value;         // the lone real eigenvalue when real_count == 1
    std::optional<double> complex_real_part;  // shared real part of the complex pair
    enum class Ordering { RealBelow, RealAbove, NotApplicable } ordering = Ordering::NotApplicable;
};

/// Eigenvalue structure of Phi * A for an all-nonpositive-off-diagonal A.
/// When A is not equivalent to a symmetric matrix the expected outcome is a
/// single real eigenvalue lying below the real part of the complex pair.
EigenDichotomy negative_case_dichotomy(const Matrix& a_minus, Tol tol = {});

/// Counterpart for entrywise-nonnegative A whose inverse is an M-matrix:
/// a single real eigenvalue lying above the complex real parts.
EigenDichotomy positive_case_dichotomy(const Matrix& a_plus, Tol tol = {});

/// Modified resolvent G (I + r G)^{-1}. Throws SingularMatrix.
Matrix modified_resolvent(const Kernel& k, double r);

struct ResolventSweep {
    std::vector<double> r_grid;
    std::vector<std::pair<double, double>> per_r;  // (det(I + rG), min entry of G_r)
    enum class Verdict { AllNonneg, FailsAt, DetFailsAt } verdict = Verdict::AllNonneg;
    double fail_r = 0.0;             // smallest failing r (meaningful unless AllNonneg)
    bool real_eigs_positive = true;  // exact supplement: real nonzero eigenvalues positive
};

const char* to_string(ResolventSweep::Verdict v);

/// Grid sweep of the existence conditions: det(I + rG) > 0 and all entries
/// of the modified resolvent nonnegative, on 0 plus `steps` geometric points
/// in [1e-3 r_max, r_max] plus 16 uniform points. A grid check is a
/// semi-decision; the exact eigenvalue supplement catches determinant sign
/// changes between grid points.
ResolventSweep vere_jones_sweep(const Kernel& k, double r_max, int steps);

}  // namespace permkit
