#pragma once

#include <optional>
#include <string>
#include <vector>

#include "permkit/kernelcheck.hpp"
#include "permkit/matrix.hpp"

namespace permkit {

/// True iff m is symmetric (within tolerance) with all eigenvalues >= -tol.
/// Positive definite here includes positive semi-definite. Throws
/// NotSymmetric on asymmetric input.
bool is_psd(const Matrix& m, Tol tol = {});

struct Class1Witness {
    Diagonal scaling;  // composed signature and rescaling (identity when only
                       // effective equivalence is available)
    Matrix target;     // symmetric PSD matrix with the same scaled minors
    bool effective;    // target reached by effective equivalence only
};

/// Membership in class 1: diagonally equivalent to a symmetric PSD matrix.
/// For n == 3 runs the full normalize/equivalence/PSD pipeline; at other
/// dimensions only already-symmetric kernels are recognized.
std::optional<Class1Witness> is_class1(const Kernel& k);

struct MMatrixCheck {
    bool pass = false;
    /// One of "", "PositiveOffDiagonal", "Singular", "NegativeInverseEntry".
    std::string diagnosis;
};

/// M-matrix test: off-diagonals <= 0, invertible, inverse entrywise >= 0.
MMatrixCheck is_mmatrix(const Matrix& b, Tol tol = {});

struct Class2Witness {
    Diagonal signature;  // N with (N G N)^{-1} an M-matrix
    Matrix mmatrix;      // N G^{-1} N
};

/// Membership in class 2: the inverse is diagonally equivalent to an
/// M-matrix. Signature search is exhaustive (2^n, n <= 8); positive
/// rescalings cannot change M-matrix-ness, so the search is complete.
/// Throws SingularMatrix when the kernel is not invertible.
std::optional<Class2Witness> is_class2(const Kernel& k);

enum class Verdict { Class1, Class2, Both, NotKernel, Undetermined };

const char* to_string(Verdict v);

struct ConditionNote {
    std::string name;
    bool pass;
    std::string detail;
};

struct ClassificationReport {
    Verdict verdict = Verdict::Undetermined;
    std::optional<Class1Witness> class1_witness;
    std::optional<Class2Witness> class2_witness;
    std::string failure;  // named condition when verdict is NotKernel/Undetermined
    std::vector<ConditionNote> notes;
    /// Admissible exponents implied by the verdict: class 2 gives all
    /// beta > 0; class-1-only gives the half-integers (finer sets open).
    std::string beta_note;
};

/// Full 3x3 classification. Every 3x3 kernel lies in class 1 or class 2, so
/// a matrix in neither class is not a kernel; NotKernel is emitted only at
/// n == 3 where that dichotomy applies. Throws DimensionError otherwise.
ClassificationReport classify3(const Kernel& k);

struct IndependenceReport {
    bool pairwise_independent = false;  // all off-diagonal pair products vanish
    bool product_form = false;          // det(I + alpha G) = prod(1 + alpha_i G(i,i)) + C prod(alpha_i)
    double c_coefficient = 0.0;         // the C above
    bool fully_independent = false;
    double shape_residual = 0.0;        // max principal-minor deviation from the product form
};

/// Independence structure of the components: pairwise independence plus the
/// product-form determinant test with the C coefficient extracted by
/// interpolation of det(I + alpha G) on the {0,1}^n grid. n <= 4.
IndependenceReport independence_report(const Kernel& k);

enum class FamilyBranch { Plus, Minus };

/// Symmetric unit-diagonal singular matrix [[1, sin x, cos y],
/// [sin x, 1, sin(x±y)], [cos y, sin(x±y), 1]]; determinant 0 by
/// construction. Throws SignConstraint unless sin x, cos y, sin(x±y) >= 0.
Matrix singular_family(double x, double y, FamilyBranch branch);

}  // namespace permkit
