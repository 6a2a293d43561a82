#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "permkit/classify.hpp"
#include "permkit/matrix.hpp"

namespace permkit {

/// Constructive M-matrix decomposition B D = lambda I - C with C >= 0 and
/// lambda above the spectral radius of C; D carries the row sums of B^{-1}.
struct MDecomposition {
    Diagonal d;
    double lambda = 0.0;
    Matrix c;
    double residual = 0.0;  // max |(BD + C - lambda I)(i,j)|

    MDecomposition(int n) : d(n), c(n) {}
};

/// Throws NotMMatrix when b fails the M-matrix test.
MDecomposition mmatrix_decompose(const Matrix& b, Tol tol = {});

/// Strict diagonal dominance of bd plus positive definiteness of bd + bd^T;
/// together these force all eigenvalues of bd into the open right half
/// plane.
bool dominance_pd_check(const Matrix& bd);

/// Multi-index over at most 4 variables: exponents of z_1..z_n.
using MultiIndex = std::array<uint8_t, 4>;

/// Truncated coefficients of -log det(I - Z G), Z = diag(z_1..z_n), i.e.
/// sum_k trace((Z G)^k) / k up to total degree max_degree. The coefficient
/// of a degree-k monomial is the sum of its cyclic entry products / k.
struct SeriesCertificate {
    int max_degree = 0;
    std::map<MultiIndex, double> coefficients;
    double min_coefficient = 0.0;
    MultiIndex min_index{};
    enum class Verdict { Nonneg, NegativeAt } verdict = Verdict::Nonneg;
    double tol_used = 0.0;  // nonnegativity threshold 1e-10 (1 + max|G|)^K
};

/// Explicit enumeration of index sequences (n^K * K work): the enumeration
/// is simple enough to double as its own oracle. Requires n <= 4 and
/// max_degree <= 12 (throws DimensionError / DegreeTooLarge).
SeriesCertificate log_det_series(const Kernel& k, int max_degree);

/// Certificate that a kernel admits every exponent beta > 0: class-2
/// membership plus a nonnegative truncated series on the
/// signature-normalized kernel (two views of the same mechanism).
struct CertifyResult {
    bool certified = false;
    std::optional<Class2Witness> class2;
    std::optional<SeriesCertificate> series;  // absent when n > 4 (enumeration cap)
    std::string failure;                      // "InverseNotM", "Singular", ...
};

CertifyResult certify_all_beta(const Kernel& k, int max_degree);

/// Pin a subset of indices at fixed nonnegative values and eliminate them
/// from the kernel, one index at a time.
struct ReductionSpec {
    std::map<int, double> fixed;  // index -> pin value u >= 0
    std::vector<int> remaining;   // must be exactly the complement
};

/// Iterated elimination, last pinned index first: removing index p at pin u
/// replaces G(i,j) by G(i,j) - u/(1+u) G(i,p) G(p,j) on the surviving
/// indices. The result is itself a candidate kernel.
Kernel reduce_kernel(const Kernel& k, const ReductionSpec& spec);

/// Sign behaviour of the reduced 2x2 off-diagonal pair over pin values
/// v in (0,1), for each of the three pin choices of a 3x3 kernel with
/// positive entries. A kernel either satisfies all six domination
/// inequalities (the M-matrix side) or the cycle equality (the symmetric
/// side); anything else contradicts kernel-hood.
struct ReductionSignReport {
    enum class Branch { Inequalities, CycleEquality, Violation } branch = Branch::Violation;
    std::array<bool, 6> inequalities{};  // (pin 2: a1,a2), (pin 1: c-pair), (pin 0: b-pair)
    double cycle_forward = 0.0, cycle_backward = 0.0;
    int witness_pin = -1;  // pin choice of the most negative product found
    double witness_v = 0.0;
    double witness_product = 0.0;
};

const char* to_string(ReductionSignReport::Branch b);

ReductionSignReport reduction_sign_test(const Kernel& k);

}  // namespace permkit
