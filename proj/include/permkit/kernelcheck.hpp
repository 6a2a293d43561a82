#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "permkit/matcore.hpp"
#include "permkit/matrix.hpp"

namespace permkit {

/// Necessary conditions for a candidate permanental kernel. Each field uses
/// -tol as the pass boundary so analytically-zero quantities pass under
/// rounding.
struct NecessaryReport {
    std::vector<bool> diag_nonneg;                   // per index
    std::vector<std::array<int, 2>> pair_index;      // (i,j), i < j, for the two per-pair fields
    std::vector<bool> pair_products_nonneg;          // G(i,j)G(j,i) >= 0
    std::vector<bool> minors2_nonneg;                // G(i,i)G(j,j) - G(i,j)G(j,i) >= 0
    bool det_nonneg = false;
    bool real_eigs_positive = false;                 // all real nonzero eigenvalues positive
    bool overall = false;
    std::string first_failure;                       // empty when overall passes
};

NecessaryReport check_necessary(const Kernel& k);

/// Result of the signature normalization: SGS has off-diagonals of a uniform
/// sign (zero counts as both signs). Signature normalized to s_0 = +1.
struct SignNormalization {
    Kernel kernel;
    Diagonal signature;
    bool nonnegative;  // true: uniform pattern is >= 0, false: <= 0
};

/// Exhaustive search over the 2^3 signature matrices. Throws NotNormalizable
/// when no signature reaches a uniform pattern (only possible when some pair
/// has strictly mixed signs). 3x3 only.
SignNormalization sign_normalize(const Kernel& k);

struct Balanced {
    Kernel kernel;      // equal-magnitude a and c pairs, b pair product preserved
    Diagonal scaling;   // witness D with D E D^{-1} = balanced kernel
};

/// Two-parameter diagonal rescaling of a 3x3 kernel with strictly uniform
/// off-diagonal sign. Throws MixedSigns.
Balanced balance(const Kernel& k);

/// The two cyclic products (a1 b1 c1, a2 b2 c2) of a 3x3 kernel. Their
/// equality characterizes diagonal equivalence to a symmetric matrix when
/// all pairs are nonzero.
std::pair<double, double> cycle_condition(const Kernel& k);

enum class EquivalenceKind { Symmetric, EffectivelySymmetric, NotEquivalent };

struct EquivalenceWitness {
    EquivalenceKind kind = EquivalenceKind::NotEquivalent;
    std::optional<Diagonal> scaling;  // D with D G D^{-1} = target, when one exists
    std::optional<Matrix> target;     // symmetric matrix with identical scaled minors
    /// Set when a pair with exactly one zero entry was resolved with the
    /// nonnegative square-root convention.
    bool sign_flagged = false;
};

/// Decide whether a 3x3 kernel is diagonally (or effectively) equivalent to
/// a symmetric matrix, with an explicit witness. Requires pair products
/// >= 0 (throws NegativePairProduct).
EquivalenceWitness diag_equiv_symmetric(const Kernel& k);

/// Entrywise symmetrization: diagonal kept, off-diagonal (i,j) replaced by
/// sqrt(G(i,j) G(j,i)) >= 0. Throws NegativePairProduct.
Matrix symmetrize(const Kernel& k);

struct PerronTestResult {
    bool pass = true;
    std::optional<Diagonal> counterexample;  // row scaling whose max-modulus eigenvalue set
                                             // has no real positive member
    int failing_trial = -1;                  // index into planted-then-random sequence
    bool failed_on_planted = false;
};

/// Randomized necessary-condition test: every nonnegative row scaling U of a
/// kernel must leave a real positive eigenvalue of maximal modulus in U*G.
/// Draws `trials` diagonals from a fixed mixture (uniform[0,1], uniform[0,10],
/// sparse zeros), deterministic in `seed`; `planted` diagonals are tested
/// first so known thin counterexamples are always exercised.
PerronTestResult row_scaled_perron_test(const Kernel& k, int trials, uint64_t seed,
                                        std::span<const Diagonal> planted = {});

}  // namespace permkit
