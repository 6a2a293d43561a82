#include <doctest.h>

#include <cmath>

#include "permkit/kernelcheck.hpp"
#include "permkit/spectra.hpp"
#include "test_util.hpp"

using namespace permkit;
using namespace permkit::testutil;

namespace {

/// Random 3x3 candidate with sign-consistent off-diagonal pairs (so the
/// necessary pair-product condition can hold) and positive diagonal.
Matrix random_sign_coupled(RngStream& rng) {
    Matrix g(3);
    for (int i = 0; i < 3; ++i) g(i, i) = rng.uniform(0.2, 1.5);
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            const double s = rng.below(2) ? 1.0 : -1.0;
            g(i, j) = s * rng.uniform(0.0, 1.0);
            g(j, i) = s * rng.uniform(0.0, 1.0);
        }
    return g;
}

}  // namespace

TEST_CASE("check_necessary: identity, zero-pair cyclic matrix, bad minor") {
    const auto all = check_necessary(Kernel(Matrix::identity(3)));
    CHECK(all.overall);
    CHECK(all.first_failure.empty());

    // cyclic matrix with vanishing pair products passes every necessary
    // condition (det = 2, lone real eigenvalue 2) yet fails classification
    const auto cyc = check_necessary(Kernel(Matrix{{1, 1, 0}, {0, 1, 1}, {1, 0, 1}}));
    CHECK(cyc.overall);
    for (bool b : cyc.pair_products_nonneg) CHECK(b);
    CHECK(cyc.det_nonneg);

    const auto bad = check_necessary(Kernel(Matrix{{1, 2}, {2, 1}}));
    CHECK_FALSE(bad.overall);
    CHECK_FALSE(bad.minors2_nonneg[0]);
    CHECK(bad.first_failure == "MinorNegative");
}

TEST_CASE("check_necessary flags negative diagonal and negative determinant") {
    const auto diag = check_necessary(Kernel(Matrix{{-1, 0}, {0, 1}}));
    CHECK_FALSE(diag.overall);
    CHECK(diag.first_failure == "DiagNegative");

    // det = -0.232 < 0 but pair products and 2x2 minors fine
    const auto detneg = check_necessary(Kernel(Matrix{{1, .8, .8}, {.8, 1, -.8}, {.8, -.8, 1}}));
    CHECK_FALSE(detneg.det_nonneg);
}

TEST_CASE("sign_normalize: canonical patterns") {
    // two negative pairs flip to the all-positive pattern with (1,-1,-1)
    const double a = 0.3, b = 0.5, c = 0.2;
    const Matrix two_neg{{1, -a, -c}, {-a, 1, b}, {-c, b, 1}};
    const auto norm1 = sign_normalize(Kernel(two_neg));
    CHECK(norm1.nonnegative);
    CHECK(norm1.signature[0] == 1.0);
    CHECK(norm1.signature[1] == -1.0);
    CHECK(norm1.signature[2] == -1.0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) CHECK(norm1.kernel.matrix()(i, j) >= 0.0);

    // one negative pair flips to the all-negative pattern
    const Matrix one_neg{{1, -a, c}, {-a, 1, b}, {c, b, 1}};
    const auto norm2 = sign_normalize(Kernel(one_neg));
    CHECK_FALSE(norm2.nonnegative);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) CHECK(norm2.kernel.matrix()(i, j) <= 0.0);

    // already positive: identity signature
    const auto norm3 = sign_normalize(Kernel(Matrix{{1, .1, .2}, {.3, 1, .4}, {.5, .6, 1}}));
    CHECK(norm3.nonnegative);
    for (int i = 0; i < 3; ++i) CHECK(norm3.signature[i] == 1.0);

    // strictly mixed pair cannot be normalized
    CHECK_THROWS_AS(sign_normalize(Kernel(Matrix{{1, .5, 0}, {-.5, 1, 0}, {0, 0, 1}})),
                    NotNormalizable);
}

TEST_CASE("sign_normalize preserves every necessary-condition verdict") {
    RngStream rng(21);
    for (int trial = 0; trial < 1000; ++trial) {
        const Matrix g = random_sign_coupled(rng);
        const Kernel k(g);
        const auto before = check_necessary(k);
        const auto norm = sign_normalize(k);
        const auto after = check_necessary(norm.kernel);
        CHECK(before.overall == after.overall);
        CHECK(before.det_nonneg == after.det_nonneg);
        CHECK(before.real_eigs_positive == after.real_eigs_positive);
        for (size_t i = 0; i < before.pair_products_nonneg.size(); ++i) {
            CHECK(before.pair_products_nonneg[i] == after.pair_products_nonneg[i]);
            CHECK(before.minors2_nonneg[i] == after.minors2_nonneg[i]);
        }
    }
}

TEST_CASE("balance: symmetric fixed point and hand-solved rescaling") {
    const Matrix sym{{1, .5, .2}, {.5, 1, .4}, {.2, .4, 1}};
    const auto bs = balance(Kernel(sym));
    CHECK(max_abs_diff(bs.kernel.matrix(), sym) < 1e-12);
    for (int i = 0; i < 3; ++i) CHECK(bs.scaling[i] == doctest::Approx(1.0));

    const Matrix e{{1, 4, 1}, {1, 1, 1}, {1, 1, 1}};
    const auto be = balance(Kernel(e));
    CHECK(be.kernel.matrix()(0, 1) == doctest::Approx(2.0));
    CHECK(be.kernel.matrix()(1, 0) == doctest::Approx(2.0));
    // witness conjugation reproduces the balanced kernel
    CHECK(max_abs_diff(diag_conjugate(be.scaling, e), be.kernel.matrix()) < 1e-12);

    const Matrix en{{1, -4, -1}, {-1, 1, -1}, {-1, -1, 1}};
    const auto ben = balance(Kernel(en));
    CHECK(ben.kernel.matrix()(0, 1) == doctest::Approx(-2.0));
    CHECK(ben.kernel.matrix()(1, 0) == doctest::Approx(-2.0));

    CHECK_THROWS_AS(balance(Kernel(Matrix{{1, 1, -1}, {1, 1, 1}, {1, 1, 1}})), MixedSigns);
}

TEST_CASE("balance preserves det, char_poly, pair products and diagonal") {
    RngStream rng(22);
    for (int trial = 0; trial < 500; ++trial) {
        Matrix g(3);
        const double s = rng.below(2) ? 1.0 : -1.0;
        for (int i = 0; i < 3; ++i) g(i, i) = rng.uniform(0.5, 1.5);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (i != j) g(i, j) = s * rng.uniform(0.05, 1.0);
        const Kernel k(g);
        const auto b = balance(k);
        const Matrix& e = b.kernel.matrix();
        CHECK(det(e) == doctest::Approx(det(g)).epsilon(1e-10));
        const auto ca = char_poly(g), cb = char_poly(e);
        for (size_t i = 0; i < ca.size(); ++i)
            CHECK(std::abs(ca[i] - cb[i]) < 1e-10 * (1 + std::abs(ca[i])));
        for (int i = 0; i < 3; ++i) CHECK(e(i, i) == doctest::Approx(g(i, i)).epsilon(1e-12));
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                CHECK(e(i, j) * e(j, i) == doctest::Approx(g(i, j) * g(j, i)).epsilon(1e-10));
    }
}

TEST_CASE("cycle_condition values") {
    const auto sym = cycle_condition(Kernel(Matrix{{1, .5, .2}, {.5, 1, .4}, {.2, .4, 1}}));
    CHECK(sym.first == doctest::Approx(sym.second));

    const auto rot = cycle_condition(Kernel(Matrix{{1, .9, .1}, {.1, 1, .9}, {.9, .1, 1}}));
    CHECK(rot.first == doctest::Approx(0.729));
    CHECK(rot.second == doctest::Approx(0.001));

    const auto zer = cycle_condition(Kernel(Matrix{{1, .5, .2}, {.4, 1, 0}, {.3, 0, 1}}));
    CHECK(zer.first == doctest::Approx(0.0));
    CHECK(zer.second == doctest::Approx(0.0));
}

TEST_CASE("diag_equiv_symmetric: the three contract cases") {
    // cycle products 2 vs 0.5: no symmetric equivalent
    const auto w1 = diag_equiv_symmetric(Kernel(Matrix{{1, 2, 1}, {0.5, 1, 1}, {1, 1, 1}}));
    CHECK(w1.kind == EquivalenceKind::NotEquivalent);

    // full pairs with matching cycles: explicit scaling
    const Kernel k2{Matrix{{1, 2, 2}, {0.5, 1, 1}, {0.5, 1, 1}}};
    const auto w2 = diag_equiv_symmetric(k2);
    REQUIRE(w2.kind == EquivalenceKind::Symmetric);
    REQUIRE(w2.scaling.has_value());
    REQUIRE(w2.target.has_value());
    const Matrix conj = diag_conjugate(*w2.scaling, k2.matrix());
    CHECK(max_abs_diff(conj, *w2.target) < 1e-9);
    CHECK(w2.target->is_symmetric(1e-12));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK((*w2.target)(i, j) == doctest::Approx(1.0));

    // zeros force the effective form [[1,0,1],[0,1,0],[1,0,1]]
    const auto w3 = diag_equiv_symmetric(Kernel(Matrix{{1, 0, 2}, {0, 1, 0}, {0.5, 0, 1}}));
    REQUIRE(w3.kind == EquivalenceKind::EffectivelySymmetric);
    REQUIRE(w3.target.has_value());
    CHECK((*w3.target)(0, 2) == doctest::Approx(1.0));
    CHECK((*w3.target)(0, 1) == doctest::Approx(0.0));
    CHECK((*w3.target)(1, 2) == doctest::Approx(0.0));
}

TEST_CASE("diag_equiv_symmetric: witness re-verification on random conjugated kernels") {
    RngStream rng(23);
    for (int trial = 0; trial < 500; ++trial) {
        // symmetric-equivalent by construction
        Matrix sym(3);
        const double sgn = rng.below(2) ? 1.0 : -1.0;
        for (int i = 0; i < 3; ++i) sym(i, i) = rng.uniform(0.5, 1.5);
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) sym(i, j) = sym(j, i) = sgn * rng.uniform(0.05, 1.0);
        Diagonal d(3);
        for (int i = 0; i < 3; ++i) d[i] = rng.uniform(0.3, 3.0);
        const Kernel k(diag_conjugate(d, sym));

        const auto w = diag_equiv_symmetric(k);
        REQUIRE(w.kind == EquivalenceKind::Symmetric);
        const auto [cyc1, cyc2] = cycle_condition(k);
        CHECK(cyc1 == doctest::Approx(cyc2).epsilon(1e-9));
        const Matrix conj = diag_conjugate(*w.scaling, k.matrix());
        CHECK(conj.is_symmetric(1e-9 * conj.scale()));
        CHECK(max_abs_diff(conj, *w.target) < 1e-9 * conj.scale());
    }
}

TEST_CASE("symmetrize: entrywise root products") {
    const Matrix g{{1, 4, 0}, {0.25, 1, 2}, {0, 0.5, 1}};
    const Matrix s = symmetrize(Kernel(g));
    const Matrix expected{{1, 1, 0}, {1, 1, 1}, {0, 1, 1}};
    CHECK(max_abs_diff(s, expected) < 1e-12);

    CHECK(max_abs_diff(symmetrize(Kernel(Matrix::identity(3))), Matrix::identity(3)) < 1e-14);

    const Matrix sym{{1, .5, .2}, {.5, 1, .4}, {.2, .4, 1}};
    CHECK(max_abs_diff(symmetrize(Kernel(sym)), sym) < 1e-12);

    CHECK_THROWS_AS(symmetrize(Kernel(Matrix{{1, 1}, {-1, 1}})), NegativePairProduct);
}

TEST_CASE("symmetrize preserves det on positive-cycle symmetric-equivalent kernels") {
    RngStream rng(24);
    for (int trial = 0; trial < 300; ++trial) {
        Matrix sym(3);
        for (int i = 0; i < 3; ++i) sym(i, i) = rng.uniform(0.5, 1.5);
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) sym(i, j) = sym(j, i) = rng.uniform(0.05, 1.0);
        Diagonal d(3);
        for (int i = 0; i < 3; ++i) d[i] = rng.uniform(0.3, 3.0);
        const Kernel k(diag_conjugate(d, sym));
        REQUIRE(diag_equiv_symmetric(k).kind == EquivalenceKind::Symmetric);
        CHECK(det(symmetrize(k)) == doctest::Approx(det(k.matrix())).epsilon(1e-9));
    }
}

TEST_CASE("row_scaled_perron_test: identity and Perron-Frobenius ground truth") {
    CHECK(row_scaled_perron_test(Kernel(Matrix::identity(3)), 64, 7).pass);

    RngStream rng(25);
    for (int trial = 0; trial < 50; ++trial) {
        Matrix g(3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) g(i, j) = rng.uniform(0.05, 1.0);
        CHECK(row_scaled_perron_test(Kernel(g), 32, 7 + static_cast<uint64_t>(trial)).pass);
    }
}

TEST_CASE("row_scaled_perron_test: planted scaling exposes the all-negative counterexample") {
    // all-negative, non-symmetric, necessary conditions hold (det = 0.161);
    // under the dichotomy scaling the dominant eigenvalues are the complex pair
    const Matrix am{{1, -.5, -.5}, {-.5, 1, -.3}, {-.5, -.48, 1}};
    const Kernel k(am);
    CHECK(check_necessary(k).overall);

    const Diagonal phi = dichotomy_phi(am);
    const Diagonal planted[] = {phi};
    const auto res = row_scaled_perron_test(k, 0, 1, planted);
    CHECK_FALSE(res.pass);
    CHECK(res.failed_on_planted);
    REQUIRE(res.counterexample.has_value());
}

TEST_CASE("validated kernels enforce the construction-time conditions") {
    CHECK_NOTHROW(Kernel::validated(Matrix{{1, .5, .2}, {.5, 1, .4}, {.2, .4, 1}}));
    CHECK_THROWS_AS(Kernel::validated(Matrix{{-1, 0}, {0, 1}}), InvalidMatrix);
    CHECK_THROWS_AS(Kernel::validated(Matrix{{1, 1}, {-1, 1}}), NegativePairProduct);
}
