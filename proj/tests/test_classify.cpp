#include <doctest.h>

#include <cmath>

#include "permkit/classify.hpp"
#include "test_util.hpp"

using namespace permkit;
using namespace permkit::testutil;

TEST_CASE("is_psd: definite, indefinite and singular-family inputs") {
    CHECK(is_psd(Matrix::identity(3)));
    CHECK_FALSE(is_psd(Matrix{{1, 2}, {2, 1}}));  // eigenvalue -1

    const Matrix s = singular_family(0.3, 0.4, FamilyBranch::Plus);
    CHECK(is_psd(s));
    const auto eig = sym_eigen(s);
    CHECK(std::abs(eig.values.front()) < 1e-10);  // determinant-zero construction

    CHECK_THROWS_AS(is_psd(Matrix{{1, 1}, {0, 1}}), NotSymmetric);
}

TEST_CASE("is_class1: identity, rank-one target, cycle failure") {
    const auto wi = is_class1(Kernel(Matrix::identity(3)));
    REQUIRE(wi.has_value());
    CHECK(max_abs_diff(wi->target, Matrix::identity(3)) < 1e-12);

    const auto wr = is_class1(Kernel(Matrix{{1, 2, 2}, {0.5, 1, 1}, {0.5, 1, 1}}));
    REQUIRE(wr.has_value());
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(wr->target(i, j) == doctest::Approx(1.0));
    const auto eig = sym_eigen(wr->target);
    CHECK(eig.values[2] == doctest::Approx(3.0));
    CHECK(eig.values[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(eig.values[1] == doctest::Approx(0.0).epsilon(1e-12));

    CHECK_FALSE(is_class1(Kernel(Matrix{{1, .9, .1}, {.1, 1, .9}, {.9, .1, 1}})).has_value());
}

TEST_CASE("is_class1: all-negative symmetric PSD kernels are recognized") {
    const Matrix g{{1, -.3, -.2}, {-.3, 1, -.1}, {-.2, -.1, 1}};
    const auto w = is_class1(Kernel(g));
    REQUIRE(w.has_value());
    CHECK(is_psd(w->target));
}

TEST_CASE("is_mmatrix: contract examples with diagnosis") {
    CHECK(is_mmatrix(Matrix{{2, -1}, {-1, 2}}).pass);
    CHECK(is_mmatrix(Matrix::identity(4)).pass);

    const auto off = is_mmatrix(Matrix{{1, 1}, {1, 1}});
    CHECK_FALSE(off.pass);
    CHECK(off.diagnosis == "PositiveOffDiagonal");

    const auto sing = is_mmatrix(Matrix{{1, -1}, {-1, 1}});
    CHECK_FALSE(sing.pass);
    CHECK(sing.diagnosis == "Singular");

    // off-diagonals fine, inverse picks up a negative entry
    const auto neg = is_mmatrix(Matrix{{1, -2}, {-2, 1}});
    CHECK_FALSE(neg.pass);
    CHECK(neg.diagnosis == "NegativeInverseEntry");
}

TEST_CASE("is_class2: identity, inverse-M example, rotation-like failure") {
    const auto wi = is_class2(Kernel(Matrix::identity(3)));
    REQUIRE(wi.has_value());
    CHECK(max_abs_diff(wi->mmatrix, Matrix::identity(3)) < 1e-12);

    const Kernel good{Matrix{{1, .5, .2}, {.5, 1, .4}, {.2, .4, 1}}};
    const auto wg = is_class2(good);
    REQUIRE(wg.has_value());
    CHECK(is_mmatrix(wg->mmatrix).pass);
    // witness re-verification: (N G N)^{-1} equals the returned M-matrix
    const Matrix ngn = diag_conjugate(wg->signature, good.matrix());
    CHECK(max_abs_diff(inverse(ngn), wg->mmatrix) < 1e-9);

    CHECK_FALSE(is_class2(Kernel(Matrix{{1, .9, .1}, {.1, 1, .9}, {.9, .1, 1}})).has_value());
}

TEST_CASE("is_class2 accepts signature-conjugated inverse-M kernels") {
    RngStream rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const Matrix b = random_mmatrix(3, rng);
        Matrix g = inverse(b);
        Diagonal sig(3);
        for (int i = 0; i < 3; ++i) sig[i] = rng.below(2) ? 1.0 : -1.0;
        g = diag_conjugate(sig, g);
        CHECK(is_class2(Kernel(g)).has_value());
    }
}

TEST_CASE("classify3: contract examples") {
    CHECK(classify3(Kernel(Matrix::identity(3))).verdict == Verdict::Both);

    const auto both = classify3(Kernel(Matrix{{1, .5, .2}, {.5, 1, .4}, {.2, .4, 1}}));
    CHECK(both.verdict == Verdict::Both);
    CHECK(both.class1_witness.has_value());
    CHECK(both.class2_witness.has_value());
    CHECK(both.beta_note == "all beta > 0");

    const auto nk = classify3(Kernel(Matrix{{1, .9, .1}, {.1, 1, .9}, {.9, .1, 1}}));
    CHECK(nk.verdict == Verdict::NotKernel);
    CHECK_FALSE(nk.class1_witness.has_value());
    CHECK_FALSE(nk.class2_witness.has_value());
    CHECK_FALSE(nk.failure.empty());

    CHECK_THROWS_AS(classify3(Kernel(Matrix::identity(2))), DimensionError);
}

TEST_CASE("classify3 verdict is invariant under diagonal conjugation") {
    const Matrix families[] = {
        Matrix{{1, .5, .2}, {.5, 1, .4}, {.2, .4, 1}},      // Both
        Matrix{{1, 2, 2}, {0.5, 1, 1}, {0.5, 1, 1}},        // Class1
        Matrix{{1, .9, .1}, {.1, 1, .9}, {.9, .1, 1}},      // NotKernel
        Matrix{{1, -.3, -.2}, {-.3, 1, -.1}, {-.2, -.1, 1}} // negative pattern
    };
    RngStream rng(32);
    for (const Matrix& g : families) {
        const Verdict base = classify3(Kernel(g)).verdict;
        for (int trial = 0; trial < 100; ++trial) {
            Diagonal d(3);
            for (int i = 0; i < 3; ++i) {
                d[i] = rng.uniform(0.2, 4.0);
                if (rng.below(2)) d[i] = -d[i];
            }
            CHECK(classify3(Kernel(diag_conjugate(d, g))).verdict == base);
        }
    }
}

TEST_CASE("classify3 verdict matches the individual class tests") {
    RngStream rng(33);
    for (int trial = 0; trial < 300; ++trial) {
        Matrix g(3);
        for (int i = 0; i < 3; ++i) g(i, i) = 1.0;
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) {
                const double s = rng.below(2) ? 1.0 : -1.0;
                g(i, j) = s * rng.uniform(0.0, 0.9);
                g(j, i) = s * rng.uniform(0.0, 0.9);
            }
        const Kernel k(g);
        const auto rep = classify3(k);
        if (rep.verdict == Verdict::NotKernel && rep.notes.front().pass) {
            CHECK_FALSE(is_class1(k).has_value());
            bool c2 = false;
            try {
                c2 = is_class2(k).has_value();
            } catch (const SingularMatrix&) {
            }
            CHECK_FALSE(c2);
        }
        if (rep.verdict == Verdict::Both || rep.verdict == Verdict::Class1)
            CHECK(is_class1(k).has_value());
        if (rep.verdict == Verdict::Both || rep.verdict == Verdict::Class2)
            CHECK(is_class2(k).has_value());
    }
}

TEST_CASE("independence_report: diagonal kernel, coupling coefficient, zero product") {
    const auto diag = independence_report(Kernel(Matrix{{2, 0, 0}, {0, 1, 0}, {0, 0, 3}}));
    CHECK(diag.pairwise_independent);
    CHECK(diag.product_form);
    CHECK(diag.c_coefficient == doctest::Approx(0.0));
    CHECK(diag.fully_independent);

    // cyclic zero-pattern matrix: pairwise independent but coupled through
    // the triple product abc = 0.5
    const Matrix w{{1, 0, 1}, {1, 1, 0}, {0, 0.5, 1}};
    const auto rep = independence_report(Kernel(w));
    CHECK(rep.pairwise_independent);
    CHECK(rep.product_form);
    CHECK(rep.c_coefficient == doctest::Approx(0.5).epsilon(1e-10));
    CHECK_FALSE(rep.fully_independent);
    CHECK(classify3(Kernel(w)).verdict == Verdict::NotKernel);

    const Matrix wz{{1, 0, 1}, {1, 1, 0}, {0, 0, 1}};
    const auto repz = independence_report(Kernel(wz));
    CHECK(repz.c_coefficient == doctest::Approx(0.0));
    CHECK(repz.fully_independent);
}

TEST_CASE("independence_report detects non-product shapes") {
    const auto rep = independence_report(Kernel(Matrix{{1, .5, 0}, {.5, 1, 0}, {0, 0, 1}}));
    CHECK_FALSE(rep.pairwise_independent);
    CHECK_FALSE(rep.product_form);  // z1 z2 minor deviates by -0.25
    CHECK_FALSE(rep.fully_independent);
}

TEST_CASE("singular_family: frozen corners and determinant-zero property") {
    const Matrix m00 = singular_family(0.0, 0.0, FamilyBranch::Plus);
    const Matrix expected{{1, 0, 1}, {0, 1, 0}, {1, 0, 1}};
    CHECK(max_abs_diff(m00, expected) < 1e-14);
    CHECK(std::abs(det(m00)) < 1e-14);

    const Matrix ones = singular_family(std::acos(-1.0) / 2, 0.0, FamilyBranch::Plus);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(ones(i, j) == doctest::Approx(1.0));

    CHECK(std::abs(det(singular_family(0.3, 0.4, FamilyBranch::Plus))) < 1e-12);

    RngStream rng(34);
    for (int trial = 0; trial < 200; ++trial) {
        const double x = rng.uniform(0.0, std::acos(-1.0) / 2);
        const double y = rng.uniform(0.0, std::acos(-1.0) / 2);
        const auto branch = (std::sin(x - y) >= 0.0 && rng.below(2)) ? FamilyBranch::Minus
                                                                     : FamilyBranch::Plus;
        const Matrix s = singular_family(x, y, branch);
        CHECK(std::abs(det(s)) < 1e-12);
        CHECK(is_psd(s));
    }
}

TEST_CASE("singular_family enforces the sign constraint") {
    CHECK_THROWS_AS(singular_family(-0.5, 0.0, FamilyBranch::Plus), SignConstraint);
}

TEST_CASE("classify3: class-2-only and tolerance-twilight verdicts") {
    // unequal cycles block class 1; the inverse is an M-matrix
    const auto c2 = classify3(Kernel(Matrix{{1, .5, .5}, {.5, 1, .3}, {.5, .48, 1}}));
    CHECK(c2.verdict == Verdict::Class2);
    CHECK(c2.beta_note == "all beta > 0");

    // a strictly mixed pair whose product sits inside the necessary-condition
    // tolerance: no uniform sign pattern exists and neither class certifies
    const Matrix twilight{{1, 1e-5, 0}, {-1e-5, 1, 0}, {0, 0, 1}};
    const auto rep = classify3(Kernel(twilight));
    CHECK(check_necessary(Kernel(twilight)).overall);
    CHECK(rep.verdict == Verdict::Undetermined);
    CHECK(rep.failure == "NotNormalizable");
}
