#include <doctest.h>

#include <cmath>

#include "permkit/classify.hpp"
#include "permkit/spectra.hpp"
#include "test_util.hpp"

using namespace permkit;
using namespace permkit::testutil;

namespace {

Matrix unit_diag_symmetric(double a, double b, double c) {
    return Matrix{{1, a, c}, {a, 1, b}, {c, b, 1}};
}

}  // namespace

TEST_CASE("rho_factorization_check: equal-magnitude and generic cases") {
    const auto r1 = rho_factorization_check(unit_diag_symmetric(0.5, 0.5, 0.5));
    CHECK(r1.scaling.entries[0] == doctest::Approx(2.0));
    CHECK(r1.scaling.entries[1] == doctest::Approx(2.0));
    CHECK(r1.scaling.entries[2] == doctest::Approx(2.0));
    CHECK(r1.scaled_det == doctest::Approx(4.0));
    CHECK(r1.residual <= 1e-12);
    const auto eig = eigenvalues(left_scale(r1.scaling.diagonal(), unit_diag_symmetric(.5, .5, .5)));
    CHECK(eig.eigenvalues[0].real() == doctest::Approx(4.0));
    CHECK(eig.eigenvalues[1].real() == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(eig.eigenvalues[2].real() == doctest::Approx(1.0).epsilon(1e-7));

    // equal magnitudes: every rho entry is 1/(1-a)
    const auto r2 = rho_factorization_check(unit_diag_symmetric(0.3, 0.3, 0.3));
    for (double e : r2.scaling.entries) CHECK(e == doctest::Approx(1.0 / 0.7));
    CHECK(r2.residual <= 1e-12);

    const auto r3 = rho_factorization_check(unit_diag_symmetric(0.2, 0.3, 0.5));
    CHECK(r3.residual <= 1e-10);

    // a = bc means a zero denominator
    CHECK_THROWS_AS(rho_factorization_check(unit_diag_symmetric(0.15, 0.3, 0.5)),
                    ZeroDenominator);
}

TEST_CASE("rho_factorization_check on random well-separated instances") {
    RngStream rng(41);
    int done = 0;
    while (done < 200) {
        const double a = rng.uniform(-0.95, 0.95);
        const double b = rng.uniform(-0.95, 0.95);
        const double c = rng.uniform(-0.95, 0.95);
        if (std::abs(b - a * c) < 1e-2 || std::abs(c - a * b) < 1e-2 || std::abs(a - b * c) < 1e-2)
            continue;
        const auto r = rho_factorization_check(unit_diag_symmetric(a, b, c));
        CHECK(r.residual <= 1e-9);
        // eigenvalue 1 with multiplicity two
        if (std::abs(r.scaled_det - 1.0) > 0.25) {
            const auto eig =
                eigenvalues(left_scale(r.scaling.diagonal(), unit_diag_symmetric(a, b, c)));
            int close = 0;
            for (const auto& lam : eig.eigenvalues)
                if (std::abs(lam - std::complex<double>(1.0, 0.0)) <= 1e-7) ++close;
            CHECK(close >= 2);
        }
        ++done;
    }
}

TEST_CASE("phi_scaling: values and inequality chain") {
    const auto p1 = phi_scaling(0.5, 0.5, 0.5);
    for (double e : p1.entries) CHECK(e == doctest::Approx(2.0 / 3.0));
    const auto p2 = phi_scaling(1, 1, 1);
    for (double e : p2.entries) CHECK(e == doctest::Approx(0.5));
    const auto p3 = phi_scaling(0.1, 0.9, 0.5);
    CHECK(p3.entries[0] == doctest::Approx(0.9 / 0.95));
    CHECK(p3.entries[1] == doctest::Approx(0.5 / 0.59));
    CHECK(p3.entries[2] == doctest::Approx(0.1 / 0.55));
    CHECK_THROWS_AS(phi_scaling(0.0, 1.0, 1.0), NonPositiveInput);

    RngStream rng(42);
    for (int trial = 0; trial < 500; ++trial) {
        const auto p = phi_scaling(rng.uniform(1e-3, 1.0), rng.uniform(1e-3, 1.0),
                                   rng.uniform(1e-3, 1.0));
        double sum = 0.0, prod = 1.0;
        for (double e : p.entries) {
            CHECK(e > 0.0);
            CHECK(e < 1.0);
            sum += e;
            prod *= e;
        }
        CHECK(sum >= 3.0 * prod - 1e-12);
    }
}

TEST_CASE("negative_case_dichotomy: contract examples") {
    // non-symmetric: one real eigenvalue strictly below the complex real part
    const Matrix am{{1, -.5, -.5}, {-.5, 1, -.3}, {-.5, -.48, 1}};
    CHECK(det(am) == doctest::Approx(0.161));
    const auto d1 = negative_case_dichotomy(am);
    CHECK(d1.real_count == 1);
    CHECK(d1.ordering == EigenDichotomy::Ordering::RealBelow);
    CHECK(*d1.complex_real_part > *d1.real_value);

    // symmetric input keeps an all-real spectrum
    const Matrix sym{{1, -.5, -.5}, {-.5, 1, -.36}, {-.5, -.36, 1}};
    const auto d2 = negative_case_dichotomy(sym);
    CHECK(d2.real_count == 3);
    CHECK(d2.ordering == EigenDichotomy::Ordering::NotApplicable);

    // cyclic zero pattern with magnitudes 0.5
    const Matrix f3{{1, -.5, 0}, {0, 1, -.5}, {-.5, 0, 1}};
    const auto d3 = negative_case_dichotomy(f3);
    CHECK(d3.real_count == 1);
    CHECK(d3.ordering == EigenDichotomy::Ordering::RealBelow);

    CHECK_THROWS_AS(negative_case_dichotomy(Matrix{{1, .5, 0}, {.5, 1, 0}, {0, 0, 1}}),
                    PreconditionViolated);
}

TEST_CASE("negative_case_dichotomy: random valid non-symmetric instances") {
    RngStream rng(43);
    int done = 0;
    while (done < 200) {
        const double a = rng.uniform(0.05, 0.9);
        const double b = rng.uniform(0.05, 0.9);
        const double c = rng.uniform(0.05, 0.9);
        const double t = rng.uniform(1.1, 2.5);
        const double b1 = b * t, b2 = b / t;
        if (b1 > 1.0) continue;
        Matrix am{{1, -a, -c}, {-a, 1, -b1}, {-c, -b2, 1}};
        if (det(am) < 1e-3) continue;
        const auto d = negative_case_dichotomy(am);
        CHECK(d.real_count == 1);
        REQUIRE(d.real_value.has_value());
        CHECK(*d.complex_real_part > *d.real_value);
        ++done;
    }
}

TEST_CASE("positive_case_dichotomy: contract examples") {
    const Matrix ap{{1, .5, .5}, {.5, 1, .3}, {.5, .48, 1}};
    REQUIRE(is_class2(Kernel(ap)).has_value());
    const auto d1 = positive_case_dichotomy(ap);
    CHECK(d1.real_count == 1);
    CHECK(d1.ordering == EigenDichotomy::Ordering::RealAbove);
    CHECK(*d1.complex_real_part < *d1.real_value);

    const Matrix sym{{1, .5, .5}, {.5, 1, .36}, {.5, .36, 1}};
    CHECK(positive_case_dichotomy(sym).real_count == 3);

    // one-zero pairs force equivalence to a symmetric matrix: all real
    const Matrix io{{1, 0, .5}, {.4, 1, .3}, {.2, 0, 1}};
    CHECK(positive_case_dichotomy(io).real_count == 3);
}

TEST_CASE("positive_case_dichotomy: random class-2 non-symmetric instances") {
    RngStream rng(44);
    int done = 0;
    while (done < 200) {
        Matrix g(3);
        for (int i = 0; i < 3; ++i) g(i, i) = 1.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (i != j) g(i, j) = rng.uniform(0.02, 0.95);
        // domination inequalities + invertibility make the inverse an M-matrix
        bool dom = det(g) > 1e-3;
        const int idx[3][3] = {{0, 1, 2}, {0, 2, 1}, {1, 2, 0}};
        for (const auto& c : idx) {
            dom = dom && g(c[0], c[1]) >= g(c[0], c[2]) * g(c[2], c[1]) + 1e-3;
            dom = dom && g(c[1], c[0]) >= g(c[1], c[2]) * g(c[2], c[0]) + 1e-3;
        }
        if (!dom) continue;
        const auto [cyc1, cyc2] = cycle_condition(Kernel(g));
        if (std::abs(cyc1 - cyc2) < 1e-3) continue;
        REQUIRE(is_class2(Kernel(g)).has_value());
        const auto d = positive_case_dichotomy(g);
        CHECK(d.real_count == 1);
        CHECK(d.ordering == EigenDichotomy::Ordering::RealAbove);
        ++done;
    }
}

TEST_CASE("modified_resolvent: base cases and defining round-trip") {
    const Kernel I3{Matrix::identity(3)};
    CHECK(max_abs_diff(modified_resolvent(I3, 0.0), Matrix::identity(3)) < 1e-14);
    CHECK(max_abs_diff(modified_resolvent(I3, 1.0), 0.5 * Matrix::identity(3)) < 1e-14);

    const Kernel k{Matrix{{1, .5}, {.5, 1}}};
    const Matrix gr = modified_resolvent(k, 1.0);
    const Matrix round_trip = (Matrix::identity(2) + 1.0 * k.matrix()) * gr;
    CHECK(max_abs_diff(round_trip, k.matrix()) < 1e-12);
}

TEST_CASE("modified_resolvent satisfies the resolvent identity") {
    RngStream rng(45);
    for (int trial = 0; trial < 200; ++trial) {
        const Matrix g = random_psd(3, rng);
        const Kernel k(g);
        const double r = rng.uniform(0.0, 5.0), s = rng.uniform(0.0, 5.0);
        const Matrix gr = modified_resolvent(k, r);
        const Matrix gs = modified_resolvent(k, s);
        const Matrix lhs = gr - gs;
        const Matrix rhs = (s - r) * (gr * gs);
        CHECK(max_abs_diff(lhs, rhs) < 1e-9 * (1.0 + g.scale() * g.scale()));
    }
}

TEST_CASE("vere_jones_sweep: verdicts on contract kernels") {
    const auto si = vere_jones_sweep(Kernel(Matrix::identity(3)), 1e3, 64);
    CHECK(si.verdict == ResolventSweep::Verdict::AllNonneg);
    CHECK(si.real_eigs_positive);

    const auto sg =
        vere_jones_sweep(Kernel(Matrix{{1, .5, .2}, {.5, 1, .4}, {.2, .4, 1}}), 1e3, 64);
    CHECK(sg.verdict == ResolventSweep::Verdict::AllNonneg);

    const auto sb =
        vere_jones_sweep(Kernel(Matrix{{1, .9, .1}, {.1, 1, .9}, {.9, .1, 1}}), 1e3, 64);
    CHECK(sb.verdict != ResolventSweep::Verdict::AllNonneg);

    // negative entries fail immediately at r = 0
    const auto sn = vere_jones_sweep(Kernel(Matrix{{1, -.2, 0}, {-.2, 1, 0}, {0, 0, 1}}), 10, 16);
    CHECK(sn.verdict == ResolventSweep::Verdict::FailsAt);
    CHECK(sn.fail_r == 0.0);

    // negative real eigenvalue: exact supplement catches the det sign change
    const auto sd = vere_jones_sweep(Kernel(Matrix{{1, 2, 0}, {2, 1, 0}, {0, 0, 1}}), 10, 16);
    CHECK(sd.verdict == ResolventSweep::Verdict::DetFailsAt);
    CHECK_FALSE(sd.real_eigs_positive);
}

TEST_CASE("vere_jones_sweep AllNonneg for class-2 kernels") {
    RngStream rng(46);
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix g = inverse(random_mmatrix(3, rng));
        REQUIRE(is_class2(Kernel(g)).has_value());
        const auto sweep = vere_jones_sweep(Kernel(g), 1e3, 64);
        CHECK(sweep.verdict == ResolventSweep::Verdict::AllNonneg);
    }
}
