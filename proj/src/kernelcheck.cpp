#include "permkit/kernelcheck.hpp"

#include <algorithm>
#include <cmath>

#include "permkit/rng.hpp"

namespace permkit {

namespace {

// Pair classification shared by the equivalence tests. A pair entry counts
// as zero when |entry| <= ztol.
enum class PairKind { Full, OneZero, BothZero };

PairKind classify_pair(double e1, double e2, double ztol) {
    const bool z1 = std::abs(e1) <= ztol;
    const bool z2 = std::abs(e2) <= ztol;
    if (z1 && z2) return PairKind::BothZero;
    if (z1 || z2) return PairKind::OneZero;
    return PairKind::Full;
}

double signed_sqrt_product(double e1, double e2) {
    const double s = (e1 != 0.0) ? (e1 > 0 ? 1.0 : -1.0) : (e2 > 0 ? 1.0 : (e2 < 0 ? -1.0 : 1.0));
    return s * std::sqrt(std::max(e1 * e2, 0.0));
}

}  // namespace

NecessaryReport check_necessary(const Kernel& k) {
    const Matrix& g = k.matrix();
    const int n = g.dim();
    const double scale = g.scale();
    const double t1 = k.tol().rel * scale;
    const double t2 = k.tol().rel * scale * scale;
    const double tn = k.tol().rel * std::pow(scale, n);

    NecessaryReport rep;
    rep.overall = true;
    for (int i = 0; i < n; ++i) {
        const bool ok = g(i, i) >= -t1;
        rep.diag_nonneg.push_back(ok);
        if (!ok && rep.first_failure.empty()) rep.first_failure = "DiagNegative";
        rep.overall = rep.overall && ok;
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            rep.pair_index.push_back({i, j});
            const double p = g(i, j) * g(j, i);
            const bool pok = p >= -t2;
            rep.pair_products_nonneg.push_back(pok);
            if (!pok && rep.first_failure.empty()) rep.first_failure = "PairProductNegative";
            const bool mok = g(i, i) * g(j, j) - p >= -t2;
            rep.minors2_nonneg.push_back(mok);
            if (!mok && rep.first_failure.empty()) rep.first_failure = "MinorNegative";
            rep.overall = rep.overall && pok && mok;
        }
    rep.det_nonneg = det(g) >= -tn;
    if (!rep.det_nonneg && rep.first_failure.empty()) rep.first_failure = "DetNegative";
    rep.overall = rep.overall && rep.det_nonneg;

    rep.real_eigs_positive = true;
    const Spectrum spec = eigenvalues(g);
    // An analytically-multiple eigenvalue at 0 splits at the sqrt(eps) level
    // under rounding; the pass boundary must absorb that, not just rel*scale.
    const double eig_tol =
        std::max(t1, 1e-7 * (1.0 + std::abs(spec.max_modulus_eigenvalue())));
    for (const auto& lam : spec.eigenvalues) {
        if (is_real_eigenvalue(lam) && lam.real() < -eig_tol) {
            rep.real_eigs_positive = false;
            break;
        }
    }
    if (!rep.real_eigs_positive && rep.first_failure.empty()) rep.first_failure = "RealEigNotPositive";
    rep.overall = rep.overall && rep.real_eigs_positive;
    return rep;
}

SignNormalization sign_normalize(const Kernel& k) {
    if (k.dim() != 3) throw DimensionError("sign normalization is defined for 3x3 kernels");
    const Matrix& g = k.matrix();
    const double ztol = k.abs_tol();

    const auto pattern_ok = [&](const std::array<int, 3>& s, bool nonneg) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                if (i == j) continue;
                const double v = s[static_cast<size_t>(i)] * s[static_cast<size_t>(j)] * g(i, j);
                if (std::abs(g(i, j)) <= ztol) continue;  // zero is both signs
                if (nonneg ? (v < 0.0) : (v > 0.0)) return false;
            }
        return true;
    };

    for (const bool nonneg : {true, false}) {
        for (int mask = 0; mask < 8; ++mask) {
            std::array<int, 3> s{};
            for (int i = 0; i < 3; ++i) s[static_cast<size_t>(i)] = (mask >> i) & 1 ? -1 : 1;
            if (!pattern_ok(s, nonneg)) continue;
            if (s[0] < 0)
                for (auto& v : s) v = -v;  // fix global sign, s_0 = +1
            Diagonal sig{static_cast<double>(s[0]), static_cast<double>(s[1]),
                         static_cast<double>(s[2])};
            return SignNormalization{Kernel(diag_conjugate(sig, g), k.tol()), sig, nonneg};
        }
    }
    throw NotNormalizable("no signature yields a uniform off-diagonal sign pattern");
}

Balanced balance(const Kernel& k) {
    if (k.dim() != 3) throw DimensionError("balance is defined for 3x3 kernels");
    const Matrix& g = k.matrix();
    bool all_pos = true, all_neg = true;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            all_pos = all_pos && g(i, j) > 0.0;
            all_neg = all_neg && g(i, j) < 0.0;
        }
    if (!all_pos && !all_neg)
        throw MixedSigns("balance requires strictly uniform off-diagonal signs");

    const double d2 = std::sqrt(std::abs(k.a1()) / std::abs(k.a2()));
    const double d3 = std::sqrt(std::abs(k.c2()) / std::abs(k.c1()));
    Diagonal d{1.0, d2, d3};
    return Balanced{Kernel(diag_conjugate(d, g), k.tol()), d};
}

std::pair<double, double> cycle_condition(const Kernel& k) {
    if (k.dim() != 3) throw DimensionError("cycle condition is defined for 3x3 kernels");
    return {k.a1() * k.b1() * k.c1(), k.a2() * k.b2() * k.c2()};
}

EquivalenceWitness diag_equiv_symmetric(const Kernel& k) {
    if (k.dim() != 3) throw DimensionError("symmetric equivalence test is defined for 3x3 kernels");
    const Matrix& g = k.matrix();
    const double scale = g.scale();
    const double ztol = k.tol().rel * scale;
    const double t2 = k.tol().rel * scale * scale;
    const double t3 = k.tol().rel * scale * scale * scale;

    const double pa = k.a1() * k.a2(), pb = k.b1() * k.b2(), pc = k.c1() * k.c2();
    if (pa < -t2 || pb < -t2 || pc < -t2)
        throw NegativePairProduct("symmetric equivalence requires nonnegative pair products");

    const PairKind ka = classify_pair(k.a1(), k.a2(), ztol);
    const PairKind kb = classify_pair(k.b1(), k.b2(), ztol);
    const PairKind kc = classify_pair(k.c1(), k.c2(), ztol);

    const auto [cyc1, cyc2] = cycle_condition(k);
    const double geo = 2.0 * std::sqrt(std::max(pa, 0.0) * std::max(pb, 0.0) * std::max(pc, 0.0));
    // Equality of all scaled principal minors holds iff cyc1 + cyc2 equals
    // twice the square root of the pair-product product; for all-nonzero
    // pairs this reduces to the cycle condition cyc1 == cyc2.
    const bool effectively_equal = std::abs(cyc1 + cyc2 - geo) <= t3;

    const auto build_target = [&](bool nonneg_convention) {
        Matrix t(3);
        for (int i = 0; i < 3; ++i) t(i, i) = g(i, i);
        const auto set = [&](int i, int j) {
            const double v = nonneg_convention ? std::sqrt(std::max(g(i, j) * g(j, i), 0.0))
                                               : signed_sqrt_product(g(i, j), g(j, i));
            t(i, j) = t(j, i) = v;
        };
        set(0, 1);
        set(1, 2);
        set(0, 2);
        return t;
    };

    EquivalenceWitness w;
    // A "full" pair with nonpositive product has strictly mixed signs inside
    // the tolerance twilight; no real scaling can symmetrize it.
    if ((ka == PairKind::Full && pa <= 0.0) || (kb == PairKind::Full && pb <= 0.0) ||
        (kc == PairKind::Full && pc <= 0.0)) {
        w.kind = EquivalenceKind::NotEquivalent;
        return w;
    }
    if (ka == PairKind::Full && kb == PairKind::Full && kc == PairKind::Full) {
        if (std::abs(cyc1 - cyc2) <= t3) {
            const double d2 = std::sqrt(k.a1() / k.a2());
            const double d3 = std::sqrt(k.c2() / k.c1());
            w.kind = EquivalenceKind::Symmetric;
            w.scaling = Diagonal{1.0, d2, d3};
            w.target = build_target(false);
        } else {
            w.kind = EquivalenceKind::NotEquivalent;
        }
        return w;
    }
    if (ka == PairKind::OneZero || kb == PairKind::OneZero || kc == PairKind::OneZero) {
        if (effectively_equal) {
            w.kind = EquivalenceKind::EffectivelySymmetric;
            w.target = build_target(true);
            w.sign_flagged = true;
        } else {
            w.kind = EquivalenceKind::NotEquivalent;
        }
        return w;
    }
    // Some pair is zero on both sides; the matrix is diagonally equivalent to
    // the signed target, reported as EffectivelySymmetric with the scaling
    // solved from whichever pairs constrain it.
    double d2 = 1.0, d3 = 1.0;
    if (ka == PairKind::Full) d2 = std::sqrt(k.a1() / k.a2());
    if (kc == PairKind::Full) d3 = std::sqrt(k.c2() / k.c1());
    if (ka == PairKind::BothZero && kb == PairKind::Full)
        d2 = d3 * std::sqrt(k.b2() / k.b1());
    else if (kc == PairKind::BothZero && kb == PairKind::Full)
        d3 = d2 * std::sqrt(k.b1() / k.b2());
    w.kind = EquivalenceKind::EffectivelySymmetric;
    w.scaling = Diagonal{1.0, d2, d3};
    w.target = build_target(false);
    return w;
}

Matrix symmetrize(const Kernel& k) {
    const Matrix& g = k.matrix();
    const int n = g.dim();
    const double t2 = k.tol().rel * g.scale() * g.scale();
    Matrix s(n);
    for (int i = 0; i < n; ++i) s(i, i) = g(i, i);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double p = g(i, j) * g(j, i);
            if (p < -t2) throw NegativePairProduct("symmetrization requires nonnegative pair products");
            s(i, j) = s(j, i) = std::sqrt(std::max(p, 0.0));
        }
    return s;
}

PerronTestResult row_scaled_perron_test(const Kernel& k, int trials, uint64_t seed,
                                        std::span<const Diagonal> planted) {
    const int n = k.dim();
    const double zero_radius = 1e-12 * k.scale();

    const auto trial_fails = [&](const Diagonal& u) {
        const Spectrum s = eigenvalues(row_scale(u, k.matrix()));
        const double maxmod = std::abs(s.max_modulus_eigenvalue());
        if (maxmod <= zero_radius) return false;  // spectrum collapsed to zero
        for (const auto& lam : s.eigenvalues) {
            if (std::abs(lam) < maxmod * (1.0 - 1e-9)) continue;
            if (is_real_eigenvalue(lam) && lam.real() > 0.0) return false;
        }
        return true;
    };

    PerronTestResult res;
    int idx = 0;
    for (const Diagonal& u : planted) {
        if (trial_fails(u)) {
            res.pass = false;
            res.counterexample = u;
            res.failing_trial = idx;
            res.failed_on_planted = true;
            return res;
        }
        ++idx;
    }
    for (int t = 0; t < trials; ++t, ++idx) {
        Diagonal u(n);
        for (int i = 0; i < n; ++i) {
            const double choice = philox_uniform(seed, static_cast<uint64_t>(t) * 2 + 0,
                                                 static_cast<uint64_t>(i));
            const double val = philox_uniform(seed, static_cast<uint64_t>(t) * 2 + 1,
                                              static_cast<uint64_t>(i));
            if (choice < 0.4)
                u[i] = val;
            else if (choice < 0.8)
                u[i] = 10.0 * val;
            else
                u[i] = 0.0;  // sparse branch
        }
        if (trial_fails(u)) {
            res.pass = false;
            res.counterexample = u;
            res.failing_trial = idx;
            return res;
        }
    }
    return res;
}

}  // namespace permkit
