#include "permkit/classify.hpp"

#include <algorithm>
#include <cmath>

namespace permkit {

bool is_psd(const Matrix& m, Tol tol) {
    const double t = tol.abs_for(m.scale());
    if (!m.is_symmetric(t)) throw NotSymmetric("PSD test requires a symmetric matrix");
    const auto eig = sym_eigen(m);
    return eig.values.front() >= -t;
}

std::optional<Class1Witness> is_class1(const Kernel& k) {
    const Matrix& g = k.matrix();
    if (k.dim() != 3) {
        if (!g.is_symmetric(k.abs_tol())) return std::nullopt;
        Matrix sym = 0.5 * (g + g.transpose());
        if (!is_psd(sym, k.tol())) return std::nullopt;
        return Class1Witness{Diagonal::identity(k.dim()), sym, false};
    }
    SignNormalization norm = [&] {
        try {
            return sign_normalize(k);
        } catch (const NotNormalizable&) {
            // mixed pair inside tolerance: no symmetric equivalent exists
            return SignNormalization{k, Diagonal::identity(3), true};
        }
    }();
    EquivalenceWitness w;
    try {
        w = diag_equiv_symmetric(norm.kernel);
    } catch (const NegativePairProduct&) {
        return std::nullopt;
    }
    if (w.kind == EquivalenceKind::NotEquivalent || !w.target) return std::nullopt;
    if (!is_psd(*w.target, k.tol())) return std::nullopt;
    Class1Witness out{Diagonal::identity(3), *w.target, w.kind == EquivalenceKind::EffectivelySymmetric};
    if (w.scaling) {
        out.scaling = *w.scaling * norm.signature;
        if (w.kind == EquivalenceKind::EffectivelySymmetric) out.effective = false;
    }
    return out;
}

MMatrixCheck is_mmatrix(const Matrix& b, Tol tol) {
    const double t = tol.abs_for(b.scale());
    for (int i = 0; i < b.dim(); ++i)
        for (int j = 0; j < b.dim(); ++j)
            if (i != j && b(i, j) > t) return {false, "PositiveOffDiagonal"};
    Matrix inv(1);
    try {
        inv = inverse(b);
    } catch (const SingularMatrix&) {
        return {false, "Singular"};
    }
    const double ti = tol.abs_for(inv.scale());
    for (int i = 0; i < b.dim(); ++i)
        for (int j = 0; j < b.dim(); ++j)
            if (inv(i, j) < -ti) return {false, "NegativeInverseEntry"};
    return {true, ""};
}

std::optional<Class2Witness> is_class2(const Kernel& k) {
    const int n = k.dim();
    if (n > 8) throw DimensionError("signature search is capped at n = 8");
    const Matrix b = inverse(k.matrix());
    for (int mask = 0; mask < (1 << n); ++mask) {
        Diagonal sig(n);
        for (int i = 0; i < n; ++i) sig[i] = ((mask >> i) & 1) ? -1.0 : 1.0;
        Matrix nbn = diag_conjugate(sig, b);
        if (is_mmatrix(nbn, k.tol()).pass) return Class2Witness{sig, nbn};
    }
    return std::nullopt;
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Class1:
            return "Class1";
        case Verdict::Class2:
            return "Class2";
        case Verdict::Both:
            return "Both";
        case Verdict::NotKernel:
            return "NotKernel";
        case Verdict::Undetermined:
            return "Undetermined";
    }
    return "?";
}

ClassificationReport classify3(const Kernel& k) {
    if (k.dim() != 3) throw DimensionError("classify3 requires a 3x3 kernel");
    ClassificationReport rep;

    const NecessaryReport nec = check_necessary(k);
    rep.notes.push_back({"necessary_conditions", nec.overall, nec.first_failure});
    if (!nec.overall) {
        rep.verdict = Verdict::NotKernel;
        rep.failure = nec.first_failure;
        return rep;
    }

    bool normalizable = true;
    try {
        (void)sign_normalize(k);
    } catch (const NotNormalizable&) {
        normalizable = false;
    }
    rep.notes.push_back({"sign_normalizable", normalizable, ""});

    rep.class1_witness = is_class1(k);
    rep.notes.push_back({"class1", rep.class1_witness.has_value(), ""});
    std::string class2_failure;
    try {
        rep.class2_witness = is_class2(k);
        if (!rep.class2_witness) class2_failure = "InverseNotM";
    } catch (const SingularMatrix&) {
        class2_failure = "Singular";
    }
    rep.notes.push_back({"class2", rep.class2_witness.has_value(), class2_failure});

    const bool c1 = rep.class1_witness.has_value();
    const bool c2 = rep.class2_witness.has_value();
    if (c1 && c2)
        rep.verdict = Verdict::Both;
    else if (c1)
        rep.verdict = Verdict::Class1;
    else if (c2)
        rep.verdict = Verdict::Class2;
    else if (!normalizable) {
        // Outside the two canonical sign patterns and no class certificate:
        // the dichotomy argument does not apply, so stay agnostic.
        rep.verdict = Verdict::Undetermined;
        rep.failure = "NotNormalizable";
    } else {
        // In neither class: at n = 3 the class dichotomy is exhaustive for
        // kernels, so this matrix is not one.
        rep.verdict = Verdict::NotKernel;
        rep.failure = "CycleConditionFails";
        if (!class2_failure.empty()) rep.notes.push_back({"class2_failure", false, class2_failure});
    }
    if (c2)
        rep.beta_note = "all beta > 0";
    else if (c1)
        rep.beta_note = "beta in {k/2 : k = 1, 2, ...}; finer admissible sets unresolved";
    return rep;
}

IndependenceReport independence_report(const Kernel& k) {
    const int n = k.dim();
    if (n > 4) throw DimensionError("independence report is limited to n <= 4");
    const Matrix& g = k.matrix();
    const double t2 = k.tol().rel * g.scale() * g.scale();

    IndependenceReport rep;
    rep.pairwise_independent = true;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(g(i, j) * g(j, i)) > t2) rep.pairwise_independent = false;

    // det(I + alpha G) is multilinear in alpha; interpolating it on the
    // {0,1}^n grid recovers the principal minors by Moebius inversion.
    const int full = (1 << n) - 1;
    std::vector<double> dets(static_cast<size_t>(full) + 1);
    for (int s = 0; s <= full; ++s) {
        Matrix m = Matrix::identity(n);
        for (int i = 0; i < n; ++i) {
            if (!((s >> i) & 1)) continue;
            for (int j = 0; j < n; ++j) m(i, j) += g(i, j);
        }
        dets[static_cast<size_t>(s)] = det(m);
    }
    std::vector<double> minors(static_cast<size_t>(full) + 1, 0.0);
    for (int s = 0; s <= full; ++s) {
        double acc = 0.0;
        for (int t = s;; t = (t - 1) & s) {
            const int bits = __builtin_popcount(static_cast<unsigned>(s ^ t));
            acc += ((bits % 2) ? -1.0 : 1.0) * dets[static_cast<size_t>(t)];
            if (t == 0) break;
        }
        minors[static_cast<size_t>(s)] = acc;
    }
    double residual = 0.0;
    for (int s = 1; s < full; ++s) {
        double diag_prod = 1.0;
        for (int i = 0; i < n; ++i)
            if ((s >> i) & 1) diag_prod *= g(i, i);
        residual = std::max(residual, std::abs(minors[static_cast<size_t>(s)] - diag_prod));
    }
    rep.shape_residual = residual;
    const double shape_tol = 1e-8 * std::pow(g.scale(), n);
    rep.product_form = residual <= shape_tol;

    // With the shape verified, evaluating at alpha = all-ones isolates C.
    double diag_all = 1.0;
    for (int i = 0; i < n; ++i) diag_all *= 1.0 + g(i, i);
    rep.c_coefficient = dets[static_cast<size_t>(full)] - diag_all;

    rep.fully_independent = rep.pairwise_independent && rep.product_form &&
                            std::abs(rep.c_coefficient) <= k.tol().rel * std::pow(g.scale(), n);
    return rep;
}

Matrix singular_family(double x, double y, FamilyBranch branch) {
    const double a = std::sin(x);
    const double b = std::cos(y);
    const double c = (branch == FamilyBranch::Plus) ? std::sin(x + y) : std::sin(x - y);
    if (a < 0.0 || b < 0.0 || c < 0.0)
        throw SignConstraint("singular family requires sin x, cos y and sin(x+-y) nonnegative");
    return Matrix{{1.0, a, b}, {a, 1.0, c}, {b, c, 1.0}};
}

}  // namespace permkit
