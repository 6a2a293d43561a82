#include "permkit/divisibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "permkit/matcore.hpp"

namespace permkit {

MDecomposition mmatrix_decompose(const Matrix& b, Tol tol) {
    const auto check = is_mmatrix(b, tol);
    if (!check.pass) throw NotMMatrix("decomposition requires an M-matrix: " + check.diagnosis);
    const int n = b.dim();
    const Matrix binv = inverse(b);

    MDecomposition out(n);
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += binv(i, j);
        out.d[i] = row;
    }
    const Matrix bd = b * out.d.to_matrix();

    double lambda0 = bd(0, 0);
    for (int i = 1; i < n; ++i) lambda0 = std::max(lambda0, bd(i, i));
    Matrix cbase(n);  // lambda0 I - BD, entrywise >= 0
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) cbase(i, j) = (i == j ? lambda0 : 0.0) - bd(i, j);

    // Shift rule: smallest integer multiple of max|C'| with
    // lambda > rho(C' + delta I) by a 1e-6 margin. BD is strictly
    // diagonally dominant, so the unshifted gap is already positive and
    // k = 0 is the common outcome.
    const double unit = cbase.max_abs();
    double delta = 0.0;
    bool found = false;
    for (int kmul = 0; kmul <= 8; ++kmul) {
        delta = kmul * unit;
        Matrix c = cbase;
        for (int i = 0; i < n; ++i) c(i, i) += delta;
        if (lambda0 + delta > spectral_radius(c) + 1e-6) {
            found = true;
            break;
        }
        if (unit == 0.0) break;
    }
    if (!found) throw NotMMatrix("decomposition margin unreachable (nearly singular M-matrix)");

    out.lambda = lambda0 + delta;
    out.c = cbase;
    for (int i = 0; i < n; ++i) out.c(i, i) += delta;
    double res = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            res = std::max(res, std::abs(bd(i, j) + out.c(i, j) - (i == j ? out.lambda : 0.0)));
    out.residual = res;
    return out;
}

bool dominance_pd_check(const Matrix& bd) {
    const int n = bd.dim();
    for (int i = 0; i < n; ++i) {
        double off = 0.0;
        for (int j = 0; j < n; ++j)
            if (j != i) off += std::abs(bd(i, j));
        if (!(off < bd(i, i))) return false;
    }
    const Matrix sym = bd + bd.transpose();
    const auto eig = sym_eigen(sym);
    return eig.values.front() > 1e-12 * sym.scale();
}

namespace {

void enumerate_cycles(const Matrix& g, int k, std::map<MultiIndex, double>& acc) {
    const int n = g.dim();
    MultiIndex counts{};
    // depth-first over index sequences (i1..ik), accumulating the cyclic
    // entry product G(i1,i2)...G(ik,i1) / k per monomial
    for (int first = 0; first < n; ++first) {
        counts = MultiIndex{};
        ++counts[static_cast<size_t>(first)];
        auto rec = [&](auto&& self, int depth, int prev, double prod) -> void {
            if (depth == k) {
                const double term = prod * g(prev, first) / k;
                acc[counts] += term;
                return;
            }
            for (int j = 0; j < n; ++j) {
                const double p = prod * g(prev, j);
                ++counts[static_cast<size_t>(j)];
                self(self, depth + 1, j, p);
                --counts[static_cast<size_t>(j)];
            }
        };
        rec(rec, 1, first, 1.0);
    }
}

}  // namespace

SeriesCertificate log_det_series(const Kernel& k, int max_degree) {
    if (max_degree > 12) throw DegreeTooLarge("series truncation is capped at degree 12");
    if (max_degree < 1) throw DegreeTooLarge("series truncation requires degree >= 1");
    if (k.dim() > 4) throw DimensionError("series enumeration is limited to n <= 4");
    const Matrix& g = k.matrix();

    SeriesCertificate cert;
    cert.max_degree = max_degree;
    cert.tol_used = 1e-10 * std::pow(1.0 + g.max_abs(), max_degree);
    for (int deg = 1; deg <= max_degree; ++deg) enumerate_cycles(g, deg, cert.coefficients);

    cert.min_coefficient = std::numeric_limits<double>::infinity();
    for (const auto& [idx, val] : cert.coefficients) {
        if (val < cert.min_coefficient) {
            cert.min_coefficient = val;
            cert.min_index = idx;
        }
    }
    if (cert.coefficients.empty()) cert.min_coefficient = 0.0;
    cert.verdict = (cert.min_coefficient >= -cert.tol_used) ? SeriesCertificate::Verdict::Nonneg
                                                            : SeriesCertificate::Verdict::NegativeAt;
    return cert;
}

CertifyResult certify_all_beta(const Kernel& k, int max_degree) {
    CertifyResult res;
    try {
        res.class2 = is_class2(k);
    } catch (const SingularMatrix&) {
        res.failure = "Singular";
        return res;
    }
    if (!res.class2) {
        res.failure = "InverseNotM";
        return res;
    }
    if (k.dim() <= 4) {
        const Kernel normalized(diag_conjugate(res.class2->signature, k.matrix()), k.tol());
        res.series = log_det_series(normalized, max_degree);
        if (res.series->verdict != SeriesCertificate::Verdict::Nonneg) {
            res.failure = "SeriesNegativeCoefficient";
            return res;
        }
    }
    res.certified = true;
    return res;
}

Kernel reduce_kernel(const Kernel& k, const ReductionSpec& spec) {
    const int n = k.dim();
    std::vector<bool> seen(static_cast<size_t>(n), false);
    for (const auto& [idx, u] : spec.fixed) {
        if (idx < 0 || idx >= n || seen[static_cast<size_t>(idx)])
            throw PreconditionViolated("pin indices must be distinct and in range");
        if (u < 0.0) throw PreconditionViolated("pin values must be nonnegative");
        seen[static_cast<size_t>(idx)] = true;
    }
    for (int idx : spec.remaining) {
        if (idx < 0 || idx >= n || seen[static_cast<size_t>(idx)])
            throw PreconditionViolated("remaining indices must complement the pinned set");
        seen[static_cast<size_t>(idx)] = true;
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
        throw PreconditionViolated("pinned and remaining indices must partition the index set");
    if (spec.remaining.empty()) throw PreconditionViolated("at least one index must remain");

    // live copy indexed by original indices
    std::vector<std::vector<double>> cur(static_cast<size_t>(n), std::vector<double>(static_cast<size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) cur[static_cast<size_t>(i)][static_cast<size_t>(j)] = k.matrix()(i, j);
    std::vector<int> active(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) active[static_cast<size_t>(i)] = i;

    // eliminate pinned indices from the last down; the elimination factor
    // carries the pinned diagonal entry (it reduces to u/(1+u) on the
    // unit-diagonal kernels the closed forms are stated for)
    for (auto it = spec.fixed.rbegin(); it != spec.fixed.rend(); ++it) {
        const int p = it->first;
        const double gpp = cur[static_cast<size_t>(p)][static_cast<size_t>(p)];
        const double denom = 1.0 + it->second * gpp;
        if (denom <= 0.0) throw PreconditionViolated("pinned elimination denominator vanishes");
        const double v = it->second / denom;
        for (int i : active)
            for (int j : active) {
                if (i == p || j == p) continue;
                cur[static_cast<size_t>(i)][static_cast<size_t>(j)] -=
                    v * cur[static_cast<size_t>(i)][static_cast<size_t>(p)] *
                    cur[static_cast<size_t>(p)][static_cast<size_t>(j)];
            }
        active.erase(std::remove(active.begin(), active.end(), p), active.end());
    }

    Matrix out(static_cast<int>(spec.remaining.size()));
    for (size_t i = 0; i < spec.remaining.size(); ++i)
        for (size_t j = 0; j < spec.remaining.size(); ++j)
            out(static_cast<int>(i), static_cast<int>(j)) =
                cur[static_cast<size_t>(spec.remaining[i])][static_cast<size_t>(spec.remaining[j])];
    return Kernel(out, k.tol());
}

const char* to_string(ReductionSignReport::Branch b) {
    switch (b) {
        case ReductionSignReport::Branch::Inequalities:
            return "Inequalities";
        case ReductionSignReport::Branch::CycleEquality:
            return "CycleEquality";
        case ReductionSignReport::Branch::Violation:
            return "Violation";
    }
    return "?";
}

ReductionSignReport reduction_sign_test(const Kernel& k) {
    if (k.dim() != 3) throw DimensionError("reduction sign test requires a 3x3 kernel");
    const Matrix& g = k.matrix();
    const double scale = g.scale();
    const double t1 = k.tol().rel * scale;
    const double t2 = k.tol().rel * scale * scale;
    const double t3 = k.tol().rel * scale * scale * scale;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            if (g(i, j) < -t1) throw PreconditionViolated("reduction sign test requires nonnegative entries");
            if (std::abs(g(i, j)) <= t1)
                throw PreconditionViolated("reduction sign test requires nonzero off-diagonals");
        }
    for (int i = 0; i < 3; ++i)
        if (g(i, i) <= t1)
            throw PreconditionViolated("reduction sign test requires positive diagonal entries");

    ReductionSignReport rep;
    // pins and the surviving ordered pair: pin 2 keeps (0,1), pin 1 keeps
    // (0,2), pin 0 keeps (1,2). The pinned diagonal entry scales the
    // elimination, so the limiting inequalities read
    // G(i,j) G(p,p) >= G(i,p) G(p,j).
    const std::array<std::array<int, 3>, 3> cases{{{0, 1, 2}, {0, 2, 1}, {1, 2, 0}}};
    int ineq_slot = 0;
    bool all_ineq = true;
    double most_negative = 0.0;
    for (const auto& [i, j, p] : cases) {
        const double gpp = g(p, p);
        const double f = g(i, j), fb = g(i, p) * g(p, j) / gpp;
        const double s = g(j, i), sb = g(j, p) * g(p, i) / gpp;
        const bool ok1 = f >= fb - t2;
        const bool ok2 = s >= sb - t2;
        rep.inequalities[static_cast<size_t>(ineq_slot++)] = ok1;
        rep.inequalities[static_cast<size_t>(ineq_slot++)] = ok2;
        all_ineq = all_ineq && ok1 && ok2;

        const auto probe = [&](double v) {
            const double prod = (f - v * fb) * (s - v * sb);
            if (prod < most_negative) {
                most_negative = prod;
                rep.witness_pin = p;
                rep.witness_v = v;
                rep.witness_product = prod;
            }
        };
        for (int step = 1; step <= 256; ++step) probe(step / 257.0);
        // roots of the two factors, when inside (0,1): the sign flip window
        // lies between them
        if (fb > 0.0 && sb > 0.0) {
            const double r1 = f / fb, r2 = s / sb;
            if (r1 > 0.0 && r1 < 1.0 && r2 > 0.0 && r2 < 1.0) probe(0.5 * (r1 + r2));
            else if (std::min(r1, r2) < 1.0) probe(0.5 * (std::min(r1, r2) + 1.0));
        }
    }
    const auto [cyc1, cyc2] = cycle_condition(k);
    rep.cycle_forward = cyc1;
    rep.cycle_backward = cyc2;

    if (all_ineq)
        rep.branch = ReductionSignReport::Branch::Inequalities;
    else if (std::abs(cyc1 - cyc2) <= t3)
        rep.branch = ReductionSignReport::Branch::CycleEquality;
    else
        rep.branch = ReductionSignReport::Branch::Violation;
    return rep;
}

}  // namespace permkit
