#include "permkit/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "permkit/matcore.hpp"

namespace permkit {

namespace {

struct PairMagnitudes {
    // balanced off-diagonal magnitudes in the (a, b, c) slots
    double a, b, c;
};

// Off-diagonal pair magnitudes of a 3x3 matrix, by absolute value:
// slot a = (0,1)/(1,0), slot b = (1,2)/(2,1), slot c = (0,2)/(2,0).
struct RawPair {
    double e1, e2;
    double product() const { return e1 * e2; }
    double nonzero_member() const { return std::max(e1, e2); }
};

double one_zero_root(double q, double other) {
    // positive root of m^2 + 2 q m - q * other = 0
    return -q + std::sqrt(q * q + q * other);
}

// Square-root pair magnitudes with zeros kept as zeros (no auxiliary roots).
PairMagnitudes balanced_magnitudes_plain(const Matrix& m, double ztol) {
    const auto mag = [&](double e1, double e2) {
        if (std::abs(e1) <= ztol || std::abs(e2) <= ztol) return 0.0;
        return std::sqrt(std::abs(e1 * e2));
    };
    return PairMagnitudes{mag(m(0, 1), m(1, 0)), mag(m(1, 2), m(2, 1)), mag(m(0, 2), m(2, 0))};
}

PairMagnitudes balanced_magnitudes(const Matrix& m, double ztol) {
    const RawPair a{std::abs(m(0, 1)), std::abs(m(1, 0))};
    const RawPair b{std::abs(m(1, 2)), std::abs(m(2, 1))};
    const RawPair c{std::abs(m(0, 2)), std::abs(m(2, 0))};
    const auto kind = [&](const RawPair& p) {
        const bool z1 = p.e1 <= ztol, z2 = p.e2 <= ztol;
        return z1 && z2 ? 2 : (z1 || z2 ? 1 : 0);
    };
    const int ka = kind(a), kb = kind(b), kc = kind(c);
    PairMagnitudes out{ka == 0 ? std::sqrt(a.product()) : 0.0,
                       kb == 0 ? std::sqrt(b.product()) : 0.0,
                       kc == 0 ? std::sqrt(c.product()) : 0.0};
    const int ones = (ka == 1) + (kb == 1) + (kc == 1);
    if (ones == 1) {
        if (ka == 1)
            out.a = one_zero_root(out.b * out.c, a.nonzero_member());
        else if (kb == 1)
            out.b = one_zero_root(out.a * out.c, b.nonzero_member());
        else
            out.c = one_zero_root(out.a * out.b, c.nonzero_member());
    } else if (ones == 2) {
        // the two unresolved magnitudes are taken equal
        if (ka != 1) {
            const double v = std::sqrt(out.a * b.nonzero_member() * c.nonzero_member() /
                                       (2.0 * (1.0 + out.a)));
            out.b = out.c = v;
        } else if (kb != 1) {
            const double v = std::sqrt(out.b * a.nonzero_member() * c.nonzero_member() /
                                       (2.0 * (1.0 + out.b)));
            out.a = out.c = v;
        } else {
            const double v = std::sqrt(out.c * a.nonzero_member() * b.nonzero_member() /
                                       (2.0 * (1.0 + out.c)));
            out.a = out.b = v;
        }
    } else if (ones == 3) {
        out.a = one_zero_root(b.nonzero_member() * c.nonzero_member(), a.nonzero_member());
        const double v = std::sqrt(out.a * b.nonzero_member() * c.nonzero_member() /
                                   (2.0 * (1.0 + out.a)));
        out.b = out.c = v;
    }
    return out;
}

double phi_entry(double num, double denom_add) {
    const double den = num + denom_add;
    // degenerate magnitudes only arise outside the one-real-eigenvalue
    // hypothesis; any positive entry keeps the scaled matrix well defined
    if (den <= 1e-300) return 1.0;
    return num / den;
}

// Scaling for the nonnegative case: entries b/(b-ac), c/(c-ab), a/(a-bc)
// from the balanced magnitudes. The domination inequalities of an
// M-matrix-inverse kernel make each denominator positive, and then every
// entry is >= 1 (sum > 3, the direction the argument needs). Degenerate or
// boundary magnitudes fall back to 1.
Diagonal positive_case_scaling(const Matrix& a, double ztol) {
    const PairMagnitudes m = balanced_magnitudes_plain(a, ztol);
    const auto entry = [&](double num, double den) {
        if (num <= 1e-300 || den <= 1e-300) return 1.0;
        return num / den;
    };
    return Diagonal{entry(m.b, m.b - m.a * m.c), entry(m.c, m.c - m.a * m.b),
                    entry(m.a, m.a - m.b * m.c)};
}

EigenDichotomy dichotomy_of(const Matrix& a, const Diagonal& phi) {
    const Spectrum s = eigenvalues(left_scale(phi, a));
    EigenDichotomy d;
    for (const auto& lam : s.eigenvalues)
        if (is_real_eigenvalue(lam)) ++d.real_count;
    if (d.real_count == 1) {
        for (const auto& lam : s.eigenvalues) {
            if (is_real_eigenvalue(lam))
                d.real_value = lam.real();
            else
                d.complex_real_part = lam.real();
        }
        d.ordering = (*d.real_value < *d.complex_real_part) ? EigenDichotomy::Ordering::RealBelow
                                                            : EigenDichotomy::Ordering::RealAbove;
    }
    return d;
}

}  // namespace

RhoFactorization rho_factorization_check(const Matrix& h, Tol tol) {
    if (h.dim() != 3) throw DimensionError("rho factorization check requires a 3x3 matrix");
    const double t = tol.abs_for(h.scale());
    if (!h.is_symmetric(t)) throw NotSymmetric("rho factorization check requires symmetric input");
    for (int i = 0; i < 3; ++i)
        if (std::abs(h(i, i) - 1.0) > t)
            throw PreconditionViolated("rho factorization check requires a unit diagonal");

    const double a = h(0, 1), b = h(1, 2), c = h(0, 2);
    const double d1 = b - a * c, d2 = c - a * b, d3 = a - b * c;
    if (std::abs(d1) <= t || std::abs(d2) <= t || std::abs(d3) <= t)
        throw ZeroDenominator("rho scaling denominator vanishes");
    SpectralScaling rho{SpectralScaling::Kind::Rho, {b / d1, c / d2, a / d3}};

    const double scaled_det = rho.entries[0] * rho.entries[1] * rho.entries[2] * det(h);
    const auto coeffs = char_poly(left_scale(rho.diagonal(), h));
    // (l - 1)^2 (K - l) = -l^3 + (K + 2) l^2 - (2K + 1) l + K
    const std::array<double, 4> expected{scaled_det, -(2.0 * scaled_det + 1.0), scaled_det + 2.0,
                                         -1.0};
    double residual = 0.0;
    for (int i = 0; i < 4; ++i)
        residual = std::max(residual, std::abs(coeffs[static_cast<size_t>(i)] -
                                               expected[static_cast<size_t>(i)]));
    return RhoFactorization{rho, residual, scaled_det};
}

SpectralScaling phi_scaling(double a, double b, double c) {
    if (a <= 0.0 || b <= 0.0 || c <= 0.0)
        throw NonPositiveInput("phi scaling requires strictly positive magnitudes");
    return SpectralScaling{SpectralScaling::Kind::Phi,
                           {b / (b + a * c), c / (c + a * b), a / (a + b * c)}};
}

Diagonal dichotomy_phi(const Matrix& a, Tol tol) {
    if (a.dim() != 3) throw DimensionError("dichotomy scaling requires a 3x3 matrix");
    const double ztol = tol.abs_for(a.scale());
    const PairMagnitudes m = balanced_magnitudes(a, ztol);
    return Diagonal{phi_entry(m.b, m.a * m.c), phi_entry(m.c, m.a * m.b), phi_entry(m.a, m.b * m.c)};
}

EigenDichotomy negative_case_dichotomy(const Matrix& a_minus, Tol tol) {
    if (a_minus.dim() != 3) throw DimensionError("dichotomy requires a 3x3 matrix");
    const double scale = a_minus.scale();
    const double t1 = tol.rel * scale, t2 = tol.rel * scale * scale;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j && a_minus(i, j) > t1)
                throw PreconditionViolated("negative case requires nonpositive off-diagonals");
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            const double p = a_minus(i, j) * a_minus(j, i);
            if (p < -t2 || p > 1.0 + t2)
                throw PreconditionViolated("pair products must lie in [0, 1]");
        }
    if (det(a_minus) < -tol.rel * std::pow(scale, 3))
        throw PreconditionViolated("negative case requires nonnegative determinant");
    return dichotomy_of(a_minus, dichotomy_phi(a_minus, tol));
}

EigenDichotomy positive_case_dichotomy(const Matrix& a_plus, Tol tol) {
    if (a_plus.dim() != 3) throw DimensionError("dichotomy requires a 3x3 matrix");
    const double scale = a_plus.scale();
    const double t1 = tol.rel * scale, t2 = tol.rel * scale * scale;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j && a_plus(i, j) < -t1)
                throw PreconditionViolated("positive case requires nonnegative off-diagonals");
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (a_plus(i, j) * a_plus(j, i) > 1.0 + t2)
                throw PreconditionViolated("pair products must lie in [0, 1]");
    return dichotomy_of(a_plus, positive_case_scaling(a_plus, t1));
}

Matrix modified_resolvent(const Kernel& k, double r) {
    if (r < 0.0) throw PreconditionViolated("modified resolvent requires r >= 0");
    const Matrix& g = k.matrix();
    Matrix m = Matrix::identity(g.dim()) + r * g;
    return g * inverse(m);
}

const char* to_string(ResolventSweep::Verdict v) {
    switch (v) {
        case ResolventSweep::Verdict::AllNonneg:
            return "AllNonneg";
        case ResolventSweep::Verdict::FailsAt:
            return "FailsAt";
        case ResolventSweep::Verdict::DetFailsAt:
            return "DetFailsAt";
    }
    return "?";
}

ResolventSweep vere_jones_sweep(const Kernel& k, double r_max, int steps) {
    if (r_max <= 0.0) throw PreconditionViolated("sweep requires r_max > 0");
    const Matrix& g = k.matrix();
    ResolventSweep sweep;

    sweep.r_grid.push_back(0.0);
    const double lo = 1e-3 * r_max;
    for (int i = 0; i < steps; ++i) {
        const double f = (steps > 1) ? static_cast<double>(i) / (steps - 1) : 1.0;
        sweep.r_grid.push_back(lo * std::pow(r_max / lo, f));
    }
    for (int i = 1; i <= 16; ++i) sweep.r_grid.push_back(r_max * i / 16.0);
    std::sort(sweep.r_grid.begin(), sweep.r_grid.end());
    sweep.r_grid.erase(std::unique(sweep.r_grid.begin(), sweep.r_grid.end()), sweep.r_grid.end());

    const double entry_tol = k.abs_tol();
    double det_fail_r = -1.0, entry_fail_r = -1.0;
    for (const double r : sweep.r_grid) {
        const Matrix m = Matrix::identity(g.dim()) + r * g;
        const double d = det(m);
        double min_entry = std::numeric_limits<double>::quiet_NaN();
        if (d > 0.0) {
            try {
                const Matrix gr = g * inverse(m);
                min_entry = gr(0, 0);
                for (int i = 0; i < g.dim(); ++i)
                    for (int j = 0; j < g.dim(); ++j) min_entry = std::min(min_entry, gr(i, j));
                if (min_entry < -entry_tol && entry_fail_r < 0.0) entry_fail_r = r;
            } catch (const SingularMatrix&) {
                if (det_fail_r < 0.0) det_fail_r = r;
            }
        } else if (det_fail_r < 0.0) {
            det_fail_r = r;
        }
        sweep.per_r.emplace_back(d, min_entry);
    }

    // Exact supplement: a real negative eigenvalue forces det(I + rG) to
    // vanish at r = -1/lambda, which a finite grid can miss. The boundary
    // matches check_necessary: wide enough to absorb multiple-root splitting.
    double worst_negative = 0.0;
    const Spectrum spec = eigenvalues(g);
    const double eig_tol =
        std::max(k.abs_tol(), 1e-7 * (1.0 + std::abs(spec.max_modulus_eigenvalue())));
    for (const auto& lam : spec.eigenvalues) {
        if (is_real_eigenvalue(lam) && lam.real() < -eig_tol) {
            sweep.real_eigs_positive = false;
            worst_negative = std::min(worst_negative, lam.real());
        }
    }
    if (!sweep.real_eigs_positive) {
        const double r_exact = -1.0 / worst_negative;
        if (det_fail_r < 0.0 || r_exact < det_fail_r) det_fail_r = r_exact;
    }

    if (det_fail_r >= 0.0) {
        sweep.verdict = ResolventSweep::Verdict::DetFailsAt;
        sweep.fail_r = det_fail_r;
    } else if (entry_fail_r >= 0.0) {
        sweep.verdict = ResolventSweep::Verdict::FailsAt;
        sweep.fail_r = entry_fail_r;
    }
    return sweep;
}

}  // namespace permkit
