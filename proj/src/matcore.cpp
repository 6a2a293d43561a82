#include "permkit/matcore.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>

namespace permkit {

namespace {

double det2(double a, double b, double c, double d) { return a * d - b * c; }

double det3(const Matrix& m) {
    return m(0, 0) * det2(m(1, 1), m(1, 2), m(2, 1), m(2, 2)) -
           m(0, 1) * det2(m(1, 0), m(1, 2), m(2, 0), m(2, 2)) +
           m(0, 2) * det2(m(1, 0), m(1, 1), m(2, 0), m(2, 1));
}

Matrix drop_row_col(const Matrix& m, int row, int col) {
    Matrix s(m.dim() - 1);
    int si = 0;
    for (int i = 0; i < m.dim(); ++i) {
        if (i == row) continue;
        int sj = 0;
        for (int j = 0; j < m.dim(); ++j) {
            if (j == col) continue;
            s(si, sj) = m(i, j);
            ++sj;
        }
        ++si;
    }
    return s;
}

double det4(const Matrix& m) {
    double d = 0.0;
    for (int j = 0; j < 4; ++j) {
        const double c = det3(drop_row_col(m, 0, j));
        d += ((j % 2 == 0) ? 1.0 : -1.0) * m(0, j) * c;
    }
    return d;
}

/// LU with partial pivoting, in place. Returns false when a pivot is exactly
/// zero (matrix numerically singular); det_out carries the running product.
bool lu_decompose(Matrix& a, std::vector<int>& piv, double& det_out) {
    const int n = a.dim();
    piv.resize(static_cast<size_t>(n));
    det_out = 1.0;
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
        piv[static_cast<size_t>(k)] = p;
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            det_out = -det_out;
        }
        const double pivot = a(k, k);
        det_out *= pivot;
        if (pivot == 0.0) return false;
        for (int i = k + 1; i < n; ++i) {
            a(i, k) /= pivot;
            const double lik = a(i, k);
            if (lik == 0.0) continue;
            for (int j = k + 1; j < n; ++j) a(i, j) -= lik * a(k, j);
        }
    }
    return true;
}

void lu_solve_inplace(const Matrix& lu, const std::vector<int>& piv, std::vector<double>& b) {
    const int n = lu.dim();
    // row-oriented forward solve: positions below i are final, so applying
    // the pivot swap at step i keeps row i of L matched to its value
    for (int i = 0; i < n; ++i) {
        std::swap(b[static_cast<size_t>(i)], b[static_cast<size_t>(piv[static_cast<size_t>(i)])]);
        double sum = b[static_cast<size_t>(i)];
        for (int j = 0; j < i; ++j) sum -= lu(i, j) * b[static_cast<size_t>(j)];
        b[static_cast<size_t>(i)] = sum;
    }
    for (int i = n - 1; i >= 0; --i) {
        double sum = b[static_cast<size_t>(i)];
        for (int j = i + 1; j < n; ++j) sum -= lu(i, j) * b[static_cast<size_t>(j)];
        b[static_cast<size_t>(i)] = sum / lu(i, i);
    }
}

/// EISPACK-style balancing by radix-power diagonal similarity.
void balance_in_place(Matrix& a) {
    const int n = a.dim();
    const double radix = 2.0;
    bool done = false;
    while (!done) {
        done = true;
        for (int i = 0; i < n; ++i) {
            double r = 0.0, c = 0.0;
            for (int j = 0; j < n; ++j)
                if (j != i) {
                    c += std::abs(a(j, i));
                    r += std::abs(a(i, j));
                }
            if (c == 0.0 || r == 0.0) continue;
            double g = r / radix, f = 1.0;
            const double s = c + r;
            while (c < g) {
                f *= radix;
                c *= radix * radix;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= radix * radix;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                const double ginv = 1.0 / f;
                for (int j = 0; j < n; ++j) a(i, j) *= ginv;
                for (int j = 0; j < n; ++j) a(j, i) *= f;
            }
        }
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix (hqr).
/// Destroys h. Throws NoConvergence past the per-eigenvalue iteration cap.
std::vector<std::complex<double>> hessenberg_qr(Matrix& h) {
    const int n = h.dim();
    std::vector<std::complex<double>> wout(static_cast<size_t>(n));
    double anorm = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(h(i, j));
    if (anorm == 0.0) return wout;  // zero matrix

    const double eps = DBL_EPSILON;
    int nn = n - 1;
    double t = 0.0;
    while (nn >= 0) {
        int its = 0;
        int l;
        for (;;) {
            for (l = nn; l >= 1; --l) {
                double s = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
                if (s == 0.0) s = anorm;
                if (std::abs(h(l, l - 1)) <= eps * s) {
                    h(l, l - 1) = 0.0;
                    break;
                }
            }
            double x = h(nn, nn);
            if (l == nn) {
                wout[static_cast<size_t>(nn)] = {x + t, 0.0};
                --nn;
                break;
            }
            double y = h(nn - 1, nn - 1);
            double w = h(nn, nn - 1) * h(nn - 1, nn);
            if (l == nn - 1) {
                const double pp = 0.5 * (y - x);
                const double q = pp * pp + w;
                double z = std::sqrt(std::abs(q));
                x += t;
                if (q >= 0.0) {
                    z = pp + (pp >= 0.0 ? z : -z);
                    wout[static_cast<size_t>(nn - 1)] = {x + z, 0.0};
                    wout[static_cast<size_t>(nn)] = (z != 0.0) ? std::complex<double>{x - w / z, 0.0}
                                                               : std::complex<double>{x + z, 0.0};
                } else {
                    wout[static_cast<size_t>(nn - 1)] = {x + pp, z};
                    wout[static_cast<size_t>(nn)] = {x + pp, -z};
                }
                nn -= 2;
                break;
            }
            if (its >= 60) throw NoConvergence("QR eigenvalue iteration exceeded cap");
            if (its == 10 || its == 20) {
                // exceptional shift
                t += x;
                for (int i = 0; i <= nn; ++i) h(i, i) -= x;
                const double s = std::abs(h(nn, nn - 1)) + std::abs(h(nn - 1, nn - 2));
                y = x = 0.75 * s;
                w = -0.4375 * s * s;
            }
            ++its;
            int m;
            double p = 0.0, q = 0.0, r = 0.0, z = 0.0;
            for (m = nn - 2; m >= l; --m) {
                z = h(m, m);
                const double rr = x - z;
                const double ss = y - z;
                p = (rr * ss - w) / h(m + 1, m) + h(m, m + 1);
                q = h(m + 1, m + 1) - z - rr - ss;
                r = h(m + 2, m + 1);
                const double s = std::abs(p) + std::abs(q) + std::abs(r);
                p /= s;
                q /= s;
                r /= s;
                if (m == l) break;
                const double u = std::abs(h(m, m - 1)) * (std::abs(q) + std::abs(r));
                const double v =
                    std::abs(p) * (std::abs(h(m - 1, m - 1)) + std::abs(z) + std::abs(h(m + 1, m + 1)));
                if (u <= eps * v) break;
            }
            for (int i = m + 2; i <= nn; ++i) {
                h(i, i - 2) = 0.0;
                if (i != m + 2) h(i, i - 3) = 0.0;
            }
            for (int k = m; k <= nn - 1; ++k) {
                if (k != m) {
                    p = h(k, k - 1);
                    q = h(k + 1, k - 1);
                    r = (k != nn - 1) ? h(k + 2, k - 1) : 0.0;
                    const double xx = std::abs(p) + std::abs(q) + std::abs(r);
                    if (xx == 0.0) continue;
                    p /= xx;
                    q /= xx;
                    r /= xx;
                    x = xx;
                } else {
                    x = 1.0;
                }
                double s = std::sqrt(p * p + q * q + r * r);
                if (p < 0.0) s = -s;
                if (s == 0.0) continue;
                if (k == m) {
                    if (l != m) h(k, k - 1) = -h(k, k - 1);
                } else {
                    h(k, k - 1) = -s * x;
                }
                p += s;
                x = p / s;
                y = q / s;
                z = r / s;
                q /= p;
                r /= p;
                for (int j = k; j <= nn; ++j) {
                    double pp = h(k, j) + q * h(k + 1, j);
                    if (k != nn - 1) {
                        pp += r * h(k + 2, j);
                        h(k + 2, j) -= pp * z;
                    }
                    h(k + 1, j) -= pp * y;
                    h(k, j) -= pp * x;
                }
                const int mmin = std::min(nn, k + 3);
                for (int i = l; i <= mmin; ++i) {
                    double pp = x * h(i, k) + y * h(i, k + 1);
                    if (k != nn - 1) {
                        pp += z * h(i, k + 2);
                        h(i, k + 2) -= pp * r;
                    }
                    h(i, k + 1) -= pp * q;
                    h(i, k) -= pp;
                }
            }
        }
    }
    return wout;
}

void sort_spectrum(std::vector<std::complex<double>>& eig) {
    std::sort(eig.begin(), eig.end(), [](std::complex<double> a, std::complex<double> b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
}

Spectrum make_spectrum(std::vector<std::complex<double>> eig) {
    sort_spectrum(eig);
    Spectrum s;
    s.eigenvalues = std::move(eig);
    double best = -1.0;
    for (size_t i = 0; i < s.eigenvalues.size(); ++i) {
        const double m = std::abs(s.eigenvalues[i]);
        if (m > best) {
            best = m;
            s.max_modulus_index = static_cast<int>(i);
        }
    }
    return s;
}

// Roots of lambda^3 + c2 lambda^2 + c1 lambda + c0. Computed in extended
// precision: a double root splits by sqrt(coefficient error), so the extra
// mantissa bits buy three orders of magnitude near multiple eigenvalues.
std::vector<std::complex<double>> cubic_roots(long double c0, long double c1, long double c2) {
    const long double a = c2, b = c1, c = c0;
    const long double p = b - a * a / 3.0L;
    const long double q = 2.0L * a * a * a / 27.0L - a * b / 3.0L + c;
    const long double shift = -a / 3.0L;
    const long double disc = 0.25L * q * q + p * p * p / 27.0L;
    std::vector<std::complex<double>> r(3);
    if (disc <= 0.0L) {
        // three real roots (trigonometric branch)
        const long double rad = std::sqrt(std::max(-p / 3.0L, 0.0L));
        long double arg = 0.0L;
        if (rad > 0.0L) {
            arg = 3.0L * q / (2.0L * p) / rad;
            arg = std::clamp(arg, -1.0L, 1.0L);
        }
        const long double phi = std::acos(arg);
        const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
        for (int k = 0; k < 3; ++k) {
            const long double tk = 2.0L * rad * std::cos((phi - two_pi * k) / 3.0L);
            r[static_cast<size_t>(k)] = {static_cast<double>(tk + shift), 0.0};
        }
    } else {
        const long double sq = std::sqrt(disc);
        const long double big = -0.5L * q - (q >= 0.0L ? sq : -sq);
        const long double u = std::cbrt(big);
        const long double v = (u != 0.0L) ? -p / (3.0L * u) : 0.0L;
        const long double t1 = u + v;
        const long double re = -0.5L * t1;
        const long double im = 0.5L * std::sqrt(3.0L) * std::abs(u - v);
        r[0] = {static_cast<double>(t1 + shift), 0.0};
        r[1] = {static_cast<double>(re + shift), static_cast<double>(im)};
        r[2] = {static_cast<double>(re + shift), static_cast<double>(-im)};
    }
    return r;
}

}  // namespace

double det(const Matrix& m) {
    switch (m.dim()) {
        case 1:
            return m(0, 0);
        case 2:
            return det2(m(0, 0), m(0, 1), m(1, 0), m(1, 1));
        case 3:
            return det3(m);
        case 4:
            return det4(m);
        default: {
            Matrix lu = m;
            std::vector<int> piv;
            double d = 0.0;
            lu_decompose(lu, piv, d);
            return d;
        }
    }
}

double singular_tol(const Matrix& m) {
    return 1e-12 * std::pow(std::max(1.0, m.max_abs()), m.dim());
}

Matrix inverse(const Matrix& m) {
    const double d = det(m);
    if (std::abs(d) <= singular_tol(m)) throw SingularMatrix("matrix is numerically singular");
    const int n = m.dim();
    if (n <= 4) {
        Matrix adj = adjugate(m);
        return (1.0 / d) * adj;
    }
    Matrix lu = m;
    std::vector<int> piv;
    double dd = 0.0;
    if (!lu_decompose(lu, piv, dd)) throw SingularMatrix("zero pivot in LU");
    Matrix inv(n);
    std::vector<double> col(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        std::fill(col.begin(), col.end(), 0.0);
        col[static_cast<size_t>(j)] = 1.0;
        lu_solve_inplace(lu, piv, col);
        for (int i = 0; i < n; ++i) inv(i, j) = col[static_cast<size_t>(i)];
    }
    return inv;
}

Matrix adjugate(const Matrix& m) {
    const int n = m.dim();
    if (n == 1) {
        Matrix a(1);
        a(0, 0) = 1.0;
        return a;
    }
    Matrix adj(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double c = det(drop_row_col(m, j, i));
            adj(i, j) = (((i + j) % 2) == 0 ? 1.0 : -1.0) * c;
        }
    return adj;
}

std::vector<double> char_poly(const Matrix& m) {
    const int n = m.dim();
    // Faddeev-LeVerrier for det(lambda I - A), then flip by (-1)^n.
    std::vector<double> cs(static_cast<size_t>(n) + 1, 0.0);
    cs[static_cast<size_t>(n)] = 1.0;
    Matrix am = m;  // A * M_1 with M_1 = I
    cs[static_cast<size_t>(n - 1)] = -m.trace();
    for (int k = 2; k <= n; ++k) {
        Matrix mk = am;
        const double ck = cs[static_cast<size_t>(n - k + 1)];
        for (int i = 0; i < n; ++i) mk(i, i) += ck;
        am = m * mk;
        cs[static_cast<size_t>(n - k)] = -am.trace() / k;
    }
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    for (double& c : cs) c *= sign;
    return cs;
}

Spectrum eigenvalues_companion_qr(const Matrix& m) {
    const int n = m.dim();
    const auto coeffs = char_poly(m);
    // monic coefficients of lambda^n + a_{n-1} lambda^{n-1} + ... + a_0
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    Matrix comp(n);
    for (int i = 0; i + 1 < n; ++i) comp(i + 1, i) = 1.0;
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -sign * coeffs[static_cast<size_t>(i)];
    if (n == 1) {
        return make_spectrum({std::complex<double>{m(0, 0), 0.0}});
    }
    balance_in_place(comp);
    auto eig = hessenberg_qr(comp);
    return make_spectrum(std::move(eig));
}

Spectrum eigenvalues(const Matrix& m) {
    const int n = m.dim();
    if (n == 1) return make_spectrum({std::complex<double>{m(0, 0), 0.0}});
    if (n == 2) {
        const double tr = m.trace();
        const double d = det(m);
        const double disc = tr * tr - 4.0 * d;
        std::vector<std::complex<double>> eig(2);
        if (disc >= 0.0) {
            const double sq = std::sqrt(disc);
            const double r1 = 0.5 * (tr + (tr >= 0.0 ? sq : -sq));
            eig[0] = {r1, 0.0};
            eig[1] = {(r1 != 0.0) ? d / r1 : 0.5 * (tr - sq), 0.0};
        } else {
            const double im = 0.5 * std::sqrt(-disc);
            eig[0] = {0.5 * tr, im};
            eig[1] = {0.5 * tr, -im};
        }
        return make_spectrum(std::move(eig));
    }
    if (n == 3) {
        // det(A - l I) = -l^3 + tr l^2 - m2 l + det; assemble the monic
        // coefficients in extended precision straight from the entries
        const long double a00 = m(0, 0), a01 = m(0, 1), a02 = m(0, 2);
        const long double a10 = m(1, 0), a11 = m(1, 1), a12 = m(1, 2);
        const long double a20 = m(2, 0), a21 = m(2, 1), a22 = m(2, 2);
        const long double tr = a00 + a11 + a22;
        const long double m2 = (a00 * a11 - a01 * a10) + (a00 * a22 - a02 * a20) +
                               (a11 * a22 - a12 * a21);
        const long double dt = a00 * (a11 * a22 - a12 * a21) - a01 * (a10 * a22 - a12 * a20) +
                               a02 * (a10 * a21 - a11 * a20);
        return make_spectrum(cubic_roots(-dt, m2, -tr));
    }
    return eigenvalues_companion_qr(m);
}

double spectral_radius(const Matrix& m) {
    const auto s = eigenvalues(m);
    return std::abs(s.max_modulus_eigenvalue());
}

Matrix diag_conjugate(const Diagonal& d, const Matrix& m) {
    if (d.dim() != m.dim()) throw DimensionError("conjugation dimension mismatch");
    for (int i = 0; i < d.dim(); ++i)
        if (d[i] == 0.0) throw ZeroDiagonal("diagonal conjugation requires nonzero entries");
    Matrix r = m;
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j) r(i, j) = d[i] * m(i, j) / d[j];
    return r;
}

Matrix row_scale(const Diagonal& u, const Matrix& m) {
    if (u.dim() != m.dim()) throw DimensionError("row scale dimension mismatch");
    for (int i = 0; i < u.dim(); ++i)
        if (u[i] < 0.0) throw NegativeScale("row scaling requires nonnegative entries");
    return left_scale(u, m);
}

SymEigen sym_eigen(const Matrix& m) {
    const int n = m.dim();
    Matrix a = 0.5 * (m + m.transpose());
    Matrix v = Matrix::identity(n);
    const double scale = std::max(a.max_abs(), 1e-300);
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (std::sqrt(off) <= 1e-15 * n * scale) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) <= 1e-300) continue;
                const double tau = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
    }
    SymEigen out{std::vector<double>(static_cast<size_t>(n)), Matrix(n)};
    std::vector<int> order(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](int x, int y) { return a(x, x) < a(y, y); });
    for (int i = 0; i < n; ++i) {
        const int src = order[static_cast<size_t>(i)];
        out.values[static_cast<size_t>(i)] = a(src, src);
        for (int k = 0; k < n; ++k) out.vectors(k, i) = v(k, src);
    }
    return out;
}

}  // namespace permkit
