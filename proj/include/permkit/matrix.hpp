#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

#include "permkit/errors.hpp"

namespace permkit {

/// Largest supported matrix dimension. Dense O(n^3) methods are fine at this
/// scale and every algorithm in the library is exercised at n <= 8.
inline constexpr int kMaxDim = 16;

/// Relative tolerance context threaded through the analysis routines.
/// Defaults to 1e-9 relative; absolute thresholds are formed against a
/// problem scale of max(1, max|entry|).
struct Tol {
    double rel = 1e-9;

    double abs_for(double scale) const { return rel * std::max(1.0, scale); }
};

/// Dense square real matrix, row-major, 1 <= dim <= kMaxDim.
/// Entries are validated finite at construction.
class Matrix {
public:
    explicit Matrix(int n) : n_(check_dim(n)), a_(static_cast<size_t>(n) * n, 0.0) {}

    Matrix(int n, std::span<const double> data) : n_(check_dim(n)), a_(data.begin(), data.end()) {
        if (a_.size() != static_cast<size_t>(n_) * n_)
            throw InvalidMatrix("entry count does not match dimension");
        validate_finite();
    }

    Matrix(std::initializer_list<std::initializer_list<double>> rows)
        : n_(check_dim(static_cast<int>(rows.size()))) {
        a_.reserve(static_cast<size_t>(n_) * n_);
        for (const auto& r : rows) {
            if (static_cast<int>(r.size()) != n_) throw InvalidMatrix("ragged row in matrix literal");
            a_.insert(a_.end(), r.begin(), r.end());
        }
        validate_finite();
    }

    static Matrix identity(int n) {
        Matrix m(n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int dim() const { return n_; }

    double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }

    std::span<const double> data() const { return a_; }

    Matrix transpose() const {
        Matrix t(n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    double trace() const {
        double s = 0.0;
        for (int i = 0; i < n_; ++i) s += (*this)(i, i);
        return s;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : a_) m = std::max(m, std::abs(v));
        return m;
    }

    /// Problem scale used for tolerance thresholds.
    double scale() const { return std::max(1.0, max_abs()); }

    bool is_symmetric(double abs_tol) const {
        for (int i = 0; i < n_; ++i)
            for (int j = i + 1; j < n_; ++j)
                if (std::abs((*this)(i, j) - (*this)(j, i)) > abs_tol) return false;
        return true;
    }

    /// Principal submatrix over the given (strictly increasing) index set.
    Matrix principal_submatrix(std::span<const int> idx) const {
        Matrix s(static_cast<int>(idx.size()));
        for (size_t i = 0; i < idx.size(); ++i)
            for (size_t j = 0; j < idx.size(); ++j)
                s(static_cast<int>(i), static_cast<int>(j)) = (*this)(idx[i], idx[j]);
        return s;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.n_ != b.n_) throw DimensionError("matrix product dimension mismatch");
        Matrix c(a.n_);
        for (int i = 0; i < a.n_; ++i)
            for (int k = 0; k < a.n_; ++k) {
                const double aik = a(i, k);
                if (aik == 0.0) continue;
                for (int j = 0; j < a.n_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        if (a.n_ != b.n_) throw DimensionError("matrix sum dimension mismatch");
        Matrix c = a;
        for (size_t i = 0; i < c.a_.size(); ++i) c.a_[i] += b.a_[i];
        return c;
    }

    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        if (a.n_ != b.n_) throw DimensionError("matrix difference dimension mismatch");
        Matrix c = a;
        for (size_t i = 0; i < c.a_.size(); ++i) c.a_[i] -= b.a_[i];
        return c;
    }

    friend Matrix operator*(double s, const Matrix& a) {
        Matrix c = a;
        for (double& v : c.a_) v *= s;
        return c;
    }

private:
    static int check_dim(int n) {
        if (n < 1 || n > kMaxDim) throw InvalidMatrix("matrix dimension out of range");
        return n;
    }

    void validate_finite() const {
        for (double v : a_)
            if (!std::isfinite(v)) throw InvalidMatrix("non-finite matrix entry");
    }

    int n_;
    std::vector<double> a_;
};

/// Diagonal matrix, stored as its diagonal entries.
class Diagonal {
public:
    explicit Diagonal(int n) : d_(static_cast<size_t>(n), 1.0) {}
    explicit Diagonal(std::vector<double> d) : d_(std::move(d)) {
        for (double v : d_)
            if (!std::isfinite(v)) throw InvalidMatrix("non-finite diagonal entry");
    }
    Diagonal(std::initializer_list<double> d) : Diagonal(std::vector<double>(d)) {}

    static Diagonal identity(int n) { return Diagonal(n); }

    int dim() const { return static_cast<int>(d_.size()); }
    double& operator[](int i) { return d_[static_cast<size_t>(i)]; }
    double operator[](int i) const { return d_[static_cast<size_t>(i)]; }
    const std::vector<double>& entries() const { return d_; }

    Matrix to_matrix() const {
        Matrix m(dim());
        for (int i = 0; i < dim(); ++i) m(i, i) = d_[static_cast<size_t>(i)];
        return m;
    }

    /// Entrywise product of two diagonals (composition of scalings).
    friend Diagonal operator*(const Diagonal& a, const Diagonal& b) {
        if (a.dim() != b.dim()) throw DimensionError("diagonal product dimension mismatch");
        std::vector<double> d(a.d_);
        for (size_t i = 0; i < d.size(); ++i) d[i] *= b.d_[i];
        return Diagonal(std::move(d));
    }

private:
    std::vector<double> d_;
};

/// Left-multiply by a diagonal: (D m)(i,j) = d_i m(i,j).
inline Matrix left_scale(const Diagonal& d, const Matrix& m) {
    if (d.dim() != m.dim()) throw DimensionError("scale dimension mismatch");
    Matrix r = m;
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j) r(i, j) *= d[i];
    return r;
}

/// Eigenvalues of a matrix, sorted by (real part descending, imaginary part
/// descending), together with the index of an eigenvalue of maximal modulus.
struct Spectrum {
    std::vector<std::complex<double>> eigenvalues;
    int max_modulus_index = 0;

    std::complex<double> max_modulus_eigenvalue() const {
        return eigenvalues[static_cast<size_t>(max_modulus_index)];
    }
};

/// An eigenvalue is treated as real when |Im| <= kRealEigTol * (1 + |Re|).
/// The cubic solver delivers exact-to-rounding reals at n = 3; the threshold
/// absorbs QR noise at larger n.
inline constexpr double kRealEigTol = 1e-8;

inline bool is_real_eigenvalue(std::complex<double> z) {
    return std::abs(z.imag()) <= kRealEigTol * (1.0 + std::abs(z.real()));
}

/// Candidate permanental kernel: a square matrix plus tolerance context.
/// Raw candidates are accepted as-is; `Kernel::validated` additionally
/// enforces the nonnegative-diagonal and pair-product necessary conditions.
class Kernel {
public:
    explicit Kernel(Matrix m, Tol tol = {}) : m_(std::move(m)), tol_(tol) {}

    static Kernel validated(Matrix m, Tol tol = {}) {
        const double t = tol.abs_for(m.scale());
        for (int i = 0; i < m.dim(); ++i)
            if (m(i, i) < -t) throw InvalidMatrix("validated kernel requires nonnegative diagonal");
        for (int i = 0; i < m.dim(); ++i)
            for (int j = i + 1; j < m.dim(); ++j)
                if (m(i, j) * m(j, i) < -t * m.scale())
                    throw NegativePairProduct("validated kernel requires nonnegative pair products");
        return Kernel(std::move(m), tol);
    }

    const Matrix& matrix() const { return m_; }
    const Tol& tol() const { return tol_; }
    int dim() const { return m_.dim(); }
    double scale() const { return m_.scale(); }
    double abs_tol() const { return tol_.abs_for(m_.scale()); }

    // Positional names of the six off-diagonal entries of a 3x3 kernel:
    //   [ .   a1  c2 ]
    //   [ a2  .   b1 ]
    //   [ c1  b2  .  ]
    double a1() const { return at3(0, 1); }
    double a2() const { return at3(1, 0); }
    double b1() const { return at3(1, 2); }
    double b2() const { return at3(2, 1); }
    double c1() const { return at3(2, 0); }
    double c2() const { return at3(0, 2); }

private:
    double at3(int i, int j) const {
        if (m_.dim() != 3) throw DimensionError("positional entry names require a 3x3 kernel");
        return m_(i, j);
    }

    Matrix m_;
    Tol tol_;
};

}  // namespace permkit
