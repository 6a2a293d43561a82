#include "permkit/sampleverify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "permkit/kernelcheck.hpp"
#include "permkit/matcore.hpp"
#include "permkit/rng.hpp"

namespace permkit {

SampleBatch sample_gaussian_squares(const Kernel& k, double beta, int64_t n_samples, uint64_t seed) {
    const double two_beta = 2.0 * beta;
    const int factors = static_cast<int>(std::lround(two_beta));
    if (factors < 1 || std::abs(two_beta - factors) > 1e-9)
        throw BadBeta("sampler requires beta = k/2 for a positive integer k");
    const auto witness = is_class1(k);
    if (!witness) throw NotClass1("sampler requires a class-1 kernel");
    if (n_samples < 1) throw PreconditionViolated("sample count must be positive");

    const int n = k.dim();
    const Matrix& sigma = witness->target;

    // factor L with L L^T = sigma; eigenvalues clipped at zero so
    // semi-definite targets are accepted
    const SymEigen eig = sym_eigen(sigma);
    Matrix fac(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            fac(i, j) = eig.vectors(i, j) * std::sqrt(std::max(eig.values[static_cast<size_t>(j)], 0.0));

    SampleBatch batch{k.matrix(), k.tol(), beta, n_samples, seed, sigma, factors, {}};
    batch.draws.assign(static_cast<size_t>(n_samples) * static_cast<size_t>(n), 0.0);
    std::vector<double> z(static_cast<size_t>(n));
    for (int64_t s = 0; s < n_samples; ++s) {
        double* theta = &batch.draws[static_cast<size_t>(s) * static_cast<size_t>(n)];
        for (int m = 0; m < factors; ++m) {
            for (int i = 0; i < n; ++i)
                z[static_cast<size_t>(i)] = philox_normal(
                    seed, static_cast<uint64_t>(m) * static_cast<uint64_t>(n) + static_cast<uint64_t>(i),
                    static_cast<uint64_t>(s));
            for (int i = 0; i < n; ++i) {
                double g = 0.0;
                for (int j = 0; j < n; ++j) g += fac(i, j) * z[static_cast<size_t>(j)];
                theta[i] += 0.5 * g * g;
            }
        }
    }
    return batch;
}

LaplaceEstimate empirical_laplace(const SampleBatch& batch, std::span<const double> alpha) {
    const int n = batch.dim();
    if (static_cast<int>(alpha.size()) != n) throw DimensionError("alpha length must match kernel dim");
    for (double a : alpha)
        if (a < 0.0) throw PreconditionViolated("alpha must be nonnegative");

    PairwiseAccumulator sum, sumsq;
    for (int64_t s = 0; s < batch.count; ++s) {
        double dot = 0.0;
        for (int i = 0; i < n; ++i) dot += alpha[static_cast<size_t>(i)] * batch.draw(s, i);
        const double v = std::exp(-dot);
        sum.push(v);
        sumsq.push(v * v);
    }
    const double num = static_cast<double>(batch.count);
    LaplaceEstimate est;
    est.estimate = sum.sum() / num;
    const double var = std::max(0.0, sumsq.sum() / num - est.estimate * est.estimate);
    est.std_error = std::sqrt(var / num);

    Matrix m = Matrix::identity(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) += alpha[static_cast<size_t>(i)] * batch.kernel_matrix(i, j);
    est.analytic = std::pow(det(m), -batch.beta);
    return est;
}

MomentReport moment_report(const SampleBatch& batch) {
    if (batch.count < 10000) throw PreconditionViolated("moment report requires at least 1e4 samples");
    const int n = batch.dim();
    const double num = static_cast<double>(batch.count);

    MomentReport rep(n);
    for (int i = 0; i < n; ++i) {
        PairwiseAccumulator sum, sumsq;
        for (int64_t s = 0; s < batch.count; ++s) {
            const double v = batch.draw(s, i);
            sum.push(v);
            sumsq.push(v * v);
        }
        const double mean = sum.sum() / num;
        const double var = std::max(0.0, sumsq.sum() / num - mean * mean);
        rep.empirical_mean.push_back(mean);
        rep.analytic_mean.push_back(batch.beta * batch.kernel_matrix(i, i));
        const double se = std::sqrt(var / num);
        rep.mean_z.push_back((mean - rep.analytic_mean.back()) / std::max(se, 1e-300));
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            PairwiseAccumulator sum, sumsq;
            for (int64_t s = 0; s < batch.count; ++s) {
                const double w = (batch.draw(s, i) - rep.empirical_mean[static_cast<size_t>(i)]) *
                                 (batch.draw(s, j) - rep.empirical_mean[static_cast<size_t>(j)]);
                sum.push(w);
                sumsq.push(w * w);
            }
            const double cov = sum.sum() / num;
            const double var = std::max(0.0, sumsq.sum() / num - cov * cov);
            rep.empirical_cov(i, j) = cov;
            rep.analytic_cov(i, j) =
                batch.beta * batch.kernel_matrix(i, j) * batch.kernel_matrix(j, i);
            rep.cov_z(i, j) =
                (cov - rep.analytic_cov(i, j)) / std::max(std::sqrt(var / num), 1e-300);
        }
    return rep;
}

MetricTable metric_table(const Kernel& k) {
    const Matrix& g = k.matrix();
    const int n = g.dim();
    const double t2 = k.tol().rel * g.scale() * g.scale();

    MetricTable table{Matrix(n), 0.0, 0.0};
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            if (x == y) continue;
            const double p = g(x, y) * g(y, x);
            if (p < -t2) throw NegativePairProduct("metric requires nonnegative pair products");
            const double d2 = g(x, x) + g(y, y) - 2.0 * std::sqrt(std::max(p, 0.0));
            table.min_d_squared = std::min(table.min_d_squared, d2);
            table.d(x, y) = std::sqrt(std::max(d2, 0.0));
        }
    double worst = std::numeric_limits<double>::infinity();
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                if (x == y || y == z || x == z) continue;
                worst = std::min(worst, table.d(x, z) + table.d(z, y) - table.d(x, y));
            }
    table.worst_triangle_slack = (n >= 3) ? worst : 0.0;
    return table;
}

bool symmetrized_psd_check(const Kernel& k) {
    return is_psd(symmetrize(k), k.tol());
}

}  // namespace permkit
