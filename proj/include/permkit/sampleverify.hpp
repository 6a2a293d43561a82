#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "permkit/classify.hpp"
#include "permkit/matrix.hpp"

namespace permkit {

/// Monte Carlo draws of a permanental vector at a half-integer exponent,
/// realized as sums of squared Gaussians over the class-1 symmetric target.
/// Draws are a pure function of (kernel, beta, count, seed).
struct SampleBatch {
    Matrix kernel_matrix;
    Tol tol;
    double beta = 0.5;
    int64_t count = 0;
    uint64_t seed = 0;
    Matrix sigma;               // symmetric PSD sampling target
    int gaussians_per_sample = 1;
    std::vector<double> draws;  // count x n, row-major, all >= 0

    int dim() const { return kernel_matrix.dim(); }
    double draw(int64_t s, int i) const {
        return draws[static_cast<size_t>(s) * static_cast<size_t>(dim()) + static_cast<size_t>(i)];
    }
};

/// beta must be k/2 for a positive integer k (throws BadBeta); the kernel
/// must be class 1 (throws NotClass1). The sampling law is invariant under
/// the diagonal-equivalence witness, so drawing from the symmetric target
/// realizes the law of the kernel itself.
SampleBatch sample_gaussian_squares(const Kernel& k, double beta, int64_t n_samples, uint64_t seed);

struct LaplaceEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    double analytic = 0.0;  // det(I + diag(alpha) G)^{-beta}
};

/// Empirical Laplace transform mean(exp(-<alpha, theta>)) with CLT error.
LaplaceEstimate empirical_laplace(const SampleBatch& batch, std::span<const double> alpha);

struct MomentReport {
    std::vector<double> empirical_mean, analytic_mean, mean_z;
    Matrix empirical_cov, analytic_cov, cov_z;

    MomentReport(int n) : empirical_cov(n), analytic_cov(n), cov_z(n) {}
};

/// Empirical versus analytic first and second moments: E theta_i =
/// beta G(i,i), cov(theta_i, theta_j) = beta G(i,j) G(j,i); z-scores use
/// plug-in standard errors. Requires count >= 10^4.
MomentReport moment_report(const SampleBatch& batch);

/// Table of d(x,y) = sqrt(G(x,x) + G(y,y) - 2 sqrt(G(x,y) G(y,x))) with the
/// worst triangle slack min d(x,z) + d(z,y) - d(x,y) over ordered triples.
struct MetricTable {
    Matrix d;
    double worst_triangle_slack = 0.0;  // nonnegative iff d satisfies the triangle inequality
    double min_d_squared = 0.0;         // most negative pre-clamp squared distance
};

MetricTable metric_table(const Kernel& k);

/// PSD test of the entrywise symmetrization, the mechanism behind the
/// metric property on accepted kernels.
bool symmetrized_psd_check(const Kernel& k);

}  // namespace permkit
