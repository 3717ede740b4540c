#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "meanset/constants.hpp"
#include "meanset/errors.hpp"
#include "meanset/frechet.hpp"
#include "meanset/rng.hpp"

namespace meanset {

// Covariance kernel of the functional-difference process.
//
// For base points x_1..x_K the differences D_{(i,j)}(Y) = d(x_i,Y)^p -
// d(x_j,Y)^p define a process over ordered pairs; its covariance under the
// empirical measure determines the Gaussian limit of the relaxed-set
// fluctuations. The kernel is indexed by ordered pairs, a = i*K + j, so the
// diagonal reproduces the pair variances used by sigma_hat exactly — the
// two code paths share their accumulation order on purpose.

struct CovarianceKernel {
    std::vector<PointId> base_set;  // the K base points, in the order given
    Eigen::MatrixXd matrix;         // (K*K) x (K*K), entry (a,b) = Cov(D_a, D_b)

    std::size_t pair_count() const { return base_set.size() * base_set.size(); }
    std::size_t pair_index(std::size_t i, std::size_t j) const {
        return i * base_set.size() + j;
    }
};

inline CovarianceKernel covariance_kernel(const EmpiricalMeasure& mu,
                                          const std::vector<PointId>& base_set, double p) {
    mu.validate();
    if (base_set.empty()) {
        throw input_error("covariance_kernel: empty base set");
    }
    if (base_set.size() > kKernelBaseCap) {
        throw resource_error("covariance_kernel: base set of size " +
                             std::to_string(base_set.size()) + " exceeds the cap of " +
                             std::to_string(kKernelBaseCap) +
                             " (the kernel is quadratic in the pair count)");
    }
    const MetricSpace& space = *mu.space;
    const std::size_t K = base_set.size();
    const std::size_t q = K * K;
    const std::size_t n = mu.support.size();

    // d(x_i, Y_s)^p table; D_a(s) is then a subtraction, matching the
    // element-wise form used by pair_difference_variance.
    std::vector<std::vector<double>> dp(K, std::vector<double>(n));
    for (std::size_t i = 0; i < K; ++i) {
        for (std::size_t s = 0; s < n; ++s) {
            dp[i][s] = std::pow(space.distance(base_set[i], mu.support[s]), p);
        }
    }

    std::vector<double> mean(q, 0.0);
    for (std::size_t i = 0; i < K; ++i) {
        for (std::size_t j = 0; j < K; ++j) {
            const std::size_t a = i * K + j;
            double m1 = 0.0;
            for (std::size_t s = 0; s < n; ++s) {
                m1 += mu.weights[s] * (dp[i][s] - dp[j][s]);
            }
            mean[a] = m1;
        }
    }

    CovarianceKernel kernel;
    kernel.base_set = base_set;
    kernel.matrix.resize(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(q));
    for (std::size_t a = 0; a < q; ++a) {
        const std::size_t ai = a / K, aj = a % K;
        for (std::size_t b = a; b < q; ++b) {
            const std::size_t bi = b / K, bj = b % K;
            double cross = 0.0;
            for (std::size_t s = 0; s < n; ++s) {
                const double da = dp[ai][s] - dp[aj][s];
                const double db = dp[bi][s] - dp[bj][s];
                // Left-associated like pair_difference_variance's w * d * d,
                // so diagonal entries match it to the last bit.
                cross += mu.weights[s] * da * db;
            }
            double cov = cross - mean[a] * mean[b];
            if (a == b) {
                cov = std::max(0.0, cov);  // variances clamp like pair_difference_variance
            }
            kernel.matrix(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = cov;
            kernel.matrix(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = cov;
        }
    }
    return kernel;
}

struct GaussianSupEstimate {
    double estimate = 0.0;   // Monte Carlo mean of sup_a G_a
    double std_error = 0.0;  // standard error of that mean
    std::size_t draws = 0;
};

// Monte Carlo estimate of E[ sup_{a in restrict_pairs} |G_a| ] for the
// centered Gaussian vector G with the kernel's covariance, restricted to a
// subset of pair indices. The restricted covariance is factored through its
// eigendecomposition; eigenvalues in [-psd_tol, 0) are rounding noise and
// are clipped to zero, anything lower means the matrix is not a covariance.
inline GaussianSupEstimate gaussian_sup_estimate(const CovarianceKernel& kernel,
                                                 const std::vector<std::size_t>& restrict_pairs,
                                                 std::size_t num_draws, CounterRng& rng) {
    if (num_draws == 0) {
        throw input_error("gaussian_sup_estimate: need at least one draw");
    }
    if (restrict_pairs.empty()) {
        throw input_error("gaussian_sup_estimate: empty pair restriction");
    }
    const std::size_t q = static_cast<std::size_t>(kernel.matrix.rows());
    for (std::size_t a : restrict_pairs) {
        if (a >= q) {
            throw input_error("gaussian_sup_estimate: pair index " + std::to_string(a) +
                              " is outside the kernel's index set of size " + std::to_string(q));
        }
    }
    const Eigen::Index r = static_cast<Eigen::Index>(restrict_pairs.size());
    Eigen::MatrixXd sub(r, r);
    for (Eigen::Index i = 0; i < r; ++i) {
        for (Eigen::Index j = 0; j < r; ++j) {
            sub(i, j) = kernel.matrix(static_cast<Eigen::Index>(restrict_pairs[i]),
                                      static_cast<Eigen::Index>(restrict_pairs[j]));
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sub);
    if (solver.info() != Eigen::Success) {
        throw numeric_error("gaussian_sup_estimate: eigendecomposition failed");
    }
    const Eigen::VectorXd& lambda = solver.eigenvalues();
    for (Eigen::Index k = 0; k < r; ++k) {
        if (lambda[k] < -kPsdTol) {
            throw numeric_error("gaussian_sup_estimate: kernel eigenvalue " +
                                std::to_string(lambda[k]) + " is below -" +
                                std::to_string(kPsdTol) + "; matrix is not positive semidefinite");
        }
    }

    // Keep only the strictly positive directions: G = sum_k sqrt(l_k) z_k v_k.
    std::vector<Eigen::Index> active;
    for (Eigen::Index k = 0; k < r; ++k) {
        if (lambda[k] > 0.0) active.push_back(k);
    }
    Eigen::MatrixXd factor(r, static_cast<Eigen::Index>(active.size()));
    for (std::size_t c = 0; c < active.size(); ++c) {
        factor.col(static_cast<Eigen::Index>(c)) =
            solver.eigenvectors().col(active[c]) * std::sqrt(lambda[active[c]]);
    }

    double sum = 0.0, sum_sq = 0.0;
    Eigen::VectorXd z(static_cast<Eigen::Index>(active.size()));
    for (std::size_t d = 0; d < num_draws; ++d) {
        double sup = 0.0;  // a rank-zero restriction means G == 0
        if (z.size() > 0) {
            for (Eigen::Index k = 0; k < z.size(); ++k) {
                z[k] = rng.next_normal();
            }
            sup = (factor * z).cwiseAbs().maxCoeff();
        }
        sum += sup;
        sum_sq += sup * sup;
    }
    GaussianSupEstimate out;
    out.draws = num_draws;
    const double nd = static_cast<double>(num_draws);
    out.estimate = sum / nd;
    if (num_draws >= 2) {
        const double var = std::max(0.0, (sum_sq - nd * out.estimate * out.estimate) / (nd - 1.0));
        out.std_error = std::sqrt(var / nd);
    }
    return out;
}

// Convenience: the index list covering every ordered pair of the kernel.
inline std::vector<std::size_t> all_pairs(const CovarianceKernel& kernel) {
    std::vector<std::size_t> idx(kernel.pair_count());
    for (std::size_t a = 0; a < idx.size(); ++a) idx[a] = a;
    return idx;
}

}  // namespace meanset
