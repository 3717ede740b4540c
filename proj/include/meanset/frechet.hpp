#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "meanset/constants.hpp"
#include "meanset/errors.hpp"
#include "meanset/metric_space.hpp"

namespace meanset {

// Empirical (or more generally categorical) probability measures on a finite
// metric space, the Frechet functional W_p, and relaxed Frechet mean sets
//
//   F_p(mu, C, eps) = { x in C : W_p(mu, x) <= inf_{x' in C} W_p(mu, x') + eps },
//
// where W_p(mu, x) = sum_i w_i d(x, Y_i)^p. The relaxation makes the
// estimator set-valued in a controlled way: with eps = 0 it is the plain
// argmin, and growing eps trades false positives against false negatives.

struct EmpiricalMeasure {
    const MetricSpace* space = nullptr;
    std::vector<PointId> support;  // sample points, as ids into *space
    std::vector<double> weights;   // strictly positive, sums to 1

    // Uniform empirical measure on the given sample. Weights are written as
    // 1/n directly; validation tolerance still applies.
    static EmpiricalMeasure uniform(const MetricSpace& space, std::vector<PointId> sample) {
        EmpiricalMeasure mu;
        mu.space = &space;
        mu.support = std::move(sample);
        mu.weights.assign(mu.support.size(), 1.0 / static_cast<double>(mu.support.size()));
        mu.validate();
        return mu;
    }

    static EmpiricalMeasure weighted(const MetricSpace& space, std::vector<PointId> sample,
                                     std::vector<double> weights) {
        EmpiricalMeasure mu;
        mu.space = &space;
        mu.support = std::move(sample);
        mu.weights = std::move(weights);
        mu.validate();
        return mu;
    }

    std::size_t sample_size() const { return support.size(); }

    void validate() const {
        if (space == nullptr) {
            throw input_error("measure: no metric space attached");
        }
        if (support.empty()) {
            throw input_error("measure: empty support");
        }
        if (weights.size() != support.size()) {
            throw input_error("measure: " + std::to_string(support.size()) + " support points but " +
                              std::to_string(weights.size()) + " weights");
        }
        const std::size_t n = space->size();
        for (std::size_t i = 0; i < support.size(); ++i) {
            if (support[i] >= n) {
                throw input_error("measure: support point " + std::to_string(i + 1) + " has id " +
                                  std::to_string(support[i]) + ", but the space has only " +
                                  std::to_string(n) + " points");
            }
        }
        // Kahan summation keeps the check honest for n in the millions.
        double sum = 0.0, comp = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            const double w = weights[i];
            if (!(w > 0.0) || !std::isfinite(w)) {
                throw input_error("measure: weight " + std::to_string(i + 1) +
                                  " must be strictly positive and finite");
            }
            const double y = w - comp;
            const double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        if (std::abs(sum - 1.0) > kWeightSumTol) {
            throw input_error("measure: weights sum to " + std::to_string(sum) +
                              ", expected 1 within " + std::to_string(kWeightSumTol));
        }
    }
};

struct FrechetParams {
    double p = 2.0;                     // functional exponent, >= 1
    std::vector<PointId> candidates;    // candidate set C, scanned in order
    double epsilon = 0.0;               // relaxation level, >= 0

    void validate(const MetricSpace& space) const {
        if (!(p >= 1.0) || !std::isfinite(p)) {
            throw input_error("p must be a finite number >= 1");
        }
        if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
            throw input_error("epsilon must be a finite number >= 0");
        }
        if (candidates.empty()) {
            throw input_error("candidate set is empty");
        }
        for (PointId c : candidates) {
            if (c >= space.size()) {
                throw input_error("candidate id " + std::to_string(c) + " is out of range for a space of " +
                                  std::to_string(space.size()) + " points");
            }
        }
    }
};

struct RelaxedMeanResult {
    std::vector<PointId> members;   // the relaxed mean set, ascending ids
    double m_p = 0.0;               // minimal functional value over the candidates
    std::vector<double> w_values;   // W_p per candidate, aligned with the candidate order
    PointId argmin = 0;             // minimizer; ties resolved to the earliest candidate
    double epsilon = 0.0;
    double p = 2.0;
};

// W_p(mu, x). Accumulation runs in support order so repeated evaluations
// (and independent re-implementations that follow the same convention) agree
// bit for bit.
inline double frechet_functional(const EmpiricalMeasure& mu, PointId x, double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) {
        throw input_error("p must be a finite number >= 1");
    }
    if (x >= mu.space->size()) {
        throw input_error("point id " + std::to_string(x) + " is out of range");
    }
    const MetricSpace& space = *mu.space;
    double w = 0.0;
    for (std::size_t i = 0; i < mu.support.size(); ++i) {
        w += mu.weights[i] * std::pow(space.distance(x, mu.support[i]), p);
    }
    return w;
}

// Exhaustive scan of the candidate set: every W_p value, the minimum, and
// the eps-sublevel membership with an absolute tie slack.
inline RelaxedMeanResult relaxed_mean_set(const EmpiricalMeasure& mu, const FrechetParams& params) {
    mu.validate();
    params.validate(*mu.space);
    RelaxedMeanResult res;
    res.epsilon = params.epsilon;
    res.p = params.p;
    res.w_values.reserve(params.candidates.size());
    double best = std::numeric_limits<double>::infinity();
    PointId best_id = params.candidates.front();
    for (PointId c : params.candidates) {
        const double w = frechet_functional(mu, c, params.p);
        res.w_values.push_back(w);
        if (w < best) {
            best = w;
            best_id = c;
        }
    }
    res.m_p = best;
    res.argmin = best_id;
    const double threshold = best + params.epsilon + kMembershipSlack;
    for (std::size_t i = 0; i < params.candidates.size(); ++i) {
        if (res.w_values[i] <= threshold) {
            res.members.push_back(params.candidates[i]);
        }
    }
    std::sort(res.members.begin(), res.members.end());
    res.members.erase(std::unique(res.members.begin(), res.members.end()), res.members.end());
    return res;
}

// Unrelaxed minimization restricted to the sample itself (the medoid
// estimator): candidates are the distinct support points.
inline RelaxedMeanResult medoid_set(const EmpiricalMeasure& mu, double p) {
    FrechetParams params;
    params.p = p;
    params.epsilon = 0.0;
    params.candidates = mu.support;
    std::sort(params.candidates.begin(), params.candidates.end());
    params.candidates.erase(std::unique(params.candidates.begin(), params.candidates.end()),
                            params.candidates.end());
    return relaxed_mean_set(mu, params);
}

/// Empirical variance (biased, 1/n-style: E[D^2] - E[D]^2 under mu) of the
// functional difference D = d(x, Y)^p - d(x', Y)^p. Shared by sigma_hat and
// the covariance kernel so their diagonal entries agree exactly.
inline double pair_difference_variance(const EmpiricalMeasure& mu, PointId x, PointId x2, double p,
                                       double* mean_out = nullptr) {
    const MetricSpace& space = *mu.space;
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < mu.support.size(); ++i) {
        const PointId y = mu.support[i];
        const double d = std::pow(space.distance(x, y), p) - std::pow(space.distance(x2, y), p);
        m1 += mu.weights[i] * d;
        m2 += mu.weights[i] * d * d;
    }
    if (mean_out != nullptr) {
        *mean_out = m1;
    }
    return std::max(0.0, m2 - m1 * m1);
}

// sigma_hat = sqrt(2 * max variance of d(x,Y)^p - d(x',Y)^p) over pairs of
// the base set — the empirical version of the dispersion coefficient that
// scales the optimal relaxation rate. A singleton base set gives 0.
inline double sigma_hat(const EmpiricalMeasure& mu, const std::vector<PointId>& base_set, double p) {
    mu.validate();
    if (base_set.empty()) {
        throw input_error("sigma_hat: empty base set");
    }
    double max_var = 0.0;
    for (std::size_t i = 0; i < base_set.size(); ++i) {
        for (std::size_t j = i + 1; j < base_set.size(); ++j) {
            max_var = std::max(max_var, pair_difference_variance(mu, base_set[i], base_set[j], p));
        }
    }
    return std::sqrt(2.0 * max_var);
}

// Raw maximal pair variance (the quantity sigma_hat wraps in sqrt(2 * .)).
inline double max_pair_variance(const EmpiricalMeasure& mu, const std::vector<PointId>& base_set,
                                double p) {
    double max_var = 0.0;
    for (std::size_t i = 0; i < base_set.size(); ++i) {
        for (std::size_t j = i + 1; j < base_set.size(); ++j) {
            max_var = std::max(max_var, pair_difference_variance(mu, base_set[i], base_set[j], p));
        }
    }
    return max_var;
}

// One-sided Hausdorff distance: how far A sticks out of B,
// max_{a in A} min_{b in B} d(a, b). Orientation matters: with A the
// estimate and B the truth it measures false positives; flipped, false
// negatives. An empty A sticks out nowhere.
inline double one_sided_hausdorff(const MetricSpace& space, const std::vector<PointId>& a,
                                  const std::vector<PointId>& b) {
    if (b.empty()) {
        throw input_error("one_sided_hausdorff: reference set is empty");
    }
    double worst = 0.0;
    for (PointId x : a) {
        double nearest = std::numeric_limits<double>::infinity();
        for (PointId y : b) {
            nearest = std::min(nearest, space.distance(x, y));
        }
        worst = std::max(worst, nearest);
    }
    return worst;
}

inline double hausdorff(const MetricSpace& space, const std::vector<PointId>& a,
                        const std::vector<PointId>& b) {
    return std::max(one_sided_hausdorff(space, a, b), one_sided_hausdorff(space, b, a));
}

}  // namespace meanset
