#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "meanset/constants.hpp"
#include "meanset/errors.hpp"
#include "meanset/frechet.hpp"
#include "meanset/rates.hpp"

namespace meanset {

// Fully data-driven relaxed mean set over a finite candidate set.
//
// The relaxation level that makes the empirical mean set a consistent
// estimator of the population one depends on an unknown dispersion
// coefficient. The two-step scheme estimates it from the sample itself:
//
//   step 1: relax at the conservative scale  eps1 = c0 sqrt(log n / n),
//           where the pilot constant c0 = min_x W_p(x) needs no extra
//           knowledge; this set is consistent but typically too large.
//   step 2: measure the dispersion sigma1 of the step-1 set and re-relax
//           at the optimal scale eps2 = (1+delta) sigma1 sqrt(loglog n / n).
//
// The safety margin delta > 0 absorbs the estimation error in sigma1.

struct TwoStepReport {
    std::uint64_t n = 0;     // sample size driving the rates
    double p = 2.0;          // functional exponent
    double delta = 0.0;      // safety margin of step 2
    double c0 = 0.0;         // pilot constant = minimal W_p over candidates
    double eps1 = 0.0;       // step-1 relaxation level
    std::vector<PointId> step1_members;
    double raw_variance = 0.0;  // max pair variance over the step-1 set
    double sigma1 = 0.0;        // sqrt(2 * raw_variance)
    double eps2 = 0.0;          // step-2 relaxation level
    std::vector<PointId> step2_members;
    double m_p = 0.0;           // minimal W_p (equals c0; kept for symmetry)
    PointId argmin = 0;         // first candidate attaining m_p
};

inline TwoStepReport two_step_estimate(const EmpiricalMeasure& mu,
                                       const std::vector<PointId>& candidates, double p,
                                       double delta) {
    mu.validate();
    if (candidates.empty()) {
        throw input_error("two_step_estimate: empty candidate set");
    }
    if (!(p >= 1.0) || !std::isfinite(p)) {
        throw input_error("two_step_estimate: p must be a finite number >= 1");
    }
    if (!(delta >= 0.0) || !std::isfinite(delta)) {
        throw input_error("two_step_estimate: delta must be a finite number >= 0");
    }
    if (mu.sample_size() < 2) {
        throw input_error("two_step_estimate: need sample size >= 2");
    }

    TwoStepReport rep;
    rep.n = mu.sample_size();
    rep.p = p;
    rep.delta = delta;

    // One pass over the candidates gives every W_p value; both relaxed sets
    // are then sublevel scans of the same table.
    std::vector<double> w(candidates.size());
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_idx = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        w[i] = frechet_functional(mu, candidates[i], p);
        if (w[i] < best) {
            best = w[i];
            best_idx = i;
        }
    }
    rep.m_p = best;
    rep.argmin = candidates[best_idx];
    rep.c0 = best;

    rep.eps1 = suboptimal_rate(rep.c0).evaluate(rep.n);
    const double cut1 = best + rep.eps1 + kMembershipSlack;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (w[i] <= cut1) rep.step1_members.push_back(candidates[i]);
    }
    std::sort(rep.step1_members.begin(), rep.step1_members.end());
    rep.step1_members.erase(std::unique(rep.step1_members.begin(), rep.step1_members.end()),
                            rep.step1_members.end());

    rep.raw_variance = max_pair_variance(mu, rep.step1_members, p);
    rep.sigma1 = std::sqrt(2.0 * rep.raw_variance);

    rep.eps2 = lil_rate((1.0 + delta) * rep.sigma1).evaluate(rep.n);
    const double cut2 = best + rep.eps2 + kMembershipSlack;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (w[i] <= cut2) rep.step2_members.push_back(candidates[i]);
    }
    std::sort(rep.step2_members.begin(), rep.step2_members.end());
    rep.step2_members.erase(std::unique(rep.step2_members.begin(), rep.step2_members.end()),
                            rep.step2_members.end());
    return rep;
}

}  // namespace meanset
