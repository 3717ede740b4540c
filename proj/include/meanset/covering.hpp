#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "meanset/errors.hpp"
#include "meanset/metric_space.hpp"

namespace meanset {

// Covering numbers and the entropy integral that controls the expected
// supremum of the Gaussian limit process.
//
// covering_number() builds a greedy farthest-point net: starting from point
// 0, it repeatedly adds the point farthest from the net until every point
// lies within eps of some center (closed balls). The result is an upper
// bound on the true covering number — at most the packing number at radius
// eps, itself at most the covering number at eps/2 — and is deterministic
// (ties pick the lowest index).

struct CoveringReport {
    std::vector<double> radii;        // evaluation radii, ascending
    std::vector<std::size_t> counts;  // greedy net size per radius
    double entropy_integral = 0.0;    // trapezoid of sqrt(log count) over the radii
};

inline std::size_t covering_number(const MetricSpace& space, double eps) {
    if (!(eps >= 0.0)) {
        throw input_error("covering_number: radius must be non-negative");
    }
    const std::size_t n = space.size();
    // Distance from every point to the current net.
    std::vector<double> min_dist(n, std::numeric_limits<double>::infinity());
    std::size_t centers = 0;
    PointId next_center = 0;  // farthest point from the net; seed with point 0
    while (true) {
        ++centers;
        double farthest = 0.0;
        PointId arg = 0;
        for (PointId i = 0; i < n; ++i) {
            const double d = space.distance(i, next_center);
            if (d < min_dist[i]) {
                min_dist[i] = d;
            }
            if (min_dist[i] > farthest) {
                farthest = min_dist[i];
                arg = i;
            }
        }
        if (farthest <= eps) {
            return centers;
        }
        next_center = arg;
    }
}

// Evaluates the covering number on the given radii and integrates
// sqrt(log N) over them with the trapezoid rule. log N is taken to be 0
// wherever N = 1, so spaces whose net collapses contribute nothing beyond
// that radius; radii are sorted ascending first. The integral is computed
// over [min radius, max radius] only — refining or extending the radii is
// the caller's choice of resolution.
inline CoveringReport dudley_report(const MetricSpace& space, std::vector<double> radii) {
    if (radii.empty()) {
        throw input_error("dudley_report: need at least one radius");
    }
    std::sort(radii.begin(), radii.end());
    if (!(radii.front() > 0.0)) {
        throw input_error("dudley_report: radii must be strictly positive");
    }
    CoveringReport report;
    report.radii = radii;
    report.counts.reserve(radii.size());
    for (double r : radii) {
        report.counts.push_back(covering_number(space, r));
    }
    auto entropy = [&report](std::size_t i) {
        const std::size_t c = report.counts[i];
        return c <= 1 ? 0.0 : std::sqrt(std::log(static_cast<double>(c)));
    };
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
        integral += 0.5 * (entropy(i) + entropy(i + 1)) * (radii[i + 1] - radii[i]);
    }
    report.entropy_integral = integral;
    return report;
}

}  // namespace meanset
