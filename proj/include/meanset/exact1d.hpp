#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "meanset/constants.hpp"
#include "meanset/errors.hpp"
#include "meanset/rates.hpp"

namespace meanset {

// Exact relaxed median sets on the real line.
//
// For a sample y_1 <= ... <= y_n the functional W_1(x) = (1/n) sum |x - y_i|
// is piecewise affine with slope (2k - n)/n between the k-th and (k+1)-th
// order statistics, so both the minimum and the eps-sublevel interval
// { x : W_1(x) <= m_1 + eps } have closed forms. Everything here is
// O(n log n) (one sort) — no candidate grid is involved, which makes these
// routines the natural cross-check for the grid-based estimators.

struct MedianInterval {
    double u = 0.0;   // left endpoint of the relaxed median interval
    double v = 0.0;   // right endpoint
    double m1 = 0.0;  // minimal value of W_1
};

namespace detail1d {

// W_1 evaluated at every order statistic via prefix sums:
// W_1(y_i) = ((2i - n) y_i + T - 2 P_i) / n with P_i = sum_{j<i} y_j.
inline std::vector<double> w_at_order_stats(const std::vector<double>& y) {
    const std::size_t n = y.size();
    std::vector<double> w(n);
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        prefix[i + 1] = prefix[i] + y[i];
    }
    const double total = prefix[n];
    const double nd = static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double k = static_cast<double>(i);
        w[i] = ((2.0 * k - nd) * y[i] + total - 2.0 * prefix[i]) / nd;
    }
    return w;
}

}  // namespace detail1d

// The exact relaxed median interval. The minimum m_1 is reported from the
// order-statistic identity
//   m_1 = (1/n) ( sum_{i > (n+1)/2} y_i  -  sum_{i < (n+1)/2} y_i )
// (1-based ranks, sorted sample); the endpoints come from walking the
// piecewise-affine segments of W_1, including the two outer rays of slope
// -1 and +1, until W_1 crosses m_1 + eps.
inline MedianInterval median_interval(std::vector<double> samples, double eps) {
    if (samples.empty()) {
        throw input_error("median_interval: empty sample");
    }
    if (!(eps >= 0.0) || !std::isfinite(eps)) {
        throw input_error("median_interval: eps must be a finite number >= 0");
    }
    for (double s : samples) {
        if (!std::isfinite(s)) {
            throw input_error("median_interval: samples must be finite");
        }
    }
    std::sort(samples.begin(), samples.end());
    const std::vector<double>& y = samples;
    const std::size_t n = y.size();
    const double nd = static_cast<double>(n);

    // m_1 from the rank identity: ranks above (n+1)/2 enter with +, ranks
    // below with -; in 0-based terms compare 2i with n-1.
    double m1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (2 * i > n - 1) {
            m1 += y[i];
        } else if (2 * i < n - 1) {
            m1 -= y[i];
        }
    }
    m1 /= nd;

    const std::vector<double> w = detail1d::w_at_order_stats(y);
    double prefix = 0.0;  // running sum of y[0..i-1]
    double total = 0.0;
    for (double v : y) total += v;

    // The threshold carries the library's membership slack; it is also
    // floored at the smallest tabulated W value so rounding between the two
    // m_1 formulas can never produce an empty interval.
    double min_w = w[0];
    for (double v : w) min_w = std::min(min_w, v);
    const double threshold = std::max(m1 + eps, min_w) + kMembershipSlack;

    MedianInterval out;
    out.m1 = m1;

    // Left endpoint: smallest x with W_1(x) <= threshold.
    if (w[0] <= threshold) {
        // Outer ray of slope -1: W_1(x) = total/n - x for x <= y_0.
        out.u = total / nd - threshold;
        if (out.u > y[0]) out.u = y[0];
    } else {
        std::size_t i = 1;
        prefix = y[0];
        while (w[i] > threshold) {
            prefix += y[i];
            ++i;
        }
        // Crossing lies in (y_{i-1}, y_i]; on that segment k = i points sit
        // at or below x, so W_1(x) = ((2i - n)x + total - 2 prefix)/n with
        // negative slope (W_1 strictly decreased into the segment).
        const double k2 = 2.0 * static_cast<double>(i) - nd;
        out.u = (nd * threshold - total + 2.0 * prefix) / k2;
        if (out.u < y[i - 1]) out.u = y[i - 1];
        if (out.u > y[i]) out.u = y[i];
    }

    // Right endpoint, mirrored.
    if (w[n - 1] <= threshold) {
        // Outer ray of slope +1: W_1(x) = x - total/n for x >= y_{n-1}.
        out.v = threshold + total / nd;
        if (out.v < y[n - 1]) out.v = y[n - 1];
    } else {
        std::size_t i = n - 2;
        double suffix = y[n - 1];  // sum of y[i+1..n-1]
        while (w[i] > threshold) {
            suffix += y[i];
            --i;
        }
        // Crossing lies in [y_i, y_{i+1}); there k = i + 1, and
        // 2 prefix_{i+1} = 2 (total - suffix).
        const double k2 = 2.0 * static_cast<double>(i + 1) - nd;
        out.v = (nd * threshold - total + 2.0 * (total - suffix)) / k2;
        if (out.v > y[i + 1]) out.v = y[i + 1];
        if (out.v < y[i]) out.v = y[i];
    }
    return out;
}

// Exact dispersion coefficient of the interval [u, v]:
//   sigma_1 = sqrt( (2/n) sum D_i^2 - 2 ((1/n) sum D_i)^2 ),
// with D_i = |v - y_i| - |u - y_i|. On the line the variance of the
// difference functional is maximized at the interval's endpoint pair, so
// this single evaluation replaces the pairwise scan of the grid estimator.
inline double sigma1_exact(const std::vector<double>& samples, double u, double v) {
    if (samples.empty()) {
        throw input_error("sigma1_exact: empty sample");
    }
    const double nd = static_cast<double>(samples.size());
    double s1 = 0.0, s2 = 0.0;
    for (double y : samples) {
        const double d = std::abs(v - y) - std::abs(u - y);
        s1 += d;
        s2 += d * d;
    }
    const double mean = s1 / nd;
    return std::sqrt(std::max(0.0, (2.0 / nd) * s2 - 2.0 * mean * mean));
}

// Which pre-factor drives the second-step relaxation of the 1-D two-step
// estimator: the exact interval dispersion, or the distribution-free
// diameter bound sigma_1 <= sqrt(2) * (v - u).
enum class Sigma1Mode { exact, diameter_bound };

inline std::string to_string(Sigma1Mode mode) {
    return mode == Sigma1Mode::exact ? "exact" : "diameter_bound";
}

struct TwoStepMedianReport {
    std::uint64_t n = 0;
    double delta = 0.0;
    Sigma1Mode mode = Sigma1Mode::exact;
    double c0 = 0.0;                     // pilot scale = m_1 of the sample
    double eps1 = 0.0;                   // c0 * sqrt(log n / n)
    MedianInterval step1;
    double sigma_exact = 0.0;            // exact dispersion of the step-1 interval
    double sigma_diameter_bound = 0.0;   // sqrt(2) * width of the step-1 interval
    double eps2 = 0.0;                   // (1 + delta) * sigma * sqrt(loglog n / n)
    MedianInterval step2;
};

// Fully data-driven relaxed median: a pilot interval at the conservative
// sqrt(log n / n) scale fixes the dispersion estimate, which then sets the
// final interval on the optimal sqrt(loglog n / n) scale. Both dispersion
// pre-factors are always reported; `mode` selects which one drives eps2.
inline TwoStepMedianReport two_step_median_1d(const std::vector<double>& samples, double delta,
                                              Sigma1Mode mode = Sigma1Mode::exact) {
    if (samples.size() < 2) {
        throw input_error("two_step_median_1d: need at least 2 samples");
    }
    if (!(delta >= 0.0) || !std::isfinite(delta)) {
        throw input_error("two_step_median_1d: delta must be a finite number >= 0");
    }
    TwoStepMedianReport rep;
    rep.n = samples.size();
    rep.delta = delta;
    rep.mode = mode;

    const MedianInterval step0 = median_interval(samples, 0.0);
    rep.c0 = step0.m1;
    rep.eps1 = suboptimal_rate(rep.c0).evaluate(rep.n);
    rep.step1 = median_interval(samples, rep.eps1);

    rep.sigma_exact = sigma1_exact(samples, rep.step1.u, rep.step1.v);
    rep.sigma_diameter_bound = std::sqrt(2.0) * (rep.step1.v - rep.step1.u);
    const double sigma_used =
        mode == Sigma1Mode::exact ? rep.sigma_exact : rep.sigma_diameter_bound;

    rep.eps2 = (1.0 + delta) * sigma_used * std::sqrt(safe_loglog(rep.n) / static_cast<double>(rep.n));
    rep.step2 = median_interval(samples, rep.eps2);
    return rep;
}

}  // namespace meanset
