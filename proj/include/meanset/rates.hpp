#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "meanset/constants.hpp"
#include "meanset/errors.hpp"

namespace meanset {

// Relaxation-rate schedules of the family
//
//   eps_n = max(0,  a + c * n^(-alpha) * (log n)^beta * (loglog n)^gamma ),
//
// where loglog n = log(log(max(n, 16))) so every term is finite and real
// down to n = 1. This family covers all rates used in the estimators and
// experiments: the optimal law-of-iterated-logarithm scale (alpha = gamma =
// 1/2), the conservative sqrt(log n / n) scale (alpha = beta = 1/2), and
// offset families a - c * n^(-alpha)(...) that probe a consistency boundary
// from below (negative c; the clamp at 0 keeps eps_n a valid relaxation).

struct RelaxationSchedule {
    double a = 0.0;
    double c = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;

    double evaluate(std::uint64_t n) const {
        if (n == 0) {
            throw input_error("schedule: n must be >= 1");
        }
        const double nd = static_cast<double>(n);
        const double log_n = std::log(nd);
        const double llog_n =
            std::log(std::log(static_cast<double>(n < kLogLogFloor ? kLogLogFloor : n)));
        double term = c * std::pow(nd, -alpha);
        if (beta != 0.0) {
            term *= std::pow(log_n, beta);
        }
        if (gamma != 0.0) {
            term *= std::pow(llog_n, gamma);
        }
        const double eps = a + term;
        return eps > 0.0 ? eps : 0.0;
    }
};

// loglog with the same floor the schedules use, for callers that assemble
// rates by hand.
inline double safe_loglog(std::uint64_t n) {
    return std::log(std::log(static_cast<double>(n < kLogLogFloor ? kLogLogFloor : n)));
}

// c * sqrt(loglog n / n): the optimal scale; strong consistency holds as
// soon as c exceeds the dispersion coefficient sigma_p.
inline RelaxationSchedule lil_rate(double c) { return {0.0, c, 0.5, 0.0, 0.5}; }

// c * sqrt(log n / n): slightly too generous, but consistent without any
// knowledge of sigma_p; used as the pilot rate of the two-step estimator.
inline RelaxationSchedule suboptimal_rate(double c) { return {0.0, c, 0.5, 0.5, 0.0}; }

// Distribution-free rate for a compact space: sigma_p <= sqrt(2) * diam^p,
// so (3/2) * diam^p clears the consistency threshold with a safety margin.
inline RelaxationSchedule compact_space_rate(double diameter, double p) {
    if (!(diameter >= 0.0) || !(p >= 1.0)) {
        throw input_error("compact_space_rate: need diameter >= 0 and p >= 1");
    }
    return lil_rate(1.5 * std::pow(diameter, p));
}

// p = 1 (median) refinement: sigma_1 <= sqrt(2) * diam(F_1), so
// (1 + delta) * sqrt(2) * diam_f1 on the lil scale suffices.
inline RelaxationSchedule median_rate(double diam_f1, double delta) {
    if (!(diam_f1 >= 0.0) || !(delta >= 0.0)) {
        throw input_error("median_rate: need diam_f1 >= 0 and delta >= 0");
    }
    return lil_rate((1.0 + delta) * std::sqrt(2.0) * diam_f1);
}

// p = 2 (mean) refinement: sigma_2 <= 2 * diam(F_2) * sqrt(2 m_2), giving
// 4 * (1 + delta) * diam_f2 * sqrt(m_2) on the lil scale.
inline RelaxationSchedule mean_rate(double diam_f2, double m2, double delta) {
    if (!(diam_f2 >= 0.0) || !(m2 >= 0.0) || !(delta >= 0.0)) {
        throw input_error("mean_rate: need diam_f2 >= 0, m2 >= 0 and delta >= 0");
    }
    return lil_rate(4.0 * (1.0 + delta) * diam_f2 * std::sqrt(m2));
}

}  // namespace meanset
