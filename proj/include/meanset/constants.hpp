#pragma once

#include <cstddef>

namespace meanset {

// Central numeric tolerances. Every comparison in the library routes through
// these so that tests and documentation can speak about one set of numbers.

// Absolute slack for relaxed-set membership: x is kept when
// W_p(x) <= m_p + epsilon + kMembershipSlack. Guards ties such as grid points
// sitting exactly on the sub-level boundary.
inline constexpr double kMembershipSlack = 1e-12;

// Probability weights must sum to 1 within this absolute tolerance.
inline constexpr double kWeightSumTol = 1e-12;

// Empirical covariance matrices are accepted as positive semidefinite when
// every eigenvalue is >= -kPsdTol (small negatives are rounding debris and are
// clipped to zero before sampling).
inline constexpr double kPsdTol = 1e-8;

// Default cap on the base-set size K of a covariance kernel; the kernel is a
// |K|^2 x |K|^2 matrix, so 64 already means a 4096^2 matrix (134 MB).
inline constexpr std::size_t kKernelBaseCap = 64;

// Finite distance matrices up to this size get the full O(n^3) triangle
// check; larger ones are spot-checked on random triples.
inline constexpr std::size_t kFullTriangleCheckLimit = 512;
inline constexpr std::size_t kTriangleSpotChecks = 100000;

// Relative scale for metric-validation comparisons (symmetry, triangle).
inline constexpr double kMetricTol = 1e-12;

// log log n is evaluated as log(log(max(n, kLogLogFloor))) so that schedules
// stay finite and real for every n >= 1.
inline constexpr unsigned long long kLogLogFloor = 16;

// Default work cap for Monte Carlo experiment runs, measured in
// n * trials * |candidates| elementary evaluations.
inline constexpr unsigned long long kExperimentWorkCap = 200000000000ULL;

// Monte Carlo confidence intervals use the normal approximation and are only
// reported (non-NaN) when the trial count reaches this floor.
inline constexpr unsigned long long kCiTrialFloor = 400;

}  // namespace meanset
