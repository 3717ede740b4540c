#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "meanset/constants.hpp"
#include "meanset/csv.hpp"
#include "meanset/errors.hpp"
#include "meanset/frechet.hpp"
#include "meanset/metric_space.hpp"
#include "meanset/models.hpp"
#include "meanset/rates.hpp"
#include "meanset/rng.hpp"

namespace meanset {

// Monte Carlo harness: error frequencies of relaxed empirical mean sets
// against the analytic ground truth of the example models (or a supplied
// categorical distribution on a finite space), swept over sample sizes and
// relaxation schedules.

// Which discrepancy between the estimated set and the true mean set counts
// as an error (always compared against the threshold delta_h):
//   miss_true_set:    some true point is farther than delta_h from the
//                     estimate (a false negative);
//   extraneous_point: some estimated point is farther than delta_h from
//                     the truth (a false positive);
//   full_hausdorff:   either of the above, i.e. d_H >= delta_h.
enum class ErrorMode { full_hausdorff, miss_true_set, extraneous_point };

inline std::string to_string(ErrorMode mode) {
    switch (mode) {
        case ErrorMode::full_hausdorff:
            return "full_hausdorff";
        case ErrorMode::miss_true_set:
            return "miss_true_set";
        case ErrorMode::extraneous_point:
            return "extraneous_point";
    }
    return "unknown";
}

inline ErrorMode error_mode_from_string(const std::string& s) {
    if (s == "full_hausdorff") return ErrorMode::full_hausdorff;
    if (s == "miss_true_set") return ErrorMode::miss_true_set;
    if (s == "extraneous_point") return ErrorMode::extraneous_point;
    throw input_error("unknown error mode '" + s +
                      "' (expected full_hausdorff, miss_true_set or extraneous_point)");
}

// ---------------------------------------------------------------------------
// Arc-model analytic machinery.
//
// Samples sit on the two arc endpoints (0,1) and (0,-1) with counts n+ and
// n-. Parametrize the arc by eta in [-1,1] via theta = pi + pi*eta/2, so
// d(x_eta,(0,1)) = 1+eta and d(x_eta,(0,-1)) = 1-eta, and with a = n+/n,
// b = n-/n the empirical functional on the arc is
//     W(eta) = a (1+eta)^p + b (1-eta)^p,
// a strictly convex function whose minimizer has the closed form
//     eta* = (u-1)/(u+1),  u = (b/a)^{1/(p-1)},
// with minimal value m = (2/(1+u))^p (a u^p + b). The isolated point (1,0)
// always has W = a + b = 1, so the functional gap separating it from the
// arc minimum is 1 - m, and that gap — not any grid search — is what the
// fast path thresholds.

struct ArcMinimum {
    double eta_star = 0.0;  // arc minimizer in eta coordinates
    double m = 1.0;         // minimal functional value on the arc
    double gap = 0.0;       // W((1,0)) - m = 1 - m
};

inline double arc_functional(double a, double b, double p, double eta) {
    return a * std::pow(1.0 + eta, p) + b * std::pow(1.0 - eta, p);
}

inline ArcMinimum arc_minimum(double a, double b, double p) {
    ArcMinimum out;
    const double u = std::pow(b / a, 1.0 / (p - 1.0));
    out.eta_star = (u - 1.0) / (u + 1.0);
    out.m = std::pow(2.0 / (1.0 + u), p) * (a * std::pow(u, p) + b);
    out.gap = 1.0 - out.m;
    return out;
}

namespace detail_exp {

// Largest eta in [eta_star, 1] with W(eta) <= target (W increases there).
inline double arc_upper_endpoint(double a, double b, double p, double eta_star, double target) {
    if (arc_functional(a, b, p, 1.0) <= target) return 1.0;
    double lo = eta_star, hi = 1.0;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (arc_functional(a, b, p, mid) <= target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

// Smallest eta in [-1, eta_star] with W(eta) <= target.
inline double arc_lower_endpoint(double a, double b, double p, double eta_star, double target) {
    if (arc_functional(a, b, p, -1.0) <= target) return -1.0;
    double lo = -1.0, hi = eta_star;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (arc_functional(a, b, p, mid) <= target) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

}  // namespace detail_exp

// One weak-error trial on the arc model: draw n endpoint samples, compute
// the functional gap of the isolated point analytically, and report whether
// it exceeds (4p/(p-1)) c^2 / n — the event whose probability converges to
// the one-sided normal tail P(N(0,1) > 2c). A degenerate draw with all
// samples on one endpoint (probability 2^{1-n}) is redrawn from the next
// derived stream and counted in *degenerate_log when given.
inline bool arc_weak_error_trial(double p, double c, std::uint64_t n, std::uint64_t seed,
                                 std::uint64_t* degenerate_log = nullptr) {
    if (!(p > 1.0) || !std::isfinite(p)) {
        throw input_error("arc_weak_error_trial: p must be a finite number > 1");
    }
    if (n < 2) {
        throw input_error("arc_weak_error_trial: need n >= 2 (n = 1 is always degenerate)");
    }
    const std::uint64_t kArcTag = 0x61726373ULL;
    std::uint64_t n_plus = 0;
    for (std::uint64_t attempt = 0;; ++attempt) {
        if (attempt >= 64) {
            // 64 straight degenerate redraws at probability 2^{1-n} each
            // signals a broken RNG rather than bad luck.
            throw numeric_error("arc_weak_error_trial: 64 degenerate redraws in a row");
        }
        CounterRng rng(derive_stream(seed, {kArcTag, n, attempt}));
        n_plus = 0;
        for (std::uint64_t i = 0; i < n; ++i) {
            if (rng.next_bernoulli(0.5)) ++n_plus;
        }
        if (n_plus > 0 && n_plus < n) break;
        if (degenerate_log != nullptr) ++(*degenerate_log);
    }
    const double a = static_cast<double>(n_plus) / static_cast<double>(n);
    const double b = 1.0 - a;
    const ArcMinimum min = arc_minimum(a, b, p);
    const double threshold = (4.0 * p / (p - 1.0)) * c * c / static_cast<double>(n);
    return min.gap > threshold;
}

// ---------------------------------------------------------------------------
// Experiment configuration and report.

// A user-supplied categorical distribution on a finite space, as the
// alternative to the built-in example models. The population mean set (the
// ground truth for error accounting) is computed from the exact weights.
struct CustomModel {
    const MetricSpace* space = nullptr;
    std::vector<PointId> support;
    std::vector<double> probs;
    double p = 2.0;
};

struct ModelSpec {
    std::optional<ExampleModel> example;
    std::optional<CustomModel> custom;

    static ModelSpec of(ExampleModel m) {
        ModelSpec s;
        s.example = m;
        return s;
    }
    static ModelSpec of(CustomModel m) {
        ModelSpec s;
        s.custom = std::move(m);
        return s;
    }

    void validate() const {
        if (example.has_value() == custom.has_value()) {
            throw input_error("model spec: exactly one of example/custom must be set");
        }
        if (custom) {
            if (custom->space == nullptr) {
                throw input_error("custom model: no metric space attached");
            }
            if (custom->support.empty() || custom->support.size() != custom->probs.size()) {
                throw input_error("custom model: support and probability lists must be "
                                  "non-empty and equally long");
            }
            if (!(custom->p >= 1.0) || !std::isfinite(custom->p)) {
                throw input_error("custom model: p must be a finite number >= 1");
            }
            double sum = 0.0;
            for (double q : custom->probs) {
                if (!(q > 0.0) || !std::isfinite(q)) {
                    throw input_error("custom model: probabilities must be strictly positive");
                }
                sum += q;
            }
            if (std::abs(sum - 1.0) > 1e-9) {
                throw input_error("custom model: probabilities sum to " + std::to_string(sum) +
                                  ", expected 1");
            }
            for (PointId id : custom->support) {
                if (id >= custom->space->size()) {
                    throw input_error("custom model: support id out of range");
                }
            }
        }
    }

    std::string name() const { return example ? example->kind_name() : "custom"; }
};

struct ExperimentConfig {
    ModelSpec model;
    RelaxationSchedule schedule;
    std::vector<std::uint64_t> n_grid;
    std::size_t trials = 0;
    double delta_h = 0.5;
    std::uint64_t seed = 0;
    ErrorMode error_mode = ErrorMode::full_hausdorff;
    std::size_t threads = 0;  // 0 = hardware concurrency

    void validate() const {
        model.validate();
        if (trials < 1) {
            throw input_error("experiment: trials must be >= 1");
        }
        if (n_grid.empty()) {
            throw input_error("experiment: empty n grid");
        }
        for (std::size_t i = 0; i < n_grid.size(); ++i) {
            if (n_grid[i] < 1) {
                throw input_error("experiment: sample sizes must be >= 1");
            }
            if (i > 0 && n_grid[i] <= n_grid[i - 1]) {
                throw input_error("experiment: n grid must be strictly increasing");
            }
        }
        if (!(delta_h > 0.0) || !std::isfinite(delta_h)) {
            throw input_error("experiment: delta_h must be a finite number > 0");
        }
    }
};

struct ExperimentRow {
    std::uint64_t n = 0;
    double freq = 0.0;     // error frequency over the trials
    double ci_half = 0.0;  // 1.96 sqrt(freq(1-freq)/trials); NaN if trials < 400
};

struct ExperimentReport {
    std::string model_name;
    RelaxationSchedule schedule;
    ErrorMode error_mode = ErrorMode::full_hausdorff;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    double delta_h = 0.0;
    std::vector<ExperimentRow> rows;
    std::uint64_t degenerate_resamples = 0;  // arc model redraw count
};

// ---------------------------------------------------------------------------
// Internals shared by run_experiment and threshold_scan.

namespace detail_exp {

// Everything the per-trial workers need, resolved once per run.
struct ResolvedModel {
    std::unique_ptr<MetricSpace> owned_space;  // set when the model builds its own
    const MetricSpace* space = nullptr;
    double p = 2.0;
    std::uint64_t tag = 0;
    bool arc_analytic = false;
    // finite path:
    std::vector<PointId> candidates;
    std::vector<PointId> atoms;
    std::vector<double> probs;
    std::vector<double> cum_probs;  // inclusive prefix sums for inverse-CDF draws
    std::vector<PointId> truth;
    // arc path keeps truth implicit: {(1,0), (-1,0)}.
};

inline ResolvedModel resolve_model(const ModelSpec& spec) {
    spec.validate();
    ResolvedModel rm;
    if (spec.example) {
        const ExampleModel& m = *spec.example;
        rm.owned_space = m.make_space();
        rm.space = rm.owned_space.get();
        rm.p = m.p_exponent;
        rm.tag = m.stream_tag();
        rm.atoms = m.atom_ids(*rm.space);
        rm.probs = m.atom_probs();
        rm.truth = m.true_mean_set(*rm.space);
        if (m.kind == ModelKind::arc) {
            rm.arc_analytic = true;
        } else {
            rm.candidates.resize(rm.space->size());
            for (std::size_t i = 0; i < rm.candidates.size(); ++i) rm.candidates[i] = i;
        }
    } else {
        const CustomModel& m = *spec.custom;
        rm.space = m.space;
        rm.p = m.p;
        rm.tag = 0x63757374ULL;  // "cust"
        rm.atoms = m.support;
        rm.probs = m.probs;
        rm.candidates.resize(rm.space->size());
        for (std::size_t i = 0; i < rm.candidates.size(); ++i) rm.candidates[i] = i;
        // Ground truth: exact minimizers of the population functional.
        EmpiricalMeasure pop = EmpiricalMeasure::weighted(*rm.space, m.support, m.probs);
        FrechetParams params;
        params.p = m.p;
        params.candidates = rm.candidates;
        params.epsilon = 0.0;
        rm.truth = relaxed_mean_set(pop, params).members;
    }
    rm.cum_probs.resize(rm.probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < rm.probs.size(); ++i) {
        acc += rm.probs[i];
        rm.cum_probs[i] = acc;
    }
    rm.cum_probs.back() = 1.0 + 1e-9;  // guard the top bucket against rounding
    return rm;
}

// Atom counts of one derived sample (inverse-CDF draws; two-atom models hit
// the first branch almost always, so this is as cheap as a Bernoulli loop).
inline void draw_counts(const ResolvedModel& rm, std::uint64_t n, CounterRng& rng,
                        std::vector<std::uint64_t>& counts) {
    counts.assign(rm.atoms.size(), 0);
    for (std::uint64_t i = 0; i < n; ++i) {
        const double u = rng.next_unit();
        std::size_t k = 0;
        while (u >= rm.cum_probs[k]) ++k;
        ++counts[k];
    }
}

// W_p table of the aggregated sample over the candidate set. Aggregating
// the n draws into per-atom weights changes nothing but the accumulation
// order of the functional.
inline void w_table(const ResolvedModel& rm, const std::vector<std::uint64_t>& counts,
                    std::uint64_t n, std::vector<double>& w) {
    const double nd = static_cast<double>(n);
    w.assign(rm.candidates.size(), 0.0);
    for (std::size_t ci = 0; ci < rm.candidates.size(); ++ci) {
        double acc = 0.0;
        for (std::size_t ai = 0; ai < rm.atoms.size(); ++ai) {
            if (counts[ai] == 0) continue;
            const double weight = static_cast<double>(counts[ai]) / nd;
            acc += weight * std::pow(rm.space->distance(rm.candidates[ci], rm.atoms[ai]), rm.p);
        }
        w[ci] = acc;
    }
}

// Error indicator of a finite-path trial at relaxation eps, given the
// trial's W table.
inline bool finite_error(const ResolvedModel& rm, const std::vector<double>& w, double eps,
                         double delta_h, ErrorMode mode, std::vector<PointId>& members_buf) {
    double best = w[0];
    for (double v : w) best = std::min(best, v);
    const double cut = best + eps + kMembershipSlack;
    members_buf.clear();
    for (std::size_t ci = 0; ci < w.size(); ++ci) {
        if (w[ci] <= cut) members_buf.push_back(rm.candidates[ci]);
    }
    double discrepancy = 0.0;
    if (mode == ErrorMode::miss_true_set || mode == ErrorMode::full_hausdorff) {
        discrepancy =
            std::max(discrepancy, one_sided_hausdorff(*rm.space, rm.truth, members_buf));
    }
    if (mode == ErrorMode::extraneous_point || mode == ErrorMode::full_hausdorff) {
        discrepancy =
            std::max(discrepancy, one_sided_hausdorff(*rm.space, members_buf, rm.truth));
    }
    return discrepancy >= delta_h;
}

// Error indicator of an arc-path trial at relaxation eps, given the trial's
// sample composition. The relaxed set is the isolated point (iff its gap is
// within eps) plus a closed eta-interval around the arc minimizer; the
// distances to the true pair {(1,0), (-1,0)} reduce to |eta| arithmetic:
// d(x_eta, (-1,0)) = |eta| and d(x_eta, (1,0)) = 2 - |eta|.
inline bool arc_error(double a, double b, double p, const ArcMinimum& min, double eps,
                      double delta_h, ErrorMode mode) {
    const double target = min.m + eps + kMembershipSlack;
    const bool isolated_in = min.gap <= eps + kMembershipSlack;
    const double eta_lo = arc_lower_endpoint(a, b, p, min.eta_star, target);
    const double eta_hi = arc_upper_endpoint(a, b, p, min.eta_star, target);

    double discrepancy = 0.0;
    if (mode == ErrorMode::miss_true_set || mode == ErrorMode::full_hausdorff) {
        // d((1,0), estimate): 0 if the isolated point is in, else nearest
        // arc member, 2 - max |eta|.
        const double max_abs = std::max(std::abs(eta_lo), std::abs(eta_hi));
        const double d_isolated = isolated_in ? 0.0 : 2.0 - max_abs;
        // d((-1,0), estimate): distance from eta = 0 to the member interval
        // (the isolated point is 2 away, never closer).
        double d_west = 0.0;
        if (eta_lo > 0.0) {
            d_west = eta_lo;
        } else if (eta_hi < 0.0) {
            d_west = -eta_hi;
        }
        discrepancy = std::max(d_isolated, d_west);
    }
    if (mode == ErrorMode::extraneous_point || mode == ErrorMode::full_hausdorff) {
        // Worst member: the isolated point is itself true; an arc member
        // x_eta is |eta| from (-1,0) (and farther from (1,0)).
        const double max_abs = std::max(std::abs(eta_lo), std::abs(eta_hi));
        discrepancy = std::max(discrepancy, max_abs);
    }
    return discrepancy >= delta_h;
}

// Static partition of [0, trials) into worker slices; returns per-trial
// error counts summed in a thread-count-independent order.
template <typename TrialFn>
inline void parallel_trials(std::size_t trials, std::size_t threads, const TrialFn& fn) {
    std::size_t k = threads == 0 ? std::thread::hardware_concurrency() : threads;
    if (k == 0) k = 1;
    k = std::min(k, trials);
    if (k <= 1) {
        fn(0, trials, 0);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(k);
    const std::size_t chunk = (trials + k - 1) / k;
    for (std::size_t w = 0; w < k; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(trials, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&fn, lo, hi, w] { fn(lo, hi, w); });
    }
    for (auto& t : pool) t.join();
}

inline double ci_half_width(double freq, std::size_t trials) {
    if (trials < kCiTrialFloor) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return 1.96 * std::sqrt(freq * (1.0 - freq) / static_cast<double>(trials));
}

inline void check_work_cap(double projected, const std::string& what) {
    if (projected > kExperimentWorkCap) {
        std::ostringstream msg;
        msg << what << ": projected work of about " << projected
            << " elementary operations exceeds the cap of " << kExperimentWorkCap
            << " (shrink trials, the n grid, or the candidate set)";
        throw resource_error(msg.str());
    }
}

}  // namespace detail_exp

// ---------------------------------------------------------------------------

inline ExperimentReport run_experiment(const ExperimentConfig& config) {
    config.validate();
    const detail_exp::ResolvedModel rm = detail_exp::resolve_model(config.model);
    if (rm.arc_analytic && config.n_grid.front() < 2) {
        throw input_error("run_experiment: the arc model needs n >= 2 "
                          "(a single draw is always degenerate)");
    }

    double per_trial_work = 0.0;
    for (std::uint64_t n : config.n_grid) {
        per_trial_work += static_cast<double>(n) +
                          static_cast<double>(rm.candidates.size()) *
                              static_cast<double>(rm.atoms.size());
    }
    detail_exp::check_work_cap(per_trial_work * static_cast<double>(config.trials),
                               "run_experiment");

    // err_counts[worker][n index]; summed over workers in fixed order so the
    // result does not depend on the thread count.
    std::size_t max_workers = config.threads == 0 ? std::thread::hardware_concurrency()
                                                  : config.threads;
    if (max_workers == 0) max_workers = 1;
    std::vector<std::vector<std::uint64_t>> err_counts(
        max_workers, std::vector<std::uint64_t>(config.n_grid.size(), 0));
    std::vector<std::uint64_t> degenerate(max_workers, 0);

    detail_exp::parallel_trials(
        config.trials, config.threads,
        [&](std::size_t lo, std::size_t hi, std::size_t worker) {
            std::vector<std::uint64_t> counts;
            std::vector<double> w;
            std::vector<PointId> members;
            for (std::size_t ni = 0; ni < config.n_grid.size(); ++ni) {
                const std::uint64_t n = config.n_grid[ni];
                const double eps = config.schedule.evaluate(n);
                for (std::size_t trial = lo; trial < hi; ++trial) {
                    bool error;
                    if (rm.arc_analytic) {
                        std::uint64_t n_plus = 0;
                        for (std::uint64_t attempt = 0;; ++attempt) {
                            if (attempt >= 64) {
                                throw numeric_error(
                                    "run_experiment: 64 degenerate arc redraws in a row");
                            }
                            CounterRng rng(derive_stream(
                                config.seed, {rm.tag, n, static_cast<std::uint64_t>(trial),
                                              attempt}));
                            n_plus = 0;
                            for (std::uint64_t i = 0; i < n; ++i) {
                                if (rng.next_unit() < rm.probs[0]) ++n_plus;
                            }
                            if (n_plus > 0 && n_plus < n) break;
                            ++degenerate[worker];
                        }
                        const double a =
                            static_cast<double>(n_plus) / static_cast<double>(n);
                        const double b = 1.0 - a;
                        const ArcMinimum min = arc_minimum(a, b, rm.p);
                        error = detail_exp::arc_error(a, b, rm.p, min, eps, config.delta_h,
                                                      config.error_mode);
                    } else {
                        CounterRng rng(derive_stream(
                            config.seed,
                            {rm.tag, n, static_cast<std::uint64_t>(trial), 0ULL}));
                        detail_exp::draw_counts(rm, n, rng, counts);
                        detail_exp::w_table(rm, counts, n, w);
                        error = detail_exp::finite_error(rm, w, eps, config.delta_h,
                                                         config.error_mode, members);
                    }
                    if (error) ++err_counts[worker][ni];
                }
            }
        });

    ExperimentReport report;
    report.model_name = config.model.name();
    report.schedule = config.schedule;
    report.error_mode = config.error_mode;
    report.trials = config.trials;
    report.seed = config.seed;
    report.delta_h = config.delta_h;
    for (std::size_t ni = 0; ni < config.n_grid.size(); ++ni) {
        std::uint64_t errors = 0;
        for (std::size_t w = 0; w < err_counts.size(); ++w) errors += err_counts[w][ni];
        ExperimentRow row;
        row.n = config.n_grid[ni];
        row.freq = static_cast<double>(errors) / static_cast<double>(config.trials);
        row.ci_half = detail_exp::ci_half_width(row.freq, config.trials);
        report.rows.push_back(row);
    }
    for (std::uint64_t d : degenerate) report.degenerate_resamples += d;
    return report;
}

// ---------------------------------------------------------------------------
// Threshold scan: the same harness swept over the free coefficient of a
// schedule family, reusing one sample per (n, trial) across the whole
// c grid (common random numbers). That makes monotonicity of the error in
// c a pathwise fact rather than a statistical one.

struct RateFamily {
    double a = 0.0;
    double c_scale = 1.0;  // the schedule coefficient is c_scale * c
    double alpha = 0.5;
    double beta = 0.0;
    double gamma = 0.5;

    RelaxationSchedule schedule_at(double c) const {
        RelaxationSchedule s;
        s.a = a;
        s.c = c_scale * c;
        s.alpha = alpha;
        s.beta = beta;
        s.gamma = gamma;
        return s;
    }
};

struct ScanConfig {
    ModelSpec model;
    RateFamily family;
    std::vector<double> c_grid;
    std::vector<std::uint64_t> n_grid;
    std::size_t trials = 0;
    double delta_h = 0.5;
    std::uint64_t seed = 0;
    ErrorMode error_mode = ErrorMode::full_hausdorff;
    std::size_t burn_in = 0;  // n-grid index where the trajectory proxy starts
    std::size_t threads = 0;

    void validate() const {
        model.validate();
        if (trials < 1) {
            throw input_error("scan: trials must be >= 1");
        }
        if (c_grid.empty()) {
            throw input_error("scan: empty c grid");
        }
        for (double c : c_grid) {
            if (!std::isfinite(c)) {
                throw input_error("scan: c grid entries must be finite");
            }
        }
        if (n_grid.empty()) {
            throw input_error("scan: empty n grid");
        }
        for (std::size_t i = 0; i < n_grid.size(); ++i) {
            if (n_grid[i] < 1) {
                throw input_error("scan: sample sizes must be >= 1");
            }
            if (i > 0 && n_grid[i] <= n_grid[i - 1]) {
                throw input_error("scan: n grid must be strictly increasing");
            }
        }
        if (burn_in >= n_grid.size()) {
            throw input_error("scan: burn-in index must point into the n grid");
        }
        if (!(delta_h > 0.0) || !std::isfinite(delta_h)) {
            throw input_error("scan: delta_h must be a finite number > 0");
        }
    }
};

struct ThresholdScanResult {
    std::string model_name;
    RateFamily family;
    std::vector<double> c_grid;
    std::vector<std::uint64_t> n_grid;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    double delta_h = 0.0;
    ErrorMode error_mode = ErrorMode::full_hausdorff;
    std::size_t burn_in = 0;
    // freq[ci][ni]: error frequency at (c_grid[ci], n_grid[ni]).
    std::vector<std::vector<double>> freq;
    std::vector<std::vector<double>> ci_half;
    // Per c: fraction of trials with at least one error at an n-grid index
    // >= burn_in — the finite surrogate of "fails to be eventually
    // error-free". A proxy only: almost-sure statements have no finite test.
    std::vector<double> trajectory_error;
    std::vector<double> trajectory_ci;
    std::uint64_t degenerate_resamples = 0;
};

inline ThresholdScanResult threshold_scan(const ScanConfig& config) {
    config.validate();
    const detail_exp::ResolvedModel rm = detail_exp::resolve_model(config.model);
    if (rm.arc_analytic && config.n_grid.front() < 2) {
        throw input_error("threshold_scan: the arc model needs n >= 2 "
                          "(a single draw is always degenerate)");
    }

    double per_trial_work = 0.0;
    for (std::uint64_t n : config.n_grid) {
        per_trial_work += static_cast<double>(n) +
                          static_cast<double>(rm.candidates.size() + 100) *
                              static_cast<double>(config.c_grid.size());
    }
    detail_exp::check_work_cap(per_trial_work * static_cast<double>(config.trials),
                               "threshold_scan");

    const std::size_t nc = config.c_grid.size();
    const std::size_t nn = config.n_grid.size();
    std::size_t max_workers = config.threads == 0 ? std::thread::hardware_concurrency()
                                                  : config.threads;
    if (max_workers == 0) max_workers = 1;
    // err[worker][ci*nn + ni], traj[worker][ci]
    std::vector<std::vector<std::uint64_t>> err(max_workers,
                                                std::vector<std::uint64_t>(nc * nn, 0));
    std::vector<std::vector<std::uint64_t>> traj(max_workers,
                                                 std::vector<std::uint64_t>(nc, 0));
    std::vector<std::uint64_t> degenerate(max_workers, 0);

    detail_exp::parallel_trials(
        config.trials, config.threads,
        [&](std::size_t lo, std::size_t hi, std::size_t worker) {
            std::vector<std::uint64_t> counts;
            std::vector<double> w;
            std::vector<PointId> members;
            std::vector<bool> trial_errored(nc);
            for (std::size_t trial = lo; trial < hi; ++trial) {
                std::fill(trial_errored.begin(), trial_errored.end(), false);
                for (std::size_t ni = 0; ni < nn; ++ni) {
                    const std::uint64_t n = config.n_grid[ni];
                    // One sample per (n, trial), shared across the c grid.
                    double arc_a = 0.0, arc_b = 0.0;
                    ArcMinimum arc_min;
                    if (rm.arc_analytic) {
                        std::uint64_t n_plus = 0;
                        for (std::uint64_t attempt = 0;; ++attempt) {
                            if (attempt >= 64) {
                                throw numeric_error(
                                    "threshold_scan: 64 degenerate arc redraws in a row");
                            }
                            CounterRng rng(derive_stream(
                                config.seed, {rm.tag, n, static_cast<std::uint64_t>(trial),
                                              attempt}));
                            n_plus = 0;
                            for (std::uint64_t i = 0; i < n; ++i) {
                                if (rng.next_unit() < rm.probs[0]) ++n_plus;
                            }
                            if (n_plus > 0 && n_plus < n) break;
                            ++degenerate[worker];
                        }
                        arc_a = static_cast<double>(n_plus) / static_cast<double>(n);
                        arc_b = 1.0 - arc_a;
                        arc_min = arc_minimum(arc_a, arc_b, rm.p);
                    } else {
                        CounterRng rng(derive_stream(
                            config.seed,
                            {rm.tag, n, static_cast<std::uint64_t>(trial), 0ULL}));
                        detail_exp::draw_counts(rm, n, rng, counts);
                        detail_exp::w_table(rm, counts, n, w);
                    }
                    for (std::size_t ci = 0; ci < nc; ++ci) {
                        const double eps =
                            config.family.schedule_at(config.c_grid[ci]).evaluate(n);
                        bool error;
                        if (rm.arc_analytic) {
                            error = detail_exp::arc_error(arc_a, arc_b, rm.p, arc_min, eps,
                                                          config.delta_h, config.error_mode);
                        } else {
                            error = detail_exp::finite_error(rm, w, eps, config.delta_h,
                                                             config.error_mode, members);
                        }
                        if (error) {
                            ++err[worker][ci * nn + ni];
                            if (ni >= config.burn_in) trial_errored[ci] = true;
                        }
                    }
                }
                for (std::size_t ci = 0; ci < nc; ++ci) {
                    if (trial_errored[ci]) ++traj[worker][ci];
                }
            }
        });

    ThresholdScanResult res;
    res.model_name = config.model.name();
    res.family = config.family;
    res.c_grid = config.c_grid;
    res.n_grid = config.n_grid;
    res.trials = config.trials;
    res.seed = config.seed;
    res.delta_h = config.delta_h;
    res.error_mode = config.error_mode;
    res.burn_in = config.burn_in;
    res.freq.assign(nc, std::vector<double>(nn, 0.0));
    res.ci_half.assign(nc, std::vector<double>(nn, 0.0));
    res.trajectory_error.assign(nc, 0.0);
    res.trajectory_ci.assign(nc, 0.0);
    for (std::size_t ci = 0; ci < nc; ++ci) {
        for (std::size_t ni = 0; ni < nn; ++ni) {
            std::uint64_t errors = 0;
            for (std::size_t wk = 0; wk < err.size(); ++wk) errors += err[wk][ci * nn + ni];
            res.freq[ci][ni] =
                static_cast<double>(errors) / static_cast<double>(config.trials);
            res.ci_half[ci][ni] = detail_exp::ci_half_width(res.freq[ci][ni], config.trials);
        }
        std::uint64_t t_errors = 0;
        for (std::size_t wk = 0; wk < traj.size(); ++wk) t_errors += traj[wk][ci];
        res.trajectory_error[ci] =
            static_cast<double>(t_errors) / static_cast<double>(config.trials);
        res.trajectory_ci[ci] = detail_exp::ci_half_width(res.trajectory_error[ci],
                                                          config.trials);
    }
    for (std::uint64_t d : degenerate) res.degenerate_resamples += d;
    return res;
}

// ---------------------------------------------------------------------------
// CSV and plot-script emission. One schema serves both the experiment sweep
// and the scan:
//     n,c,a,alpha,beta,gamma,error_mode,trials,freq,ci_half,seed
// The schedule columns carry the exact coefficients used for the row. Scan
// trajectory-proxy rows are tagged n = 0 and error_mode "traj:<mode>",
// since they aggregate over the whole n grid.

namespace detail_exp {

inline void csv_row(std::ostringstream& out, std::uint64_t n, const RelaxationSchedule& s,
                    const std::string& mode, std::size_t trials, double freq, double ci_half,
                    std::uint64_t seed) {
    out << n << ',' << format_double(s.c) << ',' << format_double(s.a) << ','
        << format_double(s.alpha) << ',' << format_double(s.beta) << ','
        << format_double(s.gamma) << ',' << mode << ',' << trials << ','
        << format_double(freq) << ',' << format_double(ci_half) << ',' << seed << '\n';
}

}  // namespace detail_exp

inline const char* kSweepCsvHeader = "n,c,a,alpha,beta,gamma,error_mode,trials,freq,ci_half,seed";

inline std::string experiment_csv(const ExperimentReport& report) {
    std::ostringstream out;
    out << kSweepCsvHeader << '\n';
    for (const ExperimentRow& row : report.rows) {
        detail_exp::csv_row(out, row.n, report.schedule, to_string(report.error_mode),
                            report.trials, row.freq, row.ci_half, report.seed);
    }
    return out.str();
}

inline std::string scan_csv(const ThresholdScanResult& res) {
    std::ostringstream out;
    out << kSweepCsvHeader << '\n';
    for (std::size_t ci = 0; ci < res.c_grid.size(); ++ci) {
        const RelaxationSchedule s = res.family.schedule_at(res.c_grid[ci]);
        for (std::size_t ni = 0; ni < res.n_grid.size(); ++ni) {
            detail_exp::csv_row(out, res.n_grid[ni], s, to_string(res.error_mode), res.trials,
                                res.freq[ci][ni], res.ci_half[ci][ni], res.seed);
        }
    }
    for (std::size_t ci = 0; ci < res.c_grid.size(); ++ci) {
        const RelaxationSchedule s = res.family.schedule_at(res.c_grid[ci]);
        detail_exp::csv_row(out, 0, s, "traj:" + to_string(res.error_mode), res.trials,
                            res.trajectory_error[ci], res.trajectory_ci[ci], res.seed);
    }
    return out.str();
}

// gnuplot scripts referencing the CSV by path. Column order matches
// kSweepCsvHeader (1-based in gnuplot).
inline std::string experiment_plot_script(const std::string& csv_path) {
    std::ostringstream out;
    out << "set datafile separator ','\n"
        << "set logscale x\n"
        << "set xlabel 'n'\n"
        << "set ylabel 'error frequency'\n"
        << "set key top right\n"
        << "plot '" << csv_path
        << "' every ::1 using 1:9:10 with yerrorlines title 'empirical error'\n";
    return out.str();
}

inline std::string scan_plot_script(const std::string& csv_path,
                                    const std::vector<std::uint64_t>& n_grid) {
    std::ostringstream out;
    out << "set datafile separator ','\n"
        << "set xlabel 'schedule coefficient c'\n"
        << "set ylabel 'error frequency'\n"
        << "set key top right\n"
        << "plot ";
    for (std::size_t ni = 0; ni < n_grid.size(); ++ni) {
        out << "'" << csv_path << "' every ::1 using ($1==" << n_grid[ni]
            << "?$2:1/0):9 with linespoints title 'n=" << n_grid[ni] << "', ";
    }
    out << "'" << csv_path
        << "' every ::1 using ($1==0?$2:1/0):9 with linespoints lw 2 title 'trajectory proxy'\n";
    return out.str();
}

}  // namespace meanset
