#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "meanset/errors.hpp"
#include "meanset/frechet.hpp"
#include "meanset/metric_space.hpp"
#include "meanset/rng.hpp"

namespace meanset {

// The three analytically solvable example distributions. Each one comes
// with a closed-form population mean set, dispersion coefficient, and
// consistency-threshold constant, which is what makes them usable as
// ground truth for the Monte Carlo harness:
//
//   two_point(q):   X = {x1, x2} with the discrete metric, mass q on x1.
//                   Mean set {x1} for q > 1/2, {x2} for q < 1/2; the
//                   relaxation boundary sits at eps_n = |1-2q| - c n^{-1/2}
//                   scales, with strong-consistency constant 2 sqrt(2q(1-q))
//                   on the sqrt(loglog n / n) offset.
//   binary_square:  X = {0, 1}, p = 2, mu = (delta_0 + delta_1)/2. The mean
//                   set is all of X and sigma_2 = sqrt(2); the unrelaxed
//                   empirical minimizer a.s. keeps collapsing to one point,
//                   which is the motivating failure mode for relaxation.
//   arc(p):         the unit-circle arc {theta in [pi/2, 3pi/2]} plus the
//                   isolated point (1,0), geodesic distance scaled by 2/pi,
//                   mu = half-and-half on the arc endpoints (0,1), (0,-1).
//                   Mean set {(1,0), (-1,0)}; the empirical functional gap
//                   at (1,0) decays at the n^{-1} scale with strong
//                   threshold constant 2p/(p-1) on loglog n / n.

enum class ModelKind { two_point, binary_square, arc };

struct ExampleModel {
    ModelKind kind = ModelKind::two_point;
    double q = 0.75;               // two_point: mass of x1
    double p_exponent = 1.0;       // functional exponent used by the model
    std::size_t grid_size = 2048;  // arc: candidate grid resolution

    static ExampleModel two_point(double q) {
        if (!(q > 0.0) || !(q < 1.0) || q == 0.5) {
            throw input_error("two_point model: q must lie in (0,1) and differ from 1/2");
        }
        ExampleModel m;
        m.kind = ModelKind::two_point;
        m.q = q;
        m.p_exponent = 1.0;  // distances are 0/1, so every p gives the same functional
        return m;
    }

    static ExampleModel binary_square() {
        ExampleModel m;
        m.kind = ModelKind::binary_square;
        m.q = 0.5;
        m.p_exponent = 2.0;
        return m;
    }

    static ExampleModel arc(double p, std::size_t grid_size = 2048) {
        if (!(p > 1.0) || !std::isfinite(p)) {
            throw input_error("arc model: p must be a finite number > 1");
        }
        if (grid_size < 4 || grid_size % 2 != 0) {
            throw input_error("arc model: grid size must be even and >= 4 so the grid "
                              "contains theta = pi");
        }
        ExampleModel m;
        m.kind = ModelKind::arc;
        m.p_exponent = p;
        m.grid_size = grid_size;
        return m;
    }

    std::unique_ptr<MetricSpace> make_space() const {
        switch (kind) {
            case ModelKind::two_point:
            case ModelKind::binary_square: {
                std::vector<std::vector<double>> d = {{0.0, 1.0}, {1.0, 0.0}};
                return std::make_unique<FiniteMatrix>(d);
            }
            case ModelKind::arc:
                return std::make_unique<ArcSpace>(grid_size);
        }
        throw input_error("example model: unknown kind");
    }

    // Support of the sampling distribution, as ids in make_space()'s space.
    std::vector<PointId> atom_ids(const MetricSpace& space) const {
        switch (kind) {
            case ModelKind::two_point:
            case ModelKind::binary_square:
                return {0, 1};
            case ModelKind::arc: {
                const auto& arc = dynamic_cast<const ArcSpace&>(space);
                return {arc.north_id(), arc.south_id()};
            }
        }
        throw input_error("example model: unknown kind");
    }

    std::vector<double> atom_probs() const {
        switch (kind) {
            case ModelKind::two_point:
                return {q, 1.0 - q};
            case ModelKind::binary_square:
            case ModelKind::arc:
                return {0.5, 0.5};
        }
        throw input_error("example model: unknown kind");
    }

    // The population Fréchet mean set, as ids in make_space()'s space.
    std::vector<PointId> true_mean_set(const MetricSpace& space) const {
        switch (kind) {
            case ModelKind::two_point:
                return q > 0.5 ? std::vector<PointId>{0} : std::vector<PointId>{1};
            case ModelKind::binary_square:
                return {0, 1};
            case ModelKind::arc: {
                const auto& arc = dynamic_cast<const ArcSpace&>(space);
                // (1,0) is the isolated grid point, (-1,0) the arc middle.
                return {0, arc.west_id()};
            }
        }
        throw input_error("example model: unknown kind");
    }

    // Population dispersion coefficient sigma_p of the mean set. Singleton
    // mean sets (two_point) and the arc model have sigma_p = 0; the binary
    // square has sigma_2 = sqrt(2).
    double sigma_p() const {
        return kind == ModelKind::binary_square ? std::sqrt(2.0) : 0.0;
    }

    // The model's strong-consistency threshold constant: the critical
    // pre-factor of the schedule family on which the phase transition
    // happens (offset depth on sqrt(loglog n / n) for two_point; the
    // loglog n / n coefficient for the arc; the binary square is strongly
    // consistent for any positive lil-rate coefficient above sigma_2).
    double strong_threshold() const {
        switch (kind) {
            case ModelKind::two_point:
                return 2.0 * std::sqrt(2.0 * q * (1.0 - q));
            case ModelKind::binary_square:
                return std::sqrt(2.0);
            case ModelKind::arc:
                return 2.0 * p_exponent / (p_exponent - 1.0);
        }
        throw input_error("example model: unknown kind");
    }

    // Tag mixed into derived RNG streams so different models never share a
    // sample sequence under the same seed.
    std::uint64_t stream_tag() const {
        switch (kind) {
            case ModelKind::two_point:
                return 0x74776f70ULL;  // "twop"
            case ModelKind::binary_square:
                return 0x62697371ULL;  // "bisq"
            case ModelKind::arc:
                return 0x61726373ULL;  // "arcs"
        }
        return 0;
    }

    std::string kind_name() const {
        switch (kind) {
            case ModelKind::two_point:
                return "two_point";
            case ModelKind::binary_square:
                return "binary_square";
            case ModelKind::arc:
                return "arc";
        }
        return "unknown";
    }
};

// n IID draws from the model's two-atom distribution, returned as counts
// per atom (same order as atom_ids). One uniform variate per draw.
inline std::vector<std::uint64_t> sample_counts(const ExampleModel& model, std::uint64_t n,
                                                CounterRng& rng) {
    const std::vector<double> probs = model.atom_probs();
    std::vector<std::uint64_t> counts(probs.size(), 0);
    for (std::uint64_t i = 0; i < n; ++i) {
        if (rng.next_unit() < probs[0]) {
            ++counts[0];
        } else {
            ++counts[1];
        }
    }
    return counts;
}

// n IID draws as a uniform empirical measure (support listed draw by draw,
// weight 1/n each). Identical (model, n, seed) always yields the identical
// measure; the space must be the one returned by model.make_space().
inline EmpiricalMeasure sample(const ExampleModel& model, const MetricSpace& space,
                               std::uint64_t n, std::uint64_t seed) {
    if (n < 1) {
        throw input_error("sample: need n >= 1");
    }
    const std::vector<PointId> atoms = model.atom_ids(space);
    const std::vector<double> probs = model.atom_probs();
    CounterRng rng(derive_stream(seed, {model.stream_tag(), n}));
    std::vector<PointId> draws;
    draws.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        draws.push_back(rng.next_unit() < probs[0] ? atoms[0] : atoms[1]);
    }
    return EmpiricalMeasure::uniform(space, std::move(draws));
}

}  // namespace meanset
