#pragma once

#include <nlohmann/json.hpp>

#include "meanset/covariance.hpp"
#include "meanset/covering.hpp"
#include "meanset/exact1d.hpp"
#include "meanset/experiment.hpp"
#include "meanset/frechet.hpp"
#include "meanset/rates.hpp"
#include "meanset/twostep.hpp"

namespace meanset {

// JSON adapters (ADL hooks for nlohmann::json). Structured single results
// go out as JSON; tabular sweeps use the CSV emitters in experiment.hpp.

inline void to_json(nlohmann::json& j, const RelaxationSchedule& s) {
    j = {{"a", s.a}, {"c", s.c}, {"alpha", s.alpha}, {"beta", s.beta}, {"gamma", s.gamma}};
}

inline void from_json(const nlohmann::json& j, RelaxationSchedule& s) {
    j.at("a").get_to(s.a);
    j.at("c").get_to(s.c);
    j.at("alpha").get_to(s.alpha);
    j.at("beta").get_to(s.beta);
    j.at("gamma").get_to(s.gamma);
}

inline void to_json(nlohmann::json& j, const RateFamily& f) {
    j = {{"a", f.a},
         {"c_scale", f.c_scale},
         {"alpha", f.alpha},
         {"beta", f.beta},
         {"gamma", f.gamma}};
}

inline void from_json(const nlohmann::json& j, RateFamily& f) {
    j.at("a").get_to(f.a);
    j.at("c_scale").get_to(f.c_scale);
    j.at("alpha").get_to(f.alpha);
    j.at("beta").get_to(f.beta);
    j.at("gamma").get_to(f.gamma);
}

// w_values are deliberately omitted: on fine candidate grids they dwarf the
// rest of the result, and they are reproducible from the inputs.
inline void to_json(nlohmann::json& j, const RelaxedMeanResult& r) {
    j = {{"members", r.members},
         {"m_p", r.m_p},
         {"argmin", r.argmin},
         {"epsilon", r.epsilon},
         {"p", r.p}};
}

inline void to_json(nlohmann::json& j, const TwoStepReport& r) {
    j = {{"n", r.n},
         {"p", r.p},
         {"delta", r.delta},
         {"c0", r.c0},
         {"eps1", r.eps1},
         {"step1_members", r.step1_members},
         {"raw_variance", r.raw_variance},
         {"sigma1", r.sigma1},
         {"eps2", r.eps2},
         {"step2_members", r.step2_members},
         {"m_p", r.m_p},
         {"argmin", r.argmin}};
}

inline void to_json(nlohmann::json& j, const MedianInterval& m) {
    j = {{"u", m.u}, {"v", m.v}, {"m1", m.m1}};
}

inline void to_json(nlohmann::json& j, const TwoStepMedianReport& r) {
    j = {{"n", r.n},
         {"delta", r.delta},
         {"sigma_mode", to_string(r.mode)},
         {"c0", r.c0},
         {"eps1", r.eps1},
         {"step1", r.step1},
         {"sigma_exact", r.sigma_exact},
         {"sigma_diameter_bound", r.sigma_diameter_bound},
         {"eps2", r.eps2},
         {"step2", r.step2}};
}

inline void to_json(nlohmann::json& j, const CoveringReport& r) {
    j = {{"radii", r.radii}, {"counts", r.counts}, {"entropy_integral", r.entropy_integral}};
}

inline void to_json(nlohmann::json& j, const GaussianSupEstimate& g) {
    j = {{"estimate", g.estimate}, {"std_error", g.std_error}, {"draws", g.draws}};
}

}  // namespace meanset
