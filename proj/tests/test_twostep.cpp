#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "meanset/frechet.hpp"
#include "meanset/metric_space.hpp"
#include "meanset/rates.hpp"
#include "meanset/twostep.hpp"

namespace {

using meanset::EmpiricalMeasure;
using meanset::FiniteMatrix;
using meanset::PointId;
using meanset::two_step_estimate;

// Balanced 100-draw sample on two points at distance 1, p = 2. Frozen chain:
// c0 = 0.5, eps1 = c0 sqrt(log 100 / 100) = 0.107298, both points survive
// step 1, raw variance = 1, sigma1 = sqrt 2, eps2 = 1.5 * sqrt 2 *
// sqrt(loglog 100 / 100) = 0.262151, both points survive step 2.
TEST(TwoStepTest, BalancedTwoPointFrozenChain) {
    const FiniteMatrix space({{0, 1}, {1, 0}});
    std::vector<PointId> ids;
    for (int i = 0; i < 50; ++i) ids.push_back(0);
    for (int i = 0; i < 50; ++i) ids.push_back(1);
    const auto mu = EmpiricalMeasure::uniform(space, ids);
    const auto rep = two_step_estimate(mu, {0, 1}, 2.0, 0.5);
    EXPECT_EQ(rep.n, 100u);
    EXPECT_DOUBLE_EQ(rep.c0, 0.5);
    EXPECT_NEAR(rep.eps1, 0.107298, 1e-6);
    EXPECT_EQ(rep.step1_members, std::vector<PointId>({0, 1}));
    EXPECT_NEAR(rep.raw_variance, 1.0, 1e-12);
    EXPECT_NEAR(rep.sigma1, std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(rep.eps2, 0.262151, 1e-6);
    EXPECT_EQ(rep.step2_members, std::vector<PointId>({0, 1}));
    EXPECT_DOUBLE_EQ(rep.m_p, rep.c0);
}

// All draws on one atom: the pilot scale c0 is 0, so eps1 = 0, the step-1
// set is the single atom, its pair dispersion is 0, and eps2 = 0 as well.
TEST(TwoStepTest, DegenerateSampleCollapsesEverything) {
    const FiniteMatrix space({{0, 1}, {1, 0}});
    const auto mu = EmpiricalMeasure::uniform(space, std::vector<PointId>(10, 0));
    const auto rep = two_step_estimate(mu, {0, 1}, 2.0, 0.5);
    EXPECT_DOUBLE_EQ(rep.c0, 0.0);
    EXPECT_DOUBLE_EQ(rep.eps1, 0.0);
    EXPECT_EQ(rep.step1_members, std::vector<PointId>({0}));
    EXPECT_DOUBLE_EQ(rep.sigma1, 0.0);
    EXPECT_DOUBLE_EQ(rep.eps2, 0.0);
    EXPECT_EQ(rep.step2_members, std::vector<PointId>({0}));
}

// Lopsided 900/100 sample, p = 1, n = 1000: W(x1) = 0.1, W(x2) = 0.9, the
// pilot relaxation c0 sqrt(log n / n) = 0.0083 cannot bridge the 0.8 gap,
// so both steps isolate the majority atom.
TEST(TwoStepTest, LopsidedSampleIsolatesTheMajorityAtom) {
    const FiniteMatrix space({{0, 1}, {1, 0}});
    std::vector<PointId> ids(900, 0);
    ids.insert(ids.end(), 100, 1);
    const auto mu = EmpiricalMeasure::uniform(space, ids);
    const auto rep = two_step_estimate(mu, {0, 1}, 1.0, 0.5);
    EXPECT_NEAR(rep.c0, 0.1, 1e-12);  // 1000-term accumulation of 1e-3 weights
    EXPECT_EQ(rep.step1_members, std::vector<PointId>({0}));
    EXPECT_EQ(rep.step2_members, std::vector<PointId>({0}));
    EXPECT_EQ(rep.argmin, 0u);
}

// Scaling every distance by lambda scales W_p by lambda^p, hence c0, eps1 and
// sigma1 follow; the member sets are invariant.
TEST(TwoStepTest, ScaleEquivariance) {
    const double lambda = 3.0;
    const FiniteMatrix base({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
    const FiniteMatrix scaled(
        {{0, lambda, 2 * lambda}, {lambda, 0, lambda}, {2 * lambda, lambda, 0}});
    const std::vector<PointId> ids = {0, 0, 1, 2, 2, 2, 1, 0, 2, 1, 1, 0};
    const auto mu1 = EmpiricalMeasure::uniform(base, ids);
    const auto mu2 = EmpiricalMeasure::uniform(scaled, ids);
    for (double p : {1.0, 2.0}) {
        const auto r1 = two_step_estimate(mu1, {0, 1, 2}, p, 0.5);
        const auto r2 = two_step_estimate(mu2, {0, 1, 2}, p, 0.5);
        const double s = std::pow(lambda, p);
        EXPECT_NEAR(r2.c0, s * r1.c0, 1e-12 * s);
        EXPECT_NEAR(r2.eps1, s * r1.eps1, 1e-12 * s);
        EXPECT_NEAR(r2.sigma1, s * r1.sigma1, 1e-10 * s);
        EXPECT_EQ(r2.step1_members, r1.step1_members);
        EXPECT_EQ(r2.step2_members, r1.step2_members);
    }
}

// The report's fields must satisfy their defining identities exactly.
TEST(TwoStepTest, ReportIdentities) {
    const meanset::EuclideanPoints pts({{0}, {1}, {2}, {4}});
    const std::vector<PointId> ids = {0, 1, 1, 2, 3, 3, 0, 2, 1, 0, 3, 2, 1, 1, 0, 2};
    const auto mu = EmpiricalMeasure::uniform(pts, ids);
    const auto rep = two_step_estimate(mu, {0, 1, 2, 3}, 2.0, 0.25);
    EXPECT_NEAR(rep.eps1, meanset::suboptimal_rate(rep.c0).evaluate(rep.n), 1e-15);
    EXPECT_NEAR(rep.sigma1, std::sqrt(2.0 * rep.raw_variance), 1e-15);
    EXPECT_NEAR(rep.eps2, meanset::lil_rate(1.25 * rep.sigma1).evaluate(rep.n), 1e-15);
    EXPECT_NEAR(rep.raw_variance, meanset::max_pair_variance(mu, rep.step1_members, 2.0),
                1e-15);
    // Step sets are the relaxed sets at their eps levels.
    meanset::FrechetParams params;
    params.p = 2.0;
    params.candidates = {0, 1, 2, 3};
    params.epsilon = rep.eps1;
    EXPECT_EQ(meanset::relaxed_mean_set(mu, params).members, rep.step1_members);
    params.epsilon = rep.eps2;
    EXPECT_EQ(meanset::relaxed_mean_set(mu, params).members, rep.step2_members);
    // Membership lists are sorted and the argmin is in both.
    EXPECT_TRUE(std::is_sorted(rep.step1_members.begin(), rep.step1_members.end()));
    EXPECT_TRUE(std::binary_search(rep.step2_members.begin(), rep.step2_members.end(),
                                   rep.argmin));
}

TEST(TwoStepTest, RejectsBadInput) {
    const FiniteMatrix space({{0, 1}, {1, 0}});
    const auto mu = EmpiricalMeasure::uniform(space, {0, 1});
    EXPECT_THROW(two_step_estimate(mu, {}, 2.0, 0.5), meanset::input_error);
    EXPECT_THROW(two_step_estimate(mu, {0, 1}, 0.5, 0.5), meanset::input_error);
    EXPECT_THROW(two_step_estimate(mu, {0, 1}, 2.0, -0.1), meanset::input_error);
    const auto tiny = EmpiricalMeasure::uniform(space, {0});
    EXPECT_THROW(two_step_estimate(tiny, {0, 1}, 2.0, 0.5), meanset::input_error);
}

}  // namespace
