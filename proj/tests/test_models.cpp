#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "meanset/models.hpp"

namespace {

using meanset::CounterRng;
using meanset::derive_stream;
using meanset::ExampleModel;
using meanset::PointId;

TEST(ModelsTest, FactoriesValidate) {
    EXPECT_THROW(ExampleModel::two_point(0.5), meanset::input_error);
    EXPECT_THROW(ExampleModel::two_point(0.0), meanset::input_error);
    EXPECT_THROW(ExampleModel::two_point(1.0), meanset::input_error);
    EXPECT_THROW(ExampleModel::arc(1.0), meanset::input_error);
    EXPECT_THROW(ExampleModel::arc(2.0, 5), meanset::input_error);  // odd grid
    EXPECT_THROW(ExampleModel::arc(2.0, 2), meanset::input_error);
    EXPECT_NO_THROW(ExampleModel::two_point(0.7));
    EXPECT_NO_THROW(ExampleModel::arc(2.0, 8));
}

TEST(ModelsTest, TruthSetsAndThresholds) {
    const auto majority = ExampleModel::two_point(0.75);
    const auto sp1 = majority.make_space();
    EXPECT_EQ(majority.true_mean_set(*sp1), std::vector<PointId>({0}));
    EXPECT_NEAR(majority.strong_threshold(), 2.0 * std::sqrt(2.0 * 0.75 * 0.25), 1e-15);

    const auto minority = ExampleModel::two_point(0.25);
    EXPECT_EQ(minority.true_mean_set(*sp1), std::vector<PointId>({1}));

    const auto square = ExampleModel::binary_square();
    const auto sp2 = square.make_space();
    EXPECT_EQ(square.true_mean_set(*sp2), std::vector<PointId>({0, 1}));
    EXPECT_DOUBLE_EQ(square.sigma_p(), std::sqrt(2.0));
    EXPECT_DOUBLE_EQ(square.strong_threshold(), std::sqrt(2.0));
    EXPECT_DOUBLE_EQ(square.p_exponent, 2.0);

    const auto arc = ExampleModel::arc(3.0, 64);
    const auto sp3 = arc.make_space();
    const auto& arc_space = dynamic_cast<const meanset::ArcSpace&>(*sp3);
    EXPECT_EQ(arc.true_mean_set(*sp3), std::vector<PointId>({0, arc_space.west_id()}));
    EXPECT_DOUBLE_EQ(arc.strong_threshold(), 2.0 * 3.0 / 2.0);
    // The sampling atoms are the arc endpoints, distance 1 from both means.
    const auto atoms = arc.atom_ids(*sp3);
    ASSERT_EQ(atoms.size(), 2u);
    EXPECT_NEAR(arc_space.distance(atoms[0], 0), 1.0, 1e-12);
    EXPECT_NEAR(arc_space.distance(atoms[1], arc_space.west_id()), 1.0, 1e-12);
}

TEST(ModelsTest, SampleIsDeterministicAndUniform) {
    const auto model = ExampleModel::two_point(0.6);
    const auto space = model.make_space();
    const auto a = meanset::sample(model, *space, 500, 99);
    const auto b = meanset::sample(model, *space, 500, 99);
    EXPECT_EQ(a.support, b.support);
    EXPECT_EQ(a.sample_size(), 500u);
    for (double w : a.weights) EXPECT_DOUBLE_EQ(w, 1.0 / 500.0);
    // A different seed or n gives a different stream.
    const auto c = meanset::sample(model, *space, 500, 100);
    EXPECT_NE(a.support, c.support);
}

TEST(ModelsTest, NearDegenerateMassConcentratesAllDraws) {
    const auto model = ExampleModel::two_point(1.0 - 1e-12);
    const auto space = model.make_space();
    const auto mu = meanset::sample(model, *space, 100, 7);
    for (PointId id : mu.support) EXPECT_EQ(id, 0u);
}

TEST(ModelsTest, CountsConcentrateAtTheMassParameter) {
    const auto model = ExampleModel::two_point(0.3);
    CounterRng rng(derive_stream(5, {model.stream_tag(), 1000000}));
    const auto counts = meanset::sample_counts(model, 1000000, rng);
    ASSERT_EQ(counts.size(), 2u);
    EXPECT_EQ(counts[0] + counts[1], 1000000u);
    // 4.4 sigma window around the binomial mean: sigma = sqrt(n 0.3 0.7) = 458.
    EXPECT_NEAR(static_cast<double>(counts[0]), 300000.0, 2000.0);
}

TEST(ModelsTest, StreamTagsDifferAcrossKinds) {
    const auto a = ExampleModel::two_point(0.75);
    const auto b = ExampleModel::binary_square();
    const auto c = ExampleModel::arc(2.0, 8);
    EXPECT_NE(a.stream_tag(), b.stream_tag());
    EXPECT_NE(a.stream_tag(), c.stream_tag());
    EXPECT_NE(b.stream_tag(), c.stream_tag());
    EXPECT_EQ(a.kind_name(), "two_point");
    EXPECT_EQ(b.kind_name(), "binary_square");
    EXPECT_EQ(c.kind_name(), "arc");
}

}  // namespace
