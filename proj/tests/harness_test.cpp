#include <gtest/gtest.h>

#include <cmath>

#include "argbayes/harness.hpp"

using namespace argbayes;

namespace {

AttackAssignment triangle() { return AttackAssignment::parse("111"); }

AcceptabilityModel three_args(const ParameterFamily& family) {
    return AcceptabilityModel(AttackSpace(3, SpaceMode::Symmetric, 0.5), {Semantics::Complete, family, {}});
}

// Each subset labelled by membership in the triangle's complete extensions, `copies` times.
std::vector<Observation> noiseless_triangle_data(std::size_t copies) {
    std::vector<Observation> obs;
    for (ArgSet d = 0; d < 8; ++d) obs.push_back({d, cardinality(d) <= 1, copies});
    return obs;
}

}  // namespace

TEST(Stats, MeanStddevUnbiased) {
    const std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
    const auto ms = mean_stddev(xs);
    EXPECT_DOUBLE_EQ(ms.mean, 2.5);
    EXPECT_NEAR(ms.stddev, std::sqrt(5.0 / 3.0), 1e-15);
    const std::vector<double> one{0.7};
    EXPECT_EQ(mean_stddev(one).stddev, 0.0);
}

TEST(Stats, SpearmanWithTies) {
    const std::vector<double> x{1, 2, 3, 4, 5};
    const std::vector<double> up{2, 4, 6, 8, 100};
    const std::vector<double> down{5, 4, 3, 2, 1};
    EXPECT_NEAR(spearman(x, up), 1.0, 1e-15);
    EXPECT_NEAR(spearman(x, down), -1.0, 1e-15);
    EXPECT_EQ(average_ranks(std::vector<double>{3, 1, 3}), (std::vector<double>{2.5, 1.0, 2.5}));
    EXPECT_THROW(spearman(x, std::vector<double>{1.0}), InputError);
}

TEST(CrossValidate, PlanErrors) {
    const auto model = three_args(ParameterFamily::exponential(2));
    const auto data = noiseless_triangle_data(1);
    EXPECT_THROW(cross_validate(data, model, {0, {8}, 1}), PlanError);
    EXPECT_THROW(cross_validate(data, model, {0, {2}, 0}), PlanError);
    EXPECT_THROW(cross_validate({}, model, {0, {0}, 1}), PlanError);
}

TEST(CrossValidate, SizeZeroIsPriorPredictive) {
    const auto model = three_args(ParameterFamily::exponential(2));
    const auto data = noiseless_triangle_data(2);
    const auto curve = cross_validate(data, model, {5, {0}, 1});
    ASSERT_EQ(curve.size(), 1u);
    const auto linear = model.with_family(ParameterFamily::linear());
    double expected = 0.0;
    double total = 0.0;
    for (const auto& o : data) {
        const double p1 = evidence(o.subset, linear).p1;
        expected += static_cast<double>(o.weight) * (o.label ? p1 : 1.0 - p1);
        total += static_cast<double>(o.weight);
    }
    EXPECT_NEAR(curve[0].mean_accuracy, expected / total, 1e-12);
    EXPECT_EQ(curve[0].stddev, 0.0);
}

TEST(CrossValidate, NoiselessDataNearlyPerfect) {
    const auto model = three_args(ParameterFamily::exponential(100));
    InferenceSettings settings;
    settings.prediction_family = ParameterFamily::exponential(100);
    const auto data = noiseless_triangle_data(5);
    const auto curve = cross_validate(data, model, {1, {39}, 10}, settings);
    EXPECT_GE(curve[0].mean_accuracy, 0.99);
}

TEST(CrossValidate, ReproducibleAndBounded) {
    const auto model = three_args(ParameterFamily::exponential(3));
    const auto data = noiseless_triangle_data(3);
    const SplitPlan plan{9, {0, 4, 12, 20}, 3};
    const auto a = cross_validate(data, model, plan);
    const auto b = cross_validate(data, model, plan);
    EXPECT_EQ(learning_curve_table(a).to_string(), learning_curve_table(b).to_string());
    for (const auto& p : a) {
        for (double acc : p.accuracies) {
            EXPECT_GE(acc, 0.0);
            EXPECT_LE(acc, 1.0);
        }
        EXPECT_GE(p.stddev, 0.0);
    }
}

TEST(CrossValidate, GibbsPathWhenOverCap) {
    const auto model = three_args(ParameterFamily::exponential(3));
    InferenceSettings settings;
    settings.exact.max_free_variables = 2;
    settings.gibbs = {200, 20, 0, 1};
    const auto data = noiseless_triangle_data(2);
    const auto a = cross_validate(data, model, {4, {6}, 2}, settings);
    const auto b = cross_validate(data, model, {4, {6}, 2}, settings);
    EXPECT_EQ(a[0].accuracies, b[0].accuracies);
}

TEST(Synthetic, NoObservationsGivesPriorMass) {
    const auto model = three_args(ParameterFamily::exponential(2));
    const auto r = synthetic_experiment(triangle(), 0, 0, model, model, {}, 1);
    EXPECT_NEAR(r.posterior_mass_on_truth, r.prior_mass_on_truth, 1e-15);
    EXPECT_NEAR(r.prior_mass_on_truth, 0.125, 1e-15);
}

TEST(Synthetic, ZeroNoiseRecoversEverySymmetricTriangle) {
    const auto generator = three_args(ParameterFamily::deterministic());
    const auto model = three_args(ParameterFamily::exponential(100));
    for (std::uint64_t i = 0; i < 8; ++i) {
        const auto truth = model.space().assignment_at(i);
        const auto r = synthetic_experiment(truth, 200, 50, generator, model, {}, 10 + i);
        EXPECT_EQ(r.map_hamming, 0u) << truth.to_string();
        EXPECT_GT(r.posterior_mass_on_truth, 0.99);
    }
}

TEST(Synthetic, TriangleCycleReplication) {
    AttackSpace space(3, SpaceMode::Symmetric);
    space.set_priors({0.1, 0.15, 0.2});
    const AcceptabilityModel model(space, {Semantics::Complete, ParameterFamily::exponential(2), {}});
    std::vector<Observation> stream;
    for (std::size_t i = 0; i < 60; ++i) stream.push_back({singleton(i % 3), true, 1});
    const auto r = recovery_report(stream, {}, triangle(), model, {}, 0);
    EXPECT_GE(r.posterior_mass_on_truth, 0.99);
    EXPECT_EQ(r.map_hamming, 0u);
}

TEST(Synthetic, AcceptedSetsFollowTheta) {
    const auto model = three_args(ParameterFamily::deterministic());
    Rng rng = make_rng(3);
    for (ArgSet d : sample_accepted_sets(model, triangle(), 200, rng)) EXPECT_LE(cardinality(d), 1u);
    const auto votes = vote_matrix_from_sets({0b001, 0b110}, ArgumentTable::defaults(3));
    EXPECT_EQ(votes.participants, (std::vector<std::string>{"p01", "p02"}));
    EXPECT_EQ(votes_to_csv(votes), "participant,a,b,c\np01,1,0,0\np02,0,1,1\n");
}

TEST(Convergence, SingleVariableAtMostTwo) {
    const AcceptabilityModel model(AttackSpace(2, SpaceMode::Symmetric), {});
    const std::vector<Observation> data{{0b01, true, 4}};
    const auto study = convergence_study(data, {0, 4}, model, {300, 0, 2, 1});
    for (const auto& s : study.series) EXPECT_LE(s.distinct.back(), 2u);
}

TEST(Convergence, NoDataDivergesAndDataPlateaus) {
    const AcceptabilityModel wide(AttackSpace(10, SpaceMode::Symmetric), {});
    const auto empty = convergence_study({}, {0}, wide, {100, 0, 1, 1});
    EXPECT_GE(empty.series[0].distinct.back(), 95u);

    const auto model = three_args(ParameterFamily::exponential(100));
    const auto study = convergence_study(noiseless_triangle_data(5), {0, 40}, model, {500, 0, 3, 1});
    EXPECT_TRUE(study.plateau_holds);
    EXPECT_LE(study.series[1].distinct.back(), 3u);
    EXPECT_THROW(convergence_study(noiseless_triangle_data(1), {9}, model, {10, 0, 0, 1}), PlanError);
}

TEST(RunDirectory, StableName) {
    EXPECT_EQ(run_directory_name("semantics = complete", 7), run_directory_name("semantics = complete", 7));
    EXPECT_NE(run_directory_name("semantics = complete", 7), run_directory_name("semantics = stable", 7));
    EXPECT_EQ(run_directory_name("", 0), "run-cbf29ce484222325-s0");
}
