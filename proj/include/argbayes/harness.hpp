#pragma once

// Experiment drivers: cross-validated learning curves, recovery of a known
// attack relation from synthetic observations, and Gibbs convergence studies.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "argbayes/acceptability.hpp"
#include "argbayes/data_io.hpp"
#include "argbayes/errors.hpp"
#include "argbayes/gibbs.hpp"
#include "argbayes/inference.hpp"
#include "argbayes/model.hpp"
#include "argbayes/random.hpp"

namespace argbayes {

// How a posterior is obtained for a training set: exact enumeration when the
// free variables fit under the cap (and prefer_exact is set), Gibbs otherwise.
struct InferenceSettings {
    GibbsConfig gibbs{};
    ExactOptions exact{};
    bool prefer_exact = true;
    ParameterFamily prediction_family = ParameterFamily::linear();
};

inline bool uses_exact(const AttackSpace& space, const InferenceSettings& s) {
    return s.prefer_exact && space.free_count() <= s.exact.max_free_variables;
}

inline PosteriorDistribution infer_posterior(std::span<const Observation> train, const AcceptabilityModel& model,
                                             const InferenceSettings& s, std::uint64_t seed) {
    if (uses_exact(model.space(), s)) return exact_posterior(train, model, s.exact);
    GibbsConfig g = s.gibbs;
    g.seed = seed;
    return run_gibbs(train, model, g).posterior;
}

// Mean over held-out observations of p(Acc_e = acc_e | training data), weighted by repetition.
inline double predictive_accuracy(std::span<const Observation> test, const PosteriorDistribution& post,
                                  const AcceptabilityModel& prediction_model) {
    double score = 0.0;
    double weight = 0.0;
    for (const auto& o : test) {
        const double p1 = posterior_predictive(o.subset, post, prediction_model);
        score += static_cast<double>(o.weight) * (o.label ? p1 : 1.0 - p1);
        weight += static_cast<double>(o.weight);
    }
    return weight == 0.0 ? 0.0 : score / weight;
}

struct MeanStd {
    double mean = 0.0;
    double stddev = 0.0;
};

// Unbiased (n - 1) standard deviation; 0 for a single value.
inline MeanStd mean_stddev(std::span<const double> xs) {
    if (xs.empty()) return {};
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    if (xs.size() == 1) return {mean, 0.0};
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

// Ranks with ties averaged, 1-based.
inline std::vector<double> average_ranks(std::span<const double> xs) {
    std::vector<std::size_t> order(xs.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> ranks(xs.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
        const double rank = (static_cast<double>(i + j) / 2.0) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

inline double spearman(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw InputError("spearman needs two equal-length series of size >= 2");
    const auto rx = average_ranks(xs);
    const auto ry = average_ranks(ys);
    const MeanStd mx = mean_stddev(rx);
    const MeanStd my = mean_stddev(ry);
    if (mx.stddev == 0.0 || my.stddev == 0.0) return 0.0;
    double cov = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) cov += (rx[i] - mx.mean) * (ry[i] - my.mean);
    cov /= static_cast<double>(rx.size() - 1);
    return cov / (mx.stddev * my.stddev);
}

template <typename T>
void shuffle_in_place(std::vector<T>& items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::swap(items[i - 1], items[uniform_below(rng, i)]);
    }
}

// ---------------------------------------------------------------------------
// Cross-validation

struct SplitPlan {
    std::uint64_t seed = 0;
    std::vector<std::size_t> train_sizes;
    std::size_t repeats = 10;

    void validate(std::size_t dataset_size) const {
        if (dataset_size == 0) throw PlanError("dataset is empty");
        if (repeats == 0) throw PlanError("repeats must be >= 1");
        if (train_sizes.empty()) throw PlanError("no training sizes given");
        for (std::size_t size : train_sizes) {
            if (size >= dataset_size) {
                throw PlanError("training size " + std::to_string(size) + " leaves no test data (dataset has " +
                                std::to_string(dataset_size) + " observations)");
            }
        }
    }
};

struct LearningCurvePoint {
    std::size_t train_size = 0;
    double mean_accuracy = 0.0;
    double stddev = 0.0;
    std::vector<double> accuracies;  // one per repeat
};

// Splits the unit-weight expansion of `dataset` into training and test parts
// for every (size, repeat) cell, infers the attack posterior from the training
// part and scores the test part with the posterior predictive.
inline std::vector<LearningCurvePoint> cross_validate(std::span<const Observation> dataset,
                                                      const AcceptabilityModel& model, const SplitPlan& plan,
                                                      const InferenceSettings& settings = {}) {
    const std::vector<Observation> units = expand_observations({dataset.begin(), dataset.end()});
    plan.validate(units.size());
    const AcceptabilityModel prediction_model = model.with_family(settings.prediction_family);

    std::vector<LearningCurvePoint> curve;
    for (std::size_t size : plan.train_sizes) {
        LearningCurvePoint point;
        point.train_size = size;
        for (std::size_t r = 0; r < plan.repeats; ++r) {
            const std::uint64_t cell_seed = derive_seed(derive_seed(plan.seed, size), r);
            Rng rng(cell_seed);
            std::vector<Observation> shuffled = units;
            shuffle_in_place(shuffled, rng);
            const std::vector<Observation> train = merge_observations({shuffled.begin(), shuffled.begin() + size});
            const std::vector<Observation> test = merge_observations({shuffled.begin() + size, shuffled.end()});
            const PosteriorDistribution post = infer_posterior(train, model, settings, derive_seed(cell_seed, 1));
            point.accuracies.push_back(predictive_accuracy(test, post, prediction_model));
        }
        const MeanStd ms = mean_stddev(point.accuracies);
        point.mean_accuracy = ms.mean;
        point.stddev = ms.stddev;
        curve.push_back(std::move(point));
    }
    return curve;
}

inline CsvTable learning_curve_table(const std::vector<LearningCurvePoint>& curve) {
    CsvTable table{{"train_size", "mean_accuracy", "stddev"}, {}, {}};
    for (const auto& p : curve) {
        table.rows.push_back({std::to_string(p.train_size), format_number(p.mean_accuracy), format_number(p.stddev)});
    }
    return table;
}

// ---------------------------------------------------------------------------
// Synthetic data from the generative model

// Each free variable set to 1 with probability `edge_probability`; clamps kept.
inline AttackAssignment random_assignment(const AttackSpace& space, double edge_probability, Rng& rng) {
    AttackAssignment att = space.clamped_base();
    for (std::size_t m : space.free_variables()) att.set(m, uniform01(rng) < edge_probability);
    return att;
}

// d uniform over all 2^n subsets, label ~ Bernoulli(theta_{d|truth}).
inline std::vector<Observation> sample_observations(const AcceptabilityModel& generator, const AttackAssignment& truth,
                                                    std::size_t count, Rng& rng) {
    const std::uint64_t subsets = std::uint64_t{1} << generator.argument_count();
    std::vector<Observation> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto d = static_cast<ArgSet>(uniform_below(rng, subsets));
        out.push_back({d, uniform01(rng) < generator.theta(d, truth), 1});
    }
    return out;
}

// Accepted sets: a uniform d kept when its Bernoulli(theta) label comes up 1,
// i.e. d drawn with probability proportional to theta_{d|truth}.
inline std::vector<ArgSet> sample_accepted_sets(const AcceptabilityModel& generator, const AttackAssignment& truth,
                                                std::size_t count, Rng& rng) {
    const std::size_t subsets = std::size_t{1} << generator.argument_count();
    std::vector<double> cumulative(subsets);
    double total = 0.0;
    for (std::size_t d = 0; d < subsets; ++d) {
        total += generator.theta(static_cast<ArgSet>(d), truth);
        cumulative[d] = total;
    }
    if (total <= 0.0) throw DegenerateEvidenceError("no subset is acceptable under the generating relation");
    std::vector<ArgSet> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double u = uniform01(rng) * total;
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        out.push_back(static_cast<ArgSet>(std::min<std::size_t>(it - cumulative.begin(), subsets - 1)));
    }
    return out;
}

// Participants p01, p02, ...: agree (1) on members of their accepted set, disagree (0) elsewhere.
inline VoteMatrix vote_matrix_from_sets(const std::vector<ArgSet>& rows, const ArgumentTable& arguments) {
    VoteMatrix votes;
    votes.arguments = arguments;
    const std::size_t width = rows.size() < 100 ? 2 : std::to_string(rows.size()).size();
    for (std::size_t p = 0; p < rows.size(); ++p) {
        std::string id = std::to_string(p + 1);
        votes.participants.push_back("p" + std::string(width - std::min(width, id.size()), '0') + id);
        std::vector<Vote> cells;
        for (std::size_t a = 0; a < arguments.size(); ++a) {
            cells.push_back(contains(rows[p], a) ? Vote::Agree : Vote::Disagree);
        }
        votes.cells.push_back(std::move(cells));
    }
    return votes;
}

struct SyntheticVotes {
    AttackAssignment truth;
    VoteMatrix votes;
};

// A random relation over the generator's space (each free pair attacked with
// `edge_probability`) and one accepted set per participant drawn from it.
inline SyntheticVotes synthetic_vote_dataset(const AcceptabilityModel& generator, std::size_t participants,
                                             double edge_probability, std::uint64_t seed) {
    Rng rng = make_rng(seed, 0);
    SyntheticVotes out;
    out.truth = random_assignment(generator.space(), edge_probability, rng);
    const auto sets = sample_accepted_sets(generator, out.truth, participants, rng);
    out.votes = vote_matrix_from_sets(sets, ArgumentTable::defaults(generator.argument_count()));
    return out;
}

// ---------------------------------------------------------------------------
// Recovery experiments

struct RecoveryReport {
    std::size_t observations = 0;
    bool exact = true;
    double prior_mass_on_truth = 0.0;
    double posterior_mass_on_truth = 0.0;
    AttackAssignment map;
    std::size_t map_hamming = 0;
    double predictive_accuracy = 0.0;
};

// Posterior summary for given training observations against a known truth.
// The MAP is the exact maximizer (lexicographically first on ties) or the
// most frequent sample.
inline RecoveryReport recovery_report(std::span<const Observation> train, std::span<const Observation> test,
                                      const AttackAssignment& truth, const AcceptabilityModel& model,
                                      const InferenceSettings& settings, std::uint64_t seed) {
    model.space().check(truth);
    RecoveryReport report;
    for (const auto& o : train) report.observations += o.weight;
    report.exact = uses_exact(model.space(), settings);
    report.prior_mass_on_truth = attack_prior(truth, model.space());
    const PosteriorDistribution post = infer_posterior(train, model, settings, seed);
    report.posterior_mass_on_truth = post.probability(truth);
    report.map = report.exact ? map_estimate(train, model, settings.exact).front() : post.mode().assignment;
    report.map_hamming = report.map.hamming(truth);
    if (!test.empty()) {
        report.predictive_accuracy = predictive_accuracy(test, post, model.with_family(settings.prediction_family));
    }
    return report;
}

// Samples n_obs training and n_test held-out observations from `generator`
// at `truth`, then infers with `model`.
inline RecoveryReport synthetic_experiment(const AttackAssignment& truth, std::size_t n_obs, std::size_t n_test,
                                           const AcceptabilityModel& generator, const AcceptabilityModel& model,
                                           const InferenceSettings& settings, std::uint64_t seed) {
    Rng rng = make_rng(seed, 0);
    const auto train = merge_observations(sample_observations(generator, truth, n_obs, rng));
    const auto test = merge_observations(sample_observations(generator, truth, n_test, rng));
    return recovery_report(train, test, truth, model, settings, derive_seed(seed, 1));
}

inline CsvTable recovery_table(const std::vector<RecoveryReport>& reports) {
    CsvTable table{{"observations", "inference", "prior_mass_on_truth", "posterior_mass_on_truth", "map",
                    "map_hamming", "predictive_accuracy"},
                   {},
                   {}};
    for (const auto& r : reports) {
        table.rows.push_back({std::to_string(r.observations), r.exact ? "exact" : "gibbs",
                              format_number(r.prior_mass_on_truth), format_number(r.posterior_mass_on_truth),
                              r.map.to_string(), std::to_string(r.map_hamming), format_number(r.predictive_accuracy)});
    }
    return table;
}

// ---------------------------------------------------------------------------
// Convergence of the sampler

struct ConvergenceSeries {
    std::size_t train_size = 0;
    std::vector<std::size_t> distinct;  // cumulative distinct assignments per iteration
};

struct ConvergenceStudy {
    std::vector<ConvergenceSeries> series;
    // Distinct count at the largest training size <= count at size 0 (when both ran).
    bool plateau_holds = true;
};

// Runs one chain per training size on the first `size` observations of a
// seeded shuffle of the unit-weight dataset.
inline ConvergenceStudy convergence_study(std::span<const Observation> dataset, const std::vector<std::size_t>& train_sizes,
                                          const AcceptabilityModel& model, const GibbsConfig& g) {
    std::vector<Observation> units = expand_observations({dataset.begin(), dataset.end()});
    Rng rng = make_rng(g.seed, 0);
    shuffle_in_place(units, rng);

    ConvergenceStudy study;
    for (std::size_t size : train_sizes) {
        if (size > units.size()) {
            throw PlanError("training size " + std::to_string(size) + " exceeds dataset size " +
                            std::to_string(units.size()));
        }
        GibbsConfig chain = g;
        chain.chains = 1;
        chain.seed = derive_seed(g.seed, size + 1);
        const auto train = merge_observations({units.begin(), units.begin() + size});
        const GibbsResult result = run_gibbs(train, model, chain);
        study.series.push_back({size, convergence_trace(result.histogram)});
    }
    const auto smallest = std::min_element(study.series.begin(), study.series.end(),
                                           [](const auto& a, const auto& b) { return a.train_size < b.train_size; });
    const auto largest = std::max_element(study.series.begin(), study.series.end(),
                                          [](const auto& a, const auto& b) { return a.train_size < b.train_size; });
    if (smallest != study.series.end() && smallest->train_size == 0 && !largest->distinct.empty()) {
        study.plateau_holds = largest->distinct.back() <= smallest->distinct.back();
    }
    return study;
}

inline CsvTable convergence_table(const ConvergenceStudy& study) {
    CsvTable table{{"train_size", "iteration", "distinct_count"}, {}, {}};
    for (const auto& s : study.series) {
        for (std::size_t i = 0; i < s.distinct.size(); ++i) {
            table.rows.push_back({std::to_string(s.train_size), std::to_string(i + 1), std::to_string(s.distinct[i])});
        }
    }
    return table;
}

// Run directory name from a hash of the configuration text and the seed.
inline std::string run_directory_name(std::string_view config_text, std::uint64_t seed) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : config_text) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string("run-") + buf + "-s" + std::to_string(seed);
}

}  // namespace argbayes
