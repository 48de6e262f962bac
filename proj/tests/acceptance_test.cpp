// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>

#include "argbayes/argbayes.hpp"
#include "oracles.hpp"

using namespace argbayes;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

char buf[512];

template <typename... Args>
std::string fmt(const char* f, Args... args) {
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

AttackAssignment row(std::size_t r) {
    return AttackAssignment(std::vector<bool>{(r & 1) != 0, (r & 2) != 0, (r & 4) != 0});
}

AcceptabilityModel triangle_model() {
    const RunConfig cfg = config_preset("triangle-priors");
    return AcceptabilityModel(cfg.make_space(3), cfg.model);
}

std::vector<Observation> cycle_stream(std::size_t n) {
    std::vector<Observation> obs;
    for (std::size_t i = 0; i < n; ++i) obs.push_back({singleton(i % 3), true, 1});
    return obs;
}

double total_variation(const PosteriorDistribution& a, const PosteriorDistribution& b) {
    double tv = 0.0;
    for (const auto& e : a) tv += std::abs(e.probability - b.probability(e.assignment));
    for (const auto& e : b) {
        if (a.probability(e.assignment) == 0.0) tv += e.probability;
    }
    return tv / 2.0;
}

// 1. Three-argument table: 64 linear and 64 exponential (w = 2) values.
Outcome parameter_table() {
    const AcceptabilityModel exp2(AttackSpace(3, SpaceMode::Symmetric),
                                  {Semantics::Complete, ParameterFamily::exponential(2), {}});
    const auto lin = exp2.with_family(ParameterFamily::linear());
    double worst = 0.0;
    int checked = 0;
    for (std::size_t r = 0; r < 8; ++r) {
        for (ArgSet d = 0; d < 8; ++d) {
            const int k = oracle::kLinearThirds[r][d];
            worst = std::max(worst, std::abs(lin.theta(d, row(r)) - k / 3.0));
            worst = std::max(worst, std::abs(exp2.theta(d, row(r)) - ((1 << k) - 1) / 7.0));
            checked += 2;
        }
    }
    return {checked == 128 && worst < 1e-12, fmt("%d values, max |delta| = %.3g", checked, worst)};
}

// 2. Posterior masses after 1..3 observations and convergence after 20 cycles.
Outcome posterior_chain() {
    const auto model = triangle_model();
    const double f = 3.0 / 7.0;
    const double g = 1.0 / 7.0;
    const double factors[3][8] = {
        {g, f, f, 1, 1, f, f, 1},
        {g * g, f * f, f, f, f, f, f * f, 1},
        {g * g * g, f * f, f * f, f * f, f * f, f * f, f * f, 1},
    };
    double worst = 0.0;
    auto post = exact_posterior({}, model);
    for (std::size_t n = 1; n <= 3; ++n) {
        post = sequential_update(post, {singleton(n - 1), true, 1}, model);
        for (std::size_t r = 0; r < 8; ++r) {
            const double want = factors[n - 1][r] * attack_prior(row(r), model.space());
            const double got = std::exp(post.entries()[r].log_mass);
            worst = std::max(worst, std::abs(got / want - 1.0));
        }
    }
    const double after20obs = exact_posterior(cycle_stream(20), model).probability(row(7));
    const double after20cycles = exact_posterior(cycle_stream(60), model).probability(row(7));
    return {worst < 1e-12 && after20cycles >= 0.99 && after20obs >= 0.99,
            fmt("max ratio error %.3g; p(1,1,1) = %.6f after 20 observations, %.9f after 20 cycles", worst,
                after20obs, after20cycles)};
}

// 3. Likelihoods 0, 1/9, 1/9, 1/3 and the unique ML estimate.
Outcome ml_example() {
    const AcceptabilityModel model(AttackSpace(2, SpaceMode::Directed, 0.5),
                                   {Semantics::Complete, ParameterFamily::exponential(2), {}});
    const std::vector<Observation> obs{{0b00, true, 1}, {0b11, true, 1}};
    const double expected[4] = {0.0, 1.0 / 9.0, 1.0 / 9.0, 1.0 / 3.0};
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 4; ++i) {
        worst = std::max(worst, std::abs(std::exp(joint_log_likelihood(obs, model.space().assignment_at(i), model)) -
                                         expected[i]));
    }
    const auto ml = ml_estimate(obs, model);
    const bool unique = ml.size() == 1 && ml.front().to_string() == "11";
    return {worst < 1e-15 && unique, fmt("max |delta| = %.3g, ML = {%s}", worst, ml.front().to_string().c_str())};
}

// 4. Every inverse solution is an ML estimate, observations = accepted sets.
Outcome inverse_solutions_are_ml() {
    std::size_t relations = 0;
    std::size_t solutions = 0;
    std::size_t missed = 0;
    for (SpaceMode mode : {SpaceMode::Symmetric, SpaceMode::Directed}) {
        const AcceptabilityModel model(AttackSpace(3, mode),
                                       {Semantics::Complete, ParameterFamily::exponential(2), {}});
        for (std::uint64_t i = 0; i < (std::uint64_t{1} << model.space().size()); ++i) {
            ++relations;
            const auto target = *model.extensions_of(model.space().assignment_at(i));
            std::vector<Observation> obs;
            for (ArgSet d : target) obs.push_back({d, true, 1});
            const auto ml = ml_estimate(obs, model);
            for (const auto& sol : inverse_solutions(target, model)) {
                ++solutions;
                if (!std::binary_search(ml.begin(), ml.end(), sol)) ++missed;
            }
        }
    }
    return {missed == 0 && relations == 8 + 64,
            fmt("%zu relations (8 symmetric, 64 directed), %zu solutions, %zu not ML", relations, solutions, missed)};
}

// 5. ML prediction equals the extension indicator and is the unique maximizer.
Outcome ml_prediction_solves_direct() {
    std::size_t relations = 0;
    std::size_t failures = 0;
    for (std::size_t n : {2u, 3u}) {
        const AcceptabilityModel model(AttackSpace(n, SpaceMode::Directed),
                                       {Semantics::Complete, ParameterFamily::exponential(2), {}});
        const std::size_t subsets = std::size_t{1} << n;
        for (std::uint64_t i = 0; i < (std::uint64_t{1} << model.space().size()); ++i) {
            ++relations;
            const auto att = model.space().assignment_at(i);
            const auto indicator = extension_indicator(*model.extensions_of(att), n);
            bool ok = ml_prediction(att, model) == indicator;
            const double best = labelling_log_likelihood(indicator, att, model);
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << subsets) && ok; ++mask) {
                std::vector<bool> labels(subsets);
                for (std::size_t d = 0; d < subsets; ++d) labels[d] = ((mask >> d) & 1) != 0;
                if (labels != indicator && !(labelling_log_likelihood(labels, att, model) < best)) ok = false;
            }
            failures += ok ? 0 : 1;
        }
    }
    return {failures == 0 && relations == 4 + 64, fmt("%zu directed relations on 2-3 arguments, %zu failures",
                                                      relations, failures)};
}

// 6. Exponential theta approaches deterministic (w large) and linear (w -> 1).
Outcome limits() {
    const AttackSpace space(3, SpaceMode::Directed);
    const ModelConfig det{Semantics::Complete, ParameterFamily::deterministic(), {}};
    const ModelConfig lin{Semantics::Complete, ParameterFamily::linear(), {}};
    const ModelConfig big{Semantics::Complete, ParameterFamily::exponential(1e6), {}};
    const ModelConfig near1{Semantics::Complete, ParameterFamily::exponential(1.0 + 1e-6), {}};
    double gap_det = 0.0;
    double gap_lin = 0.0;
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << space.size()); ++i) {
        const auto att = space.assignment_at(i);
        for (ArgSet d = 0; d < 8; ++d) {
            gap_det = std::max(gap_det, std::abs(theta(d, att, space, big) - theta(d, att, space, det)));
            gap_lin = std::max(gap_lin, std::abs(theta(d, att, space, near1) - theta(d, att, space, lin)));
        }
    }
    return {gap_det < 1e-3 && gap_lin < 1e-3,
            fmt("max gap to deterministic %.3g at w=1e6, to linear %.3g at w=1+1e-6", gap_det, gap_lin)};
}

// 7. Symmetric irreflexive frameworks have pairwise-distinct extension sets.
Outcome uniqueness() {
    std::string detail;
    bool pass = true;
    for (std::size_t n : {2u, 3u, 4u}) {
        const AttackSpace space(n, SpaceMode::Symmetric);
        for (Semantics sem : {Semantics::Complete, Semantics::Preferred, Semantics::Stable}) {
            std::set<ExtensionSet> seen;
            const std::uint64_t count = std::uint64_t{1} << space.size();
            for (std::uint64_t i = 0; i < count; ++i) {
                seen.insert(extensions(space.framework(space.assignment_at(i)), sem));
            }
            pass = pass && seen.size() == count;
        }
        detail += fmt("n=%zu: %llu frameworks; ", n, static_cast<unsigned long long>(std::uint64_t{1} << space.size()));
    }
    return {pass, detail + (pass ? "all distinct" : "collision found")};
}

// 8. Gibbs histogram against the exact posterior, and seed reproducibility.
Outcome gibbs_accuracy() {
    const auto model = triangle_model();
    const auto obs = cycle_stream(3);
    const GibbsConfig g{50000, 5000, 8, 1};
    const auto a = run_gibbs(obs, model, g);
    const auto b = run_gibbs(obs, model, g);
    const double tv = total_variation(exact_posterior(obs, model), a.posterior);
    const bool identical = histogram_table(a.histogram).to_string() == histogram_table(b.histogram).to_string() &&
                           trace_table(convergence_trace(a.histogram)).to_string() ==
                               trace_table(convergence_trace(b.histogram)).to_string();
    return {tv <= 0.05 && identical, fmt("TV = %.4f, repeated run %s", tv, identical ? "byte-identical" : "differs")};
}

// Mean accuracy per training size, averaged over seeds.
struct CurveSummary {
    std::vector<double> sizes;
    std::vector<double> mean;
};

CurveSummary synthetic_curve(const AcceptabilityModel& model, const RunConfig& cfg, double edge_probability,
                             std::size_t seeds) {
    const std::vector<std::size_t> sizes{0, 4, 8, 12, 16, 20, 24, 28};
    CurveSummary out;
    out.mean.assign(sizes.size(), 0.0);
    for (std::size_t s : sizes) out.sizes.push_back(static_cast<double>(s));
    InferenceSettings settings;
    settings.gibbs = cfg.gibbs;
    settings.prediction_family = cfg.prediction_family;
    for (std::size_t seed = 0; seed < seeds; ++seed) {
        const auto data = synthetic_vote_dataset(model, 29, edge_probability, 100 + seed);
        const auto obs = observations_from_votes(data.votes, {});
        const auto curve = cross_validate(obs, model, {seed, sizes, 10}, settings);
        for (std::size_t i = 0; i < sizes.size(); ++i) out.mean[i] += curve[i].mean_accuracy / static_cast<double>(seeds);
    }
    return out;
}

// 9. Synthetic substitute for the vote-data learning curve.
Outcome learning_curve() {
    const RunConfig cfg = config_preset("vote-study");
    const AcceptabilityModel model(cfg.make_space(10), cfg.model);
    const auto sparse = synthetic_curve(model, cfg, 0.2, 10);
    const double rho = spearman(sparse.sizes, sparse.mean);
    const double gain = sparse.mean.back() - sparse.mean.front();
    std::string curve;
    for (double m : sparse.mean) curve += fmt("%.3f ", m);

    // Truth drawn from the prior itself; reported, not graded.
    const auto dense = synthetic_curve(model, cfg, 0.5, 10);
    std::printf("  info: edge probability 0.5: spearman %.3f, gain %.3f\n", spearman(dense.sizes, dense.mean),
                dense.mean.back() - dense.mean.front());
    return {rho > 0.0 && gain >= 0.1,
            fmt("edge probability 0.2, 10 seeds: spearman %.3f, gain %.3f, curve %s", rho, gain, curve.c_str())};
}

// 10. Fewer new assignments in 100 iterations with all data than with none.
Outcome convergence() {
    const RunConfig cfg = config_preset("vote-study");
    const AcceptabilityModel model(cfg.make_space(10), cfg.model);
    const auto data = load_votes(std::string(ARGBAYES_DATA_DIR) + "/synthetic_votes_29x10.csv");
    std::size_t total = 0;
    for (const auto& o : data.observations) total += o.weight;
    const auto study = convergence_study(data.observations, {0, total}, model, {100, 0, cfg.gibbs.seed, 1});
    const std::size_t none = study.series[0].distinct.back();
    const std::size_t full = study.series[1].distinct.back();
    return {full < none, fmt("distinct in first 100 iterations: %zu with no data, %zu with all %zu observations",
                             none, full, total)};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double limit_seconds;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "three-argument parameter table", 1.0, parameter_table},
        {2, "triangle posterior chain", 1.0, posterior_chain},
        {3, "ml example with no inverse solution", 0.0, ml_example},
        {4, "inverse solutions are ml estimates", 10.0, inverse_solutions_are_ml},
        {5, "ml prediction solves the direct problem", 30.0, ml_prediction_solves_direct},
        {6, "exponential parameter limits", 0.0, limits},
        {7, "solution uniqueness for symmetric frameworks", 60.0, uniqueness},
        {8, "gibbs against exact posterior", 60.0, gibbs_accuracy},
        {9, "synthetic learning curve", 600.0, learning_curve},
        {10, "sampler concentration with data", 0.0, convergence},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = c.limit_seconds == 0.0 || secs < c.limit_seconds;
        const bool pass = o.pass && in_time;
        failures += pass ? 0 : 1;
        std::printf("%s criterion %d (%s): %s [%.2fs%s]\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                    secs, in_time ? "" : ", over time limit");
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
