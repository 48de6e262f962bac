// Command-line front end. Exit codes: 0 ok, 1 usage, 2 data/schema/config,
// 3 capacity, 4 degenerate evidence.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "argbayes/argbayes.hpp"

using namespace argbayes;
namespace fs = std::filesystem;

namespace {

// Settings shared by every inference command; flags override the config.
struct ModelOptions {
    std::string config_path;
    std::string preset;
    std::string semantics;
    std::string family;
    std::optional<double> w;
    std::string lambda;
    std::string mode;
    std::optional<std::size_t> iterations;
    std::optional<std::size_t> burn_in;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> chains;

    void attach(CLI::App* cmd, bool sampling) {
        cmd->add_option("--config", config_path, "Run configuration file (key = value)")->check(CLI::ExistingFile);
        cmd->add_option("--preset", preset, "Built-in configuration: vote-study or triangle-priors")
            ->excludes("--config");
        cmd->add_option("--semantics", semantics, "grounded, complete, preferred or stable");
        cmd->add_option("--family", family, "Acceptability family: deterministic, linear or exponential");
        cmd->add_option("--w", w, "Exponential family base (> 1)");
        cmd->add_option("--lambda", lambda, "Attack prior: one value, or one per attack variable (comma separated)");
        cmd->add_option("--mode", mode, "Attack space: symmetric or directed");
        if (sampling) {
            cmd->add_option("--iterations", iterations, "Gibbs sweeps per chain");
            cmd->add_option("--burn-in", burn_in, "Sweeps discarded before recording");
            cmd->add_option("--seed", seed, "Master random seed (default from config, else 0)");
            cmd->add_option("--chains", chains, "Independent chains merged into one histogram");
        }
    }

    RunConfig resolve() const {
        std::map<std::string, std::string> kv;
        if (!config_path.empty()) {
            kv = parse_key_values(read_file(config_path));
        } else if (!preset.empty()) {
            const std::string text = preset_text(preset);
            kv = parse_key_values(text);
        } else {
            kv = {{"semantics", "complete"}, {"family", "exponential"}, {"w", "2"}};
        }
        if (!semantics.empty()) kv["semantics"] = semantics;
        if (!family.empty()) {
            kv["family"] = family;
            if (family != "exponential") kv.erase("w");
        }
        if (w) kv["w"] = format_number(*w);
        if (!lambda.empty()) kv["lambda"] = lambda;
        if (!mode.empty()) kv["mode"] = mode;
        if (iterations) kv["iterations"] = std::to_string(*iterations);
        if (burn_in) kv["burn_in"] = std::to_string(*burn_in);
        if (seed) kv["seed"] = std::to_string(*seed);
        if (chains) kv["chains"] = std::to_string(*chains);
        return config_from_key_values(kv);
    }

    static std::string preset_text(const std::string& name) {
        if (name == "vote-study") {
            return "semantics = complete\nfamily = exponential\nw = 100\nlambda = 0.5\nmode = symmetric\n"
                   "iterations = 100\nburn_in = 0\n";
        }
        if (name == "triangle-priors") {
            return "semantics = complete\nfamily = exponential\nw = 2\nlambda = 0.1, 0.15, 0.2\nmode = symmetric\n";
        }
        config_preset(name);  // throws for unknown names
        return {};
    }
};

// Canonical text of a resolved configuration; hashed into the run directory name.
std::string describe(const RunConfig& cfg, const std::string& command) {
    std::ostringstream out;
    out << "command = " << command << "\n"
        << "semantics = " << to_string(cfg.model.semantics) << "\n"
        << "family = " << cfg.model.family.describe() << "\n"
        << "prediction_family = " << cfg.prediction_family.describe() << "\n"
        << "mode = " << to_string(cfg.mode) << "\n"
        << "lambda =";
    for (double l : cfg.lambda) out << " " << format_number(l);
    out << "\niterations = " << cfg.gibbs.iterations << "\nburn_in = " << cfg.gibbs.burn_in
        << "\nchains = " << cfg.gibbs.chains << "\nseed = " << cfg.gibbs.seed << "\n";
    return out.str();
}

// Creates <out-dir>/run-<hash>-s<seed> and records the configuration there.
std::optional<fs::path> run_directory(const std::string& out_dir, const std::string& config_text, std::uint64_t seed) {
    if (out_dir.empty()) return std::nullopt;
    const fs::path dir = fs::path(out_dir) / run_directory_name(config_text, seed);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw SchemaError("cannot create '" + dir.string() + "': " + ec.message());
    write_file((dir / "config.txt").string(), config_text);
    std::printf("output: %s\n", dir.string().c_str());
    return dir;
}

ArgumentTable arguments_from_flag(const std::string& text) {
    if (const auto n = parse_unsigned(text)) return ArgumentTable::defaults(*n);
    std::vector<std::string> names;
    std::stringstream in(text);
    for (std::string item; std::getline(in, item, ',');) names.emplace_back(trim(item));
    return ArgumentTable(names);
}

std::vector<std::size_t> sizes_from_flag(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream in(text);
    for (std::string item; std::getline(in, item, ',');) {
        const auto v = parse_unsigned(trim(item));
        if (!v) throw InputError("not a non-negative integer: '" + item + "'");
        out.push_back(*v);
    }
    return out;
}

// Observation source for inference commands.
struct DataOptions {
    std::string votes;
    std::string observations;
    std::string arguments;
    std::string convention = "row-as-set";
    std::string negatives = "ignore";

    void attach(CLI::App* cmd) {
        cmd->add_option("--votes", votes, "Vote matrix CSV (participant column, then one column per argument)")
            ->check(CLI::ExistingFile);
        cmd->add_option("--observations", observations, "Observation CSV with header subset,label[,weight]")
            ->check(CLI::ExistingFile)
            ->excludes("--votes");
        cmd->add_option("--arguments", arguments, "Argument names (a,b,c) or a count, for --observations");
        cmd->add_option("--convention", convention, "Vote conversion: row-as-set or cell-as-singleton");
        cmd->add_option("--negatives", negatives, "Disagree votes under row-as-set: ignore or include");
    }

    LabelledObservations load() const {
        if (!votes.empty()) {
            ObservationConvention conv;
            conv.mode = ObservationConvention::parse_mode(convention);
            conv.negatives = ObservationConvention::parse_negatives(negatives);
            return load_votes(votes, conv);
        }
        if (arguments.empty()) throw InputError("--arguments is required with --observations or without data");
        LabelledObservations out{arguments_from_flag(arguments), {}};
        if (!observations.empty()) out.observations = parse_observations(read_file(observations), out.arguments);
        return out;
    }
};

void print_seed(std::uint64_t seed) { std::printf("seed: %llu\n", static_cast<unsigned long long>(seed)); }

void print_posterior(const PosteriorDistribution& post, std::size_t limit) {
    std::vector<PosteriorDistribution::Entry> sorted(post.begin(), post.end());
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& a, const auto& b) { return a.probability > b.probability; });
    if (sorted.size() > limit) sorted.resize(limit);
    for (const auto& e : sorted) std::printf("%s %.10g\n", e.assignment.to_string().c_str(), e.probability);
}

// ---------------------------------------------------------------------------
// Demo cases: each recomputes a worked example and compares it with frozen values.

struct DemoCheck {
    std::string name;
    bool pass;
    std::string detail;
};

AttackAssignment listing_row(std::size_t r) {
    return AttackAssignment(std::vector<bool>{(r & 1) != 0, (r & 2) != 0, (r & 4) != 0});
}

// Linear parameters in thirds: rows (att_ab, att_ac, att_bc) in listing order,
// columns subsets by bitmask {}, {a}, {b}, {a,b}, {c}, {a,c}, {b,c}, {a,b,c}.
constexpr int kLinearThirds[8][8] = {
    {0, 1, 1, 2, 1, 2, 2, 3}, {2, 2, 2, 1, 3, 3, 3, 2}, {2, 2, 3, 3, 2, 1, 3, 2}, {3, 3, 2, 2, 2, 2, 3, 2},
    {2, 3, 2, 3, 2, 3, 1, 2}, {3, 2, 3, 2, 2, 3, 2, 2}, {3, 2, 2, 3, 3, 2, 2, 2}, {3, 3, 3, 2, 3, 2, 2, 1},
};
DemoCheck demo_parameter_table() {
    const AttackSpace space(3, SpaceMode::Symmetric);
    const ModelConfig lin{Semantics::Complete, ParameterFamily::linear(), {}};
    const ModelConfig exp2{Semantics::Complete, ParameterFamily::exponential(2), {}};
    int mismatches = 0;
    for (std::size_t r = 0; r < 8; ++r) {
        for (ArgSet d = 0; d < 8; ++d) {
            const int k = kLinearThirds[r][d];
            if (std::abs(theta(d, listing_row(r), space, lin) - k / 3.0) > 1e-12) ++mismatches;
            if (std::abs(theta(d, listing_row(r), space, exp2) - ((1 << k) - 1) / 7.0) > 1e-12) ++mismatches;
        }
    }
    return {"parameter-table", mismatches == 0, std::to_string(128 - mismatches) + "/128 linear and exponential(w=2) entries match"};
}

AcceptabilityModel triangle_model() {
    const RunConfig cfg = config_preset("triangle-priors");
    return AcceptabilityModel(cfg.make_space(3), cfg.model);
}

DemoCheck demo_posterior_chain() {
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
            const double want = factors[n - 1][r] * attack_prior(listing_row(r), model.space());
            worst = std::max(worst, std::abs(std::exp(post.entries()[r].log_mass) / want - 1.0));
        }
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "masses after 1-3 observations, max ratio error %.3g", worst);
    return {"posterior-chain", worst < 1e-12, buf};
}

DemoCheck demo_convergence() {
    const auto model = triangle_model();
    std::vector<Observation> obs;
    for (std::size_t i = 0; i < 60; ++i) obs.push_back({singleton(i % 3), true, 1});
    const double p = exact_posterior(obs, model).probability(listing_row(7));
    char buf[128];
    std::snprintf(buf, sizeof buf, "p(1,1,1) after 20 cycles of {a},{b},{c} = %.9f (need >= 0.99)", p);
    return {"convergence", p >= 0.99, buf};
}

DemoCheck demo_ml_example() {
    const AcceptabilityModel model(AttackSpace(2, SpaceMode::Directed, 0.5),
                                   {Semantics::Complete, ParameterFamily::exponential(2), {}});
    const std::vector<Observation> obs{{0b00, true, 1}, {0b11, true, 1}};
    const double expected[4] = {0.0, 1.0 / 9.0, 1.0 / 9.0, 1.0 / 3.0};
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 4; ++i) {
        const double l = std::exp(joint_log_likelihood(obs, model.space().assignment_at(i), model));
        worst = std::max(worst, std::abs(l - expected[i]));
    }
    const auto ml = ml_estimate(obs, model);
    const bool unique = ml.size() == 1 && ml.front().to_string() == "11";
    char buf[160];
    std::snprintf(buf, sizeof buf, "likelihoods 0, 1/9, 1/9, 1/3 within %.3g; ML = %s%s", worst,
                  ml.front().to_string().c_str(), unique ? " (unique)" : " (tied)");
    return {"ml-example", worst < 1e-15 && unique, buf};
}

// ---------------------------------------------------------------------------

int run(int argc, char** argv) {
    CLI::App app{"Bayesian inference of attack relations in abstract argumentation"};
    app.require_subcommand(1, 1);

    // semantics
    auto* sem_cmd = app.add_subcommand("semantics", "Print the extensions of a framework, one per line");
    std::string framework_path;
    std::string semantics_name = "complete";
    sem_cmd->add_option("--framework", framework_path, "Framework JSON file")->required()->check(CLI::ExistingFile);
    sem_cmd->add_option("--semantics", semantics_name, "grounded, complete, preferred or stable");

    // posterior
    auto* post_cmd = app.add_subcommand("posterior", "Exact posterior over attack relations");
    ModelOptions post_model;
    DataOptions post_data;
    std::string post_out;
    std::size_t post_top = 10;
    post_model.attach(post_cmd, false);
    post_data.attach(post_cmd);
    post_cmd->add_option("--out-dir", post_out, "Write posterior.csv under a run directory here");
    post_cmd->add_option("--top", post_top, "Assignments to print");

    // gibbs
    auto* gibbs_cmd = app.add_subcommand("gibbs", "Gibbs sampling over attack relations");
    ModelOptions gibbs_model;
    DataOptions gibbs_data;
    std::string gibbs_out;
    std::size_t gibbs_top = 10;
    gibbs_model.attach(gibbs_cmd, true);
    gibbs_data.attach(gibbs_cmd);
    gibbs_cmd->add_option("--out-dir", gibbs_out, "Write histogram.csv and trace.csv under a run directory here");
    gibbs_cmd->add_option("--top", gibbs_top, "Assignments to print");

    // predict
    auto* pred_cmd = app.add_subcommand("predict", "Posterior predictive acceptability of subsets");
    ModelOptions pred_model;
    DataOptions pred_data;
    std::vector<std::string> pred_subsets;
    bool pred_gibbs = false;
    pred_model.attach(pred_cmd, true);
    pred_data.attach(pred_cmd);
    pred_cmd->add_option("--subset", pred_subsets, "Subset such as {a,b} (repeatable; default every subset)");
    pred_cmd->add_flag("--gibbs", pred_gibbs, "Sample the posterior even when exact enumeration fits");

    // crossval
    auto* cv_cmd = app.add_subcommand("crossval", "Learning curve by repeated random train/test splits");
    ModelOptions cv_model;
    DataOptions cv_data;
    std::string cv_sizes;
    std::size_t cv_repeats = 10;
    std::string cv_convergence;
    std::string cv_out;
    cv_model.attach(cv_cmd, true);
    cv_data.attach(cv_cmd);
    cv_cmd->add_option("--train-sizes", cv_sizes, "Comma-separated training sizes (default 0,4,8,...)");
    cv_cmd->add_option("--repeats", cv_repeats, "Random splits per training size");
    cv_cmd->add_option("--convergence", cv_convergence, "Also trace distinct sampled assignments at these sizes");
    cv_cmd->add_option("--out-dir", cv_out, "Write learning_curve.csv (and convergence.csv) under a run directory");

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "Recovery experiments on data sampled from a random relation");
    ModelOptions synth_model;
    std::size_t synth_args = 3;
    double synth_edge = 0.5;
    std::string synth_counts = "0,10,100,1000";
    std::size_t synth_test = 200;
    std::size_t synth_participants = 0;
    std::string synth_votes_out;
    std::string synth_out;
    synth_model.attach(synth_cmd, true);
    synth_cmd->add_option("--arguments", synth_args, "Number of arguments");
    synth_cmd->add_option("--edge-probability", synth_edge, "Probability that each attack variable is set in the truth");
    synth_cmd->add_option("--observations", synth_counts, "Comma-separated training observation counts");
    synth_cmd->add_option("--test", synth_test, "Held-out observations per experiment");
    synth_cmd->add_option("--participants", synth_participants, "Emit a vote matrix with this many participants instead");
    synth_cmd->add_option("--votes-out", synth_votes_out, "Vote matrix path for --participants");
    synth_cmd->add_option("--out-dir", synth_out, "Write recovery.csv under a run directory here");

    // demo
    auto* demo_cmd = app.add_subcommand("demo", "Recompute worked examples and compare with frozen values");
    std::string demo_case = "all";
    demo_cmd->add_option("--case", demo_case,
                         "parameter-table (alias table1), posterior-chain (example6), convergence (figure3), "
                         "ml-example (theorem2) or all")
        ->transform(CLI::Transformer({{"table1", "parameter-table"},
                                      {"example6", "posterior-chain"},
                                      {"figure3", "convergence"},
                                      {"theorem2", "ml-example"}}))
        ->check(CLI::IsMember({"parameter-table", "posterior-chain", "convergence", "ml-example", "all"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (*sem_cmd) {
        const auto nf = load_framework(framework_path);
        const auto ext = extensions(nf.framework, parse_semantics(semantics_name));
        for (ArgSet e : ext) std::printf("%s\n", nf.arguments.format(e).c_str());
        return 0;
    }

    if (*post_cmd) {
        const RunConfig cfg = post_model.resolve();
        const auto data = post_data.load();
        const AcceptabilityModel model(cfg.make_space(data.arguments.size()), cfg.model);
        const ExactOptions opts{cfg.max_exact_variables};
        const auto post = exact_posterior(data.observations, model, opts);
        print_posterior(post, post_top);
        std::printf("map: %s\n", map_estimate(data.observations, model, opts).front().to_string().c_str());
        std::printf("ml: %s\n", ml_estimate(data.observations, model, opts).front().to_string().c_str());
        if (const auto dir = run_directory(post_out, describe(cfg, "posterior"), cfg.gibbs.seed)) {
            save_posterior((*dir / "posterior.csv").string(), post);
        }
        return 0;
    }

    if (*gibbs_cmd) {
        const RunConfig cfg = gibbs_model.resolve();
        const auto data = gibbs_data.load();
        const AcceptabilityModel model(cfg.make_space(data.arguments.size()), cfg.model);
        print_seed(cfg.gibbs.seed);
        const auto result = run_gibbs(data.observations, model, cfg.gibbs);
        print_posterior(result.posterior, gibbs_top);
        if (const auto dir = run_directory(gibbs_out, describe(cfg, "gibbs"), cfg.gibbs.seed)) {
            save_table((*dir / "histogram.csv").string(), histogram_table(result.histogram));
            save_table((*dir / "trace.csv").string(), trace_table(convergence_trace(result.histogram)));
        }
        return 0;
    }

    if (*pred_cmd) {
        const RunConfig cfg = pred_model.resolve();
        const auto data = pred_data.load();
        const AcceptabilityModel model(cfg.make_space(data.arguments.size()), cfg.model);
        InferenceSettings settings{cfg.gibbs, {cfg.max_exact_variables}, !pred_gibbs, cfg.prediction_family};
        if (!uses_exact(model.space(), settings)) print_seed(cfg.gibbs.seed);
        const auto post = infer_posterior(data.observations, model, settings, cfg.gibbs.seed);
        const auto prediction = model.with_family(cfg.prediction_family);
        std::vector<ArgSet> subsets;
        for (const auto& s : pred_subsets) subsets.push_back(parse_subset(s, data.arguments));
        if (subsets.empty()) {
            if (data.arguments.size() > 12) throw CapacityError("listing every subset needs --subset beyond 12 arguments");
            for (ArgSet d = 0; d < full_set(data.arguments.size()) + 1u; ++d) subsets.push_back(d);
        }
        for (ArgSet d : subsets) {
            std::printf("%s %.10g\n", data.arguments.format(d).c_str(), posterior_predictive(d, post, prediction));
        }
        return 0;
    }

    if (*cv_cmd) {
        const RunConfig cfg = cv_model.resolve();
        const auto data = cv_data.load();
        const AcceptabilityModel model(cfg.make_space(data.arguments.size()), cfg.model);
        std::size_t total = 0;
        for (const auto& o : data.observations) total += o.weight;
        SplitPlan plan{cfg.gibbs.seed, {}, cv_repeats};
        if (cv_sizes.empty()) {
            for (std::size_t s = 0; s < total; s += 4) plan.train_sizes.push_back(s);
        } else {
            plan.train_sizes = sizes_from_flag(cv_sizes);
        }
        print_seed(cfg.gibbs.seed);
        const InferenceSettings settings{cfg.gibbs, {cfg.max_exact_variables}, true, cfg.prediction_family};
        const auto curve = cross_validate(data.observations, model, plan, settings);
        const CsvTable table = learning_curve_table(curve);
        std::cout << table.to_string();
        std::optional<ConvergenceStudy> study;
        if (!cv_convergence.empty()) {
            study = convergence_study(data.observations, sizes_from_flag(cv_convergence), model, cfg.gibbs);
            for (const auto& s : study->series) {
                std::printf("convergence: size %zu, %zu distinct in %zu iterations\n", s.train_size,
                            s.distinct.empty() ? 0 : s.distinct.back(), s.distinct.size());
            }
        }
        if (const auto dir = run_directory(cv_out, describe(cfg, "crossval"), cfg.gibbs.seed)) {
            save_table((*dir / "learning_curve.csv").string(), table);
            if (study) save_table((*dir / "convergence.csv").string(), convergence_table(*study));
        }
        return 0;
    }

    if (*synth_cmd) {
        const RunConfig cfg = synth_model.resolve();
        const AcceptabilityModel model(cfg.make_space(synth_args), cfg.model);
        print_seed(cfg.gibbs.seed);
        if (synth_participants > 0) {
            if (synth_votes_out.empty()) throw InputError("--participants needs --votes-out");
            const auto data = synthetic_vote_dataset(model, synth_participants, synth_edge, cfg.gibbs.seed);
            const std::vector<std::string> comments{
                "SYNTHETIC: sampled from the acceptability model, not collected from people",
                "generator: " + cfg.model.family.describe() + ", " + std::string(to_string(cfg.model.semantics)) +
                    " semantics, edge probability " + format_number(synth_edge) + ", seed " +
                    std::to_string(cfg.gibbs.seed),
                "true attack assignment: " + data.truth.to_string()};
            write_file(synth_votes_out, votes_to_csv(data.votes, comments));
            std::printf("truth: %s\nwrote: %s\n", data.truth.to_string().c_str(), synth_votes_out.c_str());
            return 0;
        }
        Rng rng = make_rng(cfg.gibbs.seed, 0);
        const auto truth = random_assignment(model.space(), synth_edge, rng);
        std::printf("truth: %s\n", truth.to_string().c_str());
        const InferenceSettings settings{cfg.gibbs, {cfg.max_exact_variables}, true, cfg.prediction_family};
        std::vector<RecoveryReport> reports;
        for (std::size_t count : sizes_from_flag(synth_counts)) {
            reports.push_back(synthetic_experiment(truth, count, synth_test, model, model, settings,
                                                   derive_seed(cfg.gibbs.seed, count + 1)));
        }
        const CsvTable table = recovery_table(reports);
        std::cout << table.to_string();
        if (const auto dir = run_directory(synth_out, describe(cfg, "synth"), cfg.gibbs.seed)) {
            save_table((*dir / "recovery.csv").string(), table);
        }
        return 0;
    }

    std::vector<DemoCheck> checks;
    if (demo_case == "parameter-table" || demo_case == "all") checks.push_back(demo_parameter_table());
    if (demo_case == "posterior-chain" || demo_case == "all") checks.push_back(demo_posterior_chain());
    if (demo_case == "convergence" || demo_case == "all") checks.push_back(demo_convergence());
    if (demo_case == "ml-example" || demo_case == "all") checks.push_back(demo_ml_example());
    bool all_pass = true;
    for (const auto& c : checks) {
        std::printf("%s %s: %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
        all_pass = all_pass && c.pass;
    }
    return all_pass ? 0 : 2;
}

int exit_code(const Error& e) {
    switch (e.kind()) {
        case ErrorKind::Capacity: return 3;
        case ErrorKind::DegenerateEvidence: return 4;
        default: return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
