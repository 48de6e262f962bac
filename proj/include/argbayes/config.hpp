#pragma once

// Run configuration: flat "key = value" text, '#' starts a comment.
//
//   key                  required  default
//   semantics            yes       -            grounded|complete|preferred|stable
//   family               yes       -            deterministic|linear|exponential
//   w                    if family=exponential
//   prediction_family    no        linear       family used for posterior predictive
//   prediction_w         if prediction_family=exponential
//   lambda               no        0.5          one value, or one per attack variable
//   mode                 no        symmetric    symmetric|directed
//   self_loops           no        false        directed mode only
//   iterations           no        10000
//   burn_in              no        1000
//   seed                 no        0
//   chains               no        1
//   max_exact_variables  no        20           exact enumeration cap
//
// Unknown or repeated keys are errors.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "argbayes/acceptability.hpp"
#include "argbayes/data_io.hpp"
#include "argbayes/errors.hpp"
#include "argbayes/gibbs.hpp"
#include "argbayes/model.hpp"

namespace argbayes {

struct RunConfig {
    ModelConfig model{};
    ParameterFamily prediction_family = ParameterFamily::linear();
    std::vector<double> lambda{0.5};
    SpaceMode mode = SpaceMode::Symmetric;
    bool self_loops = false;
    GibbsConfig gibbs{};
    std::size_t max_exact_variables = 20;

    // Builds the attack space over n arguments with the configured priors.
    AttackSpace make_space(std::size_t n_arguments) const {
        AttackSpace space(n_arguments, mode, 0.5, self_loops);
        if (lambda.size() == 1) {
            space.set_priors(std::vector<double>(space.size(), lambda.front()));
        } else {
            if (lambda.size() != space.size()) {
                throw ConfigError("lambda", "has " + std::to_string(lambda.size()) + " values but the space has " +
                                                std::to_string(space.size()) + " attack variables");
            }
            space.set_priors(lambda);
        }
        return space;
    }
};

namespace detail {

inline const std::vector<std::string_view>& config_keys() {
    static const std::vector<std::string_view> keys = {
        "semantics", "family", "w", "prediction_family", "prediction_w", "lambda", "mode", "self_loops",
        "iterations", "burn_in", "seed", "chains", "max_exact_variables"};
    return keys;
}

inline double config_double(const std::string& key, const std::string& value) {
    const auto v = parse_double(value);
    if (!v) throw ConfigError(key, "expected a number, got '" + value + "'");
    return *v;
}

inline std::uint64_t config_unsigned(const std::string& key, const std::string& value) {
    const auto v = parse_unsigned(value);
    if (!v) throw ConfigError(key, "expected a non-negative integer, got '" + value + "'");
    return *v;
}

inline bool config_bool(const std::string& key, const std::string& value) {
    if (value == "true") return true;
    if (value == "false") return false;
    throw ConfigError(key, "expected true or false, got '" + value + "'");
}

inline ParameterFamily config_family(const std::map<std::string, std::string>& kv, const std::string& key,
                                     const std::string& w_key) {
    const std::string& kind = kv.at(key);
    if (kind == "exponential" && !kv.count(w_key)) throw ConfigError(w_key, "required when " + key + " = exponential");
    if (kind != "exponential" && kv.count(w_key)) throw ConfigError(w_key, "only valid when " + key + " = exponential");
    try {
        return ParameterFamily::parse(kind, kind == "exponential" ? config_double(w_key, kv.at(w_key)) : 0.0);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(kind == "exponential" ? w_key : key, e.what());
    }
}

}  // namespace detail

inline std::map<std::string, std::string> parse_key_values(std::string_view text) {
    std::map<std::string, std::string> kv;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw SchemaError("expected 'key = value'", line_no);
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) throw SchemaError("missing key before '='", line_no);
        if (!kv.emplace(key, value).second) throw ConfigError(key, "given more than once (line " + std::to_string(line_no) + ")");
    }
    return kv;
}

inline RunConfig config_from_key_values(const std::map<std::string, std::string>& kv) {
    using namespace detail;
    for (const auto& [key, value] : kv) {
        if (std::find(config_keys().begin(), config_keys().end(), key) == config_keys().end()) {
            throw ConfigError(key, "unknown key");
        }
    }
    for (const char* required : {"semantics", "family"}) {
        if (!kv.count(required)) throw ConfigError(required, "missing required key");
    }

    RunConfig cfg;
    try {
        cfg.model.semantics = parse_semantics(kv.at("semantics"));
    } catch (const Error& e) {
        throw ConfigError("semantics", e.what());
    }
    cfg.model.family = config_family(kv, "family", "w");
    if (kv.count("prediction_family")) {
        cfg.prediction_family = config_family(kv, "prediction_family", "prediction_w");
    } else if (kv.count("prediction_w")) {
        throw ConfigError("prediction_w", "only valid when prediction_family = exponential");
    }
    if (kv.count("lambda")) {
        cfg.lambda.clear();
        std::string_view rest = kv.at("lambda");
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const std::string item(trim(rest.substr(0, comma)));
            const double l = config_double("lambda", item);
            if (!(l >= 0.0 && l <= 1.0)) throw ConfigError("lambda", "values must lie in [0, 1]");
            cfg.lambda.push_back(l);
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        }
        if (cfg.lambda.empty()) throw ConfigError("lambda", "no values given");
    }
    if (kv.count("mode")) {
        try {
            cfg.mode = parse_space_mode(kv.at("mode"));
        } catch (const Error& e) {
            throw ConfigError("mode", e.what());
        }
    }
    if (kv.count("self_loops")) cfg.self_loops = config_bool("self_loops", kv.at("self_loops"));
    if (cfg.self_loops && cfg.mode == SpaceMode::Symmetric) throw ConfigError("self_loops", "requires mode = directed");
    if (kv.count("iterations")) cfg.gibbs.iterations = config_unsigned("iterations", kv.at("iterations"));
    if (kv.count("burn_in")) cfg.gibbs.burn_in = config_unsigned("burn_in", kv.at("burn_in"));
    if (kv.count("seed")) cfg.gibbs.seed = config_unsigned("seed", kv.at("seed"));
    if (kv.count("chains")) cfg.gibbs.chains = config_unsigned("chains", kv.at("chains"));
    if (kv.count("max_exact_variables")) {
        cfg.max_exact_variables = config_unsigned("max_exact_variables", kv.at("max_exact_variables"));
    }
    try {
        cfg.gibbs.validate();
    } catch (const Error& e) {
        throw ConfigError(cfg.gibbs.iterations == 0 ? "iterations" : cfg.gibbs.chains == 0 ? "chains" : "burn_in",
                          e.what());
    }
    return cfg;
}

inline RunConfig parse_config(std::string_view text) { return config_from_key_values(parse_key_values(text)); }

inline RunConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

// Named presets. "vote-study": the vote-data cross-validation settings.
// "triangle-priors": the three-argument posterior-convergence example.
inline RunConfig config_preset(std::string_view name) {
    if (name == "vote-study") {
        return parse_config(
            "semantics = complete\nfamily = exponential\nw = 100\nlambda = 0.5\n"
            "mode = symmetric\niterations = 100\nburn_in = 0\n");
    }
    if (name == "triangle-priors") {
        return parse_config(
            "semantics = complete\nfamily = exponential\nw = 2\nlambda = 0.1, 0.15, 0.2\n"
            "mode = symmetric\n");
    }
    throw ConfigError("preset", "unknown preset '" + std::string(name) + "' (expected vote-study or triangle-priors)");
}

}  // namespace argbayes
