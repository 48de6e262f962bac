#include <gtest/gtest.h>

#include "argbayes/config.hpp"

using namespace argbayes;

namespace {

std::string error_key(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.key;
    }
    return "<none>";
}

}  // namespace

TEST(Config, MinimalWithDefaults) {
    const auto cfg = parse_config("semantics = preferred\nfamily = linear # comment\n");
    EXPECT_EQ(cfg.model.semantics, Semantics::Preferred);
    EXPECT_EQ(cfg.model.family, ParameterFamily::linear());
    EXPECT_EQ(cfg.prediction_family, ParameterFamily::linear());
    EXPECT_EQ(cfg.lambda, std::vector<double>{0.5});
    EXPECT_EQ(cfg.mode, SpaceMode::Symmetric);
    EXPECT_EQ(cfg.gibbs.iterations, 10000u);
    EXPECT_EQ(cfg.gibbs.burn_in, 1000u);
}

TEST(Config, ErrorsNameTheKey) {
    EXPECT_EQ(error_key("family = linear\n"), "semantics");
    EXPECT_EQ(error_key("semantics = complete\n"), "family");
    EXPECT_EQ(error_key("semantics = complete\nfamily = exponential\n"), "w");
    EXPECT_EQ(error_key("semantics = complete\nfamily = linear\nw = 2\n"), "w");
    EXPECT_EQ(error_key("semantics = complete\nfamily = exponential\nw = 1\n"), "w");
    EXPECT_EQ(error_key("semantics = naive\nfamily = linear\n"), "semantics");
    EXPECT_EQ(error_key("semantics = complete\nfamily = linear\ncolour = red\n"), "colour");
    EXPECT_EQ(error_key("semantics = complete\nfamily = linear\nsemantics = stable\n"), "semantics");
    EXPECT_EQ(error_key("semantics = complete\nfamily = linear\nlambda = 1.5\n"), "lambda");
    EXPECT_EQ(error_key("semantics = complete\nfamily = linear\niterations = -1\n"), "iterations");
    EXPECT_EQ(error_key("semantics = complete\nfamily = linear\niterations = 10\nburn_in = 10\n"), "burn_in");
    EXPECT_EQ(error_key("semantics = complete\nfamily = linear\nself_loops = true\n"), "self_loops");
    EXPECT_THROW(parse_config("semantics complete\n"), SchemaError);
}

TEST(Config, Presets) {
    const auto vote = config_preset("vote-study");
    EXPECT_EQ(vote.model.semantics, Semantics::Complete);
    EXPECT_EQ(vote.model.family, ParameterFamily::exponential(100));
    EXPECT_EQ(vote.lambda, std::vector<double>{0.5});
    EXPECT_EQ(vote.gibbs.iterations, 100u);
    EXPECT_EQ(vote.gibbs.burn_in, 0u);
    EXPECT_EQ(vote.prediction_family, ParameterFamily::linear());

    const auto fig = config_preset("triangle-priors");
    EXPECT_EQ(fig.model.family, ParameterFamily::exponential(2));
    EXPECT_EQ(fig.lambda, (std::vector<double>{0.1, 0.15, 0.2}));
    const auto space = fig.make_space(3);
    EXPECT_EQ(space.prior(2), 0.2);
    EXPECT_THROW(fig.make_space(4), ConfigError);
    EXPECT_THROW(config_preset("nope"), ConfigError);
}

TEST(Config, PresetFilesMatchBuiltins) {
    const auto vote = load_config(std::string(ARGBAYES_DATA_DIR) + "/../configs/vote-study.conf");
    EXPECT_EQ(vote.model.family, config_preset("vote-study").model.family);
    EXPECT_EQ(vote.gibbs.iterations, 100u);
    const auto fig = load_config(std::string(ARGBAYES_DATA_DIR) + "/../configs/triangle-priors.conf");
    EXPECT_EQ(fig.lambda, config_preset("triangle-priors").lambda);
}
