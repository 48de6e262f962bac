// Extensions of a small framework, then the posterior over its attacks after
// three acceptability observations.

#include <cstdio>

#include "argbayes/argbayes.hpp"

using namespace argbayes;

int main() {
    const ArgumentTable args({"a", "b", "c"});

    // Mutual attacks between every pair.
    const AttackSpace space(3, SpaceMode::Symmetric);
    const auto all_attacks = AttackAssignment::parse("111");
    std::printf("complete extensions:");
    for (ArgSet e : extensions(space.framework(all_attacks), Semantics::Complete)) {
        std::printf(" %s", args.format(e).c_str());
    }
    std::printf("\n");

    // Observers accepted {a}, {b} and {c} in turn.
    const RunConfig cfg = config_preset("triangle-priors");
    const AcceptabilityModel model(cfg.make_space(3), cfg.model);
    std::vector<Observation> obs;
    for (std::size_t x = 0; x < 3; ++x) obs.push_back({singleton(x), true, 1});

    const auto post = exact_posterior(obs, model);
    std::printf("posterior (attacks ab, ac, bc):\n");
    for (const auto& e : post) std::printf("  %s %.4f\n", e.assignment.to_string().c_str(), e.probability);
    std::printf("map: %s\n", map_estimate(obs, model).front().to_string().c_str());
    std::printf("p(accept {a,b}) = %.4f\n", posterior_predictive(0b011, post, model));
    return 0;
}
