#pragma once

// Systematic-scan Gibbs sampler over the free attack variables. Each sweep
// resamples every free variable in order from its full conditional, using the
// freshest values of the others; one sample is recorded per sweep.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <map>
#include <span>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "argbayes/acceptability.hpp"
#include "argbayes/errors.hpp"
#include "argbayes/inference.hpp"
#include "argbayes/model.hpp"
#include "argbayes/random.hpp"

namespace argbayes {

struct GibbsConfig {
    std::size_t iterations = 10000;
    std::size_t burn_in = 1000;
    std::uint64_t seed = 0;
    std::size_t chains = 1;

    void validate() const {
        if (iterations == 0) throw InputError("Gibbs iterations must be positive");
        if (burn_in >= iterations) {
            throw InputError("burn-in (" + std::to_string(burn_in) + ") must be smaller than iterations (" +
                             std::to_string(iterations) + ")");
        }
        if (chains == 0) throw InputError("need at least one chain");
    }
};

struct SampleHistogram {
    // Occurrences over iterations burn_in < i <= iterations, summed over chains.
    std::map<AttackAssignment, std::uint64_t> counts;
    // traces[c][i]: sweep i + 1 of chain c produced an assignment not seen
    // earlier in that chain (burn-in included).
    std::vector<std::vector<bool>> traces;
    std::size_t iterations = 0;
    std::size_t burn_in = 0;

    std::uint64_t total() const {
        std::uint64_t sum = 0;
        for (const auto& [att, c] : counts) sum += c;
        return sum;
    }
};

struct GibbsResult {
    SampleHistogram histogram;
    PosteriorDistribution posterior;
};

struct TwoPoint {
    double p0 = 0.0;
    double p1 = 0.0;
};

// p(Att_m | all other bits of `current`, obs), normalized in log space.
inline TwoPoint gibbs_conditional(std::size_t m, const AttackAssignment& current, std::span<const Observation> obs,
                                  const AcceptabilityModel& model) {
    const AttackSpace& space = model.space();
    if (m >= space.size()) throw InputError("attack variable " + std::to_string(m) + " out of range");
    if (space.clamped(m)) throw InputError("attack variable " + std::to_string(m) + " is clamped");

    AttackAssignment att = current;
    att.set(m, false);
    const double log0 = safe_log(1.0 - space.prior(m));
    const double l0 = log0 == kNegInf ? kNegInf : log0 + model.log_likelihood(obs, att);
    att.set(m, true);
    const double log1 = safe_log(space.prior(m));
    const double l1 = log1 == kNegInf ? kNegInf : log1 + model.log_likelihood(obs, att);

    if (l0 == kNegInf && l1 == kNegInf) {
        throw DegenerateEvidenceError("both values of attack variable " + std::to_string(m) +
                                      " have zero conditional mass");
    }
    const double top = std::max(l0, l1);
    const double w0 = std::exp(l0 - top);
    const double w1 = std::exp(l1 - top);
    return {w0 / (w0 + w1), w1 / (w0 + w1)};
}

namespace detail {

struct ChainOutput {
    std::map<AttackAssignment, std::uint64_t> counts;
    std::vector<bool> trace;
};

inline constexpr std::size_t kInitialDraws = 10000;

// Uniform random free bits, redrawn until the joint mass is positive; a chain
// started at zero mass can have both conditionals vanish.
inline AttackAssignment initial_state(std::span<const Observation> obs, const AcceptabilityModel& model, Rng& rng) {
    const AttackSpace& space = model.space();
    AttackAssignment att = space.clamped_base();
    for (std::size_t draw = 0; draw < kInitialDraws; ++draw) {
        for (std::size_t m : space.free_variables()) att.set(m, coin(rng));
        const double prior = log_attack_prior(att, space);
        if (prior != kNegInf && model.log_likelihood(obs, att) != kNegInf) return att;
    }
    throw DegenerateEvidenceError("no attack assignment with positive mass found in " +
                                  std::to_string(kInitialDraws) + " random draws");
}

inline ChainOutput run_chain(std::span<const Observation> obs, const AcceptabilityModel& model,
                             const GibbsConfig& g, std::uint64_t chain) {
    const AttackSpace& space = model.space();
    Rng rng = make_rng(g.seed, chain);
    AttackAssignment att = initial_state(obs, model, rng);

    ChainOutput out;
    out.trace.reserve(g.iterations);
    std::unordered_set<AttackAssignment, AttackAssignmentHash> seen;
    for (std::size_t i = 1; i <= g.iterations; ++i) {
        for (std::size_t m : space.free_variables()) {
            const TwoPoint cond = gibbs_conditional(m, att, obs, model);
            att.set(m, uniform01(rng) < cond.p1);
        }
        out.trace.push_back(seen.insert(att).second);
        if (i > g.burn_in) ++out.counts[att];
    }
    return out;
}

}  // namespace detail

// Histogram of the post-burn-in samples and the normalized approximation of
// the posterior. Identical inputs and seed give identical output; chains use
// seeds derived from g.seed and their index.
inline GibbsResult run_gibbs(std::span<const Observation> obs, const AcceptabilityModel& model, const GibbsConfig& g) {
    g.validate();
    const std::vector<Observation> merged = merge_observations({obs.begin(), obs.end()});

    std::vector<detail::ChainOutput> chains(g.chains);
    if (g.chains == 1) {
        chains[0] = detail::run_chain(merged, model, g, 0);
    } else {
        std::vector<std::jthread> workers;
        std::vector<std::exception_ptr> errors(g.chains);
        for (std::size_t c = 0; c < g.chains; ++c) {
            workers.emplace_back([&, c] {
                try {
                    chains[c] = detail::run_chain(merged, model, g, c);
                } catch (...) {
                    errors[c] = std::current_exception();
                }
            });
        }
        workers.clear();
        for (const auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    GibbsResult result;
    result.histogram.iterations = g.iterations;
    result.histogram.burn_in = g.burn_in;
    for (auto& chain : chains) {
        for (const auto& [att, c] : chain.counts) result.histogram.counts[att] += c;
        result.histogram.traces.push_back(std::move(chain.trace));
    }
    result.posterior = PosteriorDistribution::from_counts(result.histogram.counts);
    return result;
}

// Cumulative number of distinct assignments after each iteration of one chain.
inline std::vector<std::size_t> convergence_trace(const SampleHistogram& hist, std::size_t chain = 0) {
    if (chain >= hist.traces.size()) throw InputError("no trace for chain " + std::to_string(chain));
    std::vector<std::size_t> series;
    series.reserve(hist.traces[chain].size());
    std::size_t distinct = 0;
    for (bool fresh : hist.traces[chain]) {
        distinct += fresh ? 1 : 0;
        series.push_back(distinct);
    }
    return series;
}

// Distinct assignments first seen inside each window of `window` iterations.
inline std::vector<std::size_t> new_assignments_per_window(const SampleHistogram& hist, std::size_t window,
                                                           std::size_t chain = 0) {
    if (window == 0) throw InputError("window must be positive");
    if (chain >= hist.traces.size()) throw InputError("no trace for chain " + std::to_string(chain));
    std::vector<std::size_t> out;
    const auto& trace = hist.traces[chain];
    for (std::size_t start = 0; start < trace.size(); start += window) {
        std::size_t fresh = 0;
        for (std::size_t i = start; i < std::min(trace.size(), start + window); ++i) fresh += trace[i] ? 1 : 0;
        out.push_back(fresh);
    }
    return out;
}

}  // namespace argbayes
