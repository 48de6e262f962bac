#pragma once

// Exact inference over attack relations by enumerating every assignment of
// the free attack variables: priors, joint likelihood, posterior and its
// sequential update, ML / MAP estimation, evidence, ML prediction and the
// posterior predictive.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "argbayes/acceptability.hpp"
#include "argbayes/errors.hpp"
#include "argbayes/framework.hpp"
#include "argbayes/model.hpp"

namespace argbayes {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double safe_log(double p) { return p > 0.0 ? std::log(p) : kNegInf; }

// log of sum(exp(xs)); -inf for an empty or all -inf input.
inline double log_sum_exp(std::span<const double> xs) {
    double top = kNegInf;
    for (double x : xs) top = std::max(top, x);
    if (top == kNegInf) return kNegInf;
    double sum = 0.0;
    for (double x : xs) sum += std::exp(x - top);
    return top + std::log(sum);
}

// Product over unclamped variables of lambda_m or 1 - lambda_m.
inline double log_attack_prior(const AttackAssignment& att, const AttackSpace& space) {
    space.check(att);
    double total = 0.0;
    for (std::size_t m : space.free_variables()) {
        total += safe_log(att[m] ? space.prior(m) : 1.0 - space.prior(m));
        if (total == kNegInf) break;
    }
    return total;
}

inline double attack_prior(const AttackAssignment& att, const AttackSpace& space) {
    return std::exp(log_attack_prior(att, space));
}

inline double joint_log_likelihood(std::span<const Observation> obs, const AttackAssignment& att,
                                   const AcceptabilityModel& model) {
    return model.log_likelihood(obs, att);
}

// Uncached variant.
inline double joint_log_likelihood(std::span<const Observation> obs, const AttackAssignment& att,
                                   const AttackSpace& space, const ModelConfig& cfg) {
    space.check(att);
    const Framework af = space.framework(att);
    const ExtensionSet ext = extensions(af, cfg.semantics, cfg.limits);
    double total = 0.0;
    for (const auto& o : obs) {
        af.check_subset(o.subset);
        const double p = acceptability_likelihood(o.label, theta(o.subset, ext, space.argument_count(), cfg.family));
        if (p <= 0.0) return kNegInf;
        total += static_cast<double>(o.weight) * std::log(p);
    }
    return total;
}

enum class PosteriorKind { Exact, Sampled };

class PosteriorDistribution {
public:
    struct Entry {
        AttackAssignment assignment;
        double probability = 0.0;
        // Unnormalized log mass (exact posteriors only; NaN for sampled ones).
        double log_mass = std::numeric_limits<double>::quiet_NaN();
    };

    PosteriorDistribution() = default;

    // Normalizes exp(log_mass). Throws DegenerateEvidenceError when every mass is zero.
    static PosteriorDistribution from_log_masses(std::vector<AttackAssignment> assignments,
                                                 std::vector<double> log_masses) {
        const double log_total = log_sum_exp(log_masses);
        if (log_total == kNegInf || std::isnan(log_total)) {
            throw DegenerateEvidenceError(
                "every attack assignment has zero posterior mass; the observations contradict "
                "the model (deterministic parameters cannot absorb noise)");
        }
        PosteriorDistribution out;
        out.kind_ = PosteriorKind::Exact;
        out.entries_.reserve(assignments.size());
        for (std::size_t i = 0; i < assignments.size(); ++i) {
            out.entries_.push_back({std::move(assignments[i]), std::exp(log_masses[i] - log_total), log_masses[i]});
        }
        out.reindex();
        return out;
    }

    // Sampled distribution: probability = count / total.
    static PosteriorDistribution from_counts(const std::map<AttackAssignment, std::uint64_t>& counts) {
        std::uint64_t total = 0;
        for (const auto& [att, c] : counts) total += c;
        PosteriorDistribution out;
        out.kind_ = PosteriorKind::Sampled;
        for (const auto& [att, c] : counts) {
            out.entries_.push_back({att, static_cast<double>(c) / static_cast<double>(total),
                                    std::numeric_limits<double>::quiet_NaN()});
        }
        out.reindex();
        return out;
    }

    // Probabilities taken as given (e.g. reloaded from CSV).
    static PosteriorDistribution from_probabilities(std::vector<std::pair<AttackAssignment, double>> rows,
                                                    PosteriorKind kind) {
        PosteriorDistribution out;
        out.kind_ = kind;
        for (auto& [att, p] : rows) {
            if (!(p >= 0.0)) throw InputError("negative or NaN posterior probability");
            out.entries_.push_back({std::move(att), p, std::numeric_limits<double>::quiet_NaN()});
        }
        out.reindex();
        return out;
    }

    PosteriorKind kind() const { return kind_; }
    const std::vector<Entry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

    double probability(const AttackAssignment& att) const {
        auto it = index_.find(att);
        return it == index_.end() ? 0.0 : entries_[it->second].probability;
    }

    double total() const {
        double sum = 0.0;
        for (const auto& e : entries_) sum += e.probability;
        return sum;
    }

    // Highest probability; ties go to the lexicographically smallest assignment.
    const Entry& mode() const {
        if (entries_.empty()) throw InputError("empty posterior has no mode");
        const Entry* best = &entries_.front();
        for (const auto& e : entries_) {
            if (e.probability > best->probability ||
                (e.probability == best->probability && e.assignment < best->assignment)) {
                best = &e;
            }
        }
        return *best;
    }

private:
    void reindex() {
        index_.clear();
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (!index_.emplace(entries_[i].assignment, i).second) {
                throw InputError("duplicate assignment " + entries_[i].assignment.to_string() + " in posterior");
            }
        }
    }

    PosteriorKind kind_ = PosteriorKind::Exact;
    std::vector<Entry> entries_;
    std::unordered_map<AttackAssignment, std::size_t, AttackAssignmentHash> index_;
};

struct ExactOptions {
    std::size_t max_free_variables = 20;
    // Worker threads over disjoint index ranges; results do not depend on it.
    std::size_t workers = 1;
};

namespace detail {

inline std::uint64_t checked_assignment_count(const AttackSpace& space, const ExactOptions& opts) {
    if (space.free_count() > opts.max_free_variables) {
        throw CapacityError("exact enumeration capped at " + std::to_string(opts.max_free_variables) +
                            " free attack variables, space has " + std::to_string(space.free_count()));
    }
    return std::uint64_t{1} << space.free_count();
}

// out[i] = f(assignment_at(i)) over all consistent assignments.
template <typename F>
std::vector<double> map_assignments(const AttackSpace& space, const ExactOptions& opts, F&& f) {
    const std::uint64_t count = checked_assignment_count(space, opts);
    std::vector<double> out(count);
    auto run = [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t i = begin; i < end; ++i) out[i] = f(space.assignment_at(i));
    };
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::uint64_t>(opts.workers, count / 64 + 1));
    if (workers == 1) {
        run(0, count);
        return out;
    }
    std::vector<std::jthread> threads;
    const std::uint64_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::uint64_t begin = w * chunk;
        const std::uint64_t end = std::min<std::uint64_t>(count, begin + chunk);
        if (begin < end) threads.emplace_back(run, begin, end);
    }
    threads.clear();
    return out;
}

inline std::vector<AttackAssignment> all_assignments(const AttackSpace& space, const ExactOptions& opts) {
    const std::uint64_t count = checked_assignment_count(space, opts);
    std::vector<AttackAssignment> out;
    out.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) out.push_back(space.assignment_at(i));
    return out;
}

inline bool ties_with(double value, double best) {
    if (best == kNegInf) return value == kNegInf;
    return std::abs(value - best) <= 1e-12 * std::max(1.0, std::abs(best));
}

// Every assignment whose score ties the maximum, sorted lexicographically.
inline std::vector<AttackAssignment> argmax_set(const AttackSpace& space, const std::vector<double>& scores) {
    double best = kNegInf;
    for (double s : scores) best = std::max(best, s);
    std::vector<AttackAssignment> out;
    for (std::uint64_t i = 0; i < scores.size(); ++i) {
        if (ties_with(scores[i], best)) out.push_back(space.assignment_at(i));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detail

// p(att | obs) ∝ p(obs | att) p(att) over every assignment consistent with the clamps,
// listed in enumeration order (free variable k = bit k of the index).
inline PosteriorDistribution exact_posterior(std::span<const Observation> obs, const AcceptabilityModel& model,
                                             const ExactOptions& opts = {}) {
    const AttackSpace& space = model.space();
    std::vector<double> log_masses = detail::map_assignments(space, opts, [&](const AttackAssignment& att) {
        const double prior = log_attack_prior(att, space);
        if (prior == kNegInf) return kNegInf;
        return prior + model.log_likelihood(obs, att);
    });
    return PosteriorDistribution::from_log_masses(detail::all_assignments(space, opts), std::move(log_masses));
}

inline PosteriorDistribution exact_posterior(std::span<const Observation> obs, const AttackSpace& space,
                                             const ModelConfig& cfg, const ExactOptions& opts = {}) {
    return exact_posterior(obs, AcceptabilityModel(space, cfg), opts);
}

// Previous posterior times the likelihood of one more observation, renormalized.
inline PosteriorDistribution sequential_update(const PosteriorDistribution& post, const Observation& new_obs,
                                               const AcceptabilityModel& model) {
    if (post.kind() != PosteriorKind::Exact) {
        throw InputError("sequential_update needs an exact posterior");
    }
    std::vector<AttackAssignment> assignments;
    std::vector<double> log_masses;
    assignments.reserve(post.size());
    log_masses.reserve(post.size());
    const std::span<const Observation> one(&new_obs, 1);
    for (const auto& e : post) {
        assignments.push_back(e.assignment);
        log_masses.push_back(e.log_mass == kNegInf ? kNegInf : e.log_mass + model.log_likelihood(one, e.assignment));
    }
    return PosteriorDistribution::from_log_masses(std::move(assignments), std::move(log_masses));
}

// argmax_att p(obs | att), ties preserved and sorted lexicographically.
inline std::vector<AttackAssignment> ml_estimate(std::span<const Observation> obs, const AcceptabilityModel& model,
                                                 const ExactOptions& opts = {}) {
    const auto scores = detail::map_assignments(
        model.space(), opts, [&](const AttackAssignment& att) { return model.log_likelihood(obs, att); });
    return detail::argmax_set(model.space(), scores);
}

// argmax_att p(obs | att) p(att).
inline std::vector<AttackAssignment> map_estimate(std::span<const Observation> obs, const AcceptabilityModel& model,
                                                  const ExactOptions& opts = {}) {
    const auto scores = detail::map_assignments(model.space(), opts, [&](const AttackAssignment& att) {
        const double prior = log_attack_prior(att, model.space());
        return prior == kNegInf ? kNegInf : prior + model.log_likelihood(obs, att);
    });
    return detail::argmax_set(model.space(), scores);
}

struct LabelDistribution {
    double p0 = 0.0;
    double p1 = 0.0;
};

// Marginal likelihood of Acc_e under the attack prior: sum_att p(Acc_e | att) p(att).
inline LabelDistribution evidence(ArgSet e, const AcceptabilityModel& model, const ExactOptions& opts = {}) {
    const auto terms = detail::map_assignments(model.space(), opts, [&](const AttackAssignment& att) {
        return attack_prior(att, model.space()) * model.theta(e, att);
    });
    double p1 = 0.0;
    for (double t : terms) p1 += t;
    return {1.0 - p1, p1};
}

// Labels for every subset d (indexed by mask): 1 iff theta_{d|att} > 0.5.
// A tie at exactly 0.5 is labelled 0.
inline std::vector<bool> ml_prediction(const AttackAssignment& att, const AcceptabilityModel& model) {
    const std::size_t n = model.argument_count();
    const auto ext = model.extensions_of(att);
    std::vector<bool> labels(std::size_t{1} << n);
    for (std::size_t d = 0; d < labels.size(); ++d) {
        labels[d] = theta(static_cast<ArgSet>(d), *ext, n, model.config().family) > 0.5;
    }
    return labels;
}

// log p(acc | att) for a full labelling of every subset.
inline double labelling_log_likelihood(const std::vector<bool>& labels, const AttackAssignment& att,
                                       const AcceptabilityModel& model) {
    const std::size_t n = model.argument_count();
    if (labels.size() != (std::size_t{1} << n)) throw InputError("labelling must cover all 2^n subsets");
    const auto ext = model.extensions_of(att);
    double total = 0.0;
    for (std::size_t d = 0; d < labels.size(); ++d) {
        total += safe_log(acceptability_likelihood(labels[d], theta(static_cast<ArgSet>(d), *ext, n,
                                                                     model.config().family)));
    }
    return total;
}

// Indicator of the extension set as a labelling of every subset.
inline std::vector<bool> extension_indicator(const ExtensionSet& ext, std::size_t n) {
    std::vector<bool> labels(std::size_t{1} << n, false);
    for (ArgSet e : ext) labels[e] = true;
    return labels;
}

// p(Acc_e = 1 | obs) = sum_att theta_{e|att} post(att). The model may use a
// different parameter family from the one that produced the posterior.
inline double posterior_predictive(ArgSet e, const PosteriorDistribution& post, const AcceptabilityModel& model) {
    double p1 = 0.0;
    for (const auto& entry : post) {
        if (entry.probability > 0.0) p1 += entry.probability * model.theta(e, entry.assignment);
    }
    return p1;
}

// Deterministic inverse problem: every consistent assignment whose extension
// set equals `acc` exactly.
inline std::vector<AttackAssignment> inverse_solutions(const ExtensionSet& acc, const AcceptabilityModel& model,
                                                       const ExactOptions& opts = {}) {
    const auto& space = model.space();
    const std::uint64_t count = detail::checked_assignment_count(space, opts);
    std::vector<AttackAssignment> out;
    for (std::uint64_t i = 0; i < count; ++i) {
        AttackAssignment att = space.assignment_at(i);
        if (*model.extensions_of(att) == acc) out.push_back(std::move(att));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace argbayes
