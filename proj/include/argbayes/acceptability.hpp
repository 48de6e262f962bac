#pragma once

// Acceptability parameters theta_{d|att}: the probability that subset d is
// labelled acceptable when the attack relation is att. All three parameter
// families depend on the best agreement tp + tn between d and an extension.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "argbayes/argset.hpp"
#include "argbayes/errors.hpp"
#include "argbayes/framework.hpp"
#include "argbayes/lru_cache.hpp"
#include "argbayes/model.hpp"

namespace argbayes {

enum class FamilyKind { Deterministic, Linear, Exponential };

inline std::string_view to_string(FamilyKind kind) {
    switch (kind) {
        case FamilyKind::Deterministic: return "deterministic";
        case FamilyKind::Linear: return "linear";
        case FamilyKind::Exponential: return "exponential";
    }
    return "?";
}

class ParameterFamily {
public:
    static ParameterFamily deterministic() { return ParameterFamily(FamilyKind::Deterministic, 0.0); }
    static ParameterFamily linear() { return ParameterFamily(FamilyKind::Linear, 0.0); }
    static ParameterFamily exponential(double w) {
        if (!(w > 1.0) || !std::isfinite(w)) {
            throw InputError("exponential parameter needs a finite w > 1, got " + std::to_string(w));
        }
        return ParameterFamily(FamilyKind::Exponential, w);
    }

    // `w` is only consulted for the exponential family.
    static ParameterFamily parse(std::string_view kind, double w = 0.0) {
        if (kind == "deterministic") return deterministic();
        if (kind == "linear") return linear();
        if (kind == "exponential") return exponential(w);
        throw InputError("unknown parameter family '" + std::string(kind) +
                         "' (expected deterministic, linear or exponential)");
    }

    FamilyKind kind() const { return kind_; }
    double w() const { return w_; }

    std::string describe() const {
        if (kind_ != FamilyKind::Exponential) return std::string(to_string(kind_));
        char buf[64];
        std::snprintf(buf, sizeof buf, "exponential(w=%g)", w_);
        return buf;
    }

    bool operator==(const ParameterFamily&) const = default;

private:
    ParameterFamily(FamilyKind kind, double w) : kind_(kind), w_(w) {}

    FamilyKind kind_;
    double w_;
};

struct ModelConfig {
    Semantics semantics = Semantics::Complete;
    ParameterFamily family = ParameterFamily::exponential(2.0);
    EnumerationLimits limits{};
};

struct AgreementCount {
    std::size_t tp = 0;
    std::size_t tn = 0;

    std::size_t total() const { return tp + tn; }
    bool operator==(const AgreementCount&) const = default;
};

inline AgreementCount agreement(ArgSet e, ArgSet d, std::size_t n) {
    const ArgSet all = full_set(n);
    if (!is_subset(e, all) || !is_subset(d, all)) {
        throw InputError("agreement: subset references an index >= " + std::to_string(n));
    }
    return {cardinality(e & d), cardinality(all & ~e & ~d)};
}

// max over extensions of tp + tn; nullopt when there is no extension.
inline std::optional<std::size_t> best_agreement(ArgSet d, const ExtensionSet& ext, std::size_t n) {
    if (ext.empty()) return std::nullopt;
    const ArgSet all = full_set(n);
    std::size_t best = 0;
    for (ArgSet e : ext) {
        best = std::max(best, n - cardinality((e ^ d) & all));
        if (best == n) break;
    }
    return best;
}

// (w^x - 1) / (w^n - 1), evaluated without cancellation near w = 1 and
// without overflow for large n log w.
inline double exponential_ratio(std::size_t x, std::size_t n, double w) {
    if (x >= n) return 1.0;
    if (x == 0) return 0.0;
    const double log_w = std::log1p(w - 1.0);
    const double dx = static_cast<double>(x);
    const double dn = static_cast<double>(n);
    if (dn * log_w < 700.0) return std::expm1(dx * log_w) / std::expm1(dn * log_w);
    return std::exp((dx - dn) * log_w) * (std::expm1(-dx * log_w) / std::expm1(-dn * log_w));
}

// theta from the best agreement; an empty extension set gives 0.
inline double theta_from_agreement(std::optional<std::size_t> best, std::size_t n,
                                   const ParameterFamily& family) {
    if (!best) return 0.0;
    const std::size_t x = *best;
    switch (family.kind()) {
        case FamilyKind::Deterministic: return x == n ? 1.0 : 0.0;
        case FamilyKind::Linear: return n == 0 ? 1.0 : static_cast<double>(x) / static_cast<double>(n);
        case FamilyKind::Exponential: return exponential_ratio(x, n, family.w());
    }
    return 0.0;
}

inline double theta(ArgSet d, const ExtensionSet& ext, std::size_t n, const ParameterFamily& family) {
    return theta_from_agreement(best_agreement(d, ext, n), n, family);
}

// Uncached: enumerates the extensions of att's framework every call.
inline double theta(ArgSet d, const AttackAssignment& att, const AttackSpace& space, const ModelConfig& cfg) {
    space.check(att);
    const Framework af = space.framework(att);
    af.check_subset(d);
    return theta(d, extensions(af, cfg.semantics, cfg.limits), space.argument_count(), cfg.family);
}

inline double acceptability_likelihood(bool label, double theta_value) {
    return label ? theta_value : 1.0 - theta_value;
}

inline double acceptability_likelihood(bool label, ArgSet d, const AttackAssignment& att,
                                       const AttackSpace& space, const ModelConfig& cfg) {
    return acceptability_likelihood(label, theta(d, att, space, cfg));
}

struct CacheOptions {
    std::size_t extension_capacity = std::size_t{1} << 15;
    std::size_t theta_capacity = std::size_t{1} << 16;
};

// A variable space and configuration bound together with memoized extension
// sets (per assignment) and theta values (per assignment and subset). Safe to
// share between threads; cached and uncached results are identical.
class AcceptabilityModel {
public:
    AcceptabilityModel(AttackSpace space, ModelConfig cfg, CacheOptions cache = {})
        : space_(std::move(space)),
          cfg_(cfg),
          extension_cache_(std::make_unique<ExtensionCache>(cache.extension_capacity)),
          theta_cache_(std::make_unique<ThetaCache>(cache.theta_capacity)) {
        if (space_.argument_count() > cfg_.limits.max_arguments) {
            throw CapacityError("extension enumeration capped at " + std::to_string(cfg_.limits.max_arguments) +
                                " arguments, model has " + std::to_string(space_.argument_count()));
        }
    }

    // Same space, different parameter family; caches are not shared.
    AcceptabilityModel with_family(const ParameterFamily& family) const {
        ModelConfig cfg = cfg_;
        cfg.family = family;
        return AcceptabilityModel(space_, cfg);
    }

    const AttackSpace& space() const { return space_; }
    const ModelConfig& config() const { return cfg_; }
    std::size_t argument_count() const { return space_.argument_count(); }

    std::shared_ptr<const ExtensionSet> extensions_of(const AttackAssignment& att) const {
        return extension_cache_->get_or_compute(att, [&] {
            space_.check(att);
            return std::make_shared<const ExtensionSet>(
                extensions(space_.framework(att), cfg_.semantics, cfg_.limits));
        });
    }

    double theta(ArgSet d, const AttackAssignment& att) const {
        if (!is_subset(d, full_set(argument_count()))) {
            throw InputError("subset references an index >= " + std::to_string(argument_count()));
        }
        return theta_cache_->get_or_compute(ThetaKey{att, d}, [&] {
            return argbayes::theta(d, *extensions_of(att), argument_count(), cfg_.family);
        });
    }

    double likelihood(const Observation& obs, const AttackAssignment& att) const {
        return acceptability_likelihood(obs.label, theta(obs.subset, att));
    }

    // Sum over observations of weight * log p(acc_d | att); -inf on any zero factor.
    double log_likelihood(std::span<const Observation> obs, const AttackAssignment& att) const {
        double total = 0.0;
        for (const auto& o : obs) {
            const double p = likelihood(o, att);
            if (p <= 0.0) return -HUGE_VAL;
            total += static_cast<double>(o.weight) * std::log(p);
        }
        return total;
    }

    std::size_t cached_extension_sets() const { return extension_cache_->size(); }
    std::size_t cached_thetas() const { return theta_cache_->size(); }

private:
    struct ThetaKey {
        AttackAssignment att;
        ArgSet d;
        bool operator==(const ThetaKey&) const = default;
    };
    struct ThetaKeyHash {
        std::size_t operator()(const ThetaKey& k) const {
            return AttackAssignmentHash{}(k.att) * 0x9E3779B97F4A7C15ull ^ std::hash<ArgSet>{}(k.d);
        }
    };
    using ExtensionCache = LruCache<AttackAssignment, std::shared_ptr<const ExtensionSet>, AttackAssignmentHash>;
    using ThetaCache = LruCache<ThetaKey, double, ThetaKeyHash>;

    AttackSpace space_;
    ModelConfig cfg_;
    std::unique_ptr<ExtensionCache> extension_cache_;
    std::unique_ptr<ThetaCache> theta_cache_;
};

}  // namespace argbayes
