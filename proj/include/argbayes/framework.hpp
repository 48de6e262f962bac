#pragma once

// Dung-style argumentation frameworks over dense argument indices, and
// enumeration of grounded / complete / preferred / stable extensions.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "argbayes/argset.hpp"
#include "argbayes/errors.hpp"

namespace argbayes {

enum class Semantics { Grounded, Complete, Preferred, Stable };

inline constexpr Semantics kAllSemantics[] = {Semantics::Grounded, Semantics::Complete,
                                              Semantics::Preferred, Semantics::Stable};

inline std::string_view to_string(Semantics sem) {
    switch (sem) {
        case Semantics::Grounded: return "grounded";
        case Semantics::Complete: return "complete";
        case Semantics::Preferred: return "preferred";
        case Semantics::Stable: return "stable";
    }
    return "?";
}

inline Semantics parse_semantics(std::string_view text) {
    for (Semantics sem : kAllSemantics) {
        if (text == to_string(sem)) return sem;
    }
    throw InputError("unknown semantics '" + std::string(text) +
                     "' (expected grounded, complete, preferred or stable)");
}

using Attack = std::pair<std::size_t, std::size_t>;

// Maps external argument identifiers to dense indices, once.
class ArgumentTable {
public:
    ArgumentTable() = default;

    explicit ArgumentTable(std::vector<std::string> names) : names_(std::move(names)) {
        if (names_.size() > kMaxArguments) {
            throw CapacityError("at most " + std::to_string(kMaxArguments) + " arguments supported");
        }
        for (std::size_t i = 0; i < names_.size(); ++i) {
            if (names_[i].empty()) throw InputError("empty argument name");
            if (!index_.emplace(names_[i], i).second) {
                throw InputError("duplicate argument name '" + names_[i] + "'");
            }
        }
    }

    static ArgumentTable defaults(std::size_t n) { return ArgumentTable(default_argument_names(n)); }

    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(std::size_t index) const { return names_.at(index); }

    std::optional<std::size_t> find(std::string_view name) const {
        auto it = index_.find(std::string(name));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t index_of(std::string_view name) const {
        if (auto found = find(name)) return *found;
        throw InputError("unknown argument '" + std::string(name) + "'");
    }

    std::string format(ArgSet set) const { return format_set(set, names_); }

    bool operator==(const ArgumentTable& other) const { return names_ == other.names_; }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, std::size_t> index_;
};

class Framework {
public:
    Framework() = default;

    explicit Framework(std::size_t n, bool symmetric = false)
        : n_(n), symmetric_(symmetric), attackers_(n, 0), targets_(n, 0) {
        if (n > kMaxArguments) {
            throw CapacityError("at most " + std::to_string(kMaxArguments) + " arguments supported");
        }
    }

    static Framework from_attacks(std::size_t n, const std::vector<Attack>& attacks,
                                  bool symmetric = false) {
        Framework af(n, symmetric);
        for (const auto& [from, to] : attacks) af.add_attack(from, to);
        return af;
    }

    // In symmetric mode the reverse edge is added too and self-attacks are rejected.
    void add_attack(std::size_t attacker, std::size_t target) {
        check_index(attacker);
        check_index(target);
        if (symmetric_ && attacker == target) {
            throw InputError("self-attack on argument " + std::to_string(attacker) +
                             " not allowed in a symmetric framework");
        }
        set_edge(attacker, target);
        if (symmetric_) set_edge(target, attacker);
    }

    std::size_t size() const { return n_; }
    bool symmetric() const { return symmetric_; }
    ArgSet all() const { return full_set(n_); }

    bool attacks(std::size_t attacker, std::size_t target) const {
        check_index(attacker);
        check_index(target);
        return contains(targets_[attacker], target);
    }

    ArgSet attackers_of(std::size_t target) const { return attackers_.at(target); }
    ArgSet targets_of(std::size_t attacker) const { return targets_.at(attacker); }

    // Every argument attacked by some member of s.
    ArgSet attacked_by(ArgSet s) const {
        ArgSet out = 0;
        for (std::size_t i : members(s & all())) out |= targets_[i];
        return out;
    }

    // Ordered pairs, sorted by (attacker, target).
    std::vector<Attack> attacks() const {
        std::vector<Attack> out;
        for (std::size_t a = 0; a < n_; ++a) {
            for (std::size_t b : members(targets_[a])) out.emplace_back(a, b);
        }
        return out;
    }

    std::size_t attack_count() const {
        std::size_t total = 0;
        for (ArgSet t : targets_) total += cardinality(t);
        return total;
    }

    void check_subset(ArgSet s) const {
        if (!is_subset(s, all())) {
            throw InputError("argument subset references an index >= " + std::to_string(n_));
        }
    }

    void check_index(std::size_t index) const {
        if (index >= n_) {
            throw InputError("argument index " + std::to_string(index) + " out of range (n = " +
                             std::to_string(n_) + ")");
        }
    }

    bool operator==(const Framework& other) const {
        return n_ == other.n_ && symmetric_ == other.symmetric_ && targets_ == other.targets_;
    }

private:
    void set_edge(std::size_t from, std::size_t to) {
        targets_[from] |= singleton(to);
        attackers_[to] |= singleton(from);
    }

    std::size_t n_ = 0;
    bool symmetric_ = false;
    std::vector<ArgSet> attackers_;
    std::vector<ArgSet> targets_;
};

inline bool conflict_free(const Framework& af, ArgSet s) {
    af.check_subset(s);
    return (af.attacked_by(s) & s) == 0;
}

inline bool acceptable_wrt(const Framework& af, std::size_t a, ArgSet s) {
    af.check_index(a);
    af.check_subset(s);
    return is_subset(af.attackers_of(a), af.attacked_by(s));
}

// F(S): the arguments acceptable with respect to S.
inline ArgSet characteristic(const Framework& af, ArgSet s) {
    af.check_subset(s);
    const ArgSet defeated = af.attacked_by(s);
    ArgSet out = 0;
    for (std::size_t a = 0; a < af.size(); ++a) {
        if (is_subset(af.attackers_of(a), defeated)) out |= singleton(a);
    }
    return out;
}

inline bool admissible(const Framework& af, ArgSet s) {
    return conflict_free(af, s) && is_subset(s, characteristic(af, s));
}

// Least fixed point of F, iterated from the empty set (at most n + 1 steps).
inline ArgSet grounded_extension(const Framework& af) {
    ArgSet current = 0;
    for (;;) {
        const ArgSet next = characteristic(af, current);
        if (next == current) return current;
        current = next;
    }
}

// Extensions sorted ascending by mask value.
class ExtensionSet {
public:
    ExtensionSet() = default;
    explicit ExtensionSet(std::vector<ArgSet> extensions) : extensions_(std::move(extensions)) {
        std::sort(extensions_.begin(), extensions_.end());
        extensions_.erase(std::unique(extensions_.begin(), extensions_.end()), extensions_.end());
    }

    bool contains(ArgSet s) const {
        return std::binary_search(extensions_.begin(), extensions_.end(), s);
    }
    std::size_t size() const { return extensions_.size(); }
    bool empty() const { return extensions_.empty(); }
    auto begin() const { return extensions_.begin(); }
    auto end() const { return extensions_.end(); }
    const std::vector<ArgSet>& sets() const { return extensions_; }

    bool operator==(const ExtensionSet& other) const { return extensions_ == other.extensions_; }
    bool operator<(const ExtensionSet& other) const { return extensions_ < other.extensions_; }

private:
    std::vector<ArgSet> extensions_;
};

enum class EnumerationStrategy {
    // Every one of the 2^n subsets; the reference implementation.
    Exhaustive,
    // Depth-first over conflict-free sets only.
    ConflictFreeSearch,
};

struct EnumerationLimits {
    std::size_t max_arguments = 16;
    EnumerationStrategy strategy = EnumerationStrategy::ConflictFreeSearch;
};

namespace detail {

// Calls visit(s, defeated) for every conflict-free s, where defeated = attacked_by(s).
template <typename Visit>
void for_each_conflict_free_exhaustive(const Framework& af, Visit&& visit) {
    const std::size_t n = af.size();
    const std::size_t count = std::size_t{1} << n;
    std::vector<ArgSet> defeated(count, 0);
    for (std::size_t raw = 0; raw < count; ++raw) {
        const auto s = static_cast<ArgSet>(raw);
        if (s != 0) {
            const ArgSet low = s & (~s + 1);
            defeated[raw] = defeated[s ^ low] | af.targets_of(static_cast<std::size_t>(std::countr_zero(low)));
        }
        if ((defeated[raw] & s) == 0) visit(s, defeated[raw]);
    }
}

template <typename Visit>
void conflict_free_search(const Framework& af, std::size_t next, ArgSet chosen, ArgSet defeated,
                          ArgSet blocked, Visit& visit) {
    if (next == af.size()) {
        visit(chosen, defeated);
        return;
    }
    conflict_free_search(af, next + 1, chosen, defeated, blocked, visit);
    // blocked: everything attacking or attacked by a chosen argument.
    if (contains(blocked, next)) return;
    const ArgSet targets = af.targets_of(next);
    if (contains(targets, next)) return;
    conflict_free_search(af, next + 1, chosen | singleton(next), defeated | targets,
                         blocked | targets | af.attackers_of(next), visit);
}

template <typename Visit>
void for_each_conflict_free(const Framework& af, EnumerationStrategy strategy, Visit&& visit) {
    if (strategy == EnumerationStrategy::Exhaustive) {
        for_each_conflict_free_exhaustive(af, visit);
    } else {
        conflict_free_search(af, 0, 0, 0, 0, visit);
    }
}

inline ArgSet defended(const Framework& af, ArgSet defeated) {
    ArgSet out = 0;
    for (std::size_t a = 0; a < af.size(); ++a) {
        if (is_subset(af.attackers_of(a), defeated)) out |= singleton(a);
    }
    return out;
}

inline std::vector<ArgSet> maximal_sets(std::vector<ArgSet> sets) {
    std::sort(sets.begin(), sets.end(),
              [](ArgSet x, ArgSet y) { return cardinality(x) > cardinality(y); });
    std::vector<ArgSet> out;
    for (ArgSet s : sets) {
        bool dominated = std::any_of(out.begin(), out.end(),
                                     [s](ArgSet kept) { return kept != s && is_subset(s, kept); });
        if (!dominated) out.push_back(s);
    }
    return out;
}

}  // namespace detail

inline ExtensionSet extensions(const Framework& af, Semantics sem, const EnumerationLimits& limits = {}) {
    if (af.size() > limits.max_arguments) {
        throw CapacityError("extension enumeration capped at " + std::to_string(limits.max_arguments) +
                            " arguments, framework has " + std::to_string(af.size()));
    }
    if (sem == Semantics::Grounded) return ExtensionSet({grounded_extension(af)});

    const ArgSet all = af.all();
    std::vector<ArgSet> found;
    detail::for_each_conflict_free(af, limits.strategy, [&](ArgSet s, ArgSet defeated) {
        if (sem == Semantics::Stable) {
            if ((s | defeated) == all) found.push_back(s);
            return;
        }
        // Complete: admissible (s ⊆ F(s)) and closed (F(s) ⊆ s).
        if (detail::defended(af, defeated) == s) found.push_back(s);
    });
    if (sem == Semantics::Preferred) {
        // Maximal admissible sets are exactly the maximal complete extensions.
        found = detail::maximal_sets(std::move(found));
    }
    return ExtensionSet(std::move(found));
}

}  // namespace argbayes
