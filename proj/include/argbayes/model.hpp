#pragma once

// Attack variables Att_m, their Bernoulli priors and clamps, joint assignments,
// and acceptability observations.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "argbayes/argset.hpp"
#include "argbayes/errors.hpp"
#include "argbayes/framework.hpp"

namespace argbayes {

enum class SpaceMode { Directed, Symmetric };

inline std::string_view to_string(SpaceMode mode) {
    return mode == SpaceMode::Directed ? "directed" : "symmetric";
}

inline SpaceMode parse_space_mode(std::string_view text) {
    if (text == "directed") return SpaceMode::Directed;
    if (text == "symmetric") return SpaceMode::Symmetric;
    throw InputError("unknown variable-space mode '" + std::string(text) +
                     "' (expected directed or symmetric)");
}

// One value per attack variable, in AttackSpace order.
class AttackAssignment {
public:
    AttackAssignment() = default;
    explicit AttackAssignment(std::size_t size, bool value = false) : bits_(size, value) {}
    explicit AttackAssignment(std::vector<bool> bits) : bits_(std::move(bits)) {}

    // Parses "0110"; anything but '0'/'1' is an input error.
    static AttackAssignment parse(std::string_view text) {
        std::vector<bool> bits;
        bits.reserve(text.size());
        for (char c : text) {
            if (c != '0' && c != '1') {
                throw InputError("assignment bitstring may only contain 0 and 1: '" + std::string(text) + "'");
            }
            bits.push_back(c == '1');
        }
        return AttackAssignment(std::move(bits));
    }

    std::size_t size() const { return bits_.size(); }
    bool operator[](std::size_t m) const { return bits_[m]; }
    void set(std::size_t m, bool value) { bits_[m] = value; }
    const std::vector<bool>& bits() const { return bits_; }

    std::string to_string() const {
        std::string out;
        out.reserve(bits_.size());
        for (bool b : bits_) out += b ? '1' : '0';
        return out;
    }

    std::size_t hamming(const AttackAssignment& other) const {
        std::size_t d = 0;
        for (std::size_t i = 0; i < std::min(size(), other.size()); ++i) d += bits_[i] != other.bits_[i];
        return d + std::max(size(), other.size()) - std::min(size(), other.size());
    }

    bool operator==(const AttackAssignment& other) const = default;
    // Lexicographic over bits, first variable most significant.
    bool operator<(const AttackAssignment& other) const { return bits_ < other.bits_; }

private:
    std::vector<bool> bits_;
};

struct AttackAssignmentHash {
    std::size_t operator()(const AttackAssignment& a) const { return std::hash<std::vector<bool>>{}(a.bits()); }
};

// A pair of arguments; for symmetric variables from < to and the attack goes both ways.
struct AttackVariable {
    std::size_t from;
    std::size_t to;
    bool operator==(const AttackVariable&) const = default;
};

class AttackSpace {
public:
    AttackSpace() = default;

    // Directed: every ordered pair (a, b), a != b unless self_loops, row-major.
    // Symmetric: every unordered pair {a, b}, a < b, in lexicographic order,
    // so three arguments give ({a,b}, {a,c}, {b,c}).
    AttackSpace(std::size_t n_arguments, SpaceMode mode, double lambda = 0.5, bool self_loops = false)
        : n_(n_arguments), mode_(mode) {
        if (n_arguments > kMaxArguments) {
            throw CapacityError("at most " + std::to_string(kMaxArguments) + " arguments supported");
        }
        if (mode == SpaceMode::Symmetric && self_loops) {
            throw InputError("symmetric variable spaces are irreflexive");
        }
        check_lambda(lambda);
        for (std::size_t a = 0; a < n_; ++a) {
            for (std::size_t b = 0; b < n_; ++b) {
                if (mode == SpaceMode::Symmetric ? a < b : (a != b || self_loops)) {
                    variables_.push_back({a, b});
                }
            }
        }
        priors_.assign(variables_.size(), lambda);
        clamps_.assign(variables_.size(), std::nullopt);
        rebuild_free_list();
    }

    std::size_t argument_count() const { return n_; }
    SpaceMode mode() const { return mode_; }
    std::size_t size() const { return variables_.size(); }
    const std::vector<AttackVariable>& variables() const { return variables_; }
    const AttackVariable& variable(std::size_t m) const { return variables_.at(m); }

    std::optional<std::size_t> find(std::size_t from, std::size_t to) const {
        if (mode_ == SpaceMode::Symmetric && from > to) std::swap(from, to);
        for (std::size_t m = 0; m < variables_.size(); ++m) {
            if (variables_[m] == AttackVariable{from, to}) return m;
        }
        return std::nullopt;
    }

    std::size_t index_of(std::size_t from, std::size_t to) const {
        if (auto m = find(from, to)) return *m;
        throw InputError("no attack variable for pair (" + std::to_string(from) + ", " +
                         std::to_string(to) + ")");
    }

    double prior(std::size_t m) const { return priors_.at(m); }
    const std::vector<double>& priors() const { return priors_; }

    void set_prior(std::size_t m, double lambda) {
        check_lambda(lambda);
        priors_.at(m) = lambda;
    }

    void set_priors(const std::vector<double>& lambdas) {
        if (lambdas.size() != variables_.size()) {
            throw InputError("expected " + std::to_string(variables_.size()) + " prior values, got " +
                             std::to_string(lambdas.size()));
        }
        for (double l : lambdas) check_lambda(l);
        priors_ = lambdas;
    }

    // Clamped variables are known attacks (or known non-attacks); they are
    // never enumerated or resampled and contribute no prior factor.
    void clamp(std::size_t m, bool value) {
        clamps_.at(m) = value;
        rebuild_free_list();
    }
    void unclamp(std::size_t m) {
        clamps_.at(m) = std::nullopt;
        rebuild_free_list();
    }
    std::optional<bool> clamp_of(std::size_t m) const { return clamps_.at(m); }
    bool clamped(std::size_t m) const { return clamps_.at(m).has_value(); }

    // Clamps every edge of `known` to 1.
    void clamp_known(const Framework& known) {
        if (known.size() != n_) throw InputError("known-attack framework has a different argument count");
        for (const auto& [from, to] : known.attacks()) clamp(index_of(from, to), true);
    }

    const std::vector<std::size_t>& free_variables() const { return free_; }
    std::size_t free_count() const { return free_.size(); }

    void check(const AttackAssignment& att) const {
        if (att.size() != variables_.size()) {
            throw InputError("assignment has " + std::to_string(att.size()) + " bits, space has " +
                             std::to_string(variables_.size()) + " variables");
        }
        for (std::size_t m = 0; m < clamps_.size(); ++m) {
            if (clamps_[m] && att[m] != *clamps_[m]) {
                throw InputError("assignment violates clamp on variable " + std::to_string(m));
            }
        }
    }

    // Free variable k takes bit k of `index`; clamped variables take their clamp.
    // Index order therefore matches the listing order (0,0,0), (1,0,0), (0,1,0), ...
    AttackAssignment assignment_at(std::uint64_t index) const {
        AttackAssignment att = clamped_base();
        for (std::size_t k = 0; k < free_.size(); ++k) att.set(free_[k], (index >> k) & 1u);
        return att;
    }

    AttackAssignment clamped_base() const {
        AttackAssignment att(variables_.size());
        for (std::size_t m = 0; m < clamps_.size(); ++m) {
            if (clamps_[m]) att.set(m, *clamps_[m]);
        }
        return att;
    }

    Framework framework(const AttackAssignment& att) const {
        if (att.size() != variables_.size()) check(att);
        Framework af(n_, mode_ == SpaceMode::Symmetric);
        for (std::size_t m = 0; m < variables_.size(); ++m) {
            if (att[m]) af.add_attack(variables_[m].from, variables_[m].to);
        }
        return af;
    }

    // Inverse of framework(); every edge must be representable in this space.
    AttackAssignment encode(const Framework& af) const {
        if (af.size() != n_) throw InputError("framework has a different argument count");
        AttackAssignment att(variables_.size());
        for (const auto& [from, to] : af.attacks()) {
            if (mode_ == SpaceMode::Symmetric && !af.attacks(to, from)) {
                throw InputError("asymmetric attack cannot be encoded in a symmetric space");
            }
            att.set(index_of(from, to), true);
        }
        return att;
    }

    std::string describe(std::size_t m, const ArgumentTable& args) const {
        const auto& v = variables_.at(m);
        if (mode_ == SpaceMode::Symmetric) return "{" + args.name(v.from) + "," + args.name(v.to) + "}";
        return "(" + args.name(v.from) + "," + args.name(v.to) + ")";
    }

private:
    static void check_lambda(double lambda) {
        if (!(lambda >= 0.0 && lambda <= 1.0)) {
            throw InputError("attack prior must lie in [0, 1], got " + std::to_string(lambda));
        }
    }

    void rebuild_free_list() {
        free_.clear();
        for (std::size_t m = 0; m < clamps_.size(); ++m) {
            if (!clamps_[m]) free_.push_back(m);
        }
    }

    std::size_t n_ = 0;
    SpaceMode mode_ = SpaceMode::Symmetric;
    std::vector<AttackVariable> variables_;
    std::vector<double> priors_;
    std::vector<std::optional<bool>> clamps_;
    std::vector<std::size_t> free_;
};

// One acceptability datum: subset d observed with label acc_d, repeated `weight` times.
struct Observation {
    ArgSet subset = 0;
    bool label = true;
    std::uint64_t weight = 1;

    bool operator==(const Observation&) const = default;
};

// Sums the weights of identical (subset, label) pairs, first-seen order preserved.
inline std::vector<Observation> merge_observations(const std::vector<Observation>& obs) {
    std::vector<Observation> out;
    std::map<std::pair<ArgSet, bool>, std::size_t> slot;
    for (const auto& o : obs) {
        if (o.weight == 0) throw InputError("observation weight must be >= 1");
        auto [it, inserted] = slot.try_emplace({o.subset, o.label}, out.size());
        if (inserted) {
            out.push_back(o);
        } else {
            out[it->second].weight += o.weight;
        }
    }
    return out;
}

// One unit-weight observation per repetition.
inline std::vector<Observation> expand_observations(const std::vector<Observation>& obs) {
    std::vector<Observation> out;
    for (const auto& o : obs) {
        for (std::uint64_t k = 0; k < o.weight; ++k) out.push_back({o.subset, o.label, 1});
    }
    return out;
}

}  // namespace argbayes
