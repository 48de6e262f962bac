#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace argbayes {

// A set of arguments over dense indices 0..n-1, bit i set iff argument i is a
// member. Frameworks are capped well below 32 arguments.
using ArgSet = std::uint32_t;

inline constexpr std::size_t kMaxArguments = 31;

constexpr ArgSet singleton(std::size_t index) { return ArgSet{1} << index; }

constexpr ArgSet full_set(std::size_t n) {
    return n >= 32 ? ~ArgSet{0} : (ArgSet{1} << n) - 1;
}

constexpr bool contains(ArgSet set, std::size_t index) { return (set >> index) & 1u; }

constexpr bool is_subset(ArgSet inner, ArgSet outer) { return (inner & ~outer) == 0; }

constexpr std::size_t cardinality(ArgSet set) {
    return static_cast<std::size_t>(std::popcount(set));
}

inline std::vector<std::size_t> members(ArgSet set) {
    std::vector<std::size_t> out;
    while (set != 0) {
        out.push_back(static_cast<std::size_t>(std::countr_zero(set)));
        set &= set - 1;
    }
    return out;
}

// Default display names: a, b, ..., z, then a1, b1, ...
inline std::string default_argument_name(std::size_t index) {
    std::string name(1, static_cast<char>('a' + index % 26));
    if (index >= 26) name += std::to_string(index / 26);
    return name;
}

inline std::vector<std::string> default_argument_names(std::size_t n) {
    std::vector<std::string> names;
    names.reserve(n);
    for (std::size_t i = 0; i < n; ++i) names.push_back(default_argument_name(i));
    return names;
}

// "{a,c}" / "{}" rendering.
inline std::string format_set(ArgSet set, const std::vector<std::string>& names) {
    std::string out = "{";
    bool first = true;
    for (std::size_t i : members(set)) {
        if (!first) out += ',';
        out += i < names.size() ? names[i] : default_argument_name(i);
        first = false;
    }
    return out + "}";
}

}  // namespace argbayes
