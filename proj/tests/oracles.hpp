#pragma once

// Independent reference implementations used only by tests. Nothing here
// calls into the library's semantics code.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "argbayes/argset.hpp"
#include "argbayes/framework.hpp"

namespace oracle {

using argbayes::ArgSet;

// attacks[x][y]: x attacks y.
using Matrix = std::vector<std::vector<bool>>;

inline Matrix matrix_of(const argbayes::Framework& af) {
    Matrix m(af.size(), std::vector<bool>(af.size(), false));
    for (const auto& [x, y] : af.attacks()) m[x][y] = true;
    return m;
}

inline bool in(ArgSet s, std::size_t x) { return ((s >> x) & 1u) != 0; }

inline bool conflict_free(const Matrix& att, ArgSet s) {
    for (std::size_t x = 0; x < att.size(); ++x)
        for (std::size_t y = 0; y < att.size(); ++y)
            if (in(s, x) && in(s, y) && att[x][y]) return false;
    return true;
}

// Every attacker of a is attacked by some member of s.
inline bool acceptable(const Matrix& att, std::size_t a, ArgSet s) {
    for (std::size_t b = 0; b < att.size(); ++b) {
        if (!att[b][a]) continue;
        bool countered = false;
        for (std::size_t c = 0; c < att.size(); ++c)
            if (in(s, c) && att[c][b]) countered = true;
        if (!countered) return false;
    }
    return true;
}

inline bool admissible(const Matrix& att, ArgSet s) {
    if (!conflict_free(att, s)) return false;
    for (std::size_t a = 0; a < att.size(); ++a)
        if (in(s, a) && !acceptable(att, a, s)) return false;
    return true;
}

inline bool complete(const Matrix& att, ArgSet s) {
    if (!admissible(att, s)) return false;
    for (std::size_t a = 0; a < att.size(); ++a)
        if (acceptable(att, a, s) && !in(s, a)) return false;
    return true;
}

inline bool stable(const Matrix& att, ArgSet s) {
    if (!conflict_free(att, s)) return false;
    for (std::size_t a = 0; a < att.size(); ++a) {
        if (in(s, a)) continue;
        bool hit = false;
        for (std::size_t b = 0; b < att.size(); ++b)
            if (in(s, b) && att[b][a]) hit = true;
        if (!hit) return false;
    }
    return true;
}

inline std::vector<ArgSet> all_with(const Matrix& att, bool (*pred)(const Matrix&, ArgSet)) {
    std::vector<ArgSet> out;
    for (ArgSet s = 0; s < (ArgSet{1} << att.size()); ++s)
        if (pred(att, s)) out.push_back(s);
    return out;
}

// Maximal admissible sets.
inline std::vector<ArgSet> preferred(const Matrix& att) {
    const auto adm = all_with(att, admissible);
    std::vector<ArgSet> out;
    for (ArgSet s : adm) {
        bool maximal = true;
        for (ArgSet t : adm)
            if (t != s && (s & t) == s) maximal = false;
        if (maximal) out.push_back(s);
    }
    return out;
}

// Intersection of all complete extensions.
inline std::vector<ArgSet> grounded(const Matrix& att) {
    ArgSet g = (ArgSet{1} << att.size()) - 1;
    for (ArgSet s : all_with(att, complete)) g &= s;
    return {g};
}

inline std::vector<ArgSet> extensions(const Matrix& att, argbayes::Semantics sem) {
    switch (sem) {
        case argbayes::Semantics::Grounded: return grounded(att);
        case argbayes::Semantics::Complete: return all_with(att, complete);
        case argbayes::Semantics::Preferred: return preferred(att);
        case argbayes::Semantics::Stable: return all_with(att, stable);
    }
    return {};
}

// Parameter table of the symmetric three-argument space, frozen. Rows follow the listing
// order of (att_ab, att_ac, att_bc): row r has att_ab = bit 0, att_ac = bit 1,
// att_bc = bit 2. Columns are subsets by mask: {}, {a}, {b}, {a,b}, {c}, {a,c},
// {b,c}, {a,b,c}. Entry k means linear theta = k/3 and exponential theta =
// (w^k - 1)/(w^3 - 1).
inline constexpr int kLinearThirds[8][8] = {
    // mask:  0  a  b ab  c ac bc abc
    {0, 1, 1, 2, 1, 2, 2, 3},  // (0,0,0)
    {2, 2, 2, 1, 3, 3, 3, 2},  // (1,0,0)
    {2, 2, 3, 3, 2, 1, 3, 2},  // (0,1,0)
    {3, 3, 2, 2, 2, 2, 3, 2},  // (1,1,0)
    {2, 3, 2, 3, 2, 3, 1, 2},  // (0,0,1)
    {3, 2, 3, 2, 2, 3, 2, 2},  // (1,0,1)
    {3, 2, 2, 3, 3, 2, 2, 2},  // (0,1,1)
    {3, 3, 3, 2, 3, 2, 2, 1},  // (1,1,1)
};

}  // namespace oracle
