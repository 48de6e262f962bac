#pragma once

// File formats: vote matrices (CSV), frameworks (JSON), observation lists,
// posterior / histogram / trace / learning-curve tables (CSV).
//
// Every reader is total: it returns a value or throws SchemaError carrying the
// offending line and column. Numbers are written in the shortest decimal form
// that round-trips, independent of the global locale.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "argbayes/errors.hpp"
#include "argbayes/framework.hpp"
#include "argbayes/gibbs.hpp"
#include "argbayes/inference.hpp"
#include "argbayes/model.hpp"

namespace argbayes {

// ---------------------------------------------------------------------------
// Text helpers

inline std::string format_number(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) throw InputError("cannot format number");
    return std::string(buf, end);
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::optional<double> parse_double(std::string_view text) {
    text = trim(text);
    if (text.empty()) return std::nullopt;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

inline std::optional<std::uint64_t> parse_unsigned(std::string_view text) {
    text = trim(text);
    if (text.empty()) return std::nullopt;
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw SchemaError("cannot write '" + path + "'");
    out << content;
    if (!out) throw SchemaError("write to '" + path + "' failed");
}

// ---------------------------------------------------------------------------
// CSV

struct CsvRow {
    std::size_t line = 0;  // 1-based source line
    std::vector<std::string> fields;
};

// Comma-separated, optional double quotes ("" escapes a quote), no embedded
// newlines. Blank lines and lines starting with '#' are skipped.
inline std::vector<CsvRow> parse_csv(std::string_view text) {
    std::vector<CsvRow> rows;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (trim(line).empty() || trim(line).front() == '#') continue;

        CsvRow row{line_no, {}};
        std::string field;
        bool quoted = false;
        bool was_quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            const char c = line[i];
            if (quoted) {
                if (c == '"') {
                    if (i + 1 < line.size() && line[i + 1] == '"') {
                        field += '"';
                        ++i;
                    } else {
                        quoted = false;
                    }
                } else {
                    field += c;
                }
            } else if (c == ',') {
                row.fields.push_back(was_quoted ? field : std::string(trim(field)));
                field.clear();
                was_quoted = false;
            } else if (c == '"' && trim(field).empty()) {
                field.clear();
                quoted = true;
                was_quoted = true;
            } else if (was_quoted && c != ' ' && c != '\t') {
                throw SchemaError("unexpected character after closing quote", line_no, i + 1);
            } else if (!was_quoted) {
                field += c;
            }
        }
        if (quoted) throw SchemaError("unterminated quoted field", line_no, line.size());
        row.fields.push_back(was_quoted ? field : std::string(trim(field)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r#") == std::string::npos && trim(field) == field) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> comments;  // written as leading "# ..." lines

    std::string to_string() const {
        std::string out;
        for (const auto& c : comments) out += "# " + c + "\n";
        auto emit = [&](const std::vector<std::string>& fields) {
            for (std::size_t i = 0; i < fields.size(); ++i) {
                if (i) out += ',';
                out += csv_escape(fields[i]);
            }
            out += '\n';
        };
        emit(header);
        for (const auto& r : rows) emit(r);
        return out;
    }
};

inline void save_table(const std::string& path, const CsvTable& table) { write_file(path, table.to_string()); }

// ---------------------------------------------------------------------------
// Subset notation: argument names separated by spaces or ';', optionally in
// braces; "" and "{}" denote the empty set.

inline ArgSet parse_subset(std::string_view text, const ArgumentTable& args, std::size_t line = 0,
                           std::size_t column = 0) {
    text = trim(text);
    if (!text.empty() && text.front() == '{') {
        if (text.back() != '}') throw SchemaError("unbalanced braces in subset '" + std::string(text) + "'", line, column);
        text = text.substr(1, text.size() - 2);
    }
    ArgSet out = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t end = text.find_first_of(" ;\t", pos);
        const std::string_view name = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
        pos = end == std::string_view::npos ? text.size() : end + 1;
        if (name.empty()) continue;
        const auto index = args.find(name);
        if (!index) throw SchemaError("unknown argument '" + std::string(name) + "'", line, column);
        out |= singleton(*index);
    }
    return out;
}

inline std::string format_subset_field(ArgSet s, const ArgumentTable& args) {
    std::string out;
    for (std::size_t i : members(s)) {
        if (!out.empty()) out += ' ';
        out += args.name(i);
    }
    return out.empty() ? "{}" : out;
}

// ---------------------------------------------------------------------------
// Vote matrices

enum class Vote { Agree, Disagree, Missing };

struct VoteMatrix {
    std::vector<std::string> participants;
    ArgumentTable arguments;
    std::vector<std::vector<Vote>> cells;  // [participant][argument]
};

// Header: participant column label, then argument names. Cells: 1, 0 or empty.
inline VoteMatrix parse_votes(std::string_view text) {
    const auto rows = parse_csv(text);
    if (rows.empty()) throw SchemaError("vote file has no header row");
    const auto& header = rows.front();
    if (header.fields.size() < 2) throw SchemaError("vote header needs at least one argument column", header.line);
    VoteMatrix votes;
    std::vector<std::string> names(header.fields.begin() + 1, header.fields.end());
    try {
        votes.arguments = ArgumentTable(names);
    } catch (const Error& e) {
        throw SchemaError(std::string("vote header: ") + e.what(), header.line);
    }
    std::set<std::string> seen;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != header.fields.size()) {
            throw SchemaError("expected " + std::to_string(header.fields.size()) + " fields, found " +
                                  std::to_string(row.fields.size()),
                              row.line);
        }
        if (row.fields[0].empty()) throw SchemaError("empty participant id", row.line, 1);
        if (!seen.insert(row.fields[0]).second) {
            throw SchemaError("duplicate participant id '" + row.fields[0] + "'", row.line, 1);
        }
        std::vector<Vote> cells;
        for (std::size_t c = 1; c < row.fields.size(); ++c) {
            const std::string& f = row.fields[c];
            if (f == "1") {
                cells.push_back(Vote::Agree);
            } else if (f == "0") {
                cells.push_back(Vote::Disagree);
            } else if (f.empty()) {
                cells.push_back(Vote::Missing);
            } else {
                throw SchemaError("cell must be 1, 0 or empty, found '" + f + "'", row.line, c + 1);
            }
        }
        votes.participants.push_back(row.fields[0]);
        votes.cells.push_back(std::move(cells));
    }
    return votes;
}

inline std::string votes_to_csv(const VoteMatrix& votes, const std::vector<std::string>& comments = {}) {
    CsvTable table;
    table.comments = comments;
    table.header.push_back("participant");
    for (const auto& n : votes.arguments.names()) table.header.push_back(n);
    for (std::size_t p = 0; p < votes.participants.size(); ++p) {
        std::vector<std::string> row{votes.participants[p]};
        for (Vote v : votes.cells[p]) row.push_back(v == Vote::Agree ? "1" : v == Vote::Disagree ? "0" : "");
        table.rows.push_back(std::move(row));
    }
    return table.to_string();
}

struct ObservationConvention {
    enum class Mode { RowAsSet, CellAsSingleton };
    enum class Negatives { Ignore, IncludeAsLabel0 };

    Mode mode = Mode::RowAsSet;
    Negatives negatives = Negatives::Ignore;

    static Mode parse_mode(std::string_view text) {
        if (text == "row-as-set") return Mode::RowAsSet;
        if (text == "cell-as-singleton") return Mode::CellAsSingleton;
        throw InputError("unknown convention '" + std::string(text) + "' (expected row-as-set or cell-as-singleton)");
    }
    static Negatives parse_negatives(std::string_view text) {
        if (text == "ignore") return Negatives::Ignore;
        if (text == "include") return Negatives::IncludeAsLabel0;
        throw InputError("unknown negative-vote handling '" + std::string(text) + "' (expected ignore or include)");
    }
};

// Row-as-set: each participant contributes (agreed set, 1); with negatives
// included, also (disagreed set, 0) when that set is nonempty.
// Cell-as-singleton: each non-missing cell gives ({x}, cell value); the
// negatives setting only affects row-as-set.
// Identical observations are merged into one with summed weight.
inline std::vector<Observation> observations_from_votes(const VoteMatrix& votes, const ObservationConvention& conv) {
    const bool negatives = conv.negatives == ObservationConvention::Negatives::IncludeAsLabel0;
    std::vector<Observation> out;
    for (const auto& row : votes.cells) {
        if (conv.mode == ObservationConvention::Mode::RowAsSet) {
            ArgSet agreed = 0;
            ArgSet disagreed = 0;
            for (std::size_t a = 0; a < row.size(); ++a) {
                if (row[a] == Vote::Agree) agreed |= singleton(a);
                if (row[a] == Vote::Disagree) disagreed |= singleton(a);
            }
            out.push_back({agreed, true, 1});
            if (negatives && disagreed != 0) out.push_back({disagreed, false, 1});
        } else {
            for (std::size_t a = 0; a < row.size(); ++a) {
                if (row[a] == Vote::Agree) out.push_back({singleton(a), true, 1});
                if (row[a] == Vote::Disagree) out.push_back({singleton(a), false, 1});
            }
        }
    }
    return merge_observations(out);
}

struct LabelledObservations {
    ArgumentTable arguments;
    std::vector<Observation> observations;
};

inline LabelledObservations load_votes(const std::string& path, const ObservationConvention& conv = {}) {
    VoteMatrix votes = parse_votes(read_file(path));
    auto obs = observations_from_votes(votes, conv);
    return {std::move(votes.arguments), std::move(obs)};
}

// ---------------------------------------------------------------------------
// Observation lists: header "subset,label,weight" (weight optional).

inline std::vector<Observation> parse_observations(std::string_view text, const ArgumentTable& args) {
    const auto rows = parse_csv(text);
    if (rows.empty()) throw SchemaError("observation file has no header row");
    const auto& header = rows.front().fields;
    if (header.size() < 2 || header.size() > 3 || header[0] != "subset" || header[1] != "label" ||
        (header.size() == 3 && header[2] != "weight")) {
        throw SchemaError("observation header must be 'subset,label[,weight]'", rows.front().line);
    }
    std::vector<Observation> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != header.size()) {
            throw SchemaError("expected " + std::to_string(header.size()) + " fields", row.line);
        }
        Observation o;
        o.subset = parse_subset(row.fields[0], args, row.line, 1);
        if (row.fields[1] != "0" && row.fields[1] != "1") throw SchemaError("label must be 0 or 1", row.line, 2);
        o.label = row.fields[1] == "1";
        if (header.size() == 3) {
            const auto w = parse_unsigned(row.fields[2]);
            if (!w || *w == 0) throw SchemaError("weight must be a positive integer", row.line, 3);
            o.weight = *w;
        }
        out.push_back(o);
    }
    return merge_observations(out);
}

inline std::string observations_to_csv(const std::vector<Observation>& obs, const ArgumentTable& args) {
    CsvTable table{{"subset", "label", "weight"}, {}, {}};
    for (const auto& o : obs) {
        table.rows.push_back({format_subset_field(o.subset, args), o.label ? "1" : "0", std::to_string(o.weight)});
    }
    return table.to_string();
}

// ---------------------------------------------------------------------------
// Frameworks (JSON)

struct NamedFramework {
    ArgumentTable arguments;
    Framework framework;

    bool operator==(const NamedFramework&) const = default;
};

namespace detail {

inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

}  // namespace detail

inline NamedFramework parse_framework_json(std::string_view text) {
    using nlohmann::json;
    if (trim(text).empty()) throw SchemaError("framework file is empty");
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        auto [line, column] = detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1);
        throw SchemaError(std::string("invalid JSON: ") + e.what(), line, column);
    }
    if (!doc.is_object()) throw SchemaError("framework must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
        if (key != "arguments" && key != "attacks" && key != "symmetric") {
            throw SchemaError("unknown framework field '" + key + "'");
        }
    }
    if (!doc.contains("arguments") || !doc["arguments"].is_array()) {
        throw SchemaError("framework needs an 'arguments' array of strings");
    }
    const json& arguments = doc["arguments"];
    if (arguments.empty()) throw SchemaError("framework has no arguments");
    std::vector<std::string> names;
    for (const auto& a : arguments) {
        if (!a.is_string()) throw SchemaError("'arguments' entries must be strings");
        names.push_back(a.get<std::string>());
    }
    bool symmetric = false;
    if (doc.contains("symmetric")) {
        if (!doc["symmetric"].is_boolean()) throw SchemaError("'symmetric' must be true or false");
        symmetric = doc["symmetric"].get<bool>();
    }

    NamedFramework out;
    try {
        out.arguments = ArgumentTable(names);
        out.framework = Framework(names.size(), symmetric);
    } catch (const Error& e) {
        throw SchemaError(e.what());
    }
    if (doc.contains("attacks")) {
        if (!doc["attacks"].is_array()) throw SchemaError("'attacks' must be an array of [attacker, target] pairs");
        std::size_t k = 0;
        for (const auto& pair : doc["attacks"]) {
            const std::string where = "attacks[" + std::to_string(k++) + "]";
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string()) {
                throw SchemaError(where + " must be a 2-element array of argument names");
            }
            const auto from = out.arguments.find(pair[0].get<std::string>());
            const auto to = out.arguments.find(pair[1].get<std::string>());
            if (!from || !to) throw SchemaError(where + " names an unknown argument");
            if (out.framework.attacks(*from, *to)) throw SchemaError(where + " duplicates an earlier attack");
            try {
                out.framework.add_attack(*from, *to);
            } catch (const Error& e) {
                throw SchemaError(where + ": " + e.what());
            }
        }
    }
    return out;
}

// Symmetric frameworks store each unordered pair once, lower index first.
inline std::string framework_to_json(const NamedFramework& nf) {
    using nlohmann::json;
    json doc;
    doc["arguments"] = nf.arguments.names();
    json attacks = json::array();
    for (const auto& [from, to] : nf.framework.attacks()) {
        if (nf.framework.symmetric() && from > to) continue;
        attacks.push_back({nf.arguments.name(from), nf.arguments.name(to)});
    }
    doc["attacks"] = attacks;
    if (nf.framework.symmetric()) doc["symmetric"] = true;
    return doc.dump(2) + "\n";
}

inline NamedFramework load_framework(const std::string& path) { return parse_framework_json(read_file(path)); }

inline void save_framework(const std::string& path, const NamedFramework& nf) { write_file(path, framework_to_json(nf)); }

// ---------------------------------------------------------------------------
// Posterior, histogram and trace tables

inline CsvTable posterior_table(const PosteriorDistribution& post) {
    CsvTable table{{"assignment", "probability"}, {}, {}};
    table.comments.push_back(std::string("kind=") + (post.kind() == PosteriorKind::Exact ? "exact" : "sampled"));
    for (const auto& e : post) table.rows.push_back({e.assignment.to_string(), format_number(e.probability)});
    return table;
}

inline void save_posterior(const std::string& path, const PosteriorDistribution& post) {
    save_table(path, posterior_table(post));
}

inline PosteriorDistribution parse_posterior(std::string_view text) {
    PosteriorKind kind = PosteriorKind::Exact;
    if (text.find("# kind=sampled") != std::string_view::npos) kind = PosteriorKind::Sampled;
    const auto rows = parse_csv(text);
    if (rows.empty() || rows.front().fields != std::vector<std::string>{"assignment", "probability"}) {
        throw SchemaError("posterior header must be 'assignment,probability'", rows.empty() ? 0 : rows.front().line);
    }
    std::vector<std::pair<AttackAssignment, double>> entries;
    std::size_t width = 0;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != 2) throw SchemaError("expected 2 fields", row.line);
        AttackAssignment att;
        try {
            att = AttackAssignment::parse(row.fields[0]);
        } catch (const Error& e) {
            throw SchemaError(e.what(), row.line, 1);
        }
        if (r == 1) width = att.size();
        if (att.size() != width) throw SchemaError("assignment width differs from first row", row.line, 1);
        const auto p = parse_double(row.fields[1]);
        if (!p || !(*p >= 0.0 && *p <= 1.0)) throw SchemaError("probability must be a number in [0, 1]", row.line, 2);
        entries.emplace_back(std::move(att), *p);
    }
    try {
        return PosteriorDistribution::from_probabilities(std::move(entries), kind);
    } catch (const Error& e) {
        throw SchemaError(e.what());
    }
}

inline PosteriorDistribution load_posterior(const std::string& path) { return parse_posterior(read_file(path)); }

inline CsvTable histogram_table(const SampleHistogram& hist) {
    CsvTable table{{"assignment", "count", "probability"}, {}, {}};
    const double total = static_cast<double>(hist.total());
    for (const auto& [att, c] : hist.counts) {
        table.rows.push_back({att.to_string(), std::to_string(c), format_number(static_cast<double>(c) / total)});
    }
    return table;
}

inline CsvTable trace_table(const std::vector<std::size_t>& series) {
    CsvTable table{{"iteration", "distinct_count"}, {}, {}};
    for (std::size_t i = 0; i < series.size(); ++i) {
        table.rows.push_back({std::to_string(i + 1), std::to_string(series[i])});
    }
    return table;
}

}  // namespace argbayes
