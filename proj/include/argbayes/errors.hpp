#pragma once

#include <stdexcept>
#include <string>

namespace argbayes {

// Every failure raised by the library derives from Error so callers (the CLI
// in particular) can map the category onto an exit status.
enum class ErrorKind {
    Input,
    Schema,
    Config,
    Capacity,
    DegenerateEvidence,
    Plan,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct InputError : Error {
    explicit InputError(const std::string& what) : Error(ErrorKind::Input, what) {}
};

// Malformed files. Carries the location when one is known (1-based, 0 = n/a).
struct SchemaError : Error {
    SchemaError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
        : Error(ErrorKind::Schema, locate(what, line, column)), line(line), column(column) {}

    std::size_t line;
    std::size_t column;

private:
    static std::string locate(const std::string& what, std::size_t line, std::size_t column) {
        if (line == 0) return what;
        std::string out = "line " + std::to_string(line);
        if (column != 0) out += ", column " + std::to_string(column);
        return out + ": " + what;
    }
};

struct ConfigError : Error {
    ConfigError(const std::string& key, const std::string& what)
        : Error(ErrorKind::Config, "config key '" + key + "': " + what), key(key) {}

    std::string key;
};

struct CapacityError : Error {
    explicit CapacityError(const std::string& what) : Error(ErrorKind::Capacity, what) {}
};

struct DegenerateEvidenceError : Error {
    explicit DegenerateEvidenceError(const std::string& what)
        : Error(ErrorKind::DegenerateEvidence, what) {}
};

struct PlanError : Error {
    explicit PlanError(const std::string& what) : Error(ErrorKind::Plan, what) {}
};

}  // namespace argbayes
