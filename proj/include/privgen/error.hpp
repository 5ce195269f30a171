#pragma once

#include <stdexcept>
#include <string>

namespace privgen {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input file does not match the configured schema (missing column, bad header).
struct SchemaError : Error {
    explicit SchemaError(const std::string& msg) : Error(msg) {}
};

/// A row could not be parsed; carries the 1-based line number of the offending row.
struct ParseError : Error {
    ParseError(size_t line, const std::string& msg)
        : Error("line " + std::to_string(line) + ": " + msg), line(line) {}
    size_t line;
};

/// Data violates a dataset invariant (e.g. an owner with inconsistent attributes).
struct IntegrityError : Error {
    explicit IntegrityError(const std::string& msg) : Error(msg) {}
};

/// Invalid configuration value or option combination.
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace privgen
