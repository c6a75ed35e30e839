#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace superexp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or semantically invalid configuration text.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
        : Error(line == 0 ? what
                          : "line " + std::to_string(line) + ", column " + std::to_string(column) +
                                ": " + what),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// The eigensolver could not deliver the requested pairs.
class SolverError : public Error {
public:
    SolverError(const std::string& what, std::size_t converged)
        : Error(what + " (" + std::to_string(converged) + " pairs converged)"), converged_(converged) {}

    std::size_t converged() const noexcept { return converged_; }

private:
    std::size_t converged_;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace superexp
