#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace immunize {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text. `line()` is 1-based, 0 when the error is not tied to a line.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line)
    {
    }
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Input that parses but violates a precondition (bad range, k > n, seed immunized, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// An exhaustive computation refused because it exceeds the configured size guard.
class GuardError : public Error {
public:
    GuardError(const std::string& what, double count) : Error(what), count_(count) {}
    double count() const noexcept { return count_; }

private:
    double count_;
};

} // namespace immunize
