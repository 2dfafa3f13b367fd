#pragma once

#include <stdexcept>
#include <string>

namespace evorf {

// Bad configuration or inputs that violate a documented precondition.
// Mapped to exit code 2 by the CLI.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or unusable data files (CSV, inventory tables, corpora).
// Mapped to exit code 3 by the CLI.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Parse failure with a known line number.
class ParseError : public DataError {
public:
    ParseError(const std::string& file, long line, const std::string& msg)
        : DataError(file + ":" + std::to_string(line) + ": " + msg), line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

}  // namespace evorf
