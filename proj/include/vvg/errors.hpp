#pragma once

#include <stdexcept>
#include <string>

namespace vvg {

// Malformed or corrupt input data.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parse failure tied to a specific input line.
class ParseError : public DataError {
public:
    ParseError(int line, const std::string& message)
        : DataError("line " + std::to_string(line) + ": " + message), line_(line) {}

    int line() const { return line_; }

private:
    int line_;
};

// A request whose selected rows/days/trades came up empty.
class EmptyResultError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace vvg
