#pragma once

#include <stdexcept>
#include <string>

namespace nlgame {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A contract violation on the caller's side (bad sizes, wrong label family, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// An exact method was asked to run beyond its configured state budget.
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

/// Syntax or semantic error in a game file, with 1-based position.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line, int column)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
          line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

} // namespace nlgame
