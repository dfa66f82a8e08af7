#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ecometab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input table could not be read. Carries the 1-based file line and the
/// column name (empty when the problem is not tied to one column).
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::string column, const std::string& what)
        : Error(describe(line, column, what)), line_(line), column_(std::move(column)) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& column() const noexcept { return column_; }

private:
    static std::string describe(std::size_t line, const std::string& column, const std::string& what) {
        std::string out = "row " + std::to_string(line);
        if (!column.empty()) out += ", column '" + column + "'";
        return out + ": " + what;
    }

    std::size_t line_;
    std::string column_;
};

/// A requested item is not reported in some years of the analysis window.
class MissingDataError : public Error {
public:
    MissingDataError(const std::string& what, std::vector<int> years)
        : Error(what), years_(std::move(years)) {}

    const std::vector<int>& years() const noexcept { return years_; }

private:
    std::vector<int> years_;
};

class EmptyRangeError : public Error {
public:
    using Error::Error;
};

class RangeError : public Error {
public:
    using Error::Error;
};

class AlignmentError : public Error {
public:
    using Error::Error;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

class DegenerateRegressorError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation
/// (log of a non-positive value, division by a non-positive denominator, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace ecometab
