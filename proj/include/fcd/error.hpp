#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fcd {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Mismatched grids, covariate layouts or matrix shapes.
class StructuralError : public Error {
public:
    using Error::Error;
};

/// Invalid arguments supplied by the caller (empty samples, bad orders, ...).
class UsageError : public Error {
public:
    using Error::Error;
};

/// Numerically degenerate input: zero spectra, non-PSD operators, single-class labels.
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

/// Malformed text input. Row and column are 1-based; 0 means "not applicable".
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t row = 0, std::size_t column = 0)
        : Error(format(what, row, column)), row_(row), column_(column) {}

    [[nodiscard]] std::size_t row() const noexcept { return row_; }
    [[nodiscard]] std::size_t column() const noexcept { return column_; }

private:
    static std::string format(const std::string& what, std::size_t row, std::size_t column) {
        std::string out = what;
        if (row > 0) {
            out += " (row " + std::to_string(row);
            if (column > 0) out += ", column " + std::to_string(column);
            out += ")";
        }
        return out;
    }

    std::size_t row_;
    std::size_t column_;
};

/// The requested probability level is not reached anywhere inside a family's range.
class RangeExhaustedError : public Error {
public:
    RangeExhaustedError(const std::string& what, double boundary, double boundary_probability)
        : Error(what), boundary_(boundary), boundary_probability_(boundary_probability) {}

    /// Upper end of the searched range.
    [[nodiscard]] double boundary() const noexcept { return boundary_; }
    /// Estimated probability at that boundary (always below the requested level).
    [[nodiscard]] double boundary_probability() const noexcept { return boundary_probability_; }

private:
    double boundary_;
    double boundary_probability_;
};

}  // namespace fcd
