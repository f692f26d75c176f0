#pragma once

#include <stdexcept>
#include <string>

namespace mrc {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidField : Error {
    using Error::Error;
};
struct InvalidTopology : Error {
    using Error::Error;
};
struct ShapeError : Error {
    using Error::Error;
};
struct IndexError : Error {
    using Error::Error;
};

/// Linear system has no solution. Carries the 0-based index of the first
/// constraint row that the candidate solution fails to satisfy.
struct NoSolution : Error {
    int constraint;
    explicit NoSolution(const std::string& msg, int constraint_row = -1)
        : Error(msg), constraint(constraint_row) {}
};
struct Underdetermined : Error {
    using Error::Error;
};

struct EmptyPattern : Error {
    using Error::Error;
};
struct NotIrreducible : Error {
    using Error::Error;
};
struct NotRegular : Error {
    using Error::Error;
};
struct ReplicationBound : Error {
    using Error::Error;
};
struct PreconditionFailed : Error {
    using Error::Error;
};

struct BadPartition : Error {
    using Error::Error;
};
struct BadRow : Error {
    using Error::Error;
};
struct NotSquare : Error {
    using Error::Error;
};
struct BadDimension : Error {
    using Error::Error;
};
struct TooLarge : Error {
    using Error::Error;
};

struct UnluckyField : Error {
    using Error::Error;
};
struct NotRecoverable : Error {
    using Error::Error;
};

/// Received word is inconsistent with the code. Carries the 0-based
/// vectorized cell index of the first violated constraint.
struct NotACodeword : Error {
    int constraint;
    explicit NotACodeword(const std::string& msg, int constraint_cell = -1)
        : Error(msg), constraint(constraint_cell) {}
};
struct DegenerateCode : Error {
    using Error::Error;
};

struct TheoremViolation : Error {
    using Error::Error;
};
struct MdsViolation : Error {
    using Error::Error;
};
struct DecompositionFailure : Error {
    using Error::Error;
};

/// Text-format parse failure with 1-based location.
struct ParseError : Error {
    int line;
    int column;
    ParseError(const std::string& msg, int line_, int column_)
        : Error(msg + " (line " + std::to_string(line_) + ", column " + std::to_string(column_) + ")"),
          line(line_),
          column(column_) {}
};

} // namespace mrc
