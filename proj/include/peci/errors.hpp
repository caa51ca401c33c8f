#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace peci {

/// A variable with max == min cannot be mapped onto [0,1].
struct ConstantInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// No usable slope information: fewer than two distinct sort keys, or
/// every consecutive difference was skipped.
struct DegenerateData : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Subsample size outside the valid range 3 <= k < m.
struct InvalidSubsampleSize : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Every ensemble task failed with degenerate data.
struct AllTasksDegenerate : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A closed-form bound lost all precision (erfc underflow); the base
/// method is already numerically perfect at these parameters.
struct Saturated : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Covariance factorization failed even after the jitter retry.
struct FactorizationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    std::size_t line_number;
    ParseError(const std::string& message, std::size_t line)
        : std::runtime_error(message + " (line " + std::to_string(line) + ")"),
          line_number(line) {}
};

struct TooFewRows : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace peci
