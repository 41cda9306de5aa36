#pragma once

#include <stdexcept>
#include <string>

namespace nnl {

/// Violation of a documented precondition of an operation (caller bug):
/// bad parameter ranges, mismatched sizes, unsupported kernel classes.
struct ContractError : std::invalid_argument {
    explicit ContractError(const std::string& what) : std::invalid_argument(what) {}
};

/// A mathematical hypothesis required by the requested computation fails on the
/// given data (e.g. zero Robin denominator with nonzero boundary data, singular
/// operator where a unique solve was requested). Distinct from ContractError:
/// the call was well-formed, the data just fails the hypotheses the result needs.
struct HypothesisError : std::runtime_error {
    explicit HypothesisError(const std::string& what) : std::runtime_error(what) {}
};

/// Config-file parse/validation failure; carries the 1-based line number for
/// CLI diagnostics (0 when the error is not attached to a specific line).
struct ConfigError : std::runtime_error {
    int line = 0;
    ConfigError(const std::string& what, int line_number = 0)
        : std::runtime_error(line_number > 0 ? "line " + std::to_string(line_number) + ": " + what
                                             : what),
          line(line_number) {}
};

} // namespace nnl
