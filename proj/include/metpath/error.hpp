#pragma once

#include <stdexcept>
#include <string>

namespace metpath {

/// Raised when caller-supplied data violates an operation's preconditions
/// (dimension mismatch, out-of-domain parameter, malformed input file).
class InputError : public std::invalid_argument {
public:
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a distance oracle or evaluator produces an invalid value
/// (NaN, negative distance). These indicate a broken fixture and are never clamped.
class EvaluationError : public std::runtime_error {
public:
    explicit EvaluationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace metpath
