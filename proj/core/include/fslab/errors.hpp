#pragma once

#include <stdexcept>
#include <string>

namespace fslab {

/// Caller passed parameters outside an operation's contract (bad exponent
/// combination, mismatched index sets, missing flag, ...).  CLI maps this to
/// exit status 2.
struct UsageError : std::invalid_argument {
    explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

/// Input data violates a mathematical precondition (support too large,
/// radius exceeding the window, non-dyadic extent, ...).
struct DomainError : std::domain_error {
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Requested scale is finer than the grid can resolve.
struct ResolutionError : DomainError {
    explicit ResolutionError(const std::string& what) : DomainError(what) {}
};

/// Request would exceed sane memory/time limits for a desk-scale run.
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

/// An experiment could not produce a usable result (degenerate fit input,
/// empty corpus, all-zero norms, ...).
struct ExperimentError : std::runtime_error {
    explicit ExperimentError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace fslab
