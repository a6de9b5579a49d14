#pragma once

#include <stdexcept>
#include <string>

namespace gpe {

/// Argument outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Evaluation at a pole of gamma/digamma.
struct PoleError : DomainError {
    using DomainError::DomainError;
};

/// An iteration hit its cap without meeting its termination criterion.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// No evaluation branch reached the requested accuracy.
struct AccuracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Adaptive step size collapsed below the representable scale.
struct StiffnessError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Trajectory ended without firing any classification criterion.
struct AmbiguousTrajectoryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Initial eigenvalue bracket does not classify with opposite tags.
struct BracketError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Far-field matching window missing or too short.
struct WindowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Far-field amplitude estimates disperse beyond the accepted spread.
struct InstabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A moment integral diverges for the requested exponent.
struct DivergenceError : DomainError {
    using DomainError::DomainError;
};

/// Regression input is unusable (too few points or degenerate span).
struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Profile grid does not cover a region required by a bound audit.
struct CoverageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace gpe
