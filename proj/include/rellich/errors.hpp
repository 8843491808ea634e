#pragma once

#include <stdexcept>
#include <string>

namespace rellich {

/// Base class for all library errors.  Every failure mode the library can
/// detect maps to a distinct subclass so callers can dispatch on type.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Ambient dimension below the supported range.
struct DimensionTooSmall : Error { using Error::Error; };

/// Two pole locations coincide exactly.
struct DuplicatePoles : Error { using Error::Error; };

/// Pole weights are negative or do not sum to one in exact arithmetic.
struct BadWeights : Error { using Error::Error; };

/// Point evaluation requested within the exclusion radius of a pole.
struct EvalAtPole : Error { using Error::Error; };

/// Exponent tables requested at a parameter where a denominator vanishes.
struct DegenerateS : Error { using Error::Error; };

/// Closed-form radial integral does not converge for the given exponent.
struct DivergentIntegral : Error { using Error::Error; };

/// Sampler construction refused: the target profile is not integrable.
struct NonIntegrableTarget : Error { using Error::Error; };

/// Integrand returned a non-finite value outside every exclusion ball.
struct NaNEncountered : Error { using Error::Error; };

/// Finite-difference step exceeds half the distance to the nearest pole.
struct StepTooLarge : Error { using Error::Error; };

/// Rayleigh denominator indistinguishable from zero at three sigma.
struct DegenerateDenominator : Error { using Error::Error; };

/// Too few data points for a requested fit.
struct InsufficientData : Error { using Error::Error; };

/// Malformed textual run configuration.
struct ConfigParseError : Error { using Error::Error; };

/// Call violates a documented precondition not covered by a named error.
struct PreconditionViolation : Error { using Error::Error; };

}  // namespace rellich
