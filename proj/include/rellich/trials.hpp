#pragma once

#include <memory>

#include "rellich/multipole.hpp"

namespace rellich {

/// Trial functions for quotient and identity experiments.  All three kinds
/// have finite value, gradient and Laplacian everywhere:
///   Bump(c, R): exp(-1/(1 - |x-c|^2/R^2)) on B_R(c), 0 outside, C-infinity.
///   MollifiedGroundState(s, R, delta): phi_s times a C^2 quintic-smoothstep
///     ramp in log|x-a_i| between delta/2 and delta at each pole and a C^2
///     far cutoff between |x| = R and 2R; vanishes identically inside the
///     delta/2 balls and outside 2R.
///   CutoffGroundState(eps): phi_{4-N} times the piecewise-logarithmic ramp
///     v_eps (0 inside eps^2 balls, log ramp to 1 at distance eps, 1 through
///     |x| = 1/eps, log ramp down to 0 at 1/eps^2).  Continuous, piecewise
///     smooth; its jets are the piecewise derivatives.
struct TrialFunction {
  enum class Kind { Bump, MollifiedGroundState, CutoffGroundState };

  Kind kind = Kind::Bump;
  PoleConfig config;
  double amplitude = 1.0;  ///< overall scale, handled exactly by quotients

  Vec center;              ///< Bump
  double radius = 1.0;     ///< Bump

  Rational s = Rational(0);    ///< MollifiedGroundState exponent parameter
  double far_radius = 0.0;     ///< MollifiedGroundState R
  double near_delta = 0.0;     ///< MollifiedGroundState delta

  double epsilon = 0.0;    ///< CutoffGroundState
};

TrialFunction make_bump(const PoleConfig& config, const Vec& center, double radius);

/// Throws PreconditionViolation unless 0 < delta < min separation and
/// 2*delta < R (the ramps must not collide).
TrialFunction make_mollified_ground_state(const PoleConfig& config, const Rational& s,
                                          double far_radius, double near_delta);

/// Largest admissible eps: the ramp regions must stay disjoint and inside
/// the flat region, so eps < min(1/2, separation/4, 1/(2 max|a_i| + 1)).
double cutoff_eps_max(const PoleConfig& config);

/// Throws PreconditionViolation when eps is outside (0, cutoff_eps_max).
TrialFunction make_cutoff_ground_state(const PoleConfig& config, double epsilon);

/// Copy with the amplitude multiplied by c.
TrialFunction scaled(const TrialFunction& u, double c);

/// Radius of a ball around the origin containing the support.
double support_radius(const TrialFunction& u);

/// Prepared jet evaluator; construction does the rational-to-double work
/// once, evaluation is allocation-light and thread-safe.
class TrialEvaluator {
 public:
  explicit TrialEvaluator(const TrialFunction& u);

  const TrialFunction& trial() const { return u_; }

  /// Jet including the amplitude factor.
  Jet jet(const Vec& x) const;

  /// Jet of the unit-amplitude trial; quotients use this so that scaling a
  /// trial cannot change the computed ratio even in the last bit.
  Jet unit_jet(const Vec& x) const;

 private:
  Jet bump_jet(const Vec& x) const;
  Jet mgs_jet(const Vec& x) const;
  Jet cutoff_jet(const Vec& x) const;

  TrialFunction u_;
  std::unique_ptr<GroundStateEvaluator> phi_;  // ground-state kinds
};

/// Convenience wrapper: builds an evaluator and returns jet(x).
Jet trial_jet(const TrialFunction& u, const Vec& x);

}  // namespace rellich
