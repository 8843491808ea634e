#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rellich/lab.hpp"
#include "rellich/profiles.hpp"
#include "rellich/quadrature.hpp"

namespace rellich {

/// Piecewise-logarithmic truncation family:
///   v_eps = 0                          on each B_{eps^2}(a_i)
///         = log(d_i/eps^2)/log(1/eps)  on eps^2 <= d_i <= eps
///         = 1                          on B_{1/eps}(0) minus the pole balls
///         = log(eps^2 |x|)/log(eps)    on 1/eps <= |x| <= 1/eps^2
///         = 0                          outside B_{1/eps^2}(0).
/// Multiplied against the borderline ground state it exhibits the vanishing
/// truncation energy behind the n = 2 non-attainment verdict.
struct CutoffFamily {
  PoleConfig config;
  double epsilon = 0.0;
};

/// Validates eps in (0, eps_max) with eps_max = min(1/2, separation/4,
/// 1/(2 max|a_i| + 1)), which keeps the five pieces disjoint.
/// Throws PreconditionViolation outside that range.
CutoffFamily make_cutoff_family(const PoleConfig& config, double epsilon);

enum class CutoffQuantity { Value, GradientNorm, Laplacian };

/// Piecewise evaluation; globally defined (returns 0 outside the ramps).
/// The ramp derivatives come from differentiating the definition directly:
///   inner: |grad v| = 1/(d log(1/eps)),   lap v = (N-2)/(d^2 log(1/eps))
///   outer: |grad v| = 1/(|x| log(1/eps)), lap v = (N-2)/(|x|^2 log(eps)).
/// Laplacian is returned signed (negative on the outer ramp).
double eval_cutoff(const CutoffFamily& fam, const Vec& x, CutoffQuantity what);

/// The three truncation-energy integrals of the n = 2 experiment, with
/// phi = phi_{4-N}:
///   I1 = int |phi lap v_eps|^2
///   I2 = int |grad phi . grad v_eps|^2
///   I3 = int |phi lap phi| |grad v_eps|^2
/// Each is a sum over the active annuli (one inner annulus per pole, one
/// outer annulus), integrated with log-uniform radial sampling.
struct CriticalityIntegrals {
  QuadResult i1, i2, i3;
  double total_variance = 0.0;  ///< var of i1+i2+i3 (shared streams per annulus)

  double total() const { return i1.estimate + i2.estimate + i3.estimate; }
  double total_std_error() const;
};

/// Stated for the two-pole experiment; any validated configuration is
/// accepted (the annulus decomposition generalizes verbatim).
CriticalityIntegrals criticality_integrals(const CutoffFamily& fam, const QuadParams& params);

/// Least-squares fit of a truncation-energy series against the decay model
///   total(eps) = c1 (log 1/eps)^{-1} + c2 eps^{N-4} (log 1/eps)^2.
/// Both basis functions vanish as eps -> 0, so the fitted model always
/// decays; consistency additionally requires a positive leading coefficient
/// and relative RMS residual below 0.2.
struct RateFit {
  double c1 = 0.0;
  double c2 = 0.0;
  double residual = 0.0;  ///< sqrt(sum (y - fit)^2 / sum y^2)
  bool consistent = false;
};

/// series = (eps, total) pairs with strictly decreasing eps.
/// Throws InsufficientData for fewer than 4 points.
RateFit rate_fit(const std::vector<std::pair<double, double>>& series, int N);

enum class CriticalityClass { PositiveCritical, NullCritical };

std::string criticality_class_name(CriticalityClass c);

/// Verdict with its numeric evidence bundle, on the regular-simplex layout:
///   n >= 3: positive-critical; evidence is the classification table (all
///           applicable families integrable) plus the sharpness ratio
///           quotient/constant at the tightest documented sweep point.
///   n  = 2: null-critical; evidence is the non-integrable families plus the
///           eps sweep of I1+I2+I3 and its decay fit.
struct CriticalityVerdict {
  CriticalityClass verdict = CriticalityClass::NullCritical;
  AttainabilityVerdict attainability;
  std::vector<FamilyRow> classification;
  double sharpness_ratio = 0.0;      ///< n >= 3 evidence
  double sharpness_ratio_err = 0.0;
  std::vector<std::pair<double, double>> sweep;  ///< n = 2 evidence: (eps, total)
  RateFit fit;                                   ///< n = 2 evidence
  std::string summary;
};

CriticalityVerdict criticality_verdict(int N, int n, const QuadParams& params = {});

}  // namespace rellich
