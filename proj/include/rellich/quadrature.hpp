#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rellich/multipole.hpp"
#include "rellich/profiles.hpp"

namespace rellich {

/// Scalar field on R^N.
using ScalarField = std::function<double(const Vec&)>;

/// Radial sampling laws for mixture importance sampling.
///   PowerBall(beta, R):  r = R U^{1/beta}, density beta r^{beta-N} /
///                        (R^beta omega_{N-1}) inside the ball
///   ParetoTail(gamma, R0): r = R0 U^{-1/gamma}, density gamma R0^gamma
///                        r^{-gamma-N} / omega_{N-1} outside radius R0
struct RadialLaw {
  enum class Kind { PowerBall, ParetoTail };
  Kind kind = Kind::PowerBall;
  double shape = 1.0;   ///< beta or gamma
  double radius = 1.0;  ///< ball radius R or tail inner radius R0
};

struct SamplerComponent {
  double weight = 0.0;  ///< mixture weight, all weights sum to 1
  Vec center;
  RadialLaw law;
};

/// Mixture importance sampler over R^N whose density is positive wherever
/// the target integrand can be nonzero: one heavy-tailed ball per singular
/// pole, one Pareto tail for infinity, one uniform bulk ball.
struct ImportanceSampler {
  int dim = 0;
  std::vector<SamplerComponent> components;
  PoleConfig config;                ///< pole-exclusion geometry
  std::vector<std::string> notes;   ///< finite-variance records per component
  /// Bound on the integral of r^{p_i} over the excluded cores, per unit
  /// local coefficient: sum_i omega_{N-1} excl^{N+p_i}/(N+p_i).
  double excluded_mass_bound = 0.0;

  /// Mixture density at x; strictly positive on the union of supports.
  double density(const Vec& x) const;
};

/// Optional overrides for the automatic geometry choices.
struct SamplerHints {
  double bulk_radius = 0.0;   ///< 0 = auto: 2(max |a_i| + 1)
  double tail_inner = 0.0;    ///< 0 = auto: half the bulk radius
  double pole_radius = 0.0;   ///< 0 = auto: half the minimum pole separation
};

/// Builds the mixture for an integrand with the given singularity profile:
/// per-pole PowerBall with beta_i = (p_i + N)/2 (halfway to the divergence
/// boundary, only for p_i < 0), ParetoTail with gamma = (-q - N)/2 + N
/// clipped to >= 1, and a uniform bulk ball; weights 0.5 poles (split
/// evenly) / 0.25 tail / 0.25 bulk, renormalized when no pole needs
/// resolving.  Throws NonIntegrableTarget when the profile fails the L^1
/// test: refusing to build is the correct answer for a divergent integral.
ImportanceSampler build_sampler(const PoleConfig& config, const SingularProfile& profile,
                                const SamplerHints& hints = {});

/// Monte-Carlo integral estimate.
struct QuadResult {
  double estimate = 0.0;
  double std_error = 0.0;
  long long samples = 0;
  std::uint64_t seed = 0;
  double excluded_mass_bound = 0.0;  ///< copied from the sampler
};

/// Joint estimate of several integrands on shared sample points; the
/// covariance of the estimators feeds paired comparisons.
struct MultiQuadResult {
  std::vector<double> estimates;
  std::vector<std::vector<double>> covariance;  ///< of the mean estimators
  long long samples = 0;
  std::uint64_t seed = 0;
};

/// Default work unit: per-batch seeding makes results bit-identical for a
/// fixed (seed, M, batch size) whatever the worker count or schedule.
inline constexpr long long kDefaultBatchSize = 8192;

/// Importance-sampling estimate of the integral of f over R^N.
/// Points inside a pole-exclusion radius contribute 0 and are counted.
/// Throws NaNEncountered if f returns a non-finite value elsewhere;
/// PreconditionViolation for M < 1000.
QuadResult mc_integrate(const ScalarField& f, const ImportanceSampler& sampler,
                        long long M, std::uint64_t seed,
                        long long batch_size = kDefaultBatchSize, int threads = 0);

/// Same sample stream, several integrands at once.
MultiQuadResult mc_integrate_multi(const std::vector<ScalarField>& fs,
                                   const ImportanceSampler& sampler, long long M,
                                   std::uint64_t seed,
                                   long long batch_size = kDefaultBatchSize,
                                   int threads = 0);

/// Exact oracle: integral of |x|^{-alpha} over B_R(0) in R^N, equal to
/// omega_{N-1} R^{N-alpha}/(N-alpha).  Throws DivergentIntegral for
/// alpha >= N.
double radial_reference_integral(int N, double alpha, double R);

/// Estimate over the annulus r_in < |x - center| < r_out with log-uniform
/// radial sampling (density 1/(omega_{N-1} L r^N), L = log(r_out/r_in)),
/// zero-variance for r^{-N} integrands.  Throws PreconditionViolation
/// unless 0 < r_in < r_out.
QuadResult annulus_integrate(const ScalarField& f, const Vec& center, double r_in,
                             double r_out, long long M, std::uint64_t seed,
                             long long batch_size = kDefaultBatchSize, int threads = 0);

/// Multi-integrand version of annulus_integrate, sharing sample points.
MultiQuadResult annulus_integrate_multi(const std::vector<ScalarField>& fs,
                                        const Vec& center, double r_in, double r_out,
                                        long long M, std::uint64_t seed,
                                        long long batch_size = kDefaultBatchSize,
                                        int threads = 0);

}  // namespace rellich
