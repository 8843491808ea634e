#pragma once

#include <optional>
#include <vector>

#include "rellich/errors.hpp"
#include "rellich/geometry.hpp"
#include "rellich/rational.hpp"

namespace rellich {

/// Validated multipole configuration: N >= 5, pairwise-distinct poles a_i,
/// nonnegative rational weights alpha_i summing exactly to one.
/// Immutable after construction; safe to share read-only across threads.
struct PoleConfig {
  int dim = 0;                            ///< ambient dimension N
  std::vector<Vec> poles;                 ///< n distinct points in R^N
  std::vector<Rational> weights;          ///< alpha_i, exact
  std::vector<double> weights_d;          ///< alpha_i as doubles (cache)
  std::vector<std::vector<double>> pair_dist2;  ///< |a_i - a_j|^2
  double min_separation = 0.0;            ///< min over pairs of |a_i - a_j|
  double max_pole_norm = 0.0;             ///< max_i |a_i|
  double exclusion_radius = 1e-12;        ///< EvalAtPole guard radius

  int n() const { return static_cast<int>(poles.size()); }
};

/// Builds and validates a configuration.  Default weights are uniform 1/n.
/// Throws DimensionTooSmall (N <= 4), DuplicatePoles, BadWeights.
PoleConfig make_config(int N, std::vector<Vec> poles,
                       std::optional<std::vector<Rational>> weights = std::nullopt,
                       double exclusion_radius = 1e-12);

/// n pole locations with unit pairwise distance, embedded in the first n-1
/// coordinates of R^N (vertices of a regular (n-1)-simplex).
std::vector<Vec> regular_simplex_poles(int n, int N);

/// x -> prod_i |x - a_i|^{e_i}.  With e_i = s*alpha_i this is the ground
/// state power product phi_s.
struct PowerProduct {
  PoleConfig config;
  std::vector<double> exponents;
};

/// phi_s as a PowerProduct (exponents s*alpha_i).
PowerProduct ground_state(const PoleConfig& config, const Rational& s);

/// Value of the product, computed in log space (sum of e_i log|x-a_i|, then
/// one exponential) so widely spread distances cannot overflow.
/// Throws EvalAtPole within the exclusion radius of any pole.
double eval_power_product(const PowerProduct& pp, const Vec& x);

/// Squared distances |x - a_i|^2 for all poles; the shared preamble of every
/// pointwise evaluator.  Throws EvalAtPole inside the exclusion radius.
std::vector<double> squared_distances(const PoleConfig& config, const Vec& x);

/// Value, gradient and Laplacian bundle of a scalar field at a point.
struct Jet {
  double value = 0.0;
  Vec grad;
  double lap = 0.0;
};

/// Jet of a general power product:
///   grad f = f * sum_i e_i (x-a_i)/|x-a_i|^2
///   lap  f = f * [ sum_i e_i(e_i+N-2)/d_i^2
///                  + sum_{i != j} e_i e_j (x-a_i).(x-a_j)/(d_i^2 d_j^2) ]
Jet power_product_jet(const PowerProduct& pp, const Vec& x);

/// Delta phi_s(x) by the closed form
///   phi_s * ( s(N+s-2) sum_i alpha_i/d_i^2
///             - s^2 sum_{i<j} alpha_i alpha_j |a_i-a_j|^2/(d_i^2 d_j^2) ).
double laplacian_phi_s(const PoleConfig& config, const Rational& s, const Vec& x);

/// Exponent redistribution tables behind the iterated-Laplacian closed forms:
///   xi_{k,i}    = (s alpha_k - 2)/(s-2) if k == i, else s alpha_k/(s-2)
///   zeta_{k,i,j}= (s alpha_k - 2)/(s-4) if k in {i,j}, else s alpha_k/(s-4)
/// Every xi column and every zeta_{.,i,j} slice sums to exactly 1.
struct ExponentTables {
  Rational s;
  std::vector<std::vector<Rational>> xi;                 ///< xi[k][i]
  std::vector<std::vector<std::vector<Rational>>> zeta;  ///< zeta[k][i][j], i<j
};

/// Fills the tables in exact rational arithmetic.
/// Throws DegenerateS when s is 2 or 4 (denominators vanish).
ExponentTables exponent_tables(const PoleConfig& config, const Rational& s);

/// Delta^2 phi_s(x) by the three-term closed form
///   phi_s * [ s(N+s-2)(s-2)(N+s-4) sum_i (alpha_i/d_i^2) sum_k xi_{k,i}/d_k^2
///           + 2s^2(s-4)(4-N-s) sum_{i<j} alpha_i alpha_j w_ij sum_k zeta_{k,i,j}/d_k^2
///           + s^2(s-4)^2 sum_{i<j} alpha_i alpha_j w_ij
///                         sum_{k<l} zeta_{k,i,j} zeta_{l,i,j} w_kl ]
/// with w_ij = |a_i-a_j|^2/(d_i^2 d_j^2).  The last factor uses the k,l
/// product (the symmetric reading of the pair sum).
/// Throws EvalAtPole; DegenerateS for s in {2, 4}.
double bilaplacian_phi_s(const PoleConfig& config, const Rational& s, const Vec& x);

/// Both sides of the pointwise exponent-table identity used to assemble the
/// bilaplacian closed form: the xi-double-sum side equals s(s-4)/(s-2)^2
/// times the zeta-side.  Exposed so tests and the identity checker can
/// compare the two routes independently.
///   xi_side  = sum_i (alpha_i/d_i^2) sum_{k<l} xi_{k,i} xi_{l,i} w_kl
///   zeta_side= sum_{i<j} alpha_i alpha_j w_ij sum_k zeta_{k,i,j}/d_k^2
struct XiZetaSides {
  double xi_side = 0.0;
  double zeta_side = 0.0;
  double factor = 0.0;  ///< s(s-4)/(s-2)^2
};
XiZetaSides xi_zeta_sides(const PoleConfig& config, const Rational& s, const Vec& x);

/// Delta^2 phi_s(x) / phi_s(x): the bracket of the closed form without the
/// power-product factor, finite for any x off the poles.
double bilaplacian_ratio_phi_s(const PoleConfig& config, const Rational& s, const Vec& x);

/// Prepared bilaplacian evaluator: converts the exact xi/zeta tables and the
/// three closed-form coefficients to doubles once, so per-point work is
/// O(n^2) + O(n^4) table contractions without rational arithmetic.
class BilaplacianEvaluator {
 public:
  BilaplacianEvaluator(const PoleConfig& config, const Rational& s);

  /// Delta^2 phi_s / phi_s at x.
  double ratio(const Vec& x) const;

 private:
  PoleConfig config_;
  std::vector<std::vector<double>> xi_;
  std::vector<std::vector<std::vector<double>>> zeta_;
  double c1_, c2_, c3_;
};

/// Prepared evaluator for phi_s jets in quadrature loops: caches the double
/// exponents and the two Laplacian coefficients so per-point work is O(n^2).
class GroundStateEvaluator {
 public:
  GroundStateEvaluator(const PoleConfig& config, const Rational& s);

  const PoleConfig& config() const { return config_; }
  const Rational& s() const { return s_; }

  /// log phi_s(x); finite for x off the poles.
  double log_value(const Vec& x) const;
  double value(const Vec& x) const;

  /// Value, gradient, Laplacian from the closed forms.
  Jet jet(const Vec& x) const;

  /// Laplacian over value (the potential -W_hardy direction), avoiding the
  /// product with phi_s; finite wherever x is off the poles.
  double lap_over_value(const std::vector<double>& d2) const;

 private:
  PoleConfig config_;
  Rational s_;
  double sd_;
  std::vector<double> exps_;  // s*alpha_i
  double c1_;                 // s(N+s-2)
  double c2_;                 // s^2
};

}  // namespace rellich
