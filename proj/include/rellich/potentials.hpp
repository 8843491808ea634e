#pragma once

#include <vector>

#include "rellich/multipole.hpp"

namespace rellich {

/// The multipolar potentials paired with the inequalities:
///   W1        = sum_i 1/d_i^2
///   W2        = sum_{i<j} |a_i-a_j|^2/(d_i^2 d_j^2)
///   W1PlusW2  = W1 + W2 (the pairing of the (n+1)^-2 order-1 constant)
///   Vn        = sum_{i<j} w_ij sum_{k<l} nu_k nu_l w_kl with the fixed
///               order-2 table nu = (N+2n-4)/N on k in {i,j}, (N-4)/N off
///   Hardy(s)  = s(2-N-s) sum_i alpha_i/d_i^2
///               + s^2 sum_{i<j} alpha_i alpha_j w_ij   (= -Delta phi_s/phi_s)
///   Rellich(s)= the three-component order-2 family, coefficients included:
///       mu-term:    s(s-2)(2-N-s)(4-N-s)/n^2 * sum_{i,k} mu_{k,i}/(d_i^2 d_k^2)
///       sigma-term: 2s^3(4-N-s)/n^3 * sum_{i<j} w_ij sum_k sigma_{k,i,j}/d_k^2
///       nu-term:    s^2(s-4)^2/n^4 * sum_{i<j} w_ij sum_{k<l} nu_k nu_l w_kl
/// Hardy(s) is nonnegative pointwise for 2-N <= s <= (2-N)/2; the Rellich
/// family for 4-N <= s < 0.  Construction accepts any s outside {2,4} so
/// identity checks can probe the whole family.
struct PotentialSpec {
  enum class Kind { W1, W2, W1PlusW2, Vn, Hardy, Rellich };
  enum class RellichPart { Mu, Sigma, Nu, All };

  Kind kind = Kind::W1;
  PoleConfig config;
  Rational s = Rational(0);
  RellichPart part = RellichPart::All;

  // Exact coefficient tables, filled for the Rellich kinds.
  std::vector<std::vector<Rational>> mu;                 ///< mu[k][i]
  std::vector<std::vector<std::vector<Rational>>> sigma; ///< sigma[k][i][j], i<j
  std::vector<std::vector<std::vector<Rational>>> nu;    ///< nu[k][i][j], i<j
  Rational coef_mu = Rational(0);     ///< s(s-2)(2-N-s)(4-N-s)/n^2
  Rational coef_sigma = Rational(0);  ///< 2s^3(4-N-s)/n^3
  Rational coef_nu = Rational(0);     ///< s^2(s-4)^2/n^4
};

PotentialSpec make_w1(const PoleConfig& config);
PotentialSpec make_w2(const PoleConfig& config);
PotentialSpec make_w1_plus_w2(const PoleConfig& config);

/// The sharp order-2 potential of the main inequality; n = 1 gives the empty
/// sum, identically 0.  Uses only the pole geometry (the fixed nu table is
/// determined by N and n).
PotentialSpec make_vn(const PoleConfig& config);

/// -Delta phi_s / phi_s for the configured weights.
PotentialSpec make_hardy_family(const PoleConfig& config, const Rational& s);

/// The three-component order-2 family.  Stated for uniform weights; throws
/// PreconditionViolation otherwise, DegenerateS for s in {2,4}.
PotentialSpec make_rellich_family(const PoleConfig& config, const Rational& s,
                                  PotentialSpec::RellichPart part = PotentialSpec::RellichPart::All);

/// Evaluates the requested potential at x.  Throws EvalAtPole.
double potential_eval(const PotentialSpec& spec, const Vec& x);

/// Sharp constants: N^2(N-4)^2/n^4 at order 2 (needs N >= 5), (N-2)^2/n^2 at
/// order 1 (needs N >= 3); n >= 2.  Exact rationals.
/// Throws DimensionTooSmall below the order's dimension threshold.
Rational sharp_constant(int N, int n, int order);

}  // namespace rellich
