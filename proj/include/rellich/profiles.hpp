#pragma once

#include <string>
#include <vector>

#include "rellich/rational.hpp"

namespace rellich {

/// Exponent bookkeeping for a product of distance powers prod |x-a_i|^{e_i}:
/// near a_i the function behaves like |x-a_i|^{e_i} (all other factors
/// bounded); at infinity like |x|^{sum e_i}.
struct SingularProfile {
  std::vector<Rational> local_exponents;
  Rational infinity_exponent = Rational(0);
};

/// Builds the profile of prod |x-a_i|^{e_i}; the infinity exponent is the
/// exact rational sum of the local ones.
SingularProfile singular_profile(const std::vector<Rational>& exponents);

struct IntegrabilityVerdict {
  bool integrable = false;
  std::string reason;
};

/// L^1(R^N) test: integrable iff every local exponent is strictly above -N
/// and the infinity exponent strictly below -N.  An exponent of exactly -N
/// is a borderline logarithmic divergence; the reason names the failing
/// location ("pole a_i" or "infinity").
IntegrabilityVerdict is_integrable(const SingularProfile& profile, int N);

/// One row of the seven-family classification table.  The families are the
/// phi^2-weighted inverse powers whose linear combination is |Delta phi|^2:
///   a_i   = phi^2/d_i^4          b_ij  = phi^2/(d_i^2 d_j^2)
///   c_ij  = phi^2/(d_i^4 d_j^2)  d_ijk = phi^2/(d_i^2 d_j^2 d_k^2)
///   e_ij  = phi^2/(d_i^4 d_j^4)  f_ijkl= phi^2/(d_i^2 d_j^2 d_k^2 d_l^2)
///   g_ijk = phi^2/(d_i^4 d_j^2 d_k^2)
/// with phi = prod d_i^{(4-N)/n}.  Families needing more distinct indices
/// than n provides are inapplicable at n = 2; where a canonical repeated
/// index exists (g at n = 2, f at n = 3) the exponents are merged before
/// profiling and the note records the merge.
struct FamilyRow {
  std::string family;          ///< "a" .. "g"
  bool applicable = true;
  SingularProfile profile;     ///< meaningful only when applicable
  IntegrabilityVerdict verdict;
  std::string note;            ///< canonical indices, merges
};

/// Classification of all seven families at the given (N, n), uniform
/// exponents (4-N)/n; n >= 2, N >= 5.
std::vector<FamilyRow> classify_seven_families(int N, int n);

/// Sharp-constant attainability: attained iff every applicable family in the
/// classification is integrable (equivalently n >= 3).  The witness is the
/// exponent vector of the minimizer phi.
struct AttainabilityVerdict {
  bool attained = false;
  std::vector<Rational> witness_exponents;  ///< (4-N)/n, repeated n times
};
AttainabilityVerdict attainability_verdict(int N, int n);

}  // namespace rellich
