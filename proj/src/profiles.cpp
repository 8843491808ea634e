#include "rellich/profiles.hpp"

#include <map>

#include "rellich/errors.hpp"

namespace rellich {

SingularProfile singular_profile(const std::vector<Rational>& exponents) {
  SingularProfile p;
  p.local_exponents = exponents;
  for (const Rational& e : exponents) p.infinity_exponent = p.infinity_exponent + e;
  return p;
}

IntegrabilityVerdict is_integrable(const SingularProfile& profile, int N) {
  const Rational minusN(-N);
  for (size_t i = 0; i < profile.local_exponents.size(); ++i) {
    const Rational& e = profile.local_exponents[i];
    const std::string where = "pole a_" + std::to_string(i + 1);
    if (e == minusN) {
      return {false, where + ", borderline log divergence (exponent exactly -N)"};
    }
    if (e < minusN) {
      return {false, where + ": exponent " + e.str() + " below -N"};
    }
  }
  if (profile.infinity_exponent == minusN) {
    return {false, "infinity, borderline log divergence (exponent exactly -N)"};
  }
  if (!(profile.infinity_exponent < minusN)) {
    return {false, "infinity: exponent " + profile.infinity_exponent.str() +
                       " not below -N"};
  }
  return {true, "all local exponents above -N and decay at infinity below -N"};
}

namespace {

// Profile of phi^2 / prod_{i in extra} d_i^{extra[i]} with the canonical
// uniform phi exponents: local exponent at a_i is 2(4-N)/n - extra[i].
SingularProfile family_profile(int N, int n, const std::map<int, int>& extra) {
  const Rational base(2 * (4 - N), n);
  std::vector<Rational> exps(n, base);
  for (const auto& [idx, pow] : extra) exps[idx] = exps[idx] - Rational(pow);
  return singular_profile(exps);
}

FamilyRow make_row(const std::string& name, int N, int n,
                   const std::map<int, int>& extra, const std::string& note) {
  FamilyRow row;
  row.family = name;
  row.profile = family_profile(N, n, extra);
  row.verdict = is_integrable(row.profile, N);
  row.note = note;
  return row;
}

FamilyRow inapplicable_row(const std::string& name, const std::string& note) {
  FamilyRow row;
  row.family = name;
  row.applicable = false;
  row.verdict = {false, "inapplicable: " + note};
  row.note = note;
  return row;
}

}  // namespace

std::vector<FamilyRow> classify_seven_families(int N, int n) {
  if (N <= 4) throw DimensionTooSmall("classification is stated for N >= 5");
  if (n < 2) throw PreconditionViolation("classification is stated for n >= 2");

  std::vector<FamilyRow> table;
  table.push_back(make_row("a", N, n, {{0, 4}}, "indices (1)"));
  table.push_back(make_row("b", N, n, {{0, 2}, {1, 2}}, "indices (1,2)"));
  table.push_back(make_row("c", N, n, {{0, 4}, {1, 2}}, "indices (1,2)"));

  if (n >= 3) {
    table.push_back(make_row("d", N, n, {{0, 2}, {1, 2}, {2, 2}}, "indices (1,2,3)"));
  } else {
    table.push_back(inapplicable_row("d", "needs 3 distinct poles"));
  }

  table.push_back(make_row("e", N, n, {{0, 4}, {1, 4}}, "indices (1,2)"));

  if (n >= 4) {
    table.push_back(
        make_row("f", N, n, {{0, 2}, {1, 2}, {2, 2}, {3, 2}}, "indices (1,2,3,4)"));
  } else if (n == 3) {
    // Repeated index l = k, exponents merged before profiling.
    table.push_back(make_row("f", N, n, {{0, 2}, {1, 2}, {2, 4}},
                             "indices (1,2,3,3); repeated index merged"));
  } else {
    table.push_back(inapplicable_row("f", "needs 4 distinct poles"));
  }

  if (n >= 3) {
    table.push_back(make_row("g", N, n, {{0, 4}, {1, 2}, {2, 2}}, "indices (1,2,3)"));
  } else {
    // Repeated index k = j, exponents merged before profiling.
    table.push_back(make_row("g", N, n, {{0, 4}, {1, 4}},
                             "indices (1,2,2); repeated index merged"));
  }
  return table;
}

AttainabilityVerdict attainability_verdict(int N, int n) {
  const std::vector<FamilyRow> table = classify_seven_families(N, n);
  AttainabilityVerdict v;
  v.attained = true;
  for (const FamilyRow& row : table) {
    if (row.applicable && !row.verdict.integrable) v.attained = false;
  }
  v.witness_exponents.assign(n, Rational(4 - N, n));
  return v;
}

}  // namespace rellich
