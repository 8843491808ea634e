#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "rellich/errors.hpp"
#include "rellich/lab.hpp"
#include "rellich/rng.hpp"

using namespace rellich;

namespace {

Vec e1(int N) {
  Vec v(N, 0.0);
  v[0] = 1.0;
  return v;
}

PoleConfig simplex_config(int n) { return make_config(5, regular_simplex_poles(n, 5)); }

Vec midpoint(const PoleConfig& c) {
  Vec m(c.dim, 0.0);
  for (int k = 0; k < c.dim; ++k) m[k] = 0.5 * (c.poles[0][k] + c.poles[1][k]);
  return m;
}

QuadParams fast_params(std::uint64_t seed = 20260814, long long samples = 30000) {
  QuadParams p;
  p.samples = samples;
  p.seed = seed;
  return p;
}

std::vector<Vec> sample_points(const PoleConfig& config, int count, std::uint64_t seed) {
  BatchRng rng(seed, 0);
  std::vector<Vec> pts;
  while (static_cast<int>(pts.size()) < count) {
    Vec x = rng.unit_direction(config.dim);
    const double r = 0.1 + 2.0 * rng.uniform();
    for (auto& c : x) c *= r;
    bool clear = true;
    for (const auto& a : config.poles)
      if (dist2(a, x) < 0.01) clear = false;
    if (clear) pts.push_back(std::move(x));
  }
  return pts;
}

}  // namespace

TEST_CASE("identity names are stable tokens") {
  CHECK(identity_name(IdentityId::hardy_2_1) == "hardy_2_1");
  CHECK(identity_name(IdentityId::rellich_2_2) == "rellich_2_2");
  CHECK(identity_name(IdentityId::xi_zeta_2_10) == "xi_zeta_2_10");
}

TEST_CASE("integral identities hold for the C2 trial family") {
  for (int n : {2, 3}) {
    const PoleConfig c = simplex_config(n);
    const Rational s(4 - c.dim);
    const std::vector<TrialFunction> trials = {
        make_bump(c, midpoint(c), 0.25 * c.min_separation),
        make_mollified_ground_state(c, s, 3.0 * (c.max_pole_norm + 1.0),
                                    0.05 * c.min_separation),
    };
    for (const TrialFunction& u : trials) {
      for (IdentityId id : {IdentityId::hardy_2_1, IdentityId::rellich_2_2}) {
        const ResidualReport r = check_identity(id, c, s, u, fast_params());
        INFO("n = " << n << ", " << identity_name(id));
        CHECK(r.pass);
        CHECK(r.left.samples >= 29000);  // stratified shares truncate per stratum
        CHECK(r.left.seed == 20260814);
        CHECK(r.residual == doctest::Approx(std::abs(r.left.estimate - r.right.estimate) /
                                            std::max({std::abs(r.left.estimate),
                                                      std::abs(r.right.estimate), 1e-30}))
                                .epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("the order-1 identity also holds for the cutoff trial") {
  const PoleConfig c = simplex_config(2);
  const TrialFunction u = make_cutoff_ground_state(c, 0.05);
  const ResidualReport r =
      check_identity(IdentityId::hardy_2_1, c, Rational(-1), u, fast_params());
  CHECK(r.pass);
}

TEST_CASE("the order-2 identity refuses non-C2 trials") {
  // The piecewise-log cutoff has gradient kinks: its square-Laplacian energy
  // misses the seam terms, so the identity would compare different objects.
  const PoleConfig c = simplex_config(2);
  const TrialFunction u = make_cutoff_ground_state(c, 0.05);
  CHECK_THROWS_AS(check_identity(IdentityId::rellich_2_2, c, Rational(-1), u, fast_params()),
                  PreconditionViolation);
}

TEST_CASE("pointwise exponent-table identity at 50 points") {
  const PoleConfig c = simplex_config(3);
  const ResidualReport r =
      check_identity(IdentityId::xi_zeta_2_10, c, Rational(-1), sample_points(c, 50, 77));
  CHECK(r.pass);
  CHECK(r.residual < 1e-10);
  CHECK_THROWS_AS(check_identity(IdentityId::xi_zeta_2_10, c, Rational(-1),
                                 std::vector<Vec>{}),
                  PreconditionViolation);
  // The integral identities need a trial, not a point list, and vice versa.
  CHECK_THROWS_AS(check_identity(IdentityId::hardy_2_1, c, Rational(-1),
                                 sample_points(c, 5, 78)),
                  PreconditionViolation);
  CHECK_THROWS_AS(check_identity(IdentityId::xi_zeta_2_10, c, Rational(-1),
                                 make_bump(c, midpoint(c), 0.2), fast_params()),
                  PreconditionViolation);
}

TEST_CASE("rayleigh quotient: fields, scale invariance, lower bound") {
  const PoleConfig c = simplex_config(2);
  const TrialFunction u = make_bump(c, midpoint(c), 0.25);
  const PotentialSpec vn = make_vn(c);
  const QuadParams params = fast_params(4242, 40000);

  const RatioResult q = rayleigh_quotient(u, vn, 2, params);
  CHECK(q.value == doctest::Approx(q.numerator.estimate / q.denominator.estimate)
                       .epsilon(1e-14));
  CHECK(q.std_error > 0.0);
  CHECK(q.denominator.estimate > 0.0);

  // Scaling the trial cannot move the quotient by even one bit: the
  // amplitude is dropped analytically.
  const RatioResult q7 = rayleigh_quotient(scaled(u, 7.0), vn, 2, params);
  CHECK(q7.value == q.value);
  CHECK(q7.std_error == q.std_error);

  // No trial beats the sharp constant (Rayleigh lower bound).
  const double sharp = sharp_constant(5, 2, 2).to_double();
  CHECK(q.value >= sharp - 3.0 * q.std_error);
}

TEST_CASE("lower bound holds for ground-state trials too") {
  const PoleConfig c = simplex_config(3);
  const TrialFunction u = make_mollified_ground_state(c, Rational(-1), 20.0, 0.01);
  const RatioResult q = rayleigh_quotient(u, make_vn(c), 2, fast_params(99, 60000));
  const double sharp = sharp_constant(5, 3, 2).to_double();
  CHECK(q.value >= sharp - 3.0 * q.std_error);
}

TEST_CASE("translation equivariance of quotients") {
  // Translating poles and trial together leaves the quotient unchanged up to
  // floating-point roundoff in the shifted coordinates (the sample stream is
  // identical; only the arithmetic order of the distances changes).
  const PoleConfig c = simplex_config(2);
  const TrialFunction u = make_bump(c, midpoint(c), 0.25);
  const QuadParams params = fast_params(31, 20000);
  const RatioResult q = rayleigh_quotient(u, make_vn(c), 2, params);

  Vec shift(5, 0.0);
  shift[1] = 0.375;  // dyadic shift keeps the coordinate roundoff small
  shift[4] = -1.25;
  std::vector<Vec> moved = c.poles;
  for (Vec& a : moved) a = add(a, shift);
  const PoleConfig ct = make_config(5, moved);
  const TrialFunction ut = make_bump(ct, add(midpoint(c), shift), 0.25);
  const RatioResult qt = rayleigh_quotient(ut, make_vn(ct), 2, params);

  CHECK(qt.value == doctest::Approx(q.value).epsilon(1e-9));
}

TEST_CASE("dilation covariance of the order-2 quotient") {
  const PoleConfig c = simplex_config(2);
  const TrialFunction u = make_bump(c, midpoint(c), 0.25);
  const QuadParams params = fast_params(53, 40000);
  const RatioResult q = rayleigh_quotient(u, make_vn(c), 2, params);

  const double t = 2.0;
  std::vector<Vec> scaled_poles = c.poles;
  for (Vec& a : scaled_poles) a = scale(a, t);
  const PoleConfig ct = make_config(5, scaled_poles);
  const TrialFunction ut = make_bump(ct, scale(midpoint(c), t), 0.25 * t);
  const RatioResult qt = rayleigh_quotient(ut, make_vn(ct), 2, params);

  CHECK(std::abs(qt.value - q.value) <=
        3.0 * std::sqrt(q.std_error * q.std_error + qt.std_error * qt.std_error));
}

TEST_CASE("degenerate denominators are refused") {
  // Vn with a single pole is identically zero, so the potential mass of any
  // trial vanishes.
  const PoleConfig single = make_config(5, {Vec(5, 0.0)});
  const TrialFunction u = make_bump(single, e1(5), 0.5);
  CHECK_THROWS_AS(rayleigh_quotient(u, make_vn(single), 2, fast_params(1, 2000)),
                  DegenerateDenominator);
}

TEST_CASE("order validation") {
  const PoleConfig c = simplex_config(2);
  const TrialFunction u = make_bump(c, midpoint(c), 0.25);
  CHECK_THROWS_AS(rayleigh_quotient(u, make_vn(c), 3, fast_params(1, 2000)),
                  PreconditionViolation);
}

TEST_CASE("verify_inequality margins") {
  const PoleConfig c = simplex_config(2);
  const TrialFunction u = make_bump(c, midpoint(c), 0.25);
  const PotentialSpec vn = make_vn(c);
  const QuadParams params = fast_params(17, 30000);

  const double sharp = sharp_constant(5, 2, 2).to_double();
  const MarginReport ok = verify_inequality(u, vn, sharp, 2, params);
  CHECK(ok.pass);
  CHECK(ok.margin == doctest::Approx(ok.quotient.value - sharp).epsilon(1e-14));
  CHECK(ok.lambda == sharp);

  // Sanity direction: an absurd constant must fail.
  const MarginReport absurd = verify_inequality(u, vn, 1e6, 2, params);
  CHECK_FALSE(absurd.pass);
  CHECK(absurd.margin < 0.0);
}

TEST_CASE("order-1 inequalities with their printed constants") {
  const PoleConfig c = simplex_config(2);
  const TrialFunction u = make_bump(c, midpoint(c), 0.25);
  const QuadParams params = fast_params(19, 30000);

  // W2 against (N-2)^2/n^2 = 9/4.
  CHECK(verify_inequality(u, make_w2(c), sharp_constant(5, 2, 1).to_double(), 1, params).pass);
  // W1 + W2 against ((N-2)/(n+1))^2 = 1.
  CHECK(verify_inequality(u, make_w1_plus_w2(c), 1.0, 1, params).pass);
  // The folded two-coefficient form: the s = (2-N)/2 member against 1.
  CHECK(verify_inequality(u, make_hardy_family(c, Rational(-3, 2)), 1.0, 1, params).pass);
}

TEST_CASE("supersolution check at the equality exponent") {
  const PoleConfig c = simplex_config(3);
  const SupersolutionReport r =
      supersolution_check(c, Rational(-1), sample_points(c, 1000, 7));
  CHECK(r.points == 1000);
  CHECK(r.hardy_nonneg);
  CHECK(r.rellich_nonneg);
  CHECK(r.min_hardy_slack >= 0.0);
  // phi_{4-N} solves the equality case: the bilaplacian equals the potential
  // term to roundoff at every point.
  CHECK(r.max_rellich_rel_residual < 1e-10);
}

TEST_CASE("supersolution check inside the strict range") {
  // 4-N <= s < 0 at N = 5 is [-1, 0); probe an interior exponent.
  const PoleConfig c = simplex_config(2);
  const SupersolutionReport r =
      supersolution_check(c, Rational(-1, 2), sample_points(c, 1000, 8));
  CHECK(r.hardy_nonneg);
  CHECK(r.rellich_nonneg);
  CHECK(r.max_rellich_rel_residual < 1e-10);
}

TEST_CASE("supersolution preconditions") {
  const PoleConfig c = simplex_config(2);
  const auto pts = sample_points(c, 10, 9);
  CHECK_THROWS_AS(supersolution_check(c, Rational(1), pts), PreconditionViolation);
  CHECK_THROWS_AS(supersolution_check(c, Rational(0), pts), PreconditionViolation);
  CHECK_THROWS_AS(supersolution_check(c, Rational(-4), pts), PreconditionViolation);
  CHECK_THROWS_AS(supersolution_check(c, Rational(-1), std::vector<Vec>{}),
                  PreconditionViolation);
  const PoleConfig skew = make_config(
      5, {Vec(5, 0.0), e1(5)}, std::vector<Rational>{Rational(1, 3), Rational(2, 3)});
  CHECK_THROWS_AS(supersolution_check(skew, Rational(-1), sample_points(skew, 10, 10)),
                  PreconditionViolation);
}

TEST_CASE("sharpness probes: degenerate sweeps and preconditions") {
  const PoleConfig c2 = simplex_config(2);
  const auto single = sharpness_probe(c2, std::vector<double>{0.1}, fast_params(3, 20000));
  REQUIRE(single.size() == 1);
  CHECK(single[0].delta_or_eps == doctest::Approx(0.1));
  CHECK(single[0].far_R == 0.0);
  CHECK(single[0].quotient.value > 0.0);

  // The mollified sweep needs n >= 3.
  CHECK_THROWS_AS(sharpness_probe(c2, std::vector<std::pair<double, double>>{{0.1, 5.0}},
                                  fast_params(3, 20000)),
                  PreconditionViolation);
}

TEST_CASE("documented schedules end deep enough for the ten percent band") {
  const auto mgs = documented_mgs_schedule();
  REQUIRE(mgs.size() >= 3);
  for (size_t i = 1; i < mgs.size(); ++i) {
    CHECK(mgs[i].first < mgs[i - 1].first);
    CHECK(mgs[i].second >= mgs[i - 1].second);
  }
  CHECK(mgs.back().first <= 1e-8);

  const auto cut = documented_cutoff_schedule();
  REQUIRE(cut.size() >= 3);
  for (size_t i = 1; i < cut.size(); ++i) CHECK(cut[i] < cut[i - 1]);
}
