#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "rellich/criticality.hpp"
#include "rellich/errors.hpp"
#include "rellich/rng.hpp"

using namespace rellich;

namespace {

PoleConfig two_poles() {
  Vec a(5, 0.0), b(5, 0.0);
  b[0] = 1.0;
  return make_config(5, {a, b});
}

QuadParams fast_params(std::uint64_t seed = 20260814, long long samples = 30000) {
  QuadParams p;
  p.samples = samples;
  p.seed = seed;
  return p;
}

Vec at_distance(const Vec& center, double r, const Vec& dir) {
  Vec x = center;
  for (std::size_t k = 0; k < x.size(); ++k) x[k] += r * dir[k];
  return x;
}

}  // namespace

TEST_CASE("cutoff family construction validates eps") {
  const PoleConfig c = two_poles();
  // eps_max = min(1/2, separation/4, 1/(2 max|a|+1)) = 1/4 here.
  CHECK_THROWS_AS(make_cutoff_family(c, 0.25), PreconditionViolation);
  CHECK_THROWS_AS(make_cutoff_family(c, 0.0), PreconditionViolation);
  CHECK_THROWS_AS(make_cutoff_family(c, -0.1), PreconditionViolation);
  const CutoffFamily fam = make_cutoff_family(c, 0.2);
  CHECK(fam.epsilon == 0.2);
  CHECK(fam.config.n() == 2);
}

TEST_CASE("cutoff pieces: values, seams, signed Laplacian") {
  const PoleConfig c = two_poles();
  const double eps = 0.01;
  const double L = std::log(1.0 / eps);
  const CutoffFamily fam = make_cutoff_family(c, eps);
  Vec dir(5, 0.0);
  dir[2] = 1.0;  // orthogonal to the pole axis
  const Vec& a = c.poles[0];

  // Dead core inside the eps^2 ball: all quantities vanish.
  CHECK(eval_cutoff(fam, at_distance(a, 0.5 * eps * eps, dir), CutoffQuantity::Value) == 0.0);
  CHECK(eval_cutoff(fam, at_distance(a, 0.5 * eps * eps, dir), CutoffQuantity::Laplacian) == 0.0);

  // Inner ramp: log-linear value, explicit derivatives, positive Laplacian.
  const double mid = std::pow(eps, 1.5);
  CHECK(eval_cutoff(fam, at_distance(a, mid, dir), CutoffQuantity::Value) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(eval_cutoff(fam, at_distance(a, mid, dir), CutoffQuantity::GradientNorm) ==
        doctest::Approx(1.0 / (mid * L)).epsilon(1e-12));
  CHECK(eval_cutoff(fam, at_distance(a, mid, dir), CutoffQuantity::Laplacian) ==
        doctest::Approx(3.0 / (mid * mid * L)).epsilon(1e-12));

  // Seams are continuous: ~0 just above the dead core, ~1 at the eps ball.
  CHECK(eval_cutoff(fam, at_distance(a, eps * eps * (1.0 + 1e-9), dir),
                    CutoffQuantity::Value) < 1e-8);
  CHECK(eval_cutoff(fam, at_distance(a, eps * (1.0 - 1e-9), dir), CutoffQuantity::Value) ==
        doctest::Approx(1.0).epsilon(1e-8));

  // Plateau: exactly 1 with vanishing derivatives.
  Vec plateau(5, 0.0);
  plateau[0] = 0.5;
  plateau[1] = 0.3;
  CHECK(eval_cutoff(fam, plateau, CutoffQuantity::Value) == 1.0);
  CHECK(eval_cutoff(fam, plateau, CutoffQuantity::GradientNorm) == 0.0);
  CHECK(eval_cutoff(fam, plateau, CutoffQuantity::Laplacian) == 0.0);

  // Outer ramp: half-way value at |x| = eps^{-3/2}, Laplacian negative.
  const double r_mid = std::pow(eps, -1.5);
  const Vec far = at_distance(Vec(5, 0.0), r_mid, dir);
  CHECK(eval_cutoff(fam, far, CutoffQuantity::Value) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(eval_cutoff(fam, far, CutoffQuantity::GradientNorm) ==
        doctest::Approx(1.0 / (r_mid * L)).epsilon(1e-12));
  CHECK(eval_cutoff(fam, far, CutoffQuantity::Laplacian) ==
        doctest::Approx(3.0 / (r_mid * r_mid * std::log(eps))).epsilon(1e-12));
  CHECK(eval_cutoff(fam, far, CutoffQuantity::Laplacian) < 0.0);

  // Outer seam continuity and the far dead zone.
  CHECK(eval_cutoff(fam, at_distance(Vec(5, 0.0), (1.0 / eps) * (1.0 + 1e-9), dir),
                    CutoffQuantity::Value) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(eval_cutoff(fam, at_distance(Vec(5, 0.0), 2.0 / (eps * eps), dir),
                    CutoffQuantity::Value) == 0.0);
}

TEST_CASE("cutoff value stays in [0, 1] across all scales") {
  const PoleConfig c = two_poles();
  const CutoffFamily fam = make_cutoff_family(c, 0.01);
  BatchRng rng(7, 0);
  const double lo = std::log(1e-5), hi = std::log(1e5);
  for (int i = 0; i < 100000; ++i) {
    const Vec dir = rng.unit_direction(5);
    const double r = std::exp(lo + (hi - lo) * rng.uniform());
    const Vec center = c.poles[i % 3 == 0 ? 0 : i % 3 == 1 ? 1 : 0];
    const Vec x = at_distance(i % 3 == 2 ? Vec(5, 0.0) : center, r, dir);
    const double v = eval_cutoff(fam, x, CutoffQuantity::Value);
    REQUIRE(v >= 0.0);
    REQUIRE(v <= 1.0);
  }
}

TEST_CASE("cutoff converges to 1 pointwise as eps shrinks") {
  const PoleConfig c = two_poles();
  Vec x(5, 0.0);
  x[1] = 50.0;  // outside the eps = 0.1 plateau, inside the eps = 0.01 one
  const double v1 = eval_cutoff(make_cutoff_family(c, 0.1), x, CutoffQuantity::Value);
  const double v2 = eval_cutoff(make_cutoff_family(c, 0.05), x, CutoffQuantity::Value);
  const double v3 = eval_cutoff(make_cutoff_family(c, 0.01), x, CutoffQuantity::Value);
  CHECK(v1 == doctest::Approx(std::log(0.01 * 50.0) / std::log(0.1)).epsilon(1e-12));
  CHECK(v1 < v2);
  CHECK(v2 < v3);
  CHECK(v3 == 1.0);
}

TEST_CASE("inner truncation energy matches the radial oracle") {
  // Near pole a_i, phi^2 |lap v|^2 ~ (N-2)^2 d^{-5}/L^2 (the other distance
  // is 1 + O(eps)), and the log-radial integral over [eps^2, eps] cancels one
  // factor of L exactly: each pole contributes 9 omega / L, the outer ramp
  // only O(eps/L^2).
  const PoleConfig c = two_poles();
  const double eps = 1e-3;
  const CriticalityIntegrals ints =
      criticality_integrals(make_cutoff_family(c, eps), fast_params(11, 30000));
  const double omega = unit_sphere_area(5);
  const double expected = 2.0 * 9.0 * omega / std::log(1.0 / eps);
  CHECK(ints.i1.estimate == doctest::Approx(expected).epsilon(0.02));
  CHECK(ints.i1.std_error < 0.01 * ints.i1.estimate);
  CHECK(ints.i2.estimate > 0.0);
  CHECK(ints.i3.estimate > 0.0);
  CHECK(ints.total() == doctest::Approx(ints.i1.estimate + ints.i2.estimate +
                                        ints.i3.estimate)
                            .epsilon(1e-15));
  CHECK(ints.total_std_error() >= 0.0);
}

TEST_CASE("truncation energy decreases strictly along the documented grid") {
  const PoleConfig c = two_poles();
  std::vector<double> totals, sigmas;
  for (const double eps : {0.2, 0.1, 0.05, 0.02}) {
    const CriticalityIntegrals ints =
        criticality_integrals(make_cutoff_family(c, eps), fast_params(13, 30000));
    totals.push_back(ints.total());
    sigmas.push_back(ints.total_std_error());
  }
  for (std::size_t i = 1; i < totals.size(); ++i) {
    CHECK(totals[i] + 3.0 * std::hypot(sigmas[i], sigmas[i - 1]) < totals[i - 1]);
  }
}

TEST_CASE("rate fit recovers a synthetic decay series exactly") {
  const int N = 5;
  std::vector<std::pair<double, double>> series;
  for (const double eps : {0.2, 0.1, 0.05, 0.02, 0.01}) {
    const double L = std::log(1.0 / eps);
    series.emplace_back(eps, 2.0 / L + 0.5 * std::pow(eps, N - 4) * L * L);
  }
  const RateFit fit = rate_fit(series, N);
  CHECK(fit.c1 == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(fit.c2 == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(fit.residual < 1e-10);
  CHECK(fit.consistent);
}

TEST_CASE("rate fit rejects growth and bad input") {
  // A negative leading coefficient is not a decaying truncation energy.
  std::vector<std::pair<double, double>> neg;
  for (const double eps : {0.2, 0.1, 0.05, 0.02})
    neg.emplace_back(eps, -2.0 / std::log(1.0 / eps));
  CHECK_FALSE(rate_fit(neg, 5).consistent);

  std::vector<std::pair<double, double>> three(neg.begin(), neg.begin() + 3);
  CHECK_THROWS_AS(rate_fit(three, 5), InsufficientData);

  std::vector<std::pair<double, double>> unsorted = neg;
  std::swap(unsorted[0], unsorted[1]);
  CHECK_THROWS_AS(rate_fit(unsorted, 5), PreconditionViolation);
}

TEST_CASE("criticality class names") {
  CHECK(criticality_class_name(CriticalityClass::PositiveCritical) == "positive_critical");
  CHECK(criticality_class_name(CriticalityClass::NullCritical) == "null_critical");
}

TEST_CASE("two poles: null-critical with a decaying, consistent sweep") {
  const CriticalityVerdict v = criticality_verdict(5, 2, fast_params(17, 30000));
  CHECK(v.verdict == CriticalityClass::NullCritical);
  CHECK_FALSE(v.attainability.attained);
  CHECK(v.classification.size() == 7);
  REQUIRE(v.sweep.size() == 4);
  CHECK(v.sweep.front().first == 0.2);
  CHECK(v.sweep.back().first == 0.02);
  for (std::size_t i = 1; i < v.sweep.size(); ++i)
    CHECK(v.sweep[i].second < v.sweep[i - 1].second);
  CHECK(v.fit.consistent);
  CHECK(v.fit.c1 > 0.0);
  CHECK(v.summary.find("consistent") != std::string::npos);
}

TEST_CASE("three and four poles: positive-critical with a near-sharp quotient") {
  for (const auto& [N, n] : std::vector<std::pair<int, int>>{{5, 3}, {6, 4}}) {
    const CriticalityVerdict v = criticality_verdict(N, n, fast_params(19, 60000));
    INFO("N = " << N << ", n = " << n);
    CHECK(v.verdict == CriticalityClass::PositiveCritical);
    CHECK(v.attainability.attained);
    for (const auto& row : v.classification)
      if (row.applicable) CHECK(row.verdict.integrable);
    CHECK(v.sweep.empty());
    CHECK(v.sharpness_ratio > 0.85);
    CHECK(v.sharpness_ratio < 1.25);
    CHECK(v.sharpness_ratio_err > 0.0);
    CHECK(v.summary.find("ratio") != std::string::npos);
  }
}

TEST_CASE("verdict needs at least two poles") {
  CHECK_THROWS_AS(criticality_verdict(5, 1, fast_params()), PreconditionViolation);
}
