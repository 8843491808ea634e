#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rellich/errors.hpp"
#include "rellich/finite_diff.hpp"
#include "rellich/trials.hpp"

using namespace rellich;

namespace {

Vec e1(int N) {
  Vec v(N, 0.0);
  v[0] = 1.0;
  return v;
}

PoleConfig two_poles() { return make_config(5, {Vec(5, 0.0), e1(5)}); }

ScalarField field_of(const TrialFunction& u) {
  auto eval = std::make_shared<TrialEvaluator>(u);
  return [eval](const Vec& x) { return eval->jet(x).value; };
}

/// Central-difference gradient, one Richardson step; for comparing the
/// closed-form jets inside smooth pieces.
Vec fd_gradient(const ScalarField& f, const Vec& x, double h) {
  Vec g(x.size(), 0.0);
  for (size_t k = 0; k < x.size(); ++k) {
    Vec xp = x, xm = x;
    auto diff = [&](double step) {
      xp[k] = x[k] + step;
      xm[k] = x[k] - step;
      return (f(xp) - f(xm)) / (2.0 * step);
    };
    const double d1 = diff(h);
    const double d2 = diff(h / 2.0);
    g[k] = (4.0 * d2 - d1) / 3.0;
    xp[k] = x[k];
    xm[k] = x[k];
  }
  return g;
}

void check_jet_against_fd(const TrialFunction& u, const Vec& x, double grad_tol,
                          double lap_tol) {
  const TrialEvaluator eval(u);
  const Jet j = eval.jet(x);
  const ScalarField f = field_of(u);

  double dmin = std::numeric_limits<double>::infinity();
  for (const Vec& a : u.config.poles) dmin = std::min(dmin, std::sqrt(dist2(x, a)));
  const Vec g = fd_gradient(f, x, 1e-4 * dmin);
  const double gscale = std::max(norm(g), 1e-12);
  for (size_t k = 0; k < x.size(); ++k)
    CHECK(std::abs(j.grad[k] - g[k]) <= grad_tol * gscale);

  const double lap = fd_derivative(f, u.config, x, FdOrder::Laplacian);
  CHECK(std::abs(j.lap - lap) <= lap_tol * std::max(std::abs(lap), 1e-9));
}

}  // namespace

TEST_CASE("bump closed values and dead zone") {
  const PoleConfig c = two_poles();
  const Vec center = scale(e1(5), 0.5);
  const TrialFunction u = make_bump(c, center, 0.25);
  const TrialEvaluator eval(u);

  // exp(-1) at the center, exp(-1/(1 - 1/4)) = exp(-4/3) at half radius.
  CHECK(eval.jet(center).value == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  Vec half = center;
  half[2] += 0.125;
  CHECK(eval.jet(half).value == doctest::Approx(std::exp(-4.0 / 3.0)).epsilon(1e-12));

  // Gradient at the center vanishes by symmetry.
  for (double gk : eval.jet(center).grad) CHECK(gk == doctest::Approx(0.0));

  // Identically zero outside the support ball.
  Vec outside = center;
  outside[1] += 0.26;
  const Jet j = eval.jet(outside);
  CHECK(j.value == 0.0);
  CHECK(j.lap == 0.0);
  CHECK(norm(j.grad) == 0.0);

  CHECK(support_radius(u) == doctest::Approx(0.75));
}

TEST_CASE("bump jets match finite differences") {
  const PoleConfig c = two_poles();
  const TrialFunction u = make_bump(c, scale(e1(5), 0.5), 0.3);
  Vec x = scale(e1(5), 0.5);
  x[1] = 0.1;
  x[3] = -0.15;
  check_jet_against_fd(u, x, 1e-7, 1e-7);
}

TEST_CASE("mollified ground state equals the ground state between the ramps") {
  const PoleConfig c = two_poles();
  const Rational s(-1);
  const TrialFunction u = make_mollified_ground_state(c, s, 20.0, 0.05);
  const TrialEvaluator eval(u);
  const GroundStateEvaluator phi(c, s);

  Vec x = scale(e1(5), 0.5);
  x[2] = 0.4;
  const Jet ju = eval.jet(x);
  const Jet jphi = phi.jet(x);
  CHECK(ju.value == doctest::Approx(jphi.value).epsilon(1e-13));
  CHECK(ju.lap == doctest::Approx(jphi.lap).epsilon(1e-13));
  for (int k = 0; k < 5; ++k) CHECK(ju.grad[k] == doctest::Approx(jphi.grad[k]).epsilon(1e-13));
}

TEST_CASE("mollified ground state dead zones") {
  const PoleConfig c = two_poles();
  const TrialFunction u = make_mollified_ground_state(c, Rational(-1), 20.0, 0.05);
  const TrialEvaluator eval(u);

  // Inside the delta/2 ball around a pole.
  Vec near_pole(5, 0.0);
  near_pole[0] = 0.01;
  Jet j = eval.jet(near_pole);
  CHECK(j.value == 0.0);
  CHECK(j.lap == 0.0);
  CHECK(norm(j.grad) == 0.0);

  // Outside 2R.
  Vec far(5, 0.0);
  far[1] = 41.0;
  j = eval.jet(far);
  CHECK(j.value == 0.0);
  CHECK(j.lap == 0.0);
  CHECK(support_radius(u) == doctest::Approx(40.0));
}

TEST_CASE("mollified ground state jets match finite differences in every piece") {
  const PoleConfig c = two_poles();
  const double delta = 0.05, R = 20.0;
  const TrialFunction u = make_mollified_ground_state(c, Rational(-1), R, delta);

  // Mid near-ramp: distance 0.75 delta from pole 1.
  Vec ramp(5, 0.0);
  ramp[0] = 1.0 - 0.75 * delta;
  check_jet_against_fd(u, ramp, 1e-6, 1e-6);

  // Mid far-ramp: |x| = 1.5 R.
  Vec farramp(5, 0.0);
  farramp[2] = 1.5 * R;
  check_jet_against_fd(u, farramp, 1e-6, 1e-6);
}

TEST_CASE("mollified ground state is C2 across the seams") {
  const PoleConfig c = two_poles();
  const double delta = 0.05;
  const TrialFunction u = make_mollified_ground_state(c, Rational(-1), 20.0, delta);
  const TrialEvaluator eval(u);

  // Jets on either side of the outer near-seam (distance delta from pole 1)
  // agree: value, gradient and Laplacian are all continuous.
  const double nudge = 1e-9;
  Vec lo(5, 0.0), hi(5, 0.0);
  lo[0] = 1.0 - (delta - nudge);
  hi[0] = 1.0 - (delta + nudge);
  const Jet jlo = eval.jet(lo), jhi = eval.jet(hi);
  CHECK(jlo.value == doctest::Approx(jhi.value).epsilon(1e-7));
  CHECK(jlo.grad[0] == doctest::Approx(jhi.grad[0]).epsilon(1e-5));
  CHECK(jlo.lap == doctest::Approx(jhi.lap).epsilon(1e-3));
}

TEST_CASE("trial construction preconditions") {
  const PoleConfig c = two_poles();
  CHECK_THROWS_AS(make_bump(c, e1(5), 0.0), PreconditionViolation);
  CHECK_THROWS_AS(make_bump(c, Vec(4, 0.0), 0.5), PreconditionViolation);

  // delta must stay below the pole separation; R must clear the pole region.
  CHECK_THROWS_AS(make_mollified_ground_state(c, Rational(-1), 20.0, 1.0),
                  PreconditionViolation);
  CHECK_THROWS_AS(make_mollified_ground_state(c, Rational(-1), 20.0, -0.1),
                  PreconditionViolation);
  CHECK_THROWS_AS(make_mollified_ground_state(c, Rational(-1), 1.0, 0.4),
                  PreconditionViolation);

  // eps_max = min(1/2, separation/4, 1/(2 max|a| + 1)) = min(0.5, 0.25, 1/3).
  CHECK(cutoff_eps_max(c) == doctest::Approx(0.25));
  CHECK_THROWS_AS(make_cutoff_ground_state(c, 0.25), PreconditionViolation);
  CHECK_THROWS_AS(make_cutoff_ground_state(c, 0.0), PreconditionViolation);
  CHECK_THROWS_AS(make_cutoff_ground_state(c, -0.1), PreconditionViolation);
  CHECK_NOTHROW(make_cutoff_ground_state(c, 0.2));
}

TEST_CASE("cutoff ground state pieces") {
  const PoleConfig c = two_poles();
  const double eps = 0.1;
  const TrialFunction u = make_cutoff_ground_state(c, eps);
  const TrialEvaluator eval(u);
  const GroundStateEvaluator phi(c, Rational(-1));

  // Inside the eps^2 ball: zero.
  Vec x(5, 0.0);
  x[0] = 0.5 * eps * eps;
  CHECK(eval.jet(x).value == 0.0);

  // Flat region: u = phi exactly.
  Vec mid = scale(e1(5), 0.5);
  const Jet ju = eval.jet(mid);
  const Jet jphi = phi.jet(mid);
  CHECK(ju.value == doctest::Approx(jphi.value).epsilon(1e-13));
  CHECK(ju.lap == doctest::Approx(jphi.lap).epsilon(1e-13));

  // Outside 1/eps^2: zero.
  Vec far(5, 0.0);
  far[1] = 1.0 / (eps * eps) + 1.0;
  CHECK(eval.jet(far).value == 0.0);
  CHECK(support_radius(u) == doctest::Approx(100.0));

  // Piecewise jets match finite differences inside the open ramp pieces.
  Vec inner(5, 0.0);
  inner[0] = std::pow(eps, 1.5);  // geometric middle of (eps^2, eps)
  check_jet_against_fd(u, inner, 1e-6, 1e-6);

  Vec outer(5, 0.0);
  outer[3] = std::pow(eps, -1.5);  // geometric middle of (1/eps, 1/eps^2)
  check_jet_against_fd(u, outer, 1e-6, 1e-5);
}

TEST_CASE("scaled trials carry the amplitude through jets") {
  const PoleConfig c = two_poles();
  const TrialFunction u = make_bump(c, scale(e1(5), 0.5), 0.3);
  const TrialFunction u7 = scaled(u, 7.0);
  CHECK(u7.amplitude == doctest::Approx(7.0));

  Vec x = scale(e1(5), 0.5);
  x[4] = 0.1;
  const TrialEvaluator ev(u), ev7(u7);
  CHECK(ev7.jet(x).value == doctest::Approx(7.0 * ev.jet(x).value).epsilon(1e-14));
  CHECK(ev7.jet(x).lap == doctest::Approx(7.0 * ev.jet(x).lap).epsilon(1e-14));

  // The unit jet ignores the amplitude entirely: bit-identical.
  CHECK(ev7.unit_jet(x).value == ev.unit_jet(x).value);
  CHECK(ev7.unit_jet(x).lap == ev.unit_jet(x).lap);
  CHECK(trial_jet(u7, x).value == doctest::Approx(7.0 * trial_jet(u, x).value));
}
