#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rellich/errors.hpp"
#include "rellich/finite_diff.hpp"

using namespace rellich;

namespace {

PoleConfig far_config() {
  // A single pole far away, so the default steps are O(1) fractions of a
  // large distance and StepTooLarge stays out of the way.
  Vec a(5, 0.0);
  a[0] = 100.0;
  return make_config(5, {a});
}

}  // namespace

TEST_CASE("laplacian of |x|^2 is 2N") {
  const PoleConfig c = far_config();
  const ScalarField f = [](const Vec& x) { return norm2(x); };
  Vec x(5, 0.3);
  x[2] = -0.7;
  CHECK(fd_derivative(f, c, x, FdOrder::Laplacian, 1e-3) ==
        doctest::Approx(10.0).epsilon(1e-8));
  CHECK(fd_derivative(f, c, x, FdOrder::Laplacian) == doctest::Approx(10.0).epsilon(1e-8));
}

TEST_CASE("laplacian of sin x0") {
  const PoleConfig c = far_config();
  const ScalarField f = [](const Vec& x) { return std::sin(x[0]); };
  Vec x(5, 0.0);
  x[0] = 0.9;
  CHECK(fd_derivative(f, c, x, FdOrder::Laplacian, 1e-3) ==
        doctest::Approx(-std::sin(0.9)).epsilon(1e-8));
}

TEST_CASE("bilaplacian of |x|^4 at |x| = 1 is 8N(N+2)") {
  const PoleConfig c = far_config();
  const ScalarField f = [](const Vec& x) {
    const double r2 = norm2(x);
    return r2 * r2;
  };
  Vec x(5, 0.0);
  x[1] = 1.0;
  CHECK(fd_derivative(f, c, x, FdOrder::Bilaplacian) ==
        doctest::Approx(280.0).epsilon(1e-4));
}

TEST_CASE("bilaplacian resolves pure and mixed quartic terms") {
  const PoleConfig c = far_config();
  Vec x(5, 0.2);

  // x0^4: only the per-axis fourth-derivative stencil contributes, 24.
  const ScalarField pure = [](const Vec& v) { return v[0] * v[0] * v[0] * v[0]; };
  CHECK(fd_derivative(pure, c, x, FdOrder::Bilaplacian) == doctest::Approx(24.0).epsilon(1e-6));

  // x0^2 x1^2: only the mixed second-second composition contributes, 8.
  const ScalarField mixed = [](const Vec& v) { return v[0] * v[0] * v[1] * v[1]; };
  CHECK(fd_derivative(mixed, c, x, FdOrder::Bilaplacian) == doctest::Approx(8.0).epsilon(1e-6));
}

TEST_CASE("step crossing the singularity is rejected") {
  Vec a(5, 0.0);
  const PoleConfig c = make_config(5, {a});
  Vec x(5, 0.0);
  x[0] = 1.0;  // distance 1 from the pole
  CHECK_THROWS_AS(fd_derivative([](const Vec&) { return 0.0; }, c, x, FdOrder::Laplacian, 1.0),
                  StepTooLarge);
  CHECK_THROWS_AS(
      fd_derivative([](const Vec&) { return 0.0; }, c, x, FdOrder::Bilaplacian, 0.6),
      StepTooLarge);
  CHECK_NOTHROW(
      fd_derivative([](const Vec& v) { return norm2(v); }, c, x, FdOrder::Laplacian, 0.4));
}
