#include "rellich/finite_diff.hpp"

#include <cmath>

namespace rellich {

namespace {

long double laplacian_stencil(const ScalarField& f, const Vec& x, double h) {
  const int N = static_cast<int>(x.size());
  const long double fc = f(x);
  long double acc = 0.0L;
  Vec y = x;
  for (int d = 0; d < N; ++d) {
    y[d] = x[d] + h;
    const long double fp = f(y);
    y[d] = x[d] - h;
    const long double fm = f(y);
    y[d] = x[d];
    acc += fp - 2.0L * fc + fm;
  }
  return acc / (static_cast<long double>(h) * h);
}

long double bilaplacian_stencil(const ScalarField& f, const Vec& x, double h) {
  const int N = static_cast<int>(x.size());
  const long double fc = f(x);
  const long double h4 = static_cast<long double>(h) * h * h * h;
  Vec y = x;

  // Pure fourth derivatives: f(-2h) - 4f(-h) + 6f(0) - 4f(h) + f(2h).
  long double acc = 0.0L;
  for (int d = 0; d < N; ++d) {
    long double sum = 6.0L * fc;
    y[d] = x[d] + 2.0 * h;
    sum += f(y);
    y[d] = x[d] - 2.0 * h;
    sum += f(y);
    y[d] = x[d] + h;
    sum -= 4.0L * f(y);
    y[d] = x[d] - h;
    sum -= 4.0L * f(y);
    y[d] = x[d];
    acc += sum;
  }

  // Mixed terms 2 * d^2/dx_a^2 d^2/dx_b^2: compose the two 3-point second
  // differences (9-point cross stencil).
  for (int a = 0; a < N; ++a) {
    for (int b = a + 1; b < N; ++b) {
      long double sum = 4.0L * fc;
      for (int sa = -1; sa <= 1; sa += 2) {
        for (int sb = -1; sb <= 1; sb += 2) {
          y[a] = x[a] + sa * h;
          y[b] = x[b] + sb * h;
          sum += f(y);
        }
      }
      y[b] = x[b];
      for (int sa = -1; sa <= 1; sa += 2) {
        y[a] = x[a] + sa * h;
        sum -= 2.0L * f(y);
      }
      y[a] = x[a];
      for (int sb = -1; sb <= 1; sb += 2) {
        y[b] = x[b] + sb * h;
        sum -= 2.0L * f(y);
      }
      y[b] = x[b];
      acc += 2.0L * sum;
    }
  }
  return acc / h4;
}

}  // namespace

double fd_derivative(const ScalarField& f, const PoleConfig& config, const Vec& x,
                     FdOrder order, double h) {
  double dist = std::numeric_limits<double>::infinity();
  for (const Vec& a : config.poles) dist = std::min(dist, std::sqrt(dist2(x, a)));

  if (h <= 0.0) {
    h = (order == FdOrder::Laplacian ? 1e-3 : 1e-2) * dist;
  }
  if (!(h > 0.0)) throw PreconditionViolation("step must be positive");
  if (h > dist / 2.0) {
    throw StepTooLarge("step " + std::to_string(h) + " exceeds half the distance " +
                       std::to_string(dist) + " to the nearest pole");
  }

  // Both stencils have O(h^2) error; one Richardson step cancels it.
  const auto stencil = (order == FdOrder::Laplacian) ? laplacian_stencil : bilaplacian_stencil;
  const long double coarse = stencil(f, x, h);
  const long double fine = stencil(f, x, h / 2.0);
  return static_cast<double>((4.0L * fine - coarse) / 3.0L);
}

}  // namespace rellich
