#pragma once

#include "rellich/multipole.hpp"
#include "rellich/quadrature.hpp"

namespace rellich {

enum class FdOrder { Laplacian, Bilaplacian };

/// Finite-difference oracle for the closed-form Laplacian and bilaplacian.
/// Laplacian: central 3-point stencil per axis, one Richardson step (h, h/2).
/// Bilaplacian: centered 5-point 4th-derivative stencil per axis plus the
/// mixed second-second 9-point compositions, Richardson-extrapolated.
/// Stencil sums accumulate in long double: the bilaplacian divides by h^4,
/// where double-precision cancellation noise would already eat the 1e-4
/// oracle tolerance at the default step.
/// Default h: 1e-3 x (distance from x to the nearest pole) for the
/// Laplacian, 1e-2 x that distance for the bilaplacian.
/// Throws StepTooLarge when h exceeds half the distance to the nearest pole.
double fd_derivative(const ScalarField& f, const PoleConfig& config, const Vec& x,
                     FdOrder order, double h = 0.0);

}  // namespace rellich
