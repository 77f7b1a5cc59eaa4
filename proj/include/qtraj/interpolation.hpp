#pragma once

#include "qtraj/grid.hpp"

#include <array>
#include <span>

namespace qtraj {

/// Cubic Lagrange interpolation through the 4 nodes nearest x. Near the edges
/// the stencil is shifted inward, so x must lie inside [x_min, x_max].
double cubic_interpolate(const Grid1D &grid, std::span<const double> values, double x);

/// Derivative of the same local cubic.
double cubic_derivative(const Grid1D &grid, std::span<const double> values, double x);

/// Four-point Lagrange weights for abscissa s measured in node units from the
/// first of four equally spaced nodes (s in [0, 3]).
std::array<double, 4> lagrange4_weights(double s);

} // namespace qtraj
