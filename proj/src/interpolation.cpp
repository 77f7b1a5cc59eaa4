#include "qtraj/interpolation.hpp"

#include "qtraj/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qtraj {
namespace {

struct Stencil {
  std::size_t first;
  double s; // position in node units relative to `first`
};

Stencil locate(const Grid1D &grid, std::size_t n_values, double x) {
  if (n_values != grid.size())
    throw InvalidArgument("cubic interpolation: value count does not match grid");
  if (!(x >= grid.x_min() && x <= grid.x_max()))
    throw InvalidArgument("cubic interpolation: x=" + std::to_string(x) + " outside grid");
  const double pos = (x - grid.x_min()) / grid.dx();
  const auto cell = static_cast<std::ptrdiff_t>(std::floor(pos));
  const auto last_first = static_cast<std::ptrdiff_t>(grid.size()) - 4;
  const std::ptrdiff_t first = std::clamp<std::ptrdiff_t>(cell - 1, 0, last_first);
  return {static_cast<std::size_t>(first), pos - static_cast<double>(first)};
}

} // namespace

std::array<double, 4> lagrange4_weights(double s) {
  const double a = s, b = s - 1.0, c = s - 2.0, d = s - 3.0;
  return {-b * c * d / 6.0, a * c * d / 2.0, -a * b * d / 2.0, a * b * c / 6.0};
}

double cubic_interpolate(const Grid1D &grid, std::span<const double> values, double x) {
  const Stencil st = locate(grid, values.size(), x);
  const auto w = lagrange4_weights(st.s);
  double sum = 0.0;
  for (std::size_t k = 0; k < 4; ++k)
    sum += w[k] * values[st.first + k];
  return sum;
}

double cubic_derivative(const Grid1D &grid, std::span<const double> values, double x) {
  const Stencil st = locate(grid, values.size(), x);
  const double s = st.s;
  // d/ds of the Lagrange basis polynomials on nodes 0..3
  const std::array<double, 4> dw = {
      -((s - 2.0) * (s - 3.0) + (s - 1.0) * (s - 3.0) + (s - 1.0) * (s - 2.0)) / 6.0,
      ((s - 2.0) * (s - 3.0) + s * (s - 3.0) + s * (s - 2.0)) / 2.0,
      -((s - 1.0) * (s - 3.0) + s * (s - 3.0) + s * (s - 1.0)) / 2.0,
      ((s - 1.0) * (s - 2.0) + s * (s - 2.0) + s * (s - 1.0)) / 6.0};
  double sum = 0.0;
  for (std::size_t k = 0; k < 4; ++k)
    sum += dw[k] * values[st.first + k];
  return sum / grid.dx();
}

} // namespace qtraj
