#include "qtraj/grid.hpp"

#include "qtraj/errors.hpp"

#include <cmath>
#include <string>

namespace qtraj {

Grid1D::Grid1D(double x_min, double x_max, std::size_t n_points)
    : x_min_(x_min), x_max_(x_max), n_(n_points), dx_(0.0) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max))
    throw InvalidArgument("Grid1D: require finite x_min < x_max");
  if (n_points < kMinPoints)
    throw InvalidArgument("Grid1D: need at least " + std::to_string(kMinPoints) +
                          " points for fourth-order stencils, got " + std::to_string(n_points));
  dx_ = (x_max - x_min) / static_cast<double>(n_points - 1);
}

std::vector<double> Grid1D::nodes() const {
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i)
    out[i] = x(i);
  return out;
}

template <typename T>
Field<T>::Field(Grid1D g, std::vector<T> v, double t) : grid(g), values(std::move(v)), time(t) {
  if (values.size() != grid.size())
    throw InvalidArgument("Field: " + std::to_string(values.size()) + " values for a grid of " +
                          std::to_string(grid.size()) + " nodes");
}

template struct Field<double>;
template struct Field<std::complex<double>>;

RealField sample(const Grid1D &grid, const std::function<double(double)> &f, double time) {
  RealField out(grid, time);
  for (std::size_t i = 0; i < grid.size(); ++i)
    out[i] = f(grid.x(i));
  return out;
}

ComplexField sample_complex(const Grid1D &grid,
                            const std::function<std::complex<double>(double)> &f, double time) {
  ComplexField out(grid, time);
  for (std::size_t i = 0; i < grid.size(); ++i)
    out[i] = f(grid.x(i));
  return out;
}

void require_finite(const RealField &f, std::string_view context) {
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!std::isfinite(f[i]))
      throw NonFiniteValue(std::string(context), i);
}

void require_finite(const ComplexField &f, std::string_view context) {
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!std::isfinite(f[i].real()) || !std::isfinite(f[i].imag()))
      throw NonFiniteValue(std::string(context), i);
}

double trapezoid(const Grid1D &grid, const std::vector<double> &values) {
  if (values.size() != grid.size())
    throw InvalidArgument("trapezoid: size mismatch");
  double sum = 0.5 * (values.front() + values.back());
  for (std::size_t i = 1; i + 1 < values.size(); ++i)
    sum += values[i];
  return sum * grid.dx();
}

NodeRange nodes_within(const Grid1D &grid, double lo, double hi) {
  NodeRange r{grid.size(), 0};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.x(i);
    if (x >= lo && x <= hi) {
      if (r.begin == grid.size())
        r.begin = i;
      r.end = i + 1;
    }
  }
  if (r.begin == grid.size())
    r = {0, 0};
  return r;
}

} // namespace qtraj
