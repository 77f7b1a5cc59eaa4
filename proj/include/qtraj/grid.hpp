#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

namespace qtraj {

/// Uniform 1D grid. Node i sits at x_min + i*dx.
class Grid1D {
public:
  static constexpr std::size_t kMinPoints = 8;

  Grid1D(double x_min, double x_max, std::size_t n_points);

  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  std::size_t size() const noexcept { return n_; }
  double dx() const noexcept { return dx_; }
  double x(std::size_t i) const noexcept { return x_min_ + static_cast<double>(i) * dx_; }

  std::vector<double> nodes() const;

  bool operator==(const Grid1D &) const = default;

private:
  double x_min_;
  double x_max_;
  std::size_t n_;
  double dx_;
};

template <typename T> struct Field {
  using value_type = T;

  Grid1D grid;
  std::vector<T> values;
  double time = 0.0;

  Field(Grid1D g, std::vector<T> v, double t = 0.0);
  explicit Field(Grid1D g, double t = 0.0) : Field(g, std::vector<T>(g.size()), t) {}

  std::size_t size() const noexcept { return values.size(); }
  T &operator[](std::size_t i) { return values[i]; }
  const T &operator[](std::size_t i) const { return values[i]; }
};

using RealField = Field<double>;
using ComplexField = Field<std::complex<double>>;

/// Samples f at every node.
RealField sample(const Grid1D &grid, const std::function<double(double)> &f, double time = 0.0);
ComplexField sample_complex(const Grid1D &grid,
                            const std::function<std::complex<double>(double)> &f,
                            double time = 0.0);

/// Throws NonFiniteValue naming the first bad node.
void require_finite(const RealField &f, std::string_view context);
void require_finite(const ComplexField &f, std::string_view context);

/// Trapezoid rule over the whole grid.
double trapezoid(const Grid1D &grid, const std::vector<double> &values);

/// Index range [begin, end) of nodes with lo <= x <= hi.
struct NodeRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool empty() const noexcept { return begin >= end; }
};
NodeRange nodes_within(const Grid1D &grid, double lo, double hi);

} // namespace qtraj
