#include "qtraj/stencils.hpp"

#include "qtraj/errors.hpp"

namespace qtraj {
namespace {

// Integer-coefficient forms keep the stencils exact for dyadic inputs.
template <typename T> void first_derivative(std::span<const T> f, double dx, std::span<T> out) {
  const std::size_t n = f.size();
  const double den = 12.0 * dx;
  out[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / den;
  out[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / den;
  for (std::size_t i = 2; i + 2 < n; ++i)
    out[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / den;
  out[n - 2] =
      (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) / den;
  out[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] +
                3.0 * f[n - 5]) /
               den;
}

template <typename T> void second_derivative(std::span<const T> f, double dx, std::span<T> out) {
  const std::size_t n = f.size();
  const double den = 12.0 * dx * dx;
  out[0] = (45.0 * f[0] - 154.0 * f[1] + 214.0 * f[2] - 156.0 * f[3] + 61.0 * f[4] -
            10.0 * f[5]) /
           den;
  out[1] = (10.0 * f[0] - 15.0 * f[1] - 4.0 * f[2] + 14.0 * f[3] - 6.0 * f[4] + f[5]) / den;
  for (std::size_t i = 2; i + 2 < n; ++i)
    out[i] = (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) / den;
  out[n - 2] = (10.0 * f[n - 1] - 15.0 * f[n - 2] - 4.0 * f[n - 3] + 14.0 * f[n - 4] -
                6.0 * f[n - 5] + f[n - 6]) /
               den;
  out[n - 1] = (45.0 * f[n - 1] - 154.0 * f[n - 2] + 214.0 * f[n - 3] - 156.0 * f[n - 4] +
                61.0 * f[n - 5] - 10.0 * f[n - 6]) /
               den;
}

template <typename T> Field<T> apply_gradient(const Field<T> &f) {
  require_finite(f, "gradient");
  Field<T> out(f.grid, f.time);
  first_derivative<T>(f.values, f.grid.dx(), out.values);
  return out;
}

template <typename T> Field<T> apply_laplacian(const Field<T> &f) {
  require_finite(f, "laplacian");
  Field<T> out(f.grid, f.time);
  second_derivative<T>(f.values, f.grid.dx(), out.values);
  return out;
}

} // namespace

RealField gradient(const RealField &f) { return apply_gradient(f); }
ComplexField gradient(const ComplexField &f) { return apply_gradient(f); }
RealField laplacian(const RealField &f) { return apply_laplacian(f); }
ComplexField laplacian(const ComplexField &f) { return apply_laplacian(f); }

void gradient_into(std::span<const double> f, double dx, std::span<double> out) {
  if (f.size() < Grid1D::kMinPoints || out.size() != f.size())
    throw InvalidArgument("gradient_into: bad buffer sizes");
  first_derivative<double>(f, dx, out);
}

void laplacian_into(std::span<const double> f, double dx, std::span<double> out) {
  if (f.size() < Grid1D::kMinPoints || out.size() != f.size())
    throw InvalidArgument("laplacian_into: bad buffer sizes");
  second_derivative<double>(f, dx, out);
}

} // namespace qtraj
