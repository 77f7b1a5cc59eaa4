#pragma once

#include "qtraj/errors.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

namespace qtraj {

namespace detail {

inline void check_stage(std::span<const double> k, double t, int stage) {
  for (std::size_t i = 0; i < k.size(); ++i)
    if (!std::isfinite(k[i]))
      throw NonFiniteValue("rk4 stage " + std::to_string(stage) + " at t=" + std::to_string(t),
                           i);
}

inline std::span<const double> as_span(const double &x) { return {&x, 1}; }
template <std::size_t N> std::span<const double> as_span(const std::array<double, N> &x) {
  return x;
}
inline std::span<const double> as_span(const std::vector<double> &x) { return x; }

inline double axpy(const double &y, double a, const double &x) { return y + a * x; }

template <typename V> V axpy(const V &y, double a, const V &x) {
  V out = y;
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] += a * x[i];
  return out;
}

} // namespace detail

/// One classical fourth-order Runge-Kutta step of dy/dt = rhs(y, t).
///
/// State may be a double, a std::array<double, N> or a std::vector<double>.
/// Throws InvalidArgument for dt <= 0 and NonFiniteValue (with the stage,
/// time and component index) when the right-hand side is not finite.
template <typename State, typename Rhs>
State rk4_step(const State &y, Rhs &&rhs, double t, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw InvalidArgument("rk4_step: dt must be positive and finite");
  const State k1 = rhs(y, t);
  detail::check_stage(detail::as_span(k1), t, 1);
  const State k2 = rhs(detail::axpy(y, 0.5 * dt, k1), t + 0.5 * dt);
  detail::check_stage(detail::as_span(k2), t, 2);
  const State k3 = rhs(detail::axpy(y, 0.5 * dt, k2), t + 0.5 * dt);
  detail::check_stage(detail::as_span(k3), t, 3);
  const State k4 = rhs(detail::axpy(y, dt, k3), t + dt);
  detail::check_stage(detail::as_span(k4), t, 4);

  State out = y;
  if constexpr (std::is_same_v<State, double>) {
    out = y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  } else {
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

} // namespace qtraj
