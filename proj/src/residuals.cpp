#include "qtraj/residuals.hpp"

#include "qtraj/errors.hpp"
#include "qtraj/stencils.hpp"

#include <cmath>

namespace qtraj {
namespace {

constexpr std::complex<double> kI{0.0, 1.0};

struct TimeSlice {
  ComplexField value; // field at the evaluation time
  ComplexField rate;  // its time derivative there
};

// Central difference about the middle state for >= 3 states, midpoint rule for 2.
TimeSlice differentiate_in_time(std::span<const ComplexField> states) {
  if (states.size() < 2)
    throw InvalidArgument("residual: need at least two stored states");
  for (const auto &s : states)
    if (!(s.grid == states.front().grid))
      throw InvalidArgument("residual: states live on different grids");

  if (states.size() == 2) {
    const auto &a = states[0];
    const auto &b = states[1];
    const double dt = b.time - a.time;
    if (!(dt > 0.0))
      throw InvalidArgument("residual: state times must increase");
    TimeSlice out{ComplexField(a.grid, 0.5 * (a.time + b.time)),
                  ComplexField(a.grid, 0.5 * (a.time + b.time))};
    for (std::size_t i = 0; i < a.size(); ++i) {
      out.value[i] = 0.5 * (a[i] + b[i]);
      out.rate[i] = (b[i] - a[i]) / dt;
    }
    return out;
  }

  const std::size_t mid = states.size() / 2;
  const auto &prev = states[mid - 1];
  const auto &next = states[mid + 1];
  const double dt = next.time - prev.time;
  if (!(dt > 0.0))
    throw InvalidArgument("residual: state times must increase");
  TimeSlice out{states[mid], ComplexField(prev.grid, states[mid].time)};
  for (std::size_t i = 0; i < prev.size(); ++i)
    out.rate[i] = (next[i] - prev[i]) / dt;
  return out;
}

ComplexField velocity_of(const ComplexField &sbar, double mass) {
  ComplexField v = gradient(sbar);
  for (auto &x : v.values)
    x /= mass;
  return v;
}

} // namespace

RealField qhj_residual(const ComplexField &sbar, const ComplexField &sbar_rate,
                       const Potential &potential, const PhysParams &params) {
  if (!(sbar.grid == sbar_rate.grid))
    throw InvalidArgument("qhj_residual: Sbar and dSbar/dt on different grids");
  const double m = params.mass();
  const ComplexField g = gradient(sbar);
  const ComplexField l = laplacian(sbar);
  const std::complex<double> diffusion = kI * params.hbar() / (2.0 * m);
  RealField out(sbar.grid, sbar.time);
  for (std::size_t i = 0; i < sbar.size(); ++i) {
    const std::complex<double> r = sbar_rate[i] + g[i] * g[i] / (2.0 * m) +
                                   potential.value(sbar.grid.x(i)) - diffusion * l[i];
    out[i] = std::abs(r);
  }
  return out;
}

RealField qhj_residual(std::span<const ComplexField> states, const Potential &potential,
                       const PhysParams &params) {
  const TimeSlice slice = differentiate_in_time(states);
  return qhj_residual(slice.value, slice.rate, potential, params);
}

RealField complex_velocity_residual(std::span<const ComplexField> states,
                                    const PhysParams &params, const Potential &potential) {
  std::vector<ComplexField> velocities;
  velocities.reserve(states.size());
  for (const auto &s : states)
    velocities.push_back(velocity_of(s, params.mass()));
  const TimeSlice slice = differentiate_in_time(velocities);
  const ComplexField &v = slice.value;
  const ComplexField dv = gradient(v);
  const ComplexField lv = laplacian(v);
  const double m = params.mass();
  const std::complex<double> diffusion = kI * params.hbar() / (2.0 * m);
  RealField out(v.grid, v.time);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::complex<double> r = slice.rate[i] + v[i] * dv[i] +
                                   potential.gradient(v.grid.x(i)) / m - diffusion * lv[i];
    out[i] = std::abs(r);
  }
  return out;
}

ComplexField free_packet_complex_action(const GaussianPacketSpec &spec, const Grid1D &grid,
                                        double t) {
  const double hbar = spec.params().hbar();
  return sample_complex(
      grid, [&](double x) { return -kI * hbar * free_packet_log_wavefunction(spec, x, t); }, t);
}

ComplexField ho_complex_action(const OscillatorSpec &spec, const Grid1D &grid, double t) {
  const double hbar = spec.params().hbar();
  return sample_complex(
      grid, [&](double x) { return -kI * hbar * ho_log_wavefunction(spec, x, t); }, t);
}

} // namespace qtraj
