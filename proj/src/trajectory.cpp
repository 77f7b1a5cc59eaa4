#include "qtraj/trajectory.hpp"

#include "qtraj/errors.hpp"
#include "qtraj/rk4.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

namespace qtraj {
namespace {

void require_increasing(std::span<const double> t_grid, const char *who) {
  if (t_grid.empty())
    throw InvalidArgument(std::string(who) + ": empty time grid");
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    if (!std::isfinite(t_grid[k]))
      throw InvalidArgument(std::string(who) + ": non-finite time");
    if (k > 0 && !(t_grid[k] > t_grid[k - 1]))
      throw InvalidArgument(std::string(who) + ": times must be strictly increasing");
  }
}

std::size_t substeps(double span, double max_step) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(span / max_step - 1e-9)));
}

} // namespace

Trajectory integrate_bohmian(const VelocityFieldProvider &provider, double x0,
                             std::span<const double> t_grid, IntegrationOptions options) {
  require_increasing(t_grid, "integrate_bohmian");
  if (!provider.contains(x0, t_grid.front()))
    throw InvalidArgument("integrate_bohmian: x0=" + std::to_string(x0) +
                          " outside the velocity field's validity window");
  const double max_step = options.max_step > 0.0 ? options.max_step : provider.suggested_step();
  auto rhs = [&provider](double x, double t) { return provider.velocity(x, t); };

  Trajectory out;
  out.x0 = x0;
  out.source = provider.source();
  out.times.reserve(t_grid.size());
  out.positions.reserve(t_grid.size());
  out.times.push_back(t_grid.front());
  out.positions.push_back(x0);

  double x = x0;
  for (std::size_t k = 1; k < t_grid.size(); ++k) {
    const double t_start = t_grid[k - 1];
    const double span = t_grid[k] - t_start;
    const std::size_t n = substeps(span, max_step);
    const double h = span / static_cast<double>(n);
    for (std::size_t s = 0; s < n; ++s) {
      const double t = t_start + static_cast<double>(s) * h;
      x = rk4_step(x, rhs, t, h);
      const double t_next = (s + 1 == n) ? t_grid[k] : t + h;
      if (!provider.contains(x, t_next)) {
        out.truncated = true;
        return out;
      }
    }
    out.times.push_back(t_grid[k]);
    out.positions.push_back(x);
  }
  return out;
}

Trajectory integrate_classical(const Potential &potential, double mass, double x0, double v0,
                               std::span<const double> t_grid, IntegrationOptions options) {
  require_increasing(t_grid, "integrate_classical");
  if (!(mass > 0.0))
    throw InvalidArgument("integrate_classical: mass must be positive");
  double max_step = options.max_step;
  if (!(max_step > 0.0)) {
    const double total = t_grid.back() - t_grid.front();
    max_step = potential.kind() == Potential::Kind::Harmonic
                   ? 2.0 * std::numbers::pi / potential.omega() / 2000.0
                   : (total > 0.0 ? total / 1000.0 : 1.0);
  }
  using Phase = std::array<double, 2>;
  auto rhs = [&](const Phase &y, double) -> Phase {
    return {y[1], -potential.gradient(y[0]) / mass};
  };

  Trajectory out;
  out.x0 = x0;
  out.source = TrajectorySource::Classical;
  out.times.push_back(t_grid.front());
  out.positions.push_back(x0);
  Phase y{x0, v0};
  for (std::size_t k = 1; k < t_grid.size(); ++k) {
    const double span = t_grid[k] - t_grid[k - 1];
    const std::size_t n = substeps(span, max_step);
    const double h = span / static_cast<double>(n);
    for (std::size_t s = 0; s < n; ++s)
      y = rk4_step(y, rhs, t_grid[k - 1] + static_cast<double>(s) * h, h);
    out.times.push_back(t_grid[k]);
    out.positions.push_back(y[0]);
  }
  return out;
}

Trajectory analytic_trajectory(const GaussianPacketSpec &spec, double x0,
                               std::span<const double> t_grid) {
  require_increasing(t_grid, "analytic_trajectory");
  Trajectory out{{t_grid.begin(), t_grid.end()}, {}, x0, TrajectorySource::AnalyticFree, false};
  for (double t : t_grid)
    out.positions.push_back(free_packet_trajectory(spec, x0, t));
  out.positions.front() = x0;
  return out;
}

Trajectory analytic_trajectory(const OscillatorSpec &spec, double x0,
                               std::span<const double> t_grid) {
  require_increasing(t_grid, "analytic_trajectory");
  Trajectory out{{t_grid.begin(), t_grid.end()}, {}, x0, TrajectorySource::AnalyticHo, false};
  for (double t : t_grid)
    out.positions.push_back(ho_trajectory(spec, x0, t));
  out.positions.front() = x0;
  return out;
}

Trajectory series_trajectory(const GaussianPacketSpec &spec, double x0, int order,
                             std::span<const double> t_grid) {
  require_increasing(t_grid, "series_trajectory");
  Trajectory out{{t_grid.begin(), t_grid.end()}, {}, x0, TrajectorySource::Series, false};
  for (double t : t_grid)
    out.positions.push_back(free_packet_trajectory_series(spec, x0, t, order).position);
  out.positions.front() = x0;
  return out;
}

std::vector<double> uniform_times(double t_begin, double t_end, std::size_t intervals) {
  if (intervals == 0 || !(t_end > t_begin))
    throw InvalidArgument("uniform_times: need t_end > t_begin and at least one interval");
  std::vector<double> t(intervals + 1);
  const double h = (t_end - t_begin) / static_cast<double>(intervals);
  for (std::size_t k = 0; k <= intervals; ++k)
    t[k] = t_begin + static_cast<double>(k) * h;
  t.back() = t_end;
  return t;
}

std::string_view to_string(SamplingMode mode) noexcept {
  switch (mode) {
  case SamplingMode::Quantile:
    return "quantile";
  case SamplingMode::Uniform:
    return "uniform";
  case SamplingMode::Random:
    return "random";
  }
  return "unknown";
}

std::optional<SamplingMode> parse_sampling_mode(std::string_view text) noexcept {
  if (text == "quantile")
    return SamplingMode::Quantile;
  if (text == "uniform")
    return SamplingMode::Uniform;
  if (text == "random")
    return SamplingMode::Random;
  return std::nullopt;
}

DiscreteCdf::DiscreteCdf(const RealField &density)
    : grid_(density.grid), cumulative_(density.size(), 0.0) {
  require_finite(density, "DiscreteCdf");
  for (std::size_t i = 0; i < density.size(); ++i)
    if (density[i] < 0.0)
      throw InvalidArgument("DiscreteCdf: negative density at node " + std::to_string(i));
  const double dx = grid_.dx();
  for (std::size_t i = 1; i < density.size(); ++i)
    cumulative_[i] = cumulative_[i - 1] + 0.5 * dx * (density[i - 1] + density[i]);
  const double total = cumulative_.back();
  if (!(total > 0.0))
    throw InvalidArgument("DiscreteCdf: density integrates to zero");
  for (double &c : cumulative_)
    c /= total;
}

double DiscreteCdf::operator()(double x) const {
  if (x <= grid_.x_min())
    return 0.0;
  if (x >= grid_.x_max())
    return 1.0;
  const double pos = (x - grid_.x_min()) / grid_.dx();
  const auto i = std::min(static_cast<std::size_t>(pos), grid_.size() - 2);
  const double frac = pos - static_cast<double>(i);
  return cumulative_[i] + frac * (cumulative_[i + 1] - cumulative_[i]);
}

double DiscreteCdf::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0))
    throw InvalidArgument("DiscreteCdf::quantile: p outside [0, 1]");
  // first node whose cumulative value reaches p
  const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), p);
  if (it == cumulative_.begin())
    return grid_.x_min();
  if (it == cumulative_.end())
    return grid_.x_max();
  const auto i = static_cast<std::size_t>(it - cumulative_.begin());
  const double lo = cumulative_[i - 1];
  const double hi = cumulative_[i];
  const double frac = hi > lo ? (p - lo) / (hi - lo) : 0.0;
  return grid_.x(i - 1) + frac * grid_.dx();
}

std::vector<double> sample_initial_positions(const RealField &density, std::size_t n,
                                             SamplingMode mode, std::uint64_t seed) {
  if (n == 0)
    throw InvalidArgument("sample_initial_positions: n must be positive");
  const DiscreteCdf cdf(density);
  const double dn = static_cast<double>(n);
  std::vector<double> out(n);
  switch (mode) {
  case SamplingMode::Quantile:
    for (std::size_t k = 0; k < n; ++k)
      out[k] = cdf.quantile((static_cast<double>(k) + 0.5) / dn);
    break;
  case SamplingMode::Uniform: {
    const double lo = cdf.quantile(0.5 / dn);
    const double hi = cdf.quantile(1.0 - 0.5 / dn);
    for (std::size_t k = 0; k < n; ++k)
      out[k] = n == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * static_cast<double>(k) / (dn - 1.0);
    break;
  }
  case SamplingMode::Random: {
    std::mt19937_64 rng(seed);
    for (auto &x : out) {
      // 53 random bits -> [0, 1); spelled out so the stream is library-independent
      const double p = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      x = cdf.quantile(p);
    }
    break;
  }
  }
  return out;
}

Ensemble integrate_ensemble(const VelocityFieldProvider &provider,
                            std::span<const double> initial_positions,
                            std::span<const double> t_grid, SamplingMode sampling,
                            std::uint64_t seed, IntegrationOptions options) {
  if (initial_positions.size() < 2)
    throw InvalidArgument("integrate_ensemble: need at least two members");
  Ensemble out{{}, sampling, seed};
  out.members.reserve(initial_positions.size());
  for (double x0 : initial_positions)
    out.members.push_back(integrate_bohmian(provider, x0, t_grid, options));
  return out;
}

CrossingReport check_no_crossing(const Ensemble &ensemble) {
  const auto &m = ensemble.members;
  if (m.size() < 2)
    throw InvalidArgument("check_no_crossing: need at least two members");
  std::vector<std::size_t> order(m.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return m[a].x0 < m[b].x0; });
  std::size_t samples = 0;
  for (const auto &tr : m)
    samples = std::max(samples, tr.size());
  for (std::size_t k = 0; k < samples; ++k) {
    for (std::size_t j = 0; j + 1 < order.size(); ++j) {
      const Trajectory &lo = m[order[j]];
      const Trajectory &hi = m[order[j + 1]];
      if (k >= lo.size() || k >= hi.size())
        continue;
      if (!(lo.positions[k] < hi.positions[k]))
        return {false, order[j], order[j + 1], lo.times[k]};
    }
  }
  return {};
}

AsymptoticFit fit_asymptotic_velocity(const Trajectory &trajectory, double t_begin, double t_end,
                                      double spreading_time) {
  if (!(spreading_time > 0.0))
    throw InvalidArgument("fit_asymptotic_velocity: spreading time must be positive");
  if (t_begin < 10.0 * spreading_time)
    throw InvalidArgument("fit_asymptotic_velocity: window starts at u=" +
                          std::to_string(t_begin / spreading_time) +
                          ", outside the rectilinear regime (need u >= 10)");
  if (!(t_end > t_begin))
    throw InvalidArgument("fit_asymptotic_velocity: empty window");
  // Samples sitting on a window edge up to rounding belong to the window, so
  // the selection does not depend on the unit system.
  const double slack = 1e-9 * (t_end - t_begin);
  std::vector<double> ts, xs;
  for (std::size_t k = 0; k < trajectory.size(); ++k)
    if (trajectory.times[k] >= t_begin - slack && trajectory.times[k] <= t_end + slack) {
      ts.push_back(trajectory.times[k]);
      xs.push_back(trajectory.positions[k]);
    }
  if (ts.size() < 10)
    throw InvalidArgument("fit_asymptotic_velocity: window holds " + std::to_string(ts.size()) +
                          " samples, need at least 10");
  const double n = static_cast<double>(ts.size());
  const double t_mean = std::accumulate(ts.begin(), ts.end(), 0.0) / n;
  const double x_mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double stt = 0.0, stx = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    stt += (ts[k] - t_mean) * (ts[k] - t_mean);
    stx += (ts[k] - t_mean) * (xs[k] - x_mean);
  }
  const double slope = stx / stt;
  const double intercept = x_mean - slope * t_mean;
  double ss = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double r = xs[k] - (intercept + slope * ts[k]);
    ss += r * r;
  }
  return {slope, intercept, std::sqrt(ss / n), ts.size()};
}

double ks_distance(std::vector<double> samples, const RealField &density) {
  if (samples.empty())
    throw InvalidArgument("ks_distance: no samples");
  const DiscreteCdf cdf(density);
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, std::abs(f - static_cast<double>(i) / n),
                  std::abs(static_cast<double>(i + 1) / n - f)});
  }
  return d;
}

double equivariance_check(const Ensemble &ensemble, const RealField &density_t) {
  std::vector<double> finals;
  finals.reserve(ensemble.members.size());
  for (const auto &m : ensemble.members) {
    if (m.truncated)
      throw InvalidArgument("equivariance_check: ensemble contains truncated members");
    finals.push_back(m.positions.back());
  }
  return ks_distance(std::move(finals), density_t);
}

} // namespace qtraj
