#include "qtraj/velocity.hpp"

#include "qtraj/errors.hpp"
#include "qtraj/interpolation.hpp"

#include <algorithm>
#include <cmath>

namespace qtraj {

std::string_view to_string(TrajectorySource source) noexcept {
  switch (source) {
  case TrajectorySource::AnalyticFree:
    return "analytic-free";
  case TrajectorySource::AnalyticHo:
    return "analytic-ho";
  case TrajectorySource::Hierarchy:
    return "hierarchy";
  case TrajectorySource::Oracle:
    return "oracle";
  case TrajectorySource::Classical:
    return "classical";
  case TrajectorySource::Series:
    return "series";
  }
  return "unknown";
}

SampledVelocityField::SampledVelocityField(Grid1D grid, double t0, double snapshot_dt,
                                           std::vector<std::vector<double>> snapshots,
                                           double x_lo, double x_hi, TrajectorySource source)
    : grid_(grid), t0_(t0), dt_(snapshot_dt), snapshots_(std::move(snapshots)), x_lo_(x_lo),
      x_hi_(x_hi), vmax_(0.0), source_(source) {
  if (snapshots_.size() < 4)
    throw InvalidArgument("SampledVelocityField: need at least 4 snapshots");
  if (!(snapshot_dt > 0.0))
    throw InvalidArgument("SampledVelocityField: snapshot spacing must be positive");
  if (!(x_lo < x_hi) || x_lo < grid.x_min() || x_hi > grid.x_max())
    throw InvalidArgument("SampledVelocityField: window must lie inside the grid");
  for (std::size_t k = 0; k < snapshots_.size(); ++k) {
    if (snapshots_[k].size() != grid.size())
      throw InvalidArgument("SampledVelocityField: snapshot size mismatch");
    RealField probe(grid_, snapshots_[k], t0 + static_cast<double>(k) * dt_);
    require_finite(probe, "SampledVelocityField snapshot");
    for (std::size_t i = 0; i < grid_.size(); ++i)
      if (grid_.x(i) >= x_lo_ && grid_.x(i) <= x_hi_)
        vmax_ = std::max(vmax_, std::abs(snapshots_[k][i]));
  }
}

double SampledVelocityField::t_end() const noexcept {
  return t0_ + static_cast<double>(snapshots_.size() - 1) * dt_;
}

bool SampledVelocityField::contains(double x, double t) const {
  const double slack = 1e-9 * dt_;
  return x >= x_lo_ && x <= x_hi_ && t >= t0_ - slack && t <= t_end() + slack;
}

double SampledVelocityField::suggested_step() const {
  double step = dt_;
  if (vmax_ > 0.0)
    step = std::min(step, grid_.dx() / vmax_);
  return 0.5 * step;
}

double SampledVelocityField::velocity(double x, double t) const {
  const double pos = (t - t0_) / dt_;
  const auto last_first = static_cast<std::ptrdiff_t>(snapshots_.size()) - 4;
  const std::ptrdiff_t first =
      std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(std::floor(pos)) - 1, 0, last_first);
  const auto w = lagrange4_weights(pos - static_cast<double>(first));
  double v = 0.0;
  for (std::size_t k = 0; k < 4; ++k)
    v += w[k] * cubic_interpolate(grid_, snapshots_[static_cast<std::size_t>(first) + k], x);
  return v;
}

SampledVelocityField hierarchy_velocity_field(const HierarchyState &initial,
                                              const Potential &potential,
                                              const PhysParams &params, int max_pair_index,
                                              double dt, std::size_t n_steps,
                                              std::size_t record_every, double x_lo, double x_hi) {
  if (record_every == 0 || n_steps % record_every != 0)
    throw InvalidArgument("hierarchy_velocity_field: n_steps must be a multiple of record_every");
  std::vector<std::vector<double>> snapshots;
  std::size_t seen = 0;
  propagate_hierarchy(initial, potential, params.mass(), dt, n_steps,
                      [&](const HierarchyState &s) {
                        if (seen++ % record_every == 0)
                          snapshots.push_back(
                              truncated_velocity_field(s, params, max_pair_index).values);
                      });
  return SampledVelocityField(initial.grid(), initial.time(),
                              dt * static_cast<double>(record_every), std::move(snapshots), x_lo,
                              x_hi, TrajectorySource::Hierarchy);
}

} // namespace qtraj
