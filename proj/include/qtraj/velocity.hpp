#pragma once

#include "qtraj/analytic.hpp"
#include "qtraj/grid.hpp"
#include "qtraj/hierarchy.hpp"
#include "qtraj/potential.hpp"

#include <string_view>
#include <vector>

namespace qtraj {

enum class TrajectorySource { AnalyticFree, AnalyticHo, Hierarchy, Oracle, Classical, Series };

std::string_view to_string(TrajectorySource source) noexcept;

/// Bohmian velocity field v(x, t) with the region where it may be trusted.
class VelocityFieldProvider {
public:
  virtual ~VelocityFieldProvider() = default;

  virtual double velocity(double x, double t) const = 0;
  virtual bool contains(double x, double t) const = 0;
  /// Largest integration step the field supports at its own accuracy.
  virtual double suggested_step() const = 0;
  virtual TrajectorySource source() const noexcept = 0;
};

class FreePacketField final : public VelocityFieldProvider {
public:
  explicit FreePacketField(GaussianPacketSpec spec) : spec_(spec) {}

  double velocity(double x, double t) const override { return free_packet_velocity(spec_, x, t); }
  bool contains(double, double) const override { return true; }
  /// Half of 1/1000 of the spreading time.
  double suggested_step() const override { return 0.5e-3 * spec_.spreading_time(); }
  TrajectorySource source() const noexcept override { return TrajectorySource::AnalyticFree; }

  const GaussianPacketSpec &spec() const noexcept { return spec_; }

private:
  GaussianPacketSpec spec_;
};

class OscillatorField final : public VelocityFieldProvider {
public:
  explicit OscillatorField(OscillatorSpec spec) : spec_(spec) {}

  double velocity(double x, double t) const override { return ho_velocity(spec_, x, t); }
  bool contains(double, double) const override { return true; }
  double suggested_step() const override { return 0.5e-3 * spec_.period(); }
  TrajectorySource source() const noexcept override { return TrajectorySource::AnalyticHo; }

private:
  OscillatorSpec spec_;
};

/// Velocity snapshots on a grid at uniform times, interpolated with cubic
/// Lagrange polynomials in x (4 nearest nodes) and in t (4 nearest snapshots).
class SampledVelocityField final : public VelocityFieldProvider {
public:
  /// `snapshots[k]` holds v at time t0 + k * snapshot_dt. Valid positions are
  /// [x_lo, x_hi], which must sit inside the grid.
  SampledVelocityField(Grid1D grid, double t0, double snapshot_dt,
                       std::vector<std::vector<double>> snapshots, double x_lo, double x_hi,
                       TrajectorySource source);

  double velocity(double x, double t) const override;
  bool contains(double x, double t) const override;
  /// Half of min(snapshot spacing, dx / max|v| inside the window).
  double suggested_step() const override;
  TrajectorySource source() const noexcept override { return source_; }

  const Grid1D &grid() const noexcept { return grid_; }
  double t_begin() const noexcept { return t0_; }
  double t_end() const noexcept;

private:
  Grid1D grid_;
  double t0_;
  double dt_;
  std::vector<std::vector<double>> snapshots_;
  double x_lo_;
  double x_hi_;
  double vmax_;
  TrajectorySource source_;
};

/// Propagates the hierarchy for n_steps of dt and records the truncated
/// velocity field with `max_pair_index` corrections after every
/// `record_every` steps. The validity window is [x_lo, x_hi].
SampledVelocityField hierarchy_velocity_field(const HierarchyState &initial,
                                              const Potential &potential,
                                              const PhysParams &params, int max_pair_index,
                                              double dt, std::size_t n_steps,
                                              std::size_t record_every, double x_lo, double x_hi);

} // namespace qtraj
