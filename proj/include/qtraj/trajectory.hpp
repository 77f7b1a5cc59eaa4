#pragma once

#include "qtraj/grid.hpp"
#include "qtraj/potential.hpp"
#include "qtraj/velocity.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace qtraj {

/// Time-ordered samples of one particle path. positions[0] == x0.
struct Trajectory {
  std::vector<double> times;
  std::vector<double> positions;
  double x0 = 0.0;
  TrajectorySource source = TrajectorySource::AnalyticFree;
  /// Integration stopped early because the path left the field's validity window.
  bool truncated = false;

  std::size_t size() const noexcept { return times.size(); }
};

struct IntegrationOptions {
  /// Upper bound on the RK4 step; 0 means the provider's suggested step.
  double max_step = 0.0;
};

/// Integrates dx/dt = v(x, t) with RK4, reporting at every time in `t_grid`
/// (sub-stepping in between). x0 must lie in the provider's window at
/// t_grid[0]; leaving the window later truncates the result and sets the flag.
Trajectory integrate_bohmian(const VelocityFieldProvider &provider, double x0,
                             std::span<const double> t_grid, IntegrationOptions options = {});

/// Newtonian path x'' = -V'(x)/m from (x0, v0). Default step: period/2000 for
/// the harmonic potential, span/1000 otherwise.
Trajectory integrate_classical(const Potential &potential, double mass, double x0, double v0,
                               std::span<const double> t_grid, IntegrationOptions options = {});

/// Closed-form path sampled on t_grid (free packet, oscillator, or short-time series).
Trajectory analytic_trajectory(const GaussianPacketSpec &spec, double x0,
                               std::span<const double> t_grid);
Trajectory analytic_trajectory(const OscillatorSpec &spec, double x0,
                               std::span<const double> t_grid);
Trajectory series_trajectory(const GaussianPacketSpec &spec, double x0, int order,
                             std::span<const double> t_grid);

/// n + 1 equally spaced times from t_begin to t_end.
std::vector<double> uniform_times(double t_begin, double t_end, std::size_t intervals);

// --- ensembles ---------------------------------------------------------------

enum class SamplingMode { Quantile, Uniform, Random };

std::string_view to_string(SamplingMode mode) noexcept;
std::optional<SamplingMode> parse_sampling_mode(std::string_view text) noexcept;

/// Piecewise-linear CDF of a non-negative density tabulated on a grid
/// (cumulative trapezoid, normalized to 1).
class DiscreteCdf {
public:
  explicit DiscreteCdf(const RealField &density);

  double operator()(double x) const;
  /// Inverse of the CDF for p in [0, 1].
  double quantile(double p) const;

private:
  Grid1D grid_;
  std::vector<double> cumulative_;
};

/// Initial positions distributed as `density`:
///   Quantile: the n mid-probability quantiles (k + 1/2)/n, deterministic.
///   Uniform:  n equally spaced points between the first and last of those quantiles.
///   Random:   inverse-CDF draws from a 64-bit Mersenne Twister seeded with `seed`.
std::vector<double> sample_initial_positions(const RealField &density, std::size_t n,
                                             SamplingMode mode, std::uint64_t seed = 0);

struct Ensemble {
  std::vector<Trajectory> members;
  SamplingMode sampling = SamplingMode::Quantile;
  std::uint64_t seed = 0;
};

Ensemble integrate_ensemble(const VelocityFieldProvider &provider,
                            std::span<const double> initial_positions,
                            std::span<const double> t_grid, SamplingMode sampling,
                            std::uint64_t seed = 0, IntegrationOptions options = {});

struct CrossingReport {
  bool ok = true;
  /// Indices into Ensemble::members of the first pair found out of order.
  std::size_t first = 0;
  std::size_t second = 0;
  double time = 0.0;
};

/// Checks that the initial ordering of the members is strictly preserved at
/// every stored time and reports the earliest violation.
CrossingReport check_no_crossing(const Ensemble &ensemble);

struct AsymptoticFit {
  double velocity;
  double intercept;
  /// Root-mean-square deviation of the samples from the fitted line.
  double residual;
  std::size_t samples;
};

/// Least-squares line through the samples with t in [t_begin, t_end]. The
/// window must start in the rectilinear regime, t_begin >= 10 * spreading_time
/// (u >= 10), and hold at least 10 samples.
AsymptoticFit fit_asymptotic_velocity(const Trajectory &trajectory, double t_begin, double t_end,
                                      double spreading_time);

/// Kolmogorov-Smirnov distance between the members' final positions and the
/// CDF of `density_t`.
double equivariance_check(const Ensemble &ensemble, const RealField &density_t);

/// KS distance of a sample against a tabulated density.
double ks_distance(std::vector<double> samples, const RealField &density);

} // namespace qtraj
