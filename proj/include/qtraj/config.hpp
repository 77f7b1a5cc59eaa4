#pragma once

// Run configuration: a flat JSON object, parsed strictly.

#include "qtraj/analytic.hpp"
#include "qtraj/grid.hpp"
#include "qtraj/trajectory.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qtraj {

enum class Model { Free, Harmonic };

enum class Experiment {
  Figure1Short,
  Figure1Asymptotic,
  HierarchyConvergence,
  Equivariance,
  Residuals,
};

std::string_view to_string(Model model) noexcept;
std::string_view to_string(Experiment experiment) noexcept;
std::optional<Experiment> parse_experiment(std::string_view text) noexcept;

/// All experiment names in a fixed order.
std::span<const Experiment> all_experiments() noexcept;
/// One-line description used by `list-experiments`.
std::string_view describe(Experiment experiment) noexcept;

/// Unit system label for table headers. Natural units put every column in
/// units of hbar = m = sigma0 = 1; SI labels columns with s, m, m/s, J s.
enum class UnitSystem { Natural, SI };

std::string_view to_string(UnitSystem units) noexcept;

struct GridSpec {
  double x_min;
  double x_max;
  std::size_t n_points;

  Grid1D grid() const { return Grid1D(x_min, x_max, n_points); }
  bool operator==(const GridSpec &) const = default;
};

struct RunConfig {
  Model model = Model::Free;
  Experiment experiment = Experiment::Figure1Short;
  PhysParams params;
  UnitSystem units = UnitSystem::Natural;

  double sigma0 = 1.0; ///< harmonic: always hbar / (2 m omega) under the root
  double v0 = 0.0;     ///< free model only
  double omega = 0.0;  ///< harmonic only
  double a = 0.0;      ///< harmonic only

  std::vector<double> x0;
  double t_max = 0.0;
  /// Spacing of the reported time samples.
  double dt = 0.0;
  GridSpec grid{0.0, 0.0, 0};

  int order = 3;
  std::size_t ensemble_n = 9;
  SamplingMode ensemble_mode = SamplingMode::Quantile;
  std::uint64_t seed = 0;
  std::string output_dir = "output";

  /// Window of the late-time slope fit in units of u.
  double fit_u_begin = 20.0;
  double fit_u_end = 40.0;

  GaussianPacketSpec free_spec() const;
  OscillatorSpec oscillator_spec() const;

  /// Start and end of the simulated time span. The figure experiments fix it in
  /// units of u (0..1.5 and 0..50); the others run from 0 to t_max.
  double time_span() const;

  bool operator==(const RunConfig &) const = default;
};

/// Parses and validates a configuration document; throws ConfigError naming
/// the offending key. Defaults: order 3, quantile ensemble of 9, seed 0,
/// experiment figure1-short, natural units, 500 reported time intervals, and a
/// grid covering the packet's path with 12 final widths of margin.
RunConfig parse_config(std::string_view text);

/// Reads `path` and parses it; an unreadable file is a ConfigError on key "<file>".
RunConfig load_config(const std::filesystem::path &path);

/// Canonical JSON form with every derived value resolved; reparses to an equal config.
std::string serialize(const RunConfig &config);

} // namespace qtraj
