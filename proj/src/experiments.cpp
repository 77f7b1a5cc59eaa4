#include "qtraj/experiments.hpp"

#include "qtraj/errors.hpp"
#include "qtraj/hierarchy.hpp"
#include "qtraj/residuals.hpp"
#include "qtraj/table.hpp"
#include "qtraj/trajectory.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <numbers>

#ifndef QTRAJ_VERSION
#define QTRAJ_VERSION "unknown"
#endif

namespace qtraj {

namespace {

using OJson = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct Units {
  std::string time, length, velocity, action, amplitude, density;
};

Units units_for(UnitSystem system) {
  if (system == UnitSystem::SI)
    return {"s", "m", "m/s", "J*s", "m^-1/2", "m^-1"};
  return {"natural", "natural", "natural", "natural", "natural", "natural"};
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text(const fs::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw Error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out)
    throw Error("failed writing " + path.string());
}

// Shared state of one run: output directory, table registry, metrics.
class RunContext {
public:
  RunContext(const RunConfig &config, fs::path dir)
      : config(config), units(units_for(config.units)) {
    out.directory = std::move(dir);
  }

  void emit(const std::string &name, const Table &table) {
    emit_table(table, out.directory / name);
    if (std::find(out.files.begin(), out.files.end(), name) == out.files.end())
      out.files.push_back(name);
  }

  const RunConfig &config;
  Units units;
  RunOutput out;
};

std::vector<double> report_times(const RunConfig &c) {
  const double span = c.time_span();
  const auto intervals = static_cast<std::size_t>(std::ceil(span / c.dt - 1e-9));
  return uniform_times(0.0, span, std::max<std::size_t>(intervals, 1));
}

RealField free_density(const GaussianPacketSpec &spec, const Grid1D &grid, double t) {
  return sample(grid, [&](double x) { return free_packet_density(spec, x, t); }, t);
}

RealField ho_density_field(const OscillatorSpec &spec, const Grid1D &grid, double t) {
  return sample(grid, [&](double x) { return ho_density(spec, x, t); }, t);
}

// --- figure experiments ------------------------------------------------------

void run_figure1(RunContext &ctx, bool asymptotic) {
  const RunConfig &c = ctx.config;
  const GaussianPacketSpec spec = c.free_spec();
  const double ts = spec.spreading_time();
  const std::vector<double> times = report_times(c);
  const FreePacketField field(spec);

  std::vector<Trajectory> paths;
  OJson members = OJson::array();
  for (double x0 : c.x0) {
    Trajectory quantum = integrate_bohmian(field, x0, times);
    Trajectory classical =
        integrate_classical(Potential::free(), c.params.mass(), x0, c.v0, times);
    double from_classical = 0.0;
    double from_closed_form = 0.0;
    for (std::size_t i = 0; i < quantum.size(); ++i) {
      from_classical =
          std::max(from_classical, std::abs(quantum.positions[i] - classical.positions[i]));
      from_closed_form = std::max(
          from_closed_form,
          std::abs(quantum.positions[i] - free_packet_trajectory(spec, x0, times[i])));
    }
    OJson m;
    m["x0"] = x0;
    m["max_separation_from_classical_over_sigma0"] = from_classical / c.sigma0;
    m["max_error_vs_closed_form_over_sigma0"] = from_closed_form / c.sigma0;
    m["coincides_with_classical"] = from_classical <= 1e-9 * c.sigma0;
    members.push_back(m);
    paths.push_back(std::move(quantum));
    paths.push_back(std::move(classical));
  }

  Table trajectories = trajectory_table(paths, ctx.units.time, ctx.units.length);
  trajectories.columns.push_back({"u", ""});
  {
    std::size_t row = 0;
    for (const Trajectory &tr : paths)
      for (double t : tr.times)
        trajectories.rows[row++].push_back(t / ts);
  }
  ctx.emit("trajectories.csv", trajectories);
  ctx.out.metrics["u_span"] = c.time_span() / ts;
  ctx.out.metrics["members"] = members;

  if (!asymptotic)
    return;

  Table lines{{{"t", ctx.units.time},
               {"x", ctx.units.length},
               {"source", ""},
               {"x0", ctx.units.length},
               {"u", ""}},
              {}};
  Table fits{{{"x0", ctx.units.length},
              {"fitted_velocity", ctx.units.velocity},
              {"predicted_velocity", ctx.units.velocity},
              {"relative_error", ""},
              {"intercept", ctx.units.length},
              {"rms_residual", ctx.units.length},
              {"samples", ""}},
             {}};
  // scale used when the predicted slope is exactly zero
  const double spreading_speed = c.params.hbar() / (2.0 * c.params.mass() * c.sigma0);
  double worst = 0.0;
  for (std::size_t k = 0; k < c.x0.size(); ++k) {
    const double x0 = c.x0[k];
    const double v_inf = free_packet_asymptotic_velocity(spec, x0);
    for (double t : times)
      lines.add_row({t, v_inf * t, std::string("asymptote"), x0, t / ts});
    const AsymptoticFit fit =
        fit_asymptotic_velocity(paths[2 * k], c.fit_u_begin * ts, c.fit_u_end * ts, ts);
    const double scale = v_inf != 0.0 ? std::abs(v_inf) : spreading_speed;
    const double rel = std::abs(fit.velocity - v_inf) / scale;
    worst = std::max(worst, rel);
    fits.add_row({x0, fit.velocity, v_inf, rel, fit.intercept, fit.residual,
                  static_cast<double>(fit.samples)});
  }
  ctx.emit("asymptotes.csv", lines);
  ctx.emit("fits.csv", fits);
  ctx.out.metrics["fit_u_window"] = {c.fit_u_begin, c.fit_u_end};
  ctx.out.metrics["max_slope_relative_error"] = worst;
}

// --- hierarchy convergence ---------------------------------------------------

struct ModelView {
  std::function<std::complex<double>(double, double)> psi;
  std::function<double(double, double)> action;
  std::function<double(double)> center;
  Potential potential;
};

ModelView model_view(const RunConfig &c) {
  if (c.model == Model::Free) {
    const GaussianPacketSpec spec = c.free_spec();
    return {[spec](double x, double t) { return free_packet_wavefunction(spec, x, t); },
            [spec](double x, double t) { return free_packet_action(spec, x, t); },
            [spec](double t) { return spec.v0() * t; }, Potential::free()};
  }
  const OscillatorSpec spec = c.oscillator_spec();
  return {[spec](double x, double t) { return ho_wavefunction(spec, x, t); },
          [spec](double x, double t) { return ho_action(spec, x, t); },
          [spec](double t) { return spec.a() * std::cos(spec.omega() * t); },
          Potential::harmonic(spec.params().mass(), spec.omega())};
}

void run_hierarchy_convergence(RunContext &ctx) {
  const RunConfig &c = ctx.config;
  const Grid1D grid = c.grid.grid();
  const ModelView model = model_view(c);
  const double t_end = c.t_max;

  RealField r0 = sample(grid, [&](double x) { return std::abs(model.psi(x, 0.0)); });
  RealField s0 = sample(grid, [&](double x) { return model.action(x, 0.0); });
  const PolarFields initial{r0, s0, {}};

  Table errors{{{"order", ""},
                {"action_error", ctx.units.action},
                {"amplitude_error", ctx.units.amplitude},
                {"steps", ""}},
               {}};
  OJson per_order = OJson::array();
  const double center = model.center(t_end);
  const NodeRange window = nodes_within(grid, center - 2.0 * c.sigma0, center + 2.0 * c.sigma0);

  for (int order = 1; order <= c.order; ++order) {
    const HierarchyState start = init_hierarchy(initial, order);
    std::size_t steps = 0;
    const HierarchyState end =
        propagate_hierarchy_until(start, model.potential, c.params.mass(), t_end, &steps);
    const PolarFields rec = reconstruct_polar(end, c.params);
    // Inflowing edges carry extrapolated garbage; only the compared window must be sound.
    std::size_t outside = 0;
    for (std::size_t i : rec.invalid_nodes) {
      if (i >= window.begin && i < window.end)
        throw NumericalAbort("hierarchy-convergence: amplitude overflow at order " +
                             std::to_string(order));
      ++outside;
    }
    double s_err = 0.0;
    double r_err = 0.0;
    for (std::size_t i = window.begin; i < window.end; ++i) {
      const double x = grid.x(i);
      s_err = std::max(s_err, std::abs(rec.action[i] - model.action(x, t_end)));
      r_err = std::max(r_err, std::abs(rec.amplitude[i] - std::abs(model.psi(x, t_end))));
    }
    errors.add_row({static_cast<double>(order), s_err, r_err, static_cast<double>(steps)});
    ctx.emit("hierarchy_convergence.csv", errors);
    per_order.push_back({{"order", order},
                         {"action_error", s_err},
                         {"amplitude_error", r_err},
                         {"invalid_nodes_outside_window", outside}});
    ctx.out.metrics["orders"] = per_order;

    if (order == c.order) {
      Table fields{{{"x", ctx.units.length}}, {}};
      for (int n = 0; n <= order; ++n)
        fields.columns.push_back(
            {"sbar" + std::to_string(n),
             c.units == UnitSystem::SI ? "(J*s)^" + std::to_string(1 - n) : ctx.units.action});
      for (std::size_t i = 0; i < grid.size(); ++i) {
        std::vector<Cell> row{grid.x(i)};
        for (int n = 0; n <= order; ++n)
          row.emplace_back(end.values(n)[i]);
        fields.add_row(std::move(row));
      }
      ctx.emit("hierarchy_fields.csv", fields);
    }
  }
  ctx.out.metrics["t_end"] = t_end;
}

// --- equivariance --------------------------------------------------------------

void run_equivariance(RunContext &ctx) {
  const RunConfig &c = ctx.config;
  const Grid1D grid = c.grid.grid();
  const bool free = c.model == Model::Free;

  std::vector<double> checkpoints;
  if (free) {
    for (int k = 1; k <= 4; ++k)
      checkpoints.push_back(c.t_max * k / 4.0);
  } else {
    const double quarter = c.oscillator_spec().period() / 4.0;
    for (int k = 1; k * quarter <= c.t_max * (1.0 + 1e-12); ++k)
      checkpoints.push_back(k * quarter);
    if (checkpoints.empty())
      checkpoints.push_back(c.t_max);
  }
  std::vector<double> t_grid{0.0};
  t_grid.insert(t_grid.end(), checkpoints.begin(), checkpoints.end());

  auto density_at = [&](double t) {
    return free ? free_density(c.free_spec(), grid, t)
                : ho_density_field(c.oscillator_spec(), grid, t);
  };
  const std::vector<double> starts =
      sample_initial_positions(density_at(0.0), c.ensemble_n, c.ensemble_mode, c.seed);

  Ensemble ensemble;
  if (free)
    ensemble = integrate_ensemble(FreePacketField(c.free_spec()), starts, t_grid,
                                  c.ensemble_mode, c.seed);
  else
    ensemble = integrate_ensemble(OscillatorField(c.oscillator_spec()), starts, t_grid,
                                  c.ensemble_mode, c.seed);

  Table ks{{{"t", ctx.units.time}, {free ? "u" : "omega_t", ""}, {"ks", ""}, {"samples", ""}},
           {}};
  Table positions{{{"t", ctx.units.time}, {"x", ctx.units.length}, {"x0", ctx.units.length}},
                  {}};
  double worst = 0.0;
  for (std::size_t k = 1; k < t_grid.size(); ++k) {
    std::vector<double> xs;
    xs.reserve(ensemble.members.size());
    for (const Trajectory &tr : ensemble.members) {
      xs.push_back(tr.positions[k]);
      positions.add_row({t_grid[k], tr.positions[k], tr.x0});
    }
    const double d = ks_distance(xs, density_at(t_grid[k]));
    worst = std::max(worst, d);
    const double label =
        free ? c.free_spec().dimensionless_time(t_grid[k]) : c.omega * t_grid[k];
    ks.add_row({t_grid[k], label, d, static_cast<double>(xs.size())});
  }
  ctx.emit("equivariance.csv", ks);
  ctx.emit("ensemble_positions.csv", positions);
  const CrossingReport crossing = check_no_crossing(ensemble);
  ctx.out.metrics["max_ks"] = worst;
  ctx.out.metrics["ordering_preserved"] = crossing.ok;
  ctx.out.metrics["sampling"] = std::string(to_string(c.ensemble_mode));
}

// --- residuals -----------------------------------------------------------------

void run_residuals(RunContext &ctx) {
  const RunConfig &c = ctx.config;
  const Grid1D grid = c.grid.grid();
  const bool free = c.model == Model::Free;
  const ModelView model = model_view(c);
  const double scale = free ? c.free_spec().spreading_time() : 1.0 / c.omega;
  const double h = 1e-3 * scale;

  auto sbar = [&](double t) {
    return free ? free_packet_complex_action(c.free_spec(), grid, t)
                : ho_complex_action(c.oscillator_spec(), grid, t);
  };

  Table table{{{"t", ctx.units.time},
               {"qhj_residual", ctx.units.action + "/" + ctx.units.time},
               {"velocity_residual", ctx.units.velocity + "/" + ctx.units.time}},
              {}};
  double worst_qhj = 0.0;
  double worst_vel = 0.0;
  for (double t : report_times(c)) {
    const std::array<ComplexField, 3> states{sbar(t - h), sbar(t), sbar(t + h)};
    const RealField qhj = qhj_residual(states, model.potential, c.params);
    const RealField vel = complex_velocity_residual(states, c.params, model.potential);
    const double width =
        free ? spreading(c.free_spec(), t).sigma_t : c.oscillator_spec().sigma0();
    const NodeRange w =
        nodes_within(grid, model.center(t) - 2.0 * width, model.center(t) + 2.0 * width);
    double q = 0.0;
    double v = 0.0;
    for (std::size_t i = w.begin; i < w.end; ++i) {
      q = std::max(q, qhj[i]);
      v = std::max(v, vel[i]);
    }
    worst_qhj = std::max(worst_qhj, q);
    worst_vel = std::max(worst_vel, v);
    table.add_row({t, q, v});
  }
  ctx.emit("residuals.csv", table);
  ctx.out.metrics["max_qhj_residual"] = worst_qhj;
  ctx.out.metrics["max_velocity_residual"] = worst_vel;
}

OJson manifest(const RunContext &ctx, const std::string &status, const std::string &started,
               const std::string &finished) {
  OJson m;
  m["experiment"] = to_string(ctx.config.experiment);
  m["version"] = library_version();
  m["status"] = status;
  m["started_at"] = started;
  if (!finished.empty())
    m["finished_at"] = finished;
  m["config"] = OJson::parse(serialize(ctx.config));
  m["units"] = {{"system", to_string(ctx.config.units)},
                {"natural_means", "hbar = m = sigma0 = 1"},
                {"u", "hbar t / (2 m sigma0^2)"}};
  OJson files = OJson::array();
  for (const std::string &name : ctx.out.files) {
    const fs::path p = ctx.out.directory / name;
    files.push_back({{"name", name},
                     {"sha256", sha256_file(p)},
                     {"bytes", static_cast<std::uint64_t>(fs::file_size(p))}});
  }
  m["files"] = files;
  m["metrics"] = ctx.out.metrics;
  if (ctx.out.aborted)
    m["error"] = ctx.out.abort_reason;
  return m;
}

} // namespace

std::string library_version() { return QTRAJ_VERSION; }

fs::path resolve_output_dir(const RunConfig &config) {
  if (const char *env = std::getenv(kOutputDirEnv); env && *env)
    return env;
  return config.output_dir;
}

RunOutput run_experiment(const RunConfig &config) {
  return run_experiment(config, resolve_output_dir(config));
}

RunOutput run_experiment(const RunConfig &config, const fs::path &directory) {
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec)
    throw Error("cannot create output directory " + directory.string() + ": " + ec.message());

  RunContext ctx(config, directory);
  const std::string started = utc_now();
  const fs::path manifest_path = directory / "manifest.json";
  write_text(manifest_path, manifest(ctx, "running", started, "").dump(2) + "\n");

  try {
    switch (config.experiment) {
    case Experiment::Figure1Short:
      run_figure1(ctx, false);
      break;
    case Experiment::Figure1Asymptotic:
      run_figure1(ctx, true);
      break;
    case Experiment::HierarchyConvergence:
      run_hierarchy_convergence(ctx);
      break;
    case Experiment::Equivariance:
      run_equivariance(ctx);
      break;
    case Experiment::Residuals:
      run_residuals(ctx);
      break;
    }
  } catch (const NumericalAbort &e) {
    ctx.out.aborted = true;
    ctx.out.abort_reason = e.what();
  }

  write_text(manifest_path,
             manifest(ctx, ctx.out.aborted ? "aborted" : "completed", started, utc_now()).dump(2) +
                 "\n");
  return ctx.out;
}

std::string sha256_file(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot read " + path.string());
  EVP_MD_CTX *md = EVP_MD_CTX_new();
  if (!md || EVP_DigestInit_ex(md, EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(md);
    throw Error("SHA-256 unavailable");
  }
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0)
      EVP_DigestUpdate(md, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(md, digest, &len);
  EVP_MD_CTX_free(md);
  std::string hex;
  char two[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(two, sizeof two, "%02x", digest[i]);
    hex += two;
  }
  return hex;
}

} // namespace qtraj
