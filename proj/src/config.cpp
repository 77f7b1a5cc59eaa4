#include "qtraj/config.hpp"

#include "qtraj/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace qtraj {

namespace {

using Json = nlohmann::json;

constexpr std::array kExperiments = {
    Experiment::Figure1Short,         Experiment::Figure1Asymptotic,
    Experiment::HierarchyConvergence, Experiment::Equivariance,
    Experiment::Residuals,
};

constexpr double kShortSpanU = 1.5;
constexpr double kAsymptoticSpanU = 50.0;
constexpr std::size_t kDefaultIntervals = 500;
// default grid: margin in final widths, and nodes per initial width
constexpr double kGridMargin = 12.0;
constexpr double kFreeNodesPerSigma = 50.0;
constexpr double kHarmonicNodesPerSigma = 100.0;
constexpr double kDomainRule = 8.0;

const std::set<std::string, std::less<>> kKnownKeys = {
    "model",      "experiment", "hbar",          "mass",        "units",    "sigma0",
    "v0",         "p0",         "omega",         "a",           "x0",       "t_max",
    "dt",         "x_min",      "x_max",         "n_points",    "order",    "ensemble_n",
    "ensemble_mode", "seed",    "output_dir",    "fit_u_begin", "fit_u_end",
};

class Reader {
public:
  explicit Reader(const Json &doc) : doc_(doc) {}

  bool has(const std::string &key) const { return doc_.contains(key); }

  double number(const std::string &key) const {
    const Json &v = doc_.at(key);
    if (!v.is_number())
      throw ConfigError(key, "must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d))
      throw ConfigError(key, "must be finite");
    return d;
  }
  double number(const std::string &key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  double positive(const std::string &key, double fallback) const {
    const double d = number(key, fallback);
    if (!(d > 0.0))
      throw ConfigError(key, "must be positive");
    return d;
  }
  double positive(const std::string &key) const {
    require(key);
    return positive(key, 0.0);
  }

  std::uint64_t unsigned_integer(const std::string &key, std::uint64_t fallback) const {
    if (!has(key))
      return fallback;
    const Json &v = doc_.at(key);
    if (!v.is_number_unsigned())
      throw ConfigError(key, "must be a non-negative integer");
    return v.get<std::uint64_t>();
  }

  std::string text(const std::string &key, std::string fallback) const {
    if (!has(key))
      return fallback;
    const Json &v = doc_.at(key);
    if (!v.is_string())
      throw ConfigError(key, "must be a string");
    return v.get<std::string>();
  }

  std::vector<double> number_list(const std::string &key) const {
    require(key);
    const Json &v = doc_.at(key);
    if (!v.is_array() || v.empty())
      throw ConfigError(key, "must be a non-empty list of numbers");
    std::vector<double> out;
    for (const Json &item : v) {
      if (!item.is_number() || !std::isfinite(item.get<double>()))
        throw ConfigError(key, "must be a non-empty list of finite numbers");
      out.push_back(item.get<double>());
    }
    return out;
  }

  void require(const std::string &key) const {
    if (!has(key))
      throw ConfigError(key, "required key is missing");
  }

  void forbid(const std::string &key, std::string_view why) const {
    if (has(key))
      throw ConfigError(key, std::string(why));
  }

private:
  const Json &doc_;
};

bool uses_grid(Experiment e) {
  return e == Experiment::HierarchyConvergence || e == Experiment::Equivariance ||
         e == Experiment::Residuals;
}

// Extent of the packet center over [0, span] and its largest width.
struct PathEnvelope {
  double lo;
  double hi;
  double sigma;
  double dx;
};

PathEnvelope envelope(const RunConfig &c) {
  if (c.model == Model::Free) {
    const GaussianPacketSpec spec = c.free_spec();
    const double span = c.time_span();
    const double end = c.v0 * span;
    return {std::min(0.0, end), std::max(0.0, end), spreading(spec, span).sigma_t,
            c.sigma0 / kFreeNodesPerSigma};
  }
  const double amp = std::abs(c.a);
  return {-amp, amp, c.sigma0, c.sigma0 / kHarmonicNodesPerSigma};
}

} // namespace

std::string_view to_string(UnitSystem units) noexcept {
  return units == UnitSystem::Natural ? "natural" : "SI";
}

std::string_view to_string(Model model) noexcept {
  return model == Model::Free ? "free" : "harmonic";
}

std::string_view to_string(Experiment experiment) noexcept {
  switch (experiment) {
  case Experiment::Figure1Short:
    return "figure1-short";
  case Experiment::Figure1Asymptotic:
    return "figure1-asymptotic";
  case Experiment::HierarchyConvergence:
    return "hierarchy-convergence";
  case Experiment::Equivariance:
    return "equivariance";
  case Experiment::Residuals:
    return "residuals";
  }
  return "unknown";
}

std::optional<Experiment> parse_experiment(std::string_view text) noexcept {
  for (Experiment e : kExperiments)
    if (to_string(e) == text)
      return e;
  return std::nullopt;
}

std::span<const Experiment> all_experiments() noexcept { return kExperiments; }

std::string_view describe(Experiment experiment) noexcept {
  switch (experiment) {
  case Experiment::Figure1Short:
    return "free packet: quantum and classical trajectories of an x0 fan for u in [0, 1.5]";
  case Experiment::Figure1Asymptotic:
    return "free packet: the same fan for u in [0, 50], asymptote lines and fitted slopes";
  case Experiment::HierarchyConvergence:
    return "action/amplitude error of the truncated hierarchy at t_max for orders 1..N";
  case Experiment::Equivariance:
    return "KS distance between a transported ensemble and |psi|^2 at checkpoints";
  case Experiment::Residuals:
    return "quantum Hamilton-Jacobi and complex-velocity residuals of the closed form";
  }
  return "";
}

GaussianPacketSpec RunConfig::free_spec() const {
  return GaussianPacketSpec(params, sigma0, params.mass() * v0);
}

OscillatorSpec RunConfig::oscillator_spec() const { return OscillatorSpec(params, omega, a); }

double RunConfig::time_span() const {
  const double ts = 2.0 * params.mass() * sigma0 * sigma0 / params.hbar();
  switch (experiment) {
  case Experiment::Figure1Short:
    return kShortSpanU * ts;
  case Experiment::Figure1Asymptotic:
    return kAsymptoticSpanU * ts;
  default:
    return t_max;
  }
}

RunConfig parse_config(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error &e) {
    throw ConfigError("<document>", std::string("not valid JSON: ") + e.what());
  }
  if (!doc.is_object())
    throw ConfigError("<document>", "must be a JSON object");
  for (const auto &[key, value] : doc.items()) {
    if (!kKnownKeys.contains(key))
      throw ConfigError(key, "unknown key");
    if (key != "x0" && !(value.is_string() || value.is_number() || value.is_boolean()))
      throw ConfigError(key, "values must be strings, numbers or booleans");
  }

  const Reader in(doc);
  RunConfig c;

  in.require("model");
  const std::string model = in.text("model", "");
  if (model == "free")
    c.model = Model::Free;
  else if (model == "harmonic")
    c.model = Model::Harmonic;
  else
    throw ConfigError("model", "must be 'free' or 'harmonic', got '" + model + "'");

  const std::string experiment = in.text("experiment", "figure1-short");
  const auto parsed = parse_experiment(experiment);
  if (!parsed)
    throw ConfigError("experiment", "unknown experiment '" + experiment + "'");
  c.experiment = *parsed;
  if ((c.experiment == Experiment::Figure1Short || c.experiment == Experiment::Figure1Asymptotic) &&
      c.model != Model::Free)
    throw ConfigError("experiment", experiment + " requires model 'free'");

  c.params = PhysParams(in.positive("hbar", 1.0), in.positive("mass", 1.0));

  const std::string units = in.text("units", "natural");
  if (units == "natural")
    c.units = UnitSystem::Natural;
  else if (units == "SI")
    c.units = UnitSystem::SI;
  else
    throw ConfigError("units", "must be 'natural' or 'SI'");

  if (c.model == Model::Free) {
    in.forbid("omega", "only used by the harmonic model");
    in.forbid("a", "only used by the harmonic model");
    c.sigma0 = in.positive("sigma0", 1.0);
    if (in.has("v0") && in.has("p0"))
      throw ConfigError("p0", "give either v0 or p0, not both");
    if (in.has("p0"))
      c.v0 = in.number("p0") / c.params.mass();
    else {
      in.require("v0");
      c.v0 = in.number("v0");
    }
  } else {
    in.forbid("v0", "only used by the free model");
    in.forbid("p0", "only used by the free model");
    c.omega = in.positive("omega");
    in.require("a");
    c.a = in.number("a");
    c.sigma0 = std::sqrt(c.params.hbar() / (2.0 * c.params.mass() * c.omega));
    if (in.has("sigma0")) {
      const double given = in.positive("sigma0", 1.0);
      if (std::abs(given - c.sigma0) > 1e-9 * c.sigma0) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "coherent packet requires sigma0^2 = hbar/(2 m omega), i.e. sigma0 = " << c.sigma0
            << ", got " << given;
        throw ConfigError("sigma0", msg.str());
      }
    }
  }

  c.x0 = in.number_list("x0");
  c.t_max = in.positive("t_max");

  const double span = c.time_span();
  c.dt = in.positive("dt", span / static_cast<double>(kDefaultIntervals));
  if (c.dt > span)
    throw ConfigError("dt", "must not exceed the simulated time span");

  const int grid_keys = int(in.has("x_min")) + int(in.has("x_max")) + int(in.has("n_points"));
  const PathEnvelope env = envelope(c);
  if (grid_keys == 0) {
    c.grid.x_min = env.lo - kGridMargin * env.sigma;
    c.grid.x_max = env.hi + kGridMargin * env.sigma;
    c.grid.n_points =
        static_cast<std::size_t>(std::ceil((c.grid.x_max - c.grid.x_min) / env.dx)) + 1;
  } else {
    if (grid_keys != 3)
      throw ConfigError(in.has("x_min") ? (in.has("x_max") ? "n_points" : "x_max") : "x_min",
                        "x_min, x_max and n_points must be given together");
    c.grid.x_min = in.number("x_min");
    c.grid.x_max = in.number("x_max");
    c.grid.n_points = in.unsigned_integer("n_points", 0);
    if (!(c.grid.x_max > c.grid.x_min))
      throw ConfigError("x_max", "must exceed x_min");
    if (c.grid.n_points < Grid1D::kMinPoints)
      throw ConfigError("n_points", "must be at least 8");
  }
  if (uses_grid(c.experiment)) {
    if (c.grid.x_min > env.lo - kDomainRule * env.sigma)
      throw ConfigError("x_min", "grid must reach 8 final widths beyond the packet path");
    if (c.grid.x_max < env.hi + kDomainRule * env.sigma)
      throw ConfigError("x_max", "grid must reach 8 final widths beyond the packet path");
  }

  const std::uint64_t order = in.unsigned_integer("order", 3);
  if (order < 1 || order > 20)
    throw ConfigError("order", "must be between 1 and 20");
  c.order = static_cast<int>(order);

  c.ensemble_n = in.unsigned_integer("ensemble_n", 9);
  if (c.ensemble_n < 1)
    throw ConfigError("ensemble_n", "must be at least 1");
  const std::string mode = in.text("ensemble_mode", "quantile");
  const auto sampling = parse_sampling_mode(mode);
  if (!sampling)
    throw ConfigError("ensemble_mode", "must be 'quantile', 'uniform' or 'random'");
  c.ensemble_mode = *sampling;
  c.seed = in.unsigned_integer("seed", 0);

  c.output_dir = in.text("output_dir", "output");
  if (c.output_dir.empty())
    throw ConfigError("output_dir", "must not be empty");

  c.fit_u_begin = in.positive("fit_u_begin", 20.0);
  c.fit_u_end = in.positive("fit_u_end", 40.0);
  if (c.fit_u_begin < 10.0)
    throw ConfigError("fit_u_begin", "slope fits need the rectilinear regime, u >= 10");
  if (!(c.fit_u_end > c.fit_u_begin))
    throw ConfigError("fit_u_end", "must exceed fit_u_begin");
  if (c.fit_u_end > kAsymptoticSpanU)
    throw ConfigError("fit_u_end", "must not exceed 50");

  return c;
}

RunConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ConfigError("<file>", "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize(const RunConfig &c) {
  nlohmann::ordered_json out;
  out["model"] = to_string(c.model);
  out["experiment"] = to_string(c.experiment);
  out["hbar"] = c.params.hbar();
  out["mass"] = c.params.mass();
  out["units"] = to_string(c.units);
  out["sigma0"] = c.sigma0;
  if (c.model == Model::Free) {
    out["v0"] = c.v0;
  } else {
    out["omega"] = c.omega;
    out["a"] = c.a;
  }
  out["x0"] = c.x0;
  out["t_max"] = c.t_max;
  out["dt"] = c.dt;
  out["x_min"] = c.grid.x_min;
  out["x_max"] = c.grid.x_max;
  out["n_points"] = c.grid.n_points;
  out["order"] = c.order;
  out["ensemble_n"] = c.ensemble_n;
  out["ensemble_mode"] = to_string(c.ensemble_mode);
  out["seed"] = c.seed;
  out["output_dir"] = c.output_dir;
  out["fit_u_begin"] = c.fit_u_begin;
  out["fit_u_end"] = c.fit_u_end;
  return out.dump(2) + "\n";
}

} // namespace qtraj
