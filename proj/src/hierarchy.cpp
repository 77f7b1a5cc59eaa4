#include "qtraj/hierarchy.hpp"

#include "qtraj/errors.hpp"
#include "qtraj/rk4.hpp"
#include "qtraj/stencils.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

namespace qtraj {

HierarchyState::HierarchyState(Grid1D grid, double time, std::vector<std::vector<double>> fields)
    : grid_(grid), time_(time), fields_(std::move(fields)) {
  if (fields_.empty())
    throw InvalidArgument("HierarchyState: need at least Sbar_0");
  if (!std::isfinite(time))
    throw InvalidArgument("HierarchyState: time must be finite");
  for (std::size_t n = 0; n < fields_.size(); ++n) {
    if (fields_[n].size() != grid_.size())
      throw InvalidArgument("HierarchyState: field " + std::to_string(n) +
                            " does not match the grid");
    for (std::size_t i = 0; i < grid_.size(); ++i)
      if (!std::isfinite(fields_[n][i]))
        throw NonFiniteValue("HierarchyState field Sbar_" + std::to_string(n), i);
  }
}

RealField HierarchyState::field(int n) const { return RealField(grid_, values(n), time_); }

const std::vector<double> &HierarchyState::values(int n) const {
  if (n < 0 || n > order())
    throw InvalidArgument("HierarchyState: no field of order " + std::to_string(n));
  return fields_[static_cast<std::size_t>(n)];
}

std::vector<double> &HierarchyState::mutable_values(int n) {
  if (n < 0 || n > order())
    throw InvalidArgument("HierarchyState: no field of order " + std::to_string(n));
  return fields_[static_cast<std::size_t>(n)];
}

std::vector<double> HierarchyState::flatten() const {
  std::vector<double> flat;
  flat.reserve(fields_.size() * grid_.size());
  for (const auto &f : fields_)
    flat.insert(flat.end(), f.begin(), f.end());
  return flat;
}

HierarchyState HierarchyState::unflatten(const Grid1D &grid, double time, int order,
                                         const std::vector<double> &flat) {
  const std::size_t n = grid.size();
  const auto count = static_cast<std::size_t>(order + 1);
  if (flat.size() != count * n)
    throw InvalidArgument("HierarchyState::unflatten: size mismatch");
  std::vector<std::vector<double>> fields(count);
  for (std::size_t k = 0; k < count; ++k)
    fields[k].assign(flat.begin() + static_cast<std::ptrdiff_t>(k * n),
                     flat.begin() + static_cast<std::ptrdiff_t>((k + 1) * n));
  return HierarchyState(grid, time, std::move(fields));
}

HierarchyState init_hierarchy(const PolarFields &psi0, int order) {
  if (order < 1)
    throw InvalidArgument("init_hierarchy: order must be >= 1 to hold ln R");
  const Grid1D &grid = psi0.amplitude.grid;
  if (!(psi0.action.grid == grid))
    throw InvalidArgument("init_hierarchy: R and S live on different grids");
  require_finite(psi0.action, "init_hierarchy S");
  std::vector<std::vector<double>> fields(static_cast<std::size_t>(order + 1),
                                          std::vector<double>(grid.size(), 0.0));
  fields[0] = psi0.action.values;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = psi0.amplitude[i];
    if (!(r > 0.0) || !std::isfinite(r))
      throw InvalidArgument("init_hierarchy: amplitude must be positive, node " +
                            std::to_string(i) + " has R=" + std::to_string(r));
    fields[1][i] = std::log(r);
  }
  return HierarchyState(grid, psi0.amplitude.time, std::move(fields));
}

namespace {

// Evaluates the right-hand side of the flattened system into `out`.
class RhsEvaluator {
public:
  RhsEvaluator(const Grid1D &grid, int order, const Potential &potential, double mass)
      : n_(grid.size()), order_(order), dx_(grid.dx()), mass_(mass),
        potential_(potential.sample(grid).values),
        grad_(static_cast<std::size_t>(order + 1) * grid.size()),
        lap_(grid.size() * static_cast<std::size_t>(std::max(order, 1))) {}

  void operator()(std::span<const double> y, std::span<double> out) {
    const double inv2m = 1.0 / (2.0 * mass_);
    for (int k = 0; k <= order_; ++k)
      gradient_into(field(y, k), dx_, slice(grad_, k));
    for (int k = 0; k < order_; ++k)
      laplacian_into(field(y, k), dx_, slice(lap_, k));

    auto g0 = slice(grad_, 0);
    auto d0 = slice(out, 0);
    for (std::size_t i = 0; i < n_; ++i)
      d0[i] = -g0[i] * g0[i] * inv2m - potential_[i];

    for (int n = 1; n <= order_; ++n) {
      auto dn = slice(out, n);
      auto lap_prev = slice(lap_, n - 1);
      for (std::size_t i = 0; i < n_; ++i) {
        double sum = 0.0;
        for (int k = 0; k <= n; ++k)
          sum += grad_[static_cast<std::size_t>(k) * n_ + i] *
                 grad_[static_cast<std::size_t>(n - k) * n_ + i];
        dn[i] = -inv2m * (sum + lap_prev[i]);
      }
    }
  }

private:
  std::span<const double> field(std::span<const double> y, int k) const {
    return y.subspan(static_cast<std::size_t>(k) * n_, n_);
  }
  std::span<double> slice(std::span<double> y, int k) const {
    return y.subspan(static_cast<std::size_t>(k) * n_, n_);
  }
  std::span<double> slice(std::vector<double> &y, int k) const {
    return slice(std::span<double>(y), k);
  }

  std::size_t n_;
  int order_;
  double dx_;
  double mass_;
  std::vector<double> potential_;
  std::vector<double> grad_;
  std::vector<double> lap_;
};

void require_mass(double mass) {
  if (!(mass > 0.0) || !std::isfinite(mass))
    throw InvalidArgument("hierarchy: mass must be positive and finite");
}

double max_increment(const HierarchyState &state, int &worst_order) {
  const std::size_t n = state.grid().size();
  std::vector<double> g(n);
  double worst = 0.0;
  worst_order = 0;
  for (int k = 0; k <= state.order(); ++k) {
    gradient_into(state.values(k), state.grid().dx(), g);
    for (double v : g) {
      const double inc = std::abs(v) * state.grid().dx();
      if (inc > worst) {
        worst = inc;
        worst_order = k;
      }
    }
  }
  return worst;
}

} // namespace

std::vector<RealField> hierarchy_rhs(const HierarchyState &state, const Potential &potential,
                                     double mass) {
  require_mass(mass);
  RhsEvaluator rhs(state.grid(), state.order(), potential, mass);
  const std::vector<double> y = state.flatten();
  std::vector<double> dy(y.size());
  rhs(y, dy);
  const HierarchyState rates =
      HierarchyState::unflatten(state.grid(), state.time(), state.order(), dy);
  std::vector<RealField> out;
  out.reserve(static_cast<std::size_t>(state.order() + 1));
  for (int k = 0; k <= state.order(); ++k)
    out.push_back(rates.field(k));
  return out;
}

double max_classical_speed(const HierarchyState &state, double mass) {
  require_mass(mass);
  std::vector<double> g(state.grid().size());
  gradient_into(state.values(0), state.grid().dx(), g);
  double vmax = 0.0;
  for (double v : g)
    vmax = std::max(vmax, std::abs(v) / mass);
  return vmax;
}

double stable_hierarchy_step(const HierarchyState &state, double mass, double horizon) {
  if (!(horizon > 0.0))
    throw InvalidArgument("stable_hierarchy_step: horizon must be positive");
  const double vmax = max_classical_speed(state, mass);
  double dt = horizon / 1000.0;
  if (vmax > 0.0)
    dt = std::min(dt, 0.5 * state.grid().dx() / vmax);
  return dt;
}

HierarchyState propagate_hierarchy(const HierarchyState &state, const Potential &potential,
                                   double mass, double dt, std::size_t n_steps,
                                   const HierarchyObserver &observer) {
  require_mass(mass);
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw InvalidArgument("propagate_hierarchy: dt must be positive");
  if (observer)
    observer(state);
  if (n_steps == 0)
    return state;

  const Grid1D grid = state.grid();
  const int order = state.order();
  RhsEvaluator evaluator(grid, order, potential, mass);
  auto rhs = [&evaluator](const std::vector<double> &y, double) {
    std::vector<double> dy(y.size());
    evaluator(y, dy);
    return dy;
  };

  HierarchyState current = state;
  std::vector<double> y = state.flatten();
  for (std::size_t step = 0; step < n_steps; ++step) {
    const double vmax = max_classical_speed(current, mass);
    if (vmax * dt > 0.5 * grid.dx()) {
      const std::string msg = "dt=" + std::to_string(dt) + " exceeds 0.5 dx / max|v_cl| = " +
                              std::to_string(0.5 * grid.dx() / vmax) + " at t=" +
                              std::to_string(current.time());
      if (step == 0)
        throw CflViolation("propagate_hierarchy: " + msg);
      throw CausticSuspected("propagate_hierarchy: classical speed grew until " + msg);
    }
    const double t = state.time() + static_cast<double>(step) * dt;
    y = rk4_step(y, rhs, t, dt);
    current = HierarchyState::unflatten(grid, state.time() + static_cast<double>(step + 1) * dt,
                                        order, y);
    int worst_order = 0;
    const double inc = max_increment(current, worst_order);
    if (inc > kBlowUpThreshold)
      throw CausticSuspected("propagate_hierarchy: |dSbar_" + std::to_string(worst_order) +
                             "/dx| dx = " + std::to_string(inc) + " at t=" +
                             std::to_string(current.time()));
    if (observer)
      observer(current);
  }
  return current;
}

HierarchyState propagate_hierarchy_until(const HierarchyState &state, const Potential &potential,
                                         double mass, double t_end, std::size_t *steps) {
  require_mass(mass);
  const double horizon = t_end - state.time();
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw InvalidArgument("propagate_hierarchy_until: t_end must lie after the state's time");
  constexpr std::size_t chunk = 20;
  HierarchyState current = state;
  std::size_t taken = 0;
  while (t_end - current.time() > 1e-12 * horizon) {
    const double remaining = t_end - current.time();
    double dt = horizon / 1000.0;
    const double vmax = max_classical_speed(current, mass);
    if (vmax > 0.0)
      dt = std::min(dt, 0.25 * current.grid().dx() / vmax);
    const auto needed = static_cast<std::size_t>(std::ceil(remaining / dt - 1e-9));
    const std::size_t n = std::min(chunk, std::max<std::size_t>(needed, 1));
    if (n == needed)
      dt = remaining / static_cast<double>(n);
    current = propagate_hierarchy(current, potential, mass, dt, n);
    taken += n;
  }
  if (steps)
    *steps = taken;
  return current;
}

PolarFields reconstruct_polar(const HierarchyState &state, const PhysParams &params) {
  if (state.order() < 1)
    throw InvalidArgument("reconstruct_polar: need order >= 1 for the amplitude");
  const double hbar2 = params.hbar() * params.hbar();
  const Grid1D &grid = state.grid();
  std::vector<double> log_r(grid.size(), 0.0);
  std::vector<double> s(grid.size(), 0.0);
  double weight = 1.0; // (-1)^k hbar^{2k}
  for (int k = 0; 2 * k <= state.order(); ++k) {
    const auto &even = state.values(2 * k);
    for (std::size_t i = 0; i < grid.size(); ++i)
      s[i] += weight * even[i];
    if (2 * k + 1 <= state.order()) {
      const auto &odd = state.values(2 * k + 1);
      for (std::size_t i = 0; i < grid.size(); ++i)
        log_r[i] += weight * odd[i];
    }
    weight *= -hbar2;
  }
  PolarFields out{RealField(grid, state.time()), RealField(grid, std::move(s), state.time()), {}};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out.amplitude[i] = std::exp(log_r[i]);
    if (!std::isfinite(out.amplitude[i]) || !std::isfinite(out.action[i]))
      out.invalid_nodes.push_back(i);
  }
  return out;
}

namespace {

// (hbar/i)^n = hbar^n (-i)^n, with the unit factor cycling exactly.
std::complex<double> expansion_weight(double hbar, int n) {
  static constexpr std::complex<double> cycle[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  return std::pow(hbar, n) * cycle[n % 4];
}

ComplexField sum_series(const Grid1D &grid, double time, double hbar,
                        const std::vector<std::vector<double>> &terms) {
  ComplexField out(grid, time);
  for (std::size_t n = 0; n < terms.size(); ++n) {
    const std::complex<double> w = expansion_weight(hbar, static_cast<int>(n));
    for (std::size_t i = 0; i < grid.size(); ++i)
      out[i] += w * terms[n][i];
  }
  return out;
}

} // namespace

ComplexField complex_action(const HierarchyState &state, const PhysParams &params) {
  std::vector<std::vector<double>> terms;
  for (int n = 0; n <= state.order(); ++n)
    terms.push_back(state.values(n));
  return sum_series(state.grid(), state.time(), params.hbar(), terms);
}

ComplexField wavefunction(const HierarchyState &state, const PhysParams &params) {
  ComplexField psi = complex_action(state, params);
  const std::complex<double> i_over_hbar{0.0, 1.0 / params.hbar()};
  for (auto &v : psi.values)
    v = std::exp(i_over_hbar * v);
  return psi;
}

ComplexField complex_action_rate(const HierarchyState &state, const Potential &potential,
                                 const PhysParams &params) {
  std::vector<std::vector<double>> terms;
  for (auto &f : hierarchy_rhs(state, potential, params.mass()))
    terms.push_back(std::move(f.values));
  return sum_series(state.grid(), state.time(), params.hbar(), terms);
}

RealField truncated_velocity_field(const HierarchyState &state, const PhysParams &params,
                                   int max_pair_index) {
  if (max_pair_index < 0 || 2 * max_pair_index > state.order())
    throw InvalidArgument("truncated_velocity_field: need 0 <= 2M <= order (M=" +
                          std::to_string(max_pair_index) +
                          ", order=" + std::to_string(state.order()) + ")");
  const Grid1D &grid = state.grid();
  const double hbar2 = params.hbar() * params.hbar();
  std::vector<double> v(grid.size(), 0.0);
  std::vector<double> g(grid.size());
  double weight = 1.0 / params.mass();
  for (int k = 0; k <= max_pair_index; ++k) {
    gradient_into(state.values(2 * k), grid.dx(), g);
    for (std::size_t i = 0; i < grid.size(); ++i)
      v[i] += weight * g[i];
    weight *= -hbar2;
  }
  return RealField(grid, std::move(v), state.time());
}

} // namespace qtraj
