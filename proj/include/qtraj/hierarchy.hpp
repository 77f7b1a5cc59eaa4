#pragma once

// Power-series hierarchy of real action fields.
//
// The complex action is expanded as  Sbar = sum_n (hbar/i)^n Sbar_n  with real
// Sbar_n. Order 0 obeys the classical Hamilton-Jacobi equation
//
//   dSbar_0/dt = -(dSbar_0/dx)^2 / 2m - V,
//
// and every higher order is driven by the ones below it:
//
//   dSbar_n/dt = -(1/2m) sum_{k=0}^{n} dSbar_k/dx dSbar_{n-k}/dx - (1/2m) d2Sbar_{n-1}/dx2.
//
// hbar never appears in the propagation; it only enters when the fields are
// summed back into an amplitude and a phase.

#include "qtraj/analytic.hpp"
#include "qtraj/grid.hpp"
#include "qtraj/potential.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace qtraj {

/// Fields Sbar_0 .. Sbar_N on one grid at one time.
class HierarchyState {
public:
  /// All fields must share `grid`, have finite values, and there must be at least one.
  HierarchyState(Grid1D grid, double time, std::vector<std::vector<double>> fields);

  const Grid1D &grid() const noexcept { return grid_; }
  double time() const noexcept { return time_; }
  int order() const noexcept { return static_cast<int>(fields_.size()) - 1; }

  RealField field(int n) const;
  const std::vector<double> &values(int n) const;
  std::vector<double> &mutable_values(int n);

  /// Concatenation Sbar_0 | Sbar_1 | ... | Sbar_N.
  std::vector<double> flatten() const;
  static HierarchyState unflatten(const Grid1D &grid, double time, int order,
                                  const std::vector<double> &flat);

private:
  Grid1D grid_;
  double time_;
  std::vector<std::vector<double>> fields_;
};

/// Polar form psi = R exp(i S / hbar). `invalid_nodes` lists nodes where the
/// reconstruction overflowed; the fields are only meaningful when it is empty.
struct PolarFields {
  RealField amplitude;
  RealField action;
  std::vector<std::size_t> invalid_nodes;

  bool valid() const noexcept { return invalid_nodes.empty(); }
};

/// Seeds the hierarchy: Sbar_0 = S, Sbar_1 = ln R, Sbar_n = 0 for n >= 2.
/// Requires order >= 1 and R > 0 at every node.
HierarchyState init_hierarchy(const PolarFields &psi0, int order);

/// Time derivatives of every field (orders 0..N).
std::vector<RealField> hierarchy_rhs(const HierarchyState &state, const Potential &potential,
                                     double mass);

/// Largest |dSbar_0/dx| / m over the grid.
double max_classical_speed(const HierarchyState &state, double mass);

/// Step bound min(0.5 dx / max|v_cl|, horizon / 1000).
double stable_hierarchy_step(const HierarchyState &state, double mass, double horizon);

/// Increment threshold |dSbar_n/dx| * dx above which propagation aborts.
inline constexpr double kBlowUpThreshold = 1e6;

using HierarchyObserver = std::function<void(const HierarchyState &)>;

/// RK4 method-of-lines propagation over n_steps steps of size dt.
///
/// The advective bound dt <= 0.5 dx / max|dSbar_0/dx / m| is checked before
/// every step: a violation before the first step throws CflViolation, later
/// ones (gradients steepening towards a focal point) throw CausticSuspected,
/// as does any field whose per-cell increment exceeds kBlowUpThreshold.
/// `observer`, when set, sees the initial state and the state after each step.
HierarchyState propagate_hierarchy(const HierarchyState &state, const Potential &potential,
                                   double mass, double dt, std::size_t n_steps,
                                   const HierarchyObserver &observer = {});

/// Propagates to `t_end`, choosing the step again every 20 steps as
/// min((t_end - t0) / 1000, 0.25 dx / max|dSbar_0/dx / m|). That is half the
/// advective bound, which leaves room for the classical speed to grow between
/// re-evaluations; only a genuine focal point then ends the run. `steps`, when
/// set, receives the number of steps taken.
HierarchyState propagate_hierarchy_until(const HierarchyState &state, const Potential &potential,
                                         double mass, double t_end,
                                         std::size_t *steps = nullptr);

/// R = exp[sum_n (-1)^n hbar^{2n} Sbar_{2n+1}],  S = sum_n (-1)^n hbar^{2n} Sbar_{2n},
/// summed over the orders present. Requires order >= 1.
PolarFields reconstruct_polar(const HierarchyState &state, const PhysParams &params);

/// Sbar = sum_n (hbar/i)^n Sbar_n.
ComplexField complex_action(const HierarchyState &state, const PhysParams &params);

/// psi = exp(i Sbar / hbar) assembled from complex_action.
ComplexField wavefunction(const HierarchyState &state, const PhysParams &params);

/// dSbar/dt = sum_n (hbar/i)^n dSbar_n/dt, using hierarchy_rhs.
ComplexField complex_action_rate(const HierarchyState &state, const Potential &potential,
                                 const PhysParams &params);

/// Classical velocity dressed with the first `max_pair_index` even-order corrections:
/// v = dSbar_0/dx / m + (1/m) sum_{n=1}^{M} (-1)^n hbar^{2n} dSbar_{2n}/dx.
/// Requires 2 M <= order.
RealField truncated_velocity_field(const HierarchyState &state, const PhysParams &params,
                                   int max_pair_index);

} // namespace qtraj
