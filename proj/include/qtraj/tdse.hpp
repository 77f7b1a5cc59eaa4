#pragma once

// Brute-force reference: Crank-Nicolson propagation of the 1D time-dependent
// Schrödinger equation with a second-order kinetic stencil and zero Dirichlet
// walls. Used to validate the closed forms and the hierarchy reconstruction.

#include "qtraj/analytic.hpp"
#include "qtraj/grid.hpp"
#include "qtraj/hierarchy.hpp"
#include "qtraj/potential.hpp"
#include "qtraj/velocity.hpp"

#include <complex>
#include <functional>
#include <vector>

namespace qtraj {

/// Modulus below which the wavefunction counts as negligible at the box edges.
inline constexpr double kEdgeTolerance = 1e-12;
/// Allowed drift of the trapezoid norm from 1.
inline constexpr double kNormTolerance = 1e-8;

class TdseState {
public:
  /// Throws NumericalAbort unless the trapezoid norm of psi is 1 within kNormTolerance.
  TdseState(ComplexField psi, Potential potential, PhysParams params);

  const ComplexField &psi() const noexcept { return psi_; }
  const Potential &potential() const noexcept { return potential_; }
  const PhysParams &params() const noexcept { return params_; }
  double time() const noexcept { return psi_.time; }
  double norm() const;

private:
  friend class CrankNicolson;
  ComplexField psi_;
  Potential potential_;
  PhysParams params_;
};

/// Trapezoid integral of |psi|^2.
double norm_of(const ComplexField &psi);

/// Factorized Crank-Nicolson propagator for one grid, potential and step:
/// (1 + i dt H / 2 hbar) psi_new = (1 - i dt H / 2 hbar) psi_old,
/// H = -hbar^2/2m D2 + V with the 3-point D2.
class CrankNicolson {
public:
  CrankNicolson(const Grid1D &grid, const Potential &potential, const PhysParams &params,
                double dt);

  double dt() const noexcept { return dt_; }

  /// Advances `state` by one step in place. Throws EdgeAmplitudeError when
  /// |psi| >= kEdgeTolerance on the two outermost nodes of either side, and
  /// NumericalAbort when the norm leaves 1 +- kNormTolerance.
  void step(TdseState &state) const;

private:
  Grid1D grid_;
  double dt_;
  std::vector<double> potential_;
  std::complex<double> off_;                  // off-diagonal of the implicit matrix
  std::vector<std::complex<double>> diag_;    // its diagonal
  std::vector<std::complex<double>> c_prime_; // Thomas forward-sweep coefficients
  std::vector<std::complex<double>> denom_;
  std::complex<double> half_step_;            // i dt / 2 hbar
  double kinetic_;                            // hbar^2 / (2 m dx^2)
};

/// One Crank-Nicolson step of size dt.
TdseState tdse_step(const TdseState &state, double dt);

using TdseObserver = std::function<void(const TdseState &)>;

/// n_steps steps of size dt; `observer` sees the initial state and every step.
TdseState tdse_evolve(const TdseState &state, double dt, std::size_t n_steps,
                      const TdseObserver &observer = {});

/// R = |psi|, S = hbar * phase unwrapped from the left edge (defined up to a
/// constant). Nodes with x in [x_lo, x_hi] must have |psi| > 1e-12.
PolarFields polar_decompose(const ComplexField &psi, const PhysParams &params, double x_lo,
                            double x_hi);
PolarFields polar_decompose(const ComplexField &psi, const PhysParams &params);

/// v = (hbar/m) Im(psi'/psi); zero where psi vanishes exactly.
RealField oracle_velocity(const ComplexField &psi, const PhysParams &params);

/// Propagates `initial` and records oracle_velocity every `record_every` steps.
SampledVelocityField oracle_velocity_field(const TdseState &initial, double dt,
                                           std::size_t n_steps, std::size_t record_every,
                                           double x_lo, double x_hi);

/// Throws InvalidArgument unless the grid covers center +- 8 sigma.
void require_domain_span(const Grid1D &grid, double center, double sigma);

/// psi multiplied by the unit phase that matches `reference` at the node of
/// maximal |psi|^2.
ComplexField align_global_phase(const ComplexField &psi, const ComplexField &reference);

/// max |a - b| over nodes with x in [x_lo, x_hi].
double max_abs_difference(const ComplexField &a, const ComplexField &b, double x_lo, double x_hi);

} // namespace qtraj
