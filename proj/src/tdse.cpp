#include "qtraj/tdse.hpp"

#include "qtraj/errors.hpp"
#include "qtraj/phase.hpp"
#include "qtraj/stencils.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qtraj {

double norm_of(const ComplexField &psi) {
  std::vector<double> density(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i)
    density[i] = std::norm(psi[i]);
  return trapezoid(psi.grid, density);
}

TdseState::TdseState(ComplexField psi, Potential potential, PhysParams params)
    : psi_(std::move(psi)), potential_(std::move(potential)), params_(params) {
  require_finite(psi_, "TdseState");
  const double n = norm();
  if (std::abs(n - 1.0) > kNormTolerance)
    throw NumericalAbort("TdseState: norm " + std::to_string(n) + " is not 1");
}

double TdseState::norm() const { return norm_of(psi_); }

CrankNicolson::CrankNicolson(const Grid1D &grid, const Potential &potential,
                             const PhysParams &params, double dt)
    : grid_(grid), dt_(dt), potential_(potential.sample(grid).values) {
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw InvalidArgument("CrankNicolson: dt must be positive");
  const std::size_t n = grid.size();
  kinetic_ = params.hbar() * params.hbar() / (2.0 * params.mass() * grid.dx() * grid.dx());
  half_step_ = std::complex<double>(0.0, dt / (2.0 * params.hbar()));
  off_ = half_step_ * (-kinetic_);
  diag_.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    diag_[i] = 1.0 + half_step_ * (2.0 * kinetic_ + potential_[i]);

  c_prime_.resize(n);
  denom_.resize(n);
  denom_[0] = diag_[0];
  c_prime_[0] = off_ / denom_[0];
  for (std::size_t i = 1; i < n; ++i) {
    denom_[i] = diag_[i] - off_ * c_prime_[i - 1];
    c_prime_[i] = off_ / denom_[i];
  }
}

void CrankNicolson::step(TdseState &state) const {
  ComplexField &psi = state.psi_;
  if (!(psi.grid == grid_))
    throw InvalidArgument("CrankNicolson::step: state lives on another grid");
  const std::size_t n = grid_.size();
  for (std::size_t i : {std::size_t{0}, std::size_t{1}, n - 2, n - 1})
    if (std::abs(psi[i]) >= kEdgeTolerance)
      throw EdgeAmplitudeError("tdse_step: |psi| = " + std::to_string(std::abs(psi[i])) +
                               " at edge node " + std::to_string(i) + ", t=" +
                               std::to_string(psi.time) + "; enlarge the box");

  // right-hand side (1 - i dt H / 2 hbar) psi
  std::vector<std::complex<double>> rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::complex<double> h_psi = (2.0 * kinetic_ + potential_[i]) * psi[i];
    if (i > 0)
      h_psi -= kinetic_ * psi[i - 1];
    if (i + 1 < n)
      h_psi -= kinetic_ * psi[i + 1];
    rhs[i] = psi[i] - half_step_ * h_psi;
  }
  // Thomas sweep with the precomputed factors
  rhs[0] /= denom_[0];
  for (std::size_t i = 1; i < n; ++i)
    rhs[i] = (rhs[i] - off_ * rhs[i - 1]) / denom_[i];
  for (std::size_t i = n - 1; i-- > 0;)
    rhs[i] -= c_prime_[i] * rhs[i + 1];

  psi.values = std::move(rhs);
  psi.time += dt_;
  require_finite(psi, "tdse_step");
  const double nrm = state.norm();
  if (std::abs(nrm - 1.0) > kNormTolerance)
    throw NumericalAbort("tdse_step: norm drifted to " + std::to_string(nrm) + " at t=" +
                         std::to_string(psi.time));
}

TdseState tdse_step(const TdseState &state, double dt) {
  TdseState next = state;
  CrankNicolson(state.psi().grid, state.potential(), state.params(), dt).step(next);
  return next;
}

TdseState tdse_evolve(const TdseState &state, double dt, std::size_t n_steps,
                      const TdseObserver &observer) {
  const CrankNicolson cn(state.psi().grid, state.potential(), state.params(), dt);
  TdseState current = state;
  if (observer)
    observer(current);
  for (std::size_t k = 0; k < n_steps; ++k) {
    cn.step(current);
    if (observer)
      observer(current);
  }
  return current;
}

PolarFields polar_decompose(const ComplexField &psi, const PhysParams &params, double x_lo,
                            double x_hi) {
  require_finite(psi, "polar_decompose");
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double x = psi.grid.x(i);
    if (x >= x_lo && x <= x_hi && !(std::abs(psi[i]) > kEdgeTolerance))
      throw InvalidArgument("polar_decompose: |psi| <= 1e-12 at x=" + std::to_string(x) +
                            " inside the requested window (node of the wavefunction)");
  }
  RealField amplitude(psi.grid, psi.time);
  for (std::size_t i = 0; i < psi.size(); ++i)
    amplitude[i] = std::abs(psi[i]);
  RealField action = unwrapped_phase(psi);
  for (auto &s : action.values)
    s *= params.hbar();
  return {std::move(amplitude), std::move(action), {}};
}

PolarFields polar_decompose(const ComplexField &psi, const PhysParams &params) {
  return polar_decompose(psi, params, psi.grid.x_min(), psi.grid.x_max());
}

RealField oracle_velocity(const ComplexField &psi, const PhysParams &params) {
  const ComplexField dpsi = gradient(psi);
  RealField v(psi.grid, psi.time);
  const double scale = params.hbar() / params.mass();
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double n2 = std::norm(psi[i]);
    // Im(psi'/psi) = Im(conj(psi) psi') / |psi|^2
    v[i] = n2 > 0.0 ? scale * (std::conj(psi[i]) * dpsi[i]).imag() / n2 : 0.0;
  }
  return v;
}

SampledVelocityField oracle_velocity_field(const TdseState &initial, double dt,
                                           std::size_t n_steps, std::size_t record_every,
                                           double x_lo, double x_hi) {
  if (record_every == 0 || n_steps % record_every != 0)
    throw InvalidArgument("oracle_velocity_field: n_steps must be a multiple of record_every");
  std::vector<std::vector<double>> snapshots;
  std::size_t seen = 0;
  tdse_evolve(initial, dt, n_steps, [&](const TdseState &s) {
    if (seen++ % record_every == 0)
      snapshots.push_back(oracle_velocity(s.psi(), s.params()).values);
  });
  return SampledVelocityField(initial.psi().grid, initial.time(),
                              dt * static_cast<double>(record_every), std::move(snapshots), x_lo,
                              x_hi, TrajectorySource::Oracle);
}

void require_domain_span(const Grid1D &grid, double center, double sigma) {
  if (grid.x_min() > center - 8.0 * sigma || grid.x_max() < center + 8.0 * sigma)
    throw InvalidArgument("domain [" + std::to_string(grid.x_min()) + ", " +
                          std::to_string(grid.x_max()) + "] does not cover center +- 8 sigma = [" +
                          std::to_string(center - 8.0 * sigma) + ", " +
                          std::to_string(center + 8.0 * sigma) + "]");
}

ComplexField align_global_phase(const ComplexField &psi, const ComplexField &reference) {
  if (!(psi.grid == reference.grid))
    throw InvalidArgument("align_global_phase: grids differ");
  std::size_t peak = 0;
  for (std::size_t i = 1; i < psi.size(); ++i)
    if (std::norm(psi[i]) > std::norm(psi[peak]))
      peak = i;
  const std::complex<double> rotation =
      std::polar(1.0, std::arg(reference[peak]) - std::arg(psi[peak]));
  ComplexField out = psi;
  for (auto &v : out.values)
    v *= rotation;
  return out;
}

double max_abs_difference(const ComplexField &a, const ComplexField &b, double x_lo,
                          double x_hi) {
  if (!(a.grid == b.grid))
    throw InvalidArgument("max_abs_difference: grids differ");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = a.grid.x(i);
    if (x >= x_lo && x <= x_hi)
      worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  return worst;
}

} // namespace qtraj
