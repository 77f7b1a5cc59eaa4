#pragma once

// Closed-form benchmark systems: the freely spreading Gaussian packet and the
// coherent (non-spreading) packet of the harmonic oscillator.

#include <complex>

namespace qtraj {

/// Planck constant and particle mass; both strictly positive and finite.
class PhysParams {
public:
  PhysParams() = default;
  PhysParams(double hbar, double mass);

  double hbar() const noexcept { return hbar_; }
  double mass() const noexcept { return mass_; }

  bool operator==(const PhysParams &) const = default;

private:
  double hbar_ = 1.0;
  double mass_ = 1.0;
};

/// Free Gaussian packet of initial width sigma0 and momentum p0.
///
/// The energy parameter is E = p0^2/m, exactly as the closed form is usually
/// written for this packet. It only enters the action through the
/// space-independent term E*t, so velocities and trajectories ignore it.
class GaussianPacketSpec {
public:
  GaussianPacketSpec(PhysParams params, double sigma0, double p0);

  const PhysParams &params() const noexcept { return params_; }
  double sigma0() const noexcept { return sigma0_; }
  double p0() const noexcept { return p0_; }
  double v0() const noexcept { return p0_ / params_.mass(); }
  double energy() const noexcept { return p0_ * p0_ / params_.mass(); }

  /// Time at which the dimensionless time u = hbar t / (2 m sigma0^2) reaches 1.
  double spreading_time() const noexcept;
  /// u(t) = hbar t / (2 m sigma0^2).
  double dimensionless_time(double t) const noexcept { return t / spreading_time(); }

  bool operator==(const GaussianPacketSpec &) const = default;

private:
  PhysParams params_;
  double sigma0_;
  double p0_;
};

/// Coherent packet in V = m omega^2 x^2 / 2, displaced to x = a at t = 0.
/// Its width is fixed by the oscillator: sigma0^2 = hbar / (2 m omega).
class OscillatorSpec {
public:
  OscillatorSpec(PhysParams params, double omega, double a);

  const PhysParams &params() const noexcept { return params_; }
  double omega() const noexcept { return omega_; }
  double a() const noexcept { return a_; }
  double sigma0() const noexcept { return sigma0_; }
  double period() const noexcept;

  bool operator==(const OscillatorSpec &) const = default;

private:
  PhysParams params_;
  double omega_;
  double a_;
  double sigma0_;
};

struct SpreadingFactors {
  double sigma_t;                     ///< sigma0 * sqrt(1 + u^2)
  std::complex<double> sigma_tilde_t; ///< sigma0 * (1 + i u)
  double u;                           ///< hbar t / (2 m sigma0^2)
};

SpreadingFactors spreading(const GaussianPacketSpec &spec, double t);

// --- free packet -----------------------------------------------------------

/// Principal-branch logarithm of the free-packet wavefunction.
std::complex<double> free_packet_log_wavefunction(const GaussianPacketSpec &spec, double x,
                                                  double t);
std::complex<double> free_packet_wavefunction(const GaussianPacketSpec &spec, double x, double t);
double free_packet_density(const GaussianPacketSpec &spec, double x, double t);

/// Bohmian action S(x,t) = -(hbar/2) atan(u) + E t + p0 x
///                         + hbar^2 t (x - v0 t)^2 / (8 m sigma0^2 sigma_t^2).
double free_packet_action(const GaussianPacketSpec &spec, double x, double t);

/// Bohmian velocity field dS/dx / m.
double free_packet_velocity(const GaussianPacketSpec &spec, double x, double t);

/// Exact quantum trajectory x(t) = v0 t + (sigma_t / sigma0) x0.
double free_packet_trajectory(const GaussianPacketSpec &spec, double x0, double t);

struct SeriesPosition {
  double position;
  double u;
  /// |u| >= 1: the expansion of sqrt(1 + u^2) no longer converges.
  bool outside_convergence;
};

/// Coefficient of u^{2n} x0 in the short-time expansion of the trajectory:
/// (-1)^{n-1} (2n-3)!! / (2^n n!). n >= 1.
double trajectory_series_coefficient(int n);

/// Short-time trajectory truncated after order u^{2N}; N = 0 is the classical path.
SeriesPosition free_packet_trajectory_series(const GaussianPacketSpec &spec, double x0, double t,
                                             int order);

/// Late-time constant velocity v0 + hbar x0 / (2 m sigma0^2).
double free_packet_asymptotic_velocity(const GaussianPacketSpec &spec, double x0);

// --- harmonic oscillator -----------------------------------------------------

std::complex<double> ho_log_wavefunction(const OscillatorSpec &spec, double x, double t);
std::complex<double> ho_wavefunction(const OscillatorSpec &spec, double x, double t);
double ho_density(const OscillatorSpec &spec, double x, double t);

/// S(x,t) = -hbar omega t / 2 - (m omega / 4)(4 x a sin(omega t) - a^2 sin(2 omega t)).
double ho_action(const OscillatorSpec &spec, double x, double t);

/// -omega a sin(omega t), independent of x.
double ho_velocity(const OscillatorSpec &spec, double x, double t);

/// x(t) = (x0 - a) + a cos(omega t).
double ho_trajectory(const OscillatorSpec &spec, double x0, double t);

} // namespace qtraj
