#include "qtraj/analytic.hpp"

#include "qtraj/errors.hpp"
#include "qtraj/special.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace qtraj {
namespace {

constexpr std::complex<double> kI{0.0, 1.0};

void require_positive(double v, const char *what) {
  if (!std::isfinite(v) || !(v > 0.0))
    throw InvalidArgument(std::string(what) + " must be positive and finite");
}

void require_finite(double v, const char *what) {
  if (!std::isfinite(v))
    throw InvalidArgument(std::string(what) + " must be finite");
}

} // namespace

PhysParams::PhysParams(double hbar, double mass) : hbar_(hbar), mass_(mass) {
  require_positive(hbar, "hbar");
  require_positive(mass, "mass");
}

GaussianPacketSpec::GaussianPacketSpec(PhysParams params, double sigma0, double p0)
    : params_(params), sigma0_(sigma0), p0_(p0) {
  require_positive(sigma0, "sigma0");
  require_finite(p0, "p0");
}

double GaussianPacketSpec::spreading_time() const noexcept {
  return 2.0 * params_.mass() * sigma0_ * sigma0_ / params_.hbar();
}

OscillatorSpec::OscillatorSpec(PhysParams params, double omega, double a)
    : params_(params), omega_(omega), a_(a), sigma0_(0.0) {
  require_positive(omega, "omega");
  require_finite(a, "a");
  sigma0_ = std::sqrt(params.hbar() / (2.0 * params.mass() * omega));
}

double OscillatorSpec::period() const noexcept { return 2.0 * std::numbers::pi / omega_; }

SpreadingFactors spreading(const GaussianPacketSpec &spec, double t) {
  require_finite(t, "t");
  const double u = spec.dimensionless_time(t);
  const double s0 = spec.sigma0();
  return {s0 * std::sqrt(1.0 + u * u), s0 * std::complex<double>(1.0, u), u};
}

std::complex<double> free_packet_log_wavefunction(const GaussianPacketSpec &spec, double x,
                                                  double t) {
  const auto sf = spreading(spec, t);
  const double hbar = spec.params().hbar();
  const double xi = x - spec.v0() * t;
  // arg(sigma_tilde^2) = 2 atan(u) stays inside (-pi, pi): principal branch throughout.
  const std::complex<double> log_prefactor =
      -0.25 * std::log(2.0 * std::numbers::pi * sf.sigma_tilde_t * sf.sigma_tilde_t);
  return log_prefactor - xi * xi / (4.0 * sf.sigma_tilde_t * spec.sigma0()) +
         kI * (spec.p0() * xi / hbar + spec.energy() * t / hbar);
}

std::complex<double> free_packet_wavefunction(const GaussianPacketSpec &spec, double x, double t) {
  return std::exp(free_packet_log_wavefunction(spec, x, t));
}

double free_packet_density(const GaussianPacketSpec &spec, double x, double t) {
  const double st = spreading(spec, t).sigma_t;
  const double xi = x - spec.v0() * t;
  return std::exp(-xi * xi / (2.0 * st * st)) / std::sqrt(2.0 * std::numbers::pi * st * st);
}

double free_packet_action(const GaussianPacketSpec &spec, double x, double t) {
  const auto sf = spreading(spec, t);
  const double hbar = spec.params().hbar();
  const double m = spec.params().mass();
  const double s0 = spec.sigma0();
  const double xi = x - spec.v0() * t;
  return -0.5 * hbar * std::atan(sf.u) + spec.energy() * t + spec.p0() * x +
         hbar * hbar * t / (8.0 * m * s0 * s0 * sf.sigma_t * sf.sigma_t) * xi * xi;
}

double free_packet_velocity(const GaussianPacketSpec &spec, double x, double t) {
  const auto sf = spreading(spec, t);
  const double hbar = spec.params().hbar();
  const double m = spec.params().mass();
  const double s0 = spec.sigma0();
  const double xi = x - spec.v0() * t;
  return spec.v0() + hbar * hbar * t / (4.0 * m * m * s0 * s0 * sf.sigma_t * sf.sigma_t) * xi;
}

double free_packet_trajectory(const GaussianPacketSpec &spec, double x0, double t) {
  return spec.v0() * t + spreading(spec, t).sigma_t / spec.sigma0() * x0;
}

double trajectory_series_coefficient(int n) {
  if (n < 1)
    throw InvalidArgument("trajectory_series_coefficient: n must be >= 1");
  const double sign = (n % 2 == 1) ? 1.0 : -1.0;
  return sign * double_factorial_value(2 * n - 3) / (std::ldexp(1.0, n) * factorial(n));
}

SeriesPosition free_packet_trajectory_series(const GaussianPacketSpec &spec, double x0, double t,
                                             int order) {
  if (order < 0)
    throw InvalidArgument("free_packet_trajectory_series: order must be >= 0");
  const double u = spec.dimensionless_time(t);
  const double u2 = u * u;
  double correction = 0.0;
  double u_pow = 1.0;
  for (int n = 1; n <= order; ++n) {
    u_pow *= u2;
    correction += trajectory_series_coefficient(n) * u_pow;
  }
  return {x0 + spec.v0() * t + correction * x0, u, std::abs(u) >= 1.0};
}

double free_packet_asymptotic_velocity(const GaussianPacketSpec &spec, double x0) {
  const double hbar = spec.params().hbar();
  const double m = spec.params().mass();
  return spec.v0() + hbar * x0 / (2.0 * m * spec.sigma0() * spec.sigma0());
}

std::complex<double> ho_log_wavefunction(const OscillatorSpec &spec, double x, double t) {
  const double hbar = spec.params().hbar();
  const double m = spec.params().mass();
  const double w = spec.omega();
  const double a = spec.a();
  const double s2 = spec.sigma0() * spec.sigma0();
  const double xi = x - a * std::cos(w * t);
  const double phase =
      -0.5 * w * t - m * w * (4.0 * x * a * std::sin(w * t) - a * a * std::sin(2.0 * w * t)) /
                         (4.0 * hbar);
  return -0.25 * std::log(2.0 * std::numbers::pi * s2) - xi * xi / (4.0 * s2) + kI * phase;
}

std::complex<double> ho_wavefunction(const OscillatorSpec &spec, double x, double t) {
  return std::exp(ho_log_wavefunction(spec, x, t));
}

double ho_density(const OscillatorSpec &spec, double x, double t) {
  const double s2 = spec.sigma0() * spec.sigma0();
  const double xi = x - spec.a() * std::cos(spec.omega() * t);
  return std::exp(-xi * xi / (2.0 * s2)) / std::sqrt(2.0 * std::numbers::pi * s2);
}

double ho_action(const OscillatorSpec &spec, double x, double t) {
  const double w = spec.omega();
  const double a = spec.a();
  return -0.5 * spec.params().hbar() * w * t -
         0.25 * spec.params().mass() * w *
             (4.0 * x * a * std::sin(w * t) - a * a * std::sin(2.0 * w * t));
}

double ho_velocity(const OscillatorSpec &spec, double /*x*/, double t) {
  return -spec.omega() * spec.a() * std::sin(spec.omega() * t);
}

double ho_trajectory(const OscillatorSpec &spec, double x0, double t) {
  return (x0 - spec.a()) + spec.a() * std::cos(spec.omega() * t);
}

} // namespace qtraj
