#include "qtraj/analytic.hpp"
#include "qtraj/errors.hpp"
#include "qtraj/grid.hpp"
#include "qtraj/phase.hpp"
#include "qtraj/rk4.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace qtraj;

namespace {

constexpr double pi = std::numbers::pi;
const PhysParams natural(1.0, 1.0);

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  }
};

double integrate_density(const Grid1D &g, auto &&density) {
  return trapezoid(g, sample(g, density).values);
}

// Max deviation of hbar * unwrapped phase - S from its mean over the grid.
double phase_action_spread(const Grid1D &g, double hbar, auto &&psi, auto &&action) {
  const RealField phase = unwrapped_phase(sample_complex(g, psi));
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double d = hbar * phase[i] - action(g.x(i));
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return hi - lo;
}

} // namespace

TEST_CASE("parameter objects validate their inputs") {
  CHECK_THROWS_AS(PhysParams(0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(PhysParams(1.0, -1.0), InvalidArgument);
  CHECK_THROWS_AS(PhysParams(NAN, 1.0), InvalidArgument);
  CHECK_THROWS_AS(GaussianPacketSpec(natural, 0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(GaussianPacketSpec(natural, 1.0, INFINITY), InvalidArgument);
  CHECK_THROWS_AS(OscillatorSpec(natural, 0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(OscillatorSpec(natural, 1.0, NAN), InvalidArgument);
}

TEST_CASE("derived packet quantities") {
  const GaussianPacketSpec spec(PhysParams(1.0, 2.5), 0.7, 3.0);
  CHECK(spec.v0() == 3.0 / 2.5);
  CHECK(spec.energy() == 9.0 / 2.5);
  CHECK(spec.spreading_time() == doctest::Approx(2.0 * 2.5 * 0.49));
  const OscillatorSpec ho(PhysParams(0.3, 1.7), 2.2, 0.5);
  CHECK(ho.sigma0() * ho.sigma0() * 2.0 * 1.7 * 2.2 == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(ho.period() == doctest::Approx(2.0 * pi / 2.2));
}

TEST_CASE("spreading factors") {
  const GaussianPacketSpec spec(natural, 1.0, 0.0);
  const SpreadingFactors s0 = spreading(spec, 0.0);
  CHECK(s0.u == 0.0);
  CHECK(s0.sigma_t == 1.0);
  CHECK(s0.sigma_tilde_t == std::complex<double>(1.0, 0.0));

  const SpreadingFactors s1 = spreading(spec, 2.0);
  CHECK(s1.u == doctest::Approx(1.0));
  CHECK(s1.sigma_t == doctest::Approx(std::sqrt(2.0)));

  const SpreadingFactors s2 = spreading(spec, 200.0);
  CHECK(s2.sigma_t == doctest::Approx(100.00499987500625).epsilon(1e-13));

  Gen gen(11);
  for (int k = 0; k < 50; ++k) {
    const GaussianPacketSpec g(PhysParams(gen.uniform(0.1, 3), gen.uniform(0.1, 3)),
                               gen.uniform(0.1, 3), 0.0);
    const SpreadingFactors s = spreading(g, gen.uniform(-10, 10));
    CHECK(std::abs(s.sigma_tilde_t) == doctest::Approx(s.sigma_t).epsilon(1e-14));
    CHECK(s.sigma_t == doctest::Approx(g.sigma0() * std::sqrt(1 + s.u * s.u)).epsilon(1e-14));
  }
}

TEST_CASE("free packet wavefunction: peak value, normalization, hand value") {
  const GaussianPacketSpec spec(natural, 1.0, 0.8);
  for (double t : {0.0, 0.7, 3.0}) {
    const double st = spreading(spec, t).sigma_t;
    CHECK(std::abs(free_packet_wavefunction(spec, spec.v0() * t, t)) ==
          doctest::Approx(std::pow(2.0 * pi * st * st, -0.25)).epsilon(1e-14));
    const Grid1D g(spec.v0() * t - 8.0 * st, spec.v0() * t + 8.0 * st, 4001);
    CHECK(std::abs(integrate_density(g, [&](double x) { return free_packet_density(spec, x, t); }) -
                   1.0) <= 1e-10);
  }
  const GaussianPacketSpec rest(natural, 1.0, 0.0);
  CHECK(std::abs(free_packet_wavefunction(rest, 1.0, 0.0)) ==
        doctest::Approx(std::pow(2.0 * pi, -0.25) * std::exp(-0.25)).epsilon(1e-15));
}

TEST_CASE("free packet action") {
  const GaussianPacketSpec spec(PhysParams(1.0, 2.0), 1.5, 0.6);
  for (double x : {-2.0, 0.0, 3.5})
    CHECK(free_packet_action(spec, x, 0.0) == doctest::Approx(0.6 * x));
  const double h = 1e-5;
  for (double t : {0.0, 0.5, 4.0, 30.0}) {
    const double xc = spec.v0() * t;
    const double grad =
        (free_packet_action(spec, xc + h, t) - free_packet_action(spec, xc - h, t)) / (2 * h);
    CHECK(grad == doctest::Approx(0.6).epsilon(1e-8));
  }
}

TEST_CASE("free packet phase equals the action up to a constant") {
  const GaussianPacketSpec spec(PhysParams(0.8, 1.3), 0.9, 0.7);
  for (double t : {0.0, 0.6, 2.5}) {
    const double st = spreading(spec, t).sigma_t;
    const Grid1D g(spec.v0() * t - 6 * st, spec.v0() * t + 6 * st, 2001);
    CHECK(phase_action_spread(
              g, 0.8, [&](double x) { return free_packet_wavefunction(spec, x, t); },
              [&](double x) { return free_packet_action(spec, x, t); }) <= 1e-9);
  }
}

TEST_CASE("free packet trajectory") {
  const GaussianPacketSpec spec(natural, 1.0, 0.4);
  CHECK(free_packet_trajectory(spec, 1.7, 0.0) == 1.7);
  CHECK(free_packet_trajectory(spec, 0.0, 3.3) == 0.4 * 3.3);
  const GaussianPacketSpec rest(natural, 1.0, 0.0);
  CHECK(free_packet_trajectory(rest, 1.0, 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("trajectory series") {
  const GaussianPacketSpec spec(natural, 1.0, 0.3);
  const SeriesPosition n0 = free_packet_trajectory_series(spec, 1.2, 0.8, 0);
  CHECK(n0.position == doctest::Approx(1.2 + 0.3 * 0.8));
  CHECK(trajectory_series_coefficient(1) == 0.5);
  CHECK(trajectory_series_coefficient(2) == -0.125);
  CHECK(trajectory_series_coefficient(3) == 0.0625);
  CHECK_THROWS_AS(free_packet_trajectory_series(spec, 1.0, 1.0, -1), InvalidArgument);

  const GaussianPacketSpec rest(natural, 1.0, 0.0);
  const SeriesPosition s8 = free_packet_trajectory_series(rest, 1.0, 1.0, 8);
  CHECK_FALSE(s8.outside_convergence);
  CHECK(s8.u == doctest::Approx(0.5));
  CHECK(std::abs(s8.position - std::sqrt(1.25)) <= 1e-6);

  const SeriesPosition s20 = free_packet_trajectory_series(rest, 1.0, 3.0, 20);
  CHECK(s20.outside_convergence);
  CHECK(std::abs(s20.position - std::sqrt(1.0 + 2.25)) > 1.0);
}

TEST_CASE("property: series error shrinks with N and stays under twice the first omitted term") {
  Gen gen(12);
  const GaussianPacketSpec rest(natural, 1.0, 0.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double u = gen.uniform(0.05, 0.9);
    const double x0 = gen.uniform(-3.0, 3.0);
    const double exact = x0 * std::sqrt(1 + u * u);
    double prev = INFINITY;
    for (int n = 1; n <= 12; ++n) {
      const double err =
          std::abs(free_packet_trajectory_series(rest, x0, 2 * u, n).position - exact);
      const double omitted =
          std::abs(trajectory_series_coefficient(n + 1) * std::pow(u, 2 * (n + 1)) * x0);
      if (omitted > 1e-13) {
        REQUIRE(err <= 2.0 * omitted);
        if (n > 2)
          REQUIRE(err < prev);
      }
      prev = err;
    }
  }
}

TEST_CASE("asymptotic velocity") {
  const GaussianPacketSpec spec(natural, 1.0, 1.0);
  CHECK(free_packet_asymptotic_velocity(spec, 0.0) == 1.0);
  CHECK(free_packet_asymptotic_velocity(spec, 2.0) == 2.0);
  Gen gen(13);
  for (int k = 0; k < 20; ++k) {
    const double x0 = gen.uniform(-5, 5);
    CHECK(free_packet_asymptotic_velocity(spec, -x0) - 1.0 ==
          doctest::Approx(-(free_packet_asymptotic_velocity(spec, x0) - 1.0)));
  }
}

TEST_CASE("property: integrating the action gradient reproduces the free trajectory") {
  Gen gen(14);
  for (int trial = 0; trial < 10; ++trial) {
    const GaussianPacketSpec spec(PhysParams(gen.uniform(0.5, 2), gen.uniform(0.5, 2)),
                                  gen.uniform(0.5, 2), gen.uniform(-1, 1));
    const double m = spec.params().mass();
    const double x0 = gen.uniform(-2, 2) * spec.sigma0();
    const double t_end = 4.0 * m * spec.sigma0() * spec.sigma0() / spec.params().hbar();
    auto v = [&](double x, double t) {
      const double h = 1e-4 * spec.sigma0();
      return (free_packet_action(spec, x + h, t) - free_packet_action(spec, x - h, t)) /
             (2 * h * m);
    };
    const int steps = 2000;
    double x = x0, worst = 0.0;
    for (int k = 0; k < steps; ++k) {
      const double t = t_end * k / steps;
      x = rk4_step(x, v, t, t_end / steps);
      worst = std::max(worst, std::abs(x - free_packet_trajectory(spec, x0, t + t_end / steps)));
    }
    CHECK(worst <= 1e-6 * spec.sigma0());
  }
}

TEST_CASE("property: free trajectories never cross and spread hyperbolically") {
  Gen gen(15);
  for (int trial = 0; trial < 200; ++trial) {
    const GaussianPacketSpec spec(PhysParams(gen.uniform(0.1, 3), gen.uniform(0.1, 3)),
                                  gen.uniform(0.1, 3), gen.uniform(-2, 2));
    const double a = gen.uniform(-3, 3), b = a + gen.uniform(1e-6, 3);
    const double t = gen.uniform(-50, 50);
    REQUIRE(free_packet_trajectory(spec, a, t) < free_packet_trajectory(spec, b, t));
    const double u = spec.dimensionless_time(t);
    const double rel = free_packet_trajectory(spec, b, t) - spec.v0() * t;
    REQUIRE((rel * rel) / (b * b) - u * u == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("quantum correction to the classical path scales as hbar^2") {
  auto correction = [](double hbar) {
    const GaussianPacketSpec spec(PhysParams(hbar, 1.0), 1.0, 0.5);
    return free_packet_trajectory(spec, 1.0, 1.0) - (1.0 + 0.5);
  };
  const double ratio = correction(1e-2) / correction(5e-3);
  CHECK(ratio == doctest::Approx(4.0).epsilon(1e-4));
  CHECK(correction(1e-3) == doctest::Approx(0.5 * std::pow(0.5e-3, 2)).epsilon(1e-6));
}

TEST_CASE("oscillator wavefunction is a rigid, periodic, normalized Gaussian") {
  const OscillatorSpec spec(natural, 1.0, 1.5);
  const double s0 = spec.sigma0();
  for (double t : {0.0, 0.4, 1.9, 4.0}) {
    const double c = 1.5 * std::cos(t);
    for (double d : {-2.0, -0.5, 0.0, 1.0, 2.5})
      CHECK(ho_density(spec, c + d * s0, t) ==
            doctest::Approx(std::exp(-d * d / 2) / std::sqrt(2 * pi * s0 * s0)).epsilon(1e-12));
    const Grid1D g(c - 8 * s0, c + 8 * s0, 3001);
    CHECK(std::abs(integrate_density(g, [&](double x) { return ho_density(spec, x, t); }) - 1.0) <=
          1e-10);
  }
  const Grid1D g(-6.0, 6.0, 301);
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(std::abs(std::abs(ho_wavefunction(spec, g.x(i), spec.period())) -
                   std::abs(ho_wavefunction(spec, g.x(i), 0.0))) <= 1e-12);
}

TEST_CASE("oscillator action") {
  const OscillatorSpec spec(PhysParams(0.7, 1.3), 1.9, 0.8);
  for (double x : {-1.0, 0.0, 2.0})
    CHECK(ho_action(spec, x, 0.0) == 0.0);
  for (double t : {0.3, 1.1, 2.9}) {
    const double expected = -1.3 * 1.9 * 0.8 * std::sin(1.9 * t);
    for (double x : {-1.0, 0.5, 2.0}) {
      const double grad = (ho_action(spec, x + 1e-4, t) - ho_action(spec, x - 1e-4, t)) / 2e-4;
      CHECK(grad == doctest::Approx(expected).epsilon(1e-9));
      CHECK(ho_velocity(spec, x, t) == doctest::Approx(expected / 1.3).epsilon(1e-14));
    }
    const Grid1D g(0.8 * std::cos(1.9 * t) - 6 * spec.sigma0(),
                   0.8 * std::cos(1.9 * t) + 6 * spec.sigma0(), 1001);
    CHECK(phase_action_spread(
              g, 0.7, [&](double x) { return ho_wavefunction(spec, x, t); },
              [&](double x) { return ho_action(spec, x, t); }) <= 1e-9);
  }
}

TEST_CASE("oscillator trajectories") {
  const OscillatorSpec spec(natural, 2.0, 0.9);
  for (double t : {0.0, 0.3, 1.7}) {
    CHECK(ho_trajectory(spec, 0.9, t) == doctest::Approx(0.9 * std::cos(2.0 * t)));
    CHECK(ho_trajectory(spec, 2.5, t) - ho_trajectory(spec, -0.4, t) ==
          doctest::Approx(2.9).epsilon(1e-15));
    const double h = 1e-3;
    const double acc = (ho_trajectory(spec, 0.2, t + h) - 2 * ho_trajectory(spec, 0.2, t) +
                        ho_trajectory(spec, 0.2, t - h)) / (h * h);
    CHECK(std::abs(acc + 4.0 * ho_trajectory(spec, 0.2, t) - 4.0 * (0.2 - 0.9)) <= 1e-5);
  }
}

TEST_CASE("property: oscillation amplitude about the mean is a for every hbar") {
  Gen gen(16);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = gen.uniform(-2, 2);
    const OscillatorSpec spec(PhysParams(gen.uniform(1e-3, 5), 1.0), gen.uniform(0.2, 3), a);
    const double x0 = gen.uniform(-3, 3);
    const double hi = ho_trajectory(spec, x0, 0.0);
    const double lo = ho_trajectory(spec, x0, spec.period() / 2);
    REQUIRE(0.5 * (hi - lo) == doctest::Approx(a).epsilon(1e-12));
    REQUIRE(0.5 * (hi + lo) == doctest::Approx(x0 - a).epsilon(1e-12));
  }
}
