#include "qtraj/analytic.hpp"
#include "qtraj/errors.hpp"
#include "qtraj/hierarchy.hpp"
#include "qtraj/tdse.hpp"
#include "qtraj/trajectory.hpp"
#include "qtraj/velocity.hpp"

#include <doctest.h>

#include <algorithm>
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

double final_position(const Trajectory &tr) { return tr.positions.back(); }

RealField free_density(const GaussianPacketSpec &spec, const Grid1D &g, double t) {
  return sample(g, [&](double x) { return free_packet_density(spec, x, t); }, t);
}

// Constant velocity inside [lo, hi].
SampledVelocityField constant_field(double v, double lo, double hi) {
  const Grid1D g(-5.0, 5.0, 101);
  return SampledVelocityField(g, 0.0, 1.0, std::vector<std::vector<double>>(20, std::vector<double>(101, v)),
                              lo, hi, TrajectorySource::Oracle);
}

} // namespace

TEST_CASE("bohmian integration through analytic fields") {
  const FreePacketField moving(GaussianPacketSpec(natural, 1.0, 0.7));
  const auto times = uniform_times(0.0, 5.0, 50);
  const Trajectory line = integrate_bohmian(moving, 0.0, times);
  CHECK(line.source == TrajectorySource::AnalyticFree);
  CHECK_FALSE(line.truncated);
  REQUIRE(line.size() == 51);
  CHECK(line.positions[0] == 0.0);
  for (std::size_t i = 0; i < line.size(); ++i)
    CHECK(std::abs(line.positions[i] - 0.7 * line.times[i]) <= 1e-9);

  const FreePacketField rest(GaussianPacketSpec(natural, 1.0, 0.0));
  const Trajectory spread =
      integrate_bohmian(rest, 1.0, uniform_times(0.0, 2.0, 20), IntegrationOptions{1e-3});
  CHECK(std::abs(final_position(spread) - std::sqrt(2.0)) <= 1e-6);

  const OscillatorSpec ho(natural, 1.3, 0.8);
  const Trajectory orbit = integrate_bohmian(OscillatorField(ho), 0.4,
                                             uniform_times(0.0, ho.period(), 40));
  CHECK(orbit.source == TrajectorySource::AnalyticHo);
  CHECK(std::abs(final_position(orbit) - 0.4) <= 1e-6);
}

TEST_CASE("bohmian integration leaves the window by truncating") {
  const SampledVelocityField field = constant_field(1.0, -1.0, 1.0);
  const Trajectory tr = integrate_bohmian(field, 0.0, uniform_times(0.0, 5.0, 50));
  CHECK(tr.truncated);
  CHECK(tr.size() < 51);
  CHECK(tr.size() >= 10);
  for (double x : tr.positions)
    CHECK(x <= 1.0);
  CHECK_THROWS_AS(integrate_bohmian(field, 2.0, uniform_times(0.0, 1.0, 4)), InvalidArgument);
  const std::vector<double> backwards{0.0, 1.0, 0.5};
  CHECK_THROWS_AS(integrate_bohmian(field, 0.0, backwards), InvalidArgument);
  const std::vector<double> empty;
  CHECK_THROWS_AS(integrate_bohmian(field, 0.0, empty), InvalidArgument);
}

TEST_CASE("sampled field interpolation and step") {
  const Grid1D g(-2.0, 2.0, 81);
  std::vector<std::vector<double>> snaps;
  for (int k = 0; k < 6; ++k) {
    std::vector<double> v(81);
    for (std::size_t i = 0; i < 81; ++i)
      v[i] = g.x(i) * g.x(i) * g.x(i) + 0.1 * k * k * k;
    snaps.push_back(v);
  }
  const SampledVelocityField f(g, 1.0, 0.5, snaps, -1.5, 1.5, TrajectorySource::Hierarchy);
  CHECK(f.t_end() == doctest::Approx(3.5));
  // cubic in x and in t (t - 1 = 0.5 k) is reproduced exactly
  for (double x : {-1.3, 0.01, 0.77})
    for (double t : {1.1, 2.0, 3.3}) {
      const double k = (t - 1.0) / 0.5;
      CHECK(f.velocity(x, t) == doctest::Approx(x * x * x + 0.1 * k * k * k).epsilon(1e-12));
    }
  CHECK(f.contains(0.0, 2.0));
  CHECK_FALSE(f.contains(1.6, 2.0));
  CHECK_FALSE(f.contains(0.0, 4.0));
  // max |v| inside the window: 1.5^3 + 0.1 * 125
  CHECK(f.suggested_step() == doctest::Approx(0.5 * 0.05 / (3.375 + 12.5)));
  CHECK_THROWS_AS(SampledVelocityField(g, 0.0, 0.5, snaps, -3.0, 1.0, TrajectorySource::Oracle),
                  InvalidArgument);
}

TEST_CASE("classical integration") {
  const auto times = uniform_times(0.0, 3.0, 30);
  const Trajectory free = integrate_classical(Potential::free(), 1.0, 0.5, -0.25, times);
  CHECK(free.source == TrajectorySource::Classical);
  for (std::size_t i = 0; i < free.size(); ++i)
    CHECK(std::abs(free.positions[i] - (0.5 - 0.25 * free.times[i])) <= 1e-14);

  const double omega = 2.0, a = 0.7, mass = 1.4;
  const double period = 2 * pi / omega;
  const Potential v = Potential::harmonic(mass, omega);
  const Trajectory osc = integrate_classical(v, mass, a, 0.0, uniform_times(0.0, period, 100));
  for (std::size_t i = 0; i < osc.size(); ++i)
    CHECK(std::abs(osc.positions[i] - a * std::cos(omega * osc.times[i])) <= 1e-8);

  // Trajectories carry positions only, so conservation is checked through the
  // phase-space point after one period at dt = T/1000.
  const Trajectory e = integrate_classical(v, mass, a, 0.3, uniform_times(0.0, period, 4),
                                           IntegrationOptions{period / 1000});
  const double x_end = e.positions.back();
  const double exact_end = a * std::cos(omega * period) + 0.3 / omega * std::sin(omega * period);
  CHECK(std::abs(x_end - exact_end) <= 1e-10);
}

TEST_CASE("initial sampling") {
  const GaussianPacketSpec spec(natural, 1.0, 0.0);
  const Grid1D g(-8.0, 8.0, 1601);
  const RealField rho = free_density(spec, g, 0.0);

  const auto odd = sample_initial_positions(rho, 9, SamplingMode::Quantile);
  REQUIRE(odd.size() == 9);
  CHECK(std::abs(odd[4]) <= g.dx());
  CHECK(std::is_sorted(odd.begin(), odd.end()));

  const auto two = sample_initial_positions(rho, 2, SamplingMode::Quantile);
  CHECK(two[0] == doctest::Approx(-0.6744897501960817).epsilon(1e-4));
  CHECK(two[1] == doctest::Approx(0.6744897501960817).epsilon(1e-4));

  const auto uni = sample_initial_positions(rho, 5, SamplingMode::Uniform);
  const auto q5 = sample_initial_positions(rho, 5, SamplingMode::Quantile);
  CHECK(uni.front() == q5.front());
  CHECK(uni.back() == doctest::Approx(q5.back()).epsilon(1e-14));
  for (std::size_t k = 1; k < 5; ++k)
    CHECK(uni[k] - uni[k - 1] == doctest::Approx((q5.back() - q5.front()) / 4));

  const auto r1 = sample_initial_positions(rho, 200, SamplingMode::Random, 42);
  const auto r2 = sample_initial_positions(rho, 200, SamplingMode::Random, 42);
  const auto r3 = sample_initial_positions(rho, 200, SamplingMode::Random, 43);
  CHECK(r1 == r2);
  CHECK(r1 != r3);

  CHECK_THROWS_AS(sample_initial_positions(RealField(g), 5, SamplingMode::Quantile), InvalidArgument);
  RealField negative = rho;
  negative[100] = -1e-3;
  CHECK_THROWS_AS(sample_initial_positions(negative, 5, SamplingMode::Quantile), InvalidArgument);
  CHECK_THROWS_AS(sample_initial_positions(rho, 0, SamplingMode::Quantile), InvalidArgument);
}

TEST_CASE("sampling mode names") {
  for (SamplingMode m : {SamplingMode::Quantile, SamplingMode::Uniform, SamplingMode::Random})
    CHECK(parse_sampling_mode(to_string(m)) == m);
  CHECK_FALSE(parse_sampling_mode("sobol").has_value());
}

TEST_CASE("property: discrete CDF and its quantile are inverse") {
  Gen gen(31);
  const Grid1D g(-6.0, 6.0, 601);
  for (int trial = 0; trial < 20; ++trial) {
    const double c = gen.uniform(-2, 2), w = gen.uniform(0.3, 1.5);
    const DiscreteCdf cdf(sample(g, [&](double x) { return std::exp(-(x - c) * (x - c) / (2 * w * w)); }));
    REQUIRE(cdf(-6.0) == 0.0);
    REQUIRE(cdf(6.0) == doctest::Approx(1.0).epsilon(1e-15));
    for (int k = 0; k < 20; ++k) {
      const double p = gen.uniform(0.01, 0.99);
      REQUIRE(cdf(cdf.quantile(p)) == doctest::Approx(p).epsilon(1e-12));
    }
    CHECK_THROWS_AS(cdf.quantile(1.5), InvalidArgument);
  }
}

TEST_CASE("crossing checks") {
  const GaussianPacketSpec spec(natural, 1.0, 0.4);
  const Grid1D g(-8.0, 8.0, 801);
  const auto x0 = sample_initial_positions(free_density(spec, g, 0), 15, SamplingMode::Quantile);
  const auto times = uniform_times(0.0, 20.0, 100);
  const Ensemble free = integrate_ensemble(FreePacketField(spec), x0, times, SamplingMode::Quantile);
  CHECK(check_no_crossing(free).ok);

  const OscillatorSpec ho(natural, 1.0, 1.2);
  const Ensemble osc = integrate_ensemble(OscillatorField(ho), x0, uniform_times(0.0, 2 * ho.period(), 100),
                                          SamplingMode::Quantile);
  CHECK(check_no_crossing(osc).ok);
  for (std::size_t k = 1; k < osc.members.size(); ++k)
    for (std::size_t i = 0; i < osc.members[k].size(); ++i)
      CHECK(std::abs((osc.members[k].positions[i] - osc.members[k - 1].positions[i]) -
                     (x0[k] - x0[k - 1])) <= 1e-8);

  Ensemble crossed = free;
  auto &a = crossed.members[3].positions;
  auto &b = crossed.members[4].positions;
  std::swap_ranges(a.begin() + 60, a.end(), b.begin() + 60);
  const CrossingReport r = check_no_crossing(crossed);
  CHECK_FALSE(r.ok);
  CHECK(r.first == 3);
  CHECK(r.second == 4);
  CHECK(r.time == times[60]);
}

TEST_CASE("asymptotic velocity fits") {
  const GaussianPacketSpec rest(natural, 1.0, 0.0);
  const double ts = rest.spreading_time();
  const auto times = uniform_times(0.0, 40 * ts, 800);
  const Trajectory tr = analytic_trajectory(rest, 1.0, times);
  const AsymptoticFit fit = fit_asymptotic_velocity(tr, 20 * ts, 40 * ts, ts);
  CHECK(fit.velocity == doctest::Approx(0.5).epsilon(5e-3));
  CHECK(fit.samples >= 10);

  const GaussianPacketSpec moving(natural, 1.0, 0.3);
  const AsymptoticFit center =
      fit_asymptotic_velocity(analytic_trajectory(moving, 0.0, times), 20 * ts, 40 * ts, ts);
  CHECK(std::abs(center.velocity - 0.3) <= 1e-9);
  CHECK(std::abs(center.intercept) <= 1e-9);

  const Trajectory cl = integrate_classical(Potential::free(), 1.0, 0.5, 0.3, times);
  const AsymptoticFit line = fit_asymptotic_velocity(cl, 20 * ts, 40 * ts, ts);
  CHECK(line.velocity == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(line.residual <= 1e-12);

  CHECK_THROWS_AS(fit_asymptotic_velocity(tr, 5 * ts, 40 * ts, ts), InvalidArgument);
  CHECK_THROWS_AS(fit_asymptotic_velocity(tr, 20 * ts, 20.2 * ts, ts), InvalidArgument);
}

TEST_CASE("equivariance statistics") {
  const GaussianPacketSpec spec(natural, 1.0, 0.0);
  const Grid1D g(-12.0, 12.0, 2401);
  const RealField rho0 = free_density(spec, g, 0.0);
  const std::size_t n = 25;
  const auto q = sample_initial_positions(rho0, n, SamplingMode::Quantile);
  const std::vector<double> t0{0.0};
  const Ensemble still = integrate_ensemble(FreePacketField(spec), q, t0, SamplingMode::Quantile);
  CHECK(equivariance_check(still, rho0) <= 1.0 / n);

  const auto random = sample_initial_positions(rho0, 10000, SamplingMode::Random, 7);
  std::vector<double> moved;
  for (double x : random)
    moved.push_back(free_packet_trajectory(spec, x, 2.0));
  CHECK(ks_distance(moved, free_density(spec, g, 2.0)) < 0.02);

  const OscillatorSpec ho(natural, 1.0, 1.5);
  const Grid1D hg(-8.0, 8.0, 1601);
  const auto hx = sample_initial_positions(
      sample(hg, [&](double x) { return ho_density(ho, x, 0); }), 10000, SamplingMode::Random, 8);
  for (int quarter = 1; quarter <= 4; ++quarter) {
    const double t = quarter * ho.period() / 4;
    std::vector<double> at;
    for (double x : hx)
      at.push_back(ho_trajectory(ho, x, t));
    CHECK(ks_distance(at, sample(hg, [&](double x) { return ho_density(ho, x, t); })) < 0.02);
  }
  CHECK_THROWS_AS(ks_distance({}, rho0), InvalidArgument);
}

TEST_CASE("property: analytic, hierarchy and oracle fields give the same free paths") {
  const GaussianPacketSpec spec(natural, 1.0, 0.0);
  const double t_end = 1.0; // u = 0.5

  // Quadratic hierarchy fields on a coarse grid keep the high orders free of rounding noise.
  const Grid1D hg(-10.0, 10.0, 41);
  const RealField r = sample(hg, [&](double x) { return std::abs(free_packet_wavefunction(spec, x, 0)); });
  const HierarchyState seed = init_hierarchy(PolarFields{r, RealField(hg), {}}, 8);
  const SampledVelocityField hier =
      hierarchy_velocity_field(seed, Potential::free(), natural, 4, 1e-3, 1000, 10, -4.0, 4.0);

  const Grid1D og(-14.0, 14.0, 1401);
  const TdseState start(sample_complex(og, [&](double x) { return free_packet_wavefunction(spec, x, 0); }),
                        Potential::free(), natural);
  const SampledVelocityField oracle = oracle_velocity_field(start, 1e-3, 1000, 10, -8.0, 8.0);

  const auto times = uniform_times(0.0, 0.99, 99);
  for (double x0 : {-1.5, -0.5, 0.25, 1.0, 2.0}) {
    const Trajectory exact = analytic_trajectory(spec, x0, times);
    const Trajectory th = integrate_bohmian(hier, x0, times);
    const Trajectory to = integrate_bohmian(oracle, x0, times);
    REQUIRE(th.size() == exact.size());
    REQUIRE(to.size() == exact.size());
    CHECK(th.source == TrajectorySource::Hierarchy);
    CHECK(to.source == TrajectorySource::Oracle);
    for (std::size_t i = 0; i < exact.size(); ++i) {
      CHECK(std::abs(th.positions[i] - exact.positions[i]) <= 1e-3 * spec.sigma0());
      CHECK(std::abs(to.positions[i] - exact.positions[i]) <= 1e-3 * spec.sigma0());
    }
  }
}

TEST_CASE("property: integrated free paths obey the hyperbola law") {
  Gen gen(32);
  for (int trial = 0; trial < 20; ++trial) {
    const GaussianPacketSpec spec(PhysParams(gen.uniform(0.3, 2), gen.uniform(0.3, 2)),
                                  gen.uniform(0.3, 2), gen.uniform(-1, 1));
    double x0 = gen.uniform(-2, 2) * spec.sigma0();
    if (std::abs(x0) < 0.05 * spec.sigma0())
      x0 = 0.05 * spec.sigma0();
    const auto times = uniform_times(0.0, 5 * spec.spreading_time(), 50);
    const Trajectory tr = integrate_bohmian(FreePacketField(spec), x0, times);
    for (std::size_t i = 0; i < tr.size(); ++i) {
      const double u = spec.dimensionless_time(tr.times[i]);
      const double rel = (tr.positions[i] - spec.v0() * tr.times[i]) / x0;
      REQUIRE(rel * rel - u * u == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
}

TEST_CASE("property: quantum and classical paths separate like x0 (sqrt(1+u^2) - 1)") {
  Gen gen(33);
  for (int trial = 0; trial < 20; ++trial) {
    const GaussianPacketSpec spec(natural, gen.uniform(0.5, 2), gen.uniform(-1, 1));
    const double x0 = gen.uniform(-2, 2);
    const auto times = uniform_times(0.0, 2 * spec.spreading_time(), 40);
    const Trajectory q = integrate_bohmian(FreePacketField(spec), x0, times);
    const Trajectory c = integrate_classical(Potential::free(), 1.0, x0, spec.v0(), times);
    for (std::size_t i = 1; i < q.size(); ++i) {
      const double u = spec.dimensionless_time(times[i]);
      REQUIRE(q.positions[i] - c.positions[i] ==
              doctest::Approx(x0 * (std::sqrt(1 + u * u) - 1)).epsilon(1e-7).scale(1e-9));
      if (u < 0.05)
        REQUIRE(q.positions[i] - c.positions[i] ==
                doctest::Approx(x0 * u * u / 2).epsilon(0.01).scale(1e-9));
    }
  }
}

TEST_CASE("property: oscillator ensembles move rigidly") {
  Gen gen(34);
  for (int trial = 0; trial < 10; ++trial) {
    const OscillatorSpec spec(PhysParams(gen.uniform(0.2, 2), gen.uniform(0.5, 2)),
                              gen.uniform(0.5, 3), gen.uniform(-2, 2));
    std::vector<double> x0;
    for (int k = 0; k < 6; ++k)
      x0.push_back(-2 + 0.7 * k + gen.uniform(0, 0.3));
    const Ensemble e = integrate_ensemble(OscillatorField(spec), x0,
                                          uniform_times(0.0, 2 * spec.period(), 60),
                                          SamplingMode::Uniform);
    for (std::size_t k = 1; k < e.members.size(); ++k)
      for (std::size_t i = 0; i < e.members[k].size(); ++i)
        REQUIRE(std::abs((e.members[k].positions[i] - e.members[0].positions[i]) -
                         (x0[k] - x0[0])) <= 1e-8);
  }
}

TEST_CASE("property: ensembles are reproducible") {
  const GaussianPacketSpec spec(natural, 1.0, 0.2);
  const Grid1D g(-8.0, 8.0, 801);
  const auto times = uniform_times(0.0, 4.0, 40);
  for (std::uint64_t seed : {1u, 99u, 12345u}) {
    const auto a = sample_initial_positions(free_density(spec, g, 0), 30, SamplingMode::Random, seed);
    const auto b = sample_initial_positions(free_density(spec, g, 0), 30, SamplingMode::Random, seed);
    REQUIRE(a == b);
    const Ensemble ea = integrate_ensemble(FreePacketField(spec), a, times, SamplingMode::Random, seed);
    const Ensemble eb = integrate_ensemble(FreePacketField(spec), b, times, SamplingMode::Random, seed);
    for (std::size_t k = 0; k < ea.members.size(); ++k)
      REQUIRE(ea.members[k].positions == eb.members[k].positions);
  }
}
