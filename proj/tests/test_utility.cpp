#include <cmath>
#include <random>

#include "doctest.h"
#include "logitmfg/utility.hpp"
#include "oracles.hpp"

using namespace logitmfg;

namespace {

// random admissible cell masses for two types
std::vector<double> random_masses(const GridSpec& g, const PopulationSpec& p,
                                  std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uv(0.0, 1.0);
  std::vector<double> mu(2 * g.n_x);
  for (int i = 0; i < 2; ++i) {
    double sum = 0.0;
    for (int l = 0; l < g.n_x; ++l) {
      mu[i * g.n_x + l] = uv(rng);
      sum += mu[i * g.n_x + l];
    }
    for (int l = 0; l < g.n_x; ++l) mu[i * g.n_x + l] *= p.masses[i] / sum;
  }
  return mu;
}

}  // namespace

TEST_CASE("fishing utility basics") {
  FishingParams fp;  // defaults: alpha .5, beta 2, kappa .1, m = (.7, .3)
  FishingUtility fishing(fp);
  CHECK(fishing.penalty_factor(1) ==
        doctest::Approx(1.0 + 0.1 * 7.0 / 3.0).epsilon(1e-14));
  CHECK(fishing.penalty_factor(0) == 1.0);
  CHECK(fishing.bound() ==
        doctest::Approx(1.0 + 2.0 * (1.0 + 0.1 * 7.0 / 3.0)).epsilon(1e-14));

  // two uniform cells: mean arrival 0.5, so U_1(x) = sqrt(x) - x
  const GridSpec g = make_grid(2, 10, 1.0);
  std::vector<double> mu{0.35, 0.35, 0.15, 0.15};
  auto u = eval_utility_grid(fishing, mu, g);
  CHECK(u.size() == 4);
  for (int l = 0; l < 2; ++l) {
    const double x = g.cell_center(l);
    CHECK(u[l] == doctest::Approx(std::sqrt(x) - x).epsilon(1e-13));
  }
  // U at x = 0 vanishes
  const GridSpec g0 = make_grid(1000, 10, 1.0);
  const PopulationSpec pops = make_population({0.7, 0.3});
  auto mu0 = init_density(g0, pops, InitProfile::kUniform);
  auto u0 = eval_utility_grid(fishing, mu0, g0);
  CHECK(std::fabs(u0[0]) < 0.05);  // first cell center is x = dx/2
}

TEST_CASE("legal anglers are never worse off") {
  FishingUtility fishing(FishingParams{});
  const GridSpec g = make_grid(32, 10, 1.0);
  const PopulationSpec pops = make_population({0.7, 0.3});
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    auto mu = random_masses(g, pops, rng);
    auto u = eval_utility_grid(fishing, mu, g);
    double arrival = 0.0;
    for (int l = 0; l < g.n_x; ++l) {
      arrival += g.cell_center(l) * (mu[l] + mu[g.n_x + l]);
    }
    for (int l = 0; l < g.n_x; ++l) {
      const double gap = u[l] - u[g.n_x + l];
      CHECK(gap >= -1e-14);
      const double expected =
          2.0 * g.cell_center(l) * 0.1 * (0.7 / 0.3) * arrival;
      CHECK(gap == doctest::Approx(expected).epsilon(1e-10));
    }
  }
}

TEST_CASE("fishing bound holds on random slices and by grid search") {
  FishingUtility fishing(FishingParams{});
  const GridSpec g = make_grid(24, 10, 1.0);
  const PopulationSpec pops = make_population({0.7, 0.3});
  std::mt19937_64 rng(7);
  double seen = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto mu = random_masses(g, pops, rng);
    auto u = eval_utility_grid(fishing, mu, g);
    for (double v : u) seen = std::max(seen, std::fabs(v));
  }
  CHECK(seen <= fishing.bound());
  // extreme arrival (all mass at x = 1) approaches the analytic bound
  std::vector<double> extreme(2 * g.n_x, 0.0);
  extreme[g.n_x - 1] = 0.7;
  extreme[2 * g.n_x - 1] = 0.3;
  auto u = eval_utility_grid(fishing, extreme, g);
  double lo = 0.0;
  for (double v : u) lo = std::min(lo, v);
  CHECK(-lo <= fishing.bound());
  // largest |U| at the last cell center with everyone arriving there
  const double x = g.cell_center(g.n_x - 1);
  CHECK(-lo == doctest::Approx(2.0 * (1.0 + 0.1 * 7.0 / 3.0) * x * x -
                               std::sqrt(x))
                   .epsilon(1e-12));
}

TEST_CASE("fishing utility is concave in x for alpha <= 1") {
  FishingUtility fishing(FishingParams{});
  const GridSpec g = make_grid(64, 10, 1.0);
  const PopulationSpec pops = make_population({0.7, 0.3});
  auto mu = init_density(g, pops, InitProfile::kUniform);
  auto u = eval_utility_grid(fishing, mu, g);
  for (int i = 0; i < 2; ++i) {
    for (int l = 1; l + 1 < g.n_x; ++l) {
      const double second = u[i * g.n_x + l + 1] - 2.0 * u[i * g.n_x + l] +
                            u[i * g.n_x + l - 1];
      CHECK(second <= 1e-10);
    }
  }
}

TEST_CASE("smooth indicator") {
  CHECK(smooth_indicator(0.65, 0.65, 1.0) == doctest::Approx(0.5));
  CHECK(smooth_indicator(0.65 + 1.0, 0.65, 1.0) ==
        doctest::Approx(0.5 * (1.0 + std::tanh(-1.0))).epsilon(1e-14));
  CHECK(smooth_indicator(-50.0, 0.65, 1.0) == doctest::Approx(1.0));
  CHECK(smooth_indicator(50.0, 0.65, 1.0) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(smooth_indicator(0.0, 0.5, 0.0), DomainError);
  // pointwise convergence to the step function
  for (double eps : {0.1, 0.01, 0.001}) {
    for (double off : {3.0, 5.0, 10.0}) {
      const double above = smooth_indicator(0.65 + off * eps, 0.65, eps);
      const double below = smooth_indicator(0.65 - off * eps, 0.65, eps);
      CHECK(std::fabs(above - 0.0) <= 0.01);
      CHECK(std::fabs(below - 1.0) <= 0.01);
    }
  }
}

TEST_CASE("tourism utility basics") {
  TourismParams tp;  // defaults per the application setup
  TourismUtility tourism(tp);
  CHECK(tourism.bound() == doctest::Approx(1.1).epsilon(1e-14));
  CHECK(tourism.lipschitz_scale() >= 1e5);

  const GridSpec g = make_grid(100, 10, 1.0);
  // all mass below the threshold: no congestion, U_i(0+) ~ 1/theta
  std::vector<double> low(2 * g.n_x, 0.0);
  low[0] = 0.8;
  low[g.n_x] = 0.2;
  auto u = eval_utility_grid(tourism, low, g);
  CHECK(u[0] == doctest::Approx(1.0 - 0.01 * g.cell_center(0)).epsilon(1e-9));

  // all mass above the threshold: denominator doubles
  std::vector<double> high(2 * g.n_x, 0.0);
  high[g.n_x - 1] = 0.8;
  high[2 * g.n_x - 1] = 0.2;
  auto u2 = eval_utility_grid(tourism, high, g);
  CHECK(u2[0] ==
        doctest::Approx(0.5 - 0.01 * g.cell_center(0)).epsilon(1e-9));

  // the travel-cost gap: U_1 - U_2 = (gamma2 - gamma1) x = 0.09 x
  const PopulationSpec pops = make_population({0.8, 0.2});
  std::mt19937_64 rng(13);
  auto mu = random_masses(g, pops, rng);
  auto u3 = eval_utility_grid(tourism, mu, g);
  for (int l = 0; l < g.n_x; ++l) {
    CHECK(u3[l] - u3[g.n_x + l] ==
          doctest::Approx(0.09 * g.cell_center(l)).epsilon(1e-12));
  }
}

TEST_CASE("tourism bound via random search") {
  TourismUtility tourism(TourismParams{});
  const GridSpec g = make_grid(32, 10, 1.0);
  const PopulationSpec pops = make_population({0.8, 0.2});
  std::mt19937_64 rng(31);
  double seen = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto mu = random_masses(g, pops, rng);
    auto u = eval_utility_grid(tourism, mu, g);
    for (double v : u) seen = std::max(seen, std::fabs(v));
  }
  CHECK(seen <= tourism.bound());
  CHECK(seen >= 0.8);  // the value bound is nearly attained
}

TEST_CASE("tabular utility and bound enforcement") {
  const GridSpec g = make_grid(4, 10, 1.0);
  TabularUtility table({1.0, 2.0, 3.0, 4.0, 0.0, 0.0, 0.0, 0.0}, 2, 4);
  CHECK(table.bound() == doctest::Approx(4.0));
  CHECK(table.nonnegative());
  auto u = eval_utility_grid(table, std::vector<double>(8, 0.125), g);
  CHECK(u[2] == 3.0);
  CHECK(u[7] == 0.0);
  TabularUtility signedtab({-1.0, 0.5}, 1, 2);
  CHECK_FALSE(signedtab.nonnegative());
}

TEST_CASE("potential diagnostics") {
  const GridSpec g = make_grid(150, 10, 1.0);
  const PopulationSpec pops = make_population({0.8, 0.2});

  // vanishing congestion and travel: P = -ln(theta)
  TourismParams tp;
  tp.theta = 2.0;
  tp.gamma1 = 0.0;
  tp.gamma2 = 1e-12;  // ordering constraint, negligible cost
  TourismUtility tourism(tp);
  std::vector<double> low(2 * g.n_x, 0.0);
  low[0] = 0.8;
  low[g.n_x] = 0.2;
  CHECK(potential_value(tourism, low, g) ==
        doctest::Approx(-std::log(2.0)).epsilon(1e-9));

  // uniform densities against a fine trapezoid quadrature
  TourismUtility tourism_default{TourismParams{}};
  auto uniform = init_density(g, pops, InitProfile::kUniform);
  const TourismParams& d = tourism_default.params();
  const double congestion = oracle::trapezoid(
      [&](double y) {
        return (1.0 - smooth_indicator(y, d.x_hat, d.epsilon)) *
               (0.8 + 0.2);
      },
      0.0, 1.0, 10000);
  const double travel = oracle::trapezoid(
      [&](double y) { return y * (d.gamma1 * 0.8 + d.gamma2 * 0.2); }, 0.0,
      1.0, 10000);
  const double expected = -std::log(d.theta + congestion) - travel;
  CHECK(potential_value(tourism_default, uniform, g) ==
        doctest::Approx(expected).epsilon(0.01));

  // harvesting potential against the same quadrature oracle
  FishingUtility fishing(FishingParams{});
  const PopulationSpec fpops = make_population({0.7, 0.3});
  auto funiform = init_density(g, fpops, InitProfile::kUniform);
  const double gain = oracle::trapezoid(
      [&](double y) { return std::sqrt(y) * (0.7 + 0.3); }, 0.0, 1.0, 10000);
  const double a1 = 0.7 * 0.5, a2 = 0.3 * 0.5, a = a1 + a2;
  const double kap = 0.1 * 0.7 / 0.3;
  const double fexpected = gain - 0.5 * 2.0 * (a * a + kap * a * a2);
  CHECK(potential_value(fishing, funiform, g) ==
        doctest::Approx(fexpected).epsilon(0.005));

  TabularUtility table({0.0, 0.0}, 1, 2);
  CHECK_THROWS_AS(
      potential_value(table, std::vector<double>{0.5, 0.5}, make_grid(2, 1, 1.0)),
      UnsupportedModel);
}

TEST_CASE("parameter validation") {
  FishingParams bad;
  bad.alpha = 0.0;
  CHECK_THROWS_AS(FishingUtility{bad}, ValidationError);
  TourismParams tbad;
  tbad.gamma1 = 0.5;
  tbad.gamma2 = 0.1;
  CHECK_THROWS_AS(TourismUtility{tbad}, ValidationError);
  TourismParams tbad2;
  tbad2.x_hat = 1.5;
  CHECK_THROWS_AS(TourismUtility{tbad2}, ValidationError);
}
