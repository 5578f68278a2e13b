#include <cmath>

#include "doctest.h"
#include "logitmfg/experiments.hpp"

using namespace logitmfg;

namespace {

StudySetup desk_fishing() {
  StudySetup s;
  s.scenario = Scenario::kFishing;
  s.params = TsallisParams{0.8, 0.1};  // milder kernel for fast desk runs
  s.pops = make_population({0.7, 0.3});
  s.horizon_t = 60.0;
  s.gld_max_steps = 200000;
  return s;
}

}  // namespace

TEST_CASE("line fit") {
  std::vector<double> x{0.0, 1.0, 2.0};
  std::vector<double> y{1.0, 3.0, 5.0};
  auto f = fit_line(x, y);
  REQUIRE(f.has_value());
  CHECK(f->slope == doctest::Approx(2.0));
  CHECK(f->intercept == doctest::Approx(1.0));
  CHECK_FALSE(fit_line(std::vector<double>{1.0}, std::vector<double>{2.0})
                  .has_value());
}

TEST_CASE("published delta-table values fit a reciprocal power law") {
  // frozen from the reported linkage table; the fitted log-log slope is
  // the reference constant for the sweep harness
  std::vector<double> deltas{1, 5, 10, 25, 50, 100};
  std::vector<double> dist{1.68, 4.43e-1, 2.31e-1, 9.49e-2, 4.78e-2, 2.40e-2};
  std::vector<double> lx(deltas.size()), ly(deltas.size());
  for (size_t j = 0; j < deltas.size(); ++j) {
    lx[j] = std::log10(deltas[j]);
    ly[j] = std::log10(dist[j]);
  }
  auto f = fit_line(lx, ly);
  REQUIRE(f.has_value());
  CHECK(f->slope == doctest::Approx(-0.92).epsilon(0.01));
}

TEST_CASE("self comparison yields exactly zero errors") {
  StudySetup s = desk_fishing();
  const GridSpec g = make_grid(16, 960, s.horizon_t);
  const RunSlices run = run_scenario(s, SolverKind::kGld, g);
  const auto row =
      tabulate_convergence_row(run, run, 16, 16, SolverKind::kGld, 2);
  for (double v : row.max_err) CHECK(v == 0.0);
  for (double v : row.avg_err) CHECK(v == 0.0);
}

TEST_CASE("coarse errors fall with resolution at desk scale") {
  StudySetup s = desk_fishing();
  auto report = convergence_study(s, SolverKind::kGld, {8, 16}, 48);
  REQUIRE(report.rows.size() == 2);
  CHECK(report.rows[0].m == 8);
  CHECK(report.rows[1].m == 16);
  for (size_t qi = 0; qi < report.quantities.size(); ++qi) {
    CHECK(report.rows[1].max_err[qi] < report.rows[0].max_err[qi]);
    CHECK(report.rows[1].avg_err[qi] <= report.rows[1].max_err[qi] + 1e-18);
    CHECK(report.rows[0].avg_err[qi] >= 0.0);
  }
  CHECK_THROWS_AS(convergence_study(s, SolverKind::kGld, {7}, 48),
                  IncompatibleResolution);
}

TEST_CASE("game-target convergence table also tabulates value errors") {
  StudySetup s = desk_fishing();
  auto report = convergence_study(s, SolverKind::kMfg, {8, 16}, 48);
  REQUIRE(report.quantities.size() == 4);  // p_1, p_2, phi_1, phi_2
  CHECK(report.quantities[2] == "phi_1");
  for (size_t qi = 0; qi < 4; ++qi) {
    CHECK(report.rows[1].max_err[qi] < report.rows[0].max_err[qi]);
    CHECK(report.rows[1].avg_err[qi] <= report.rows[1].max_err[qi] + 1e-18);
  }
}

TEST_CASE("delta sweep at desk scale shrinks the linkage gap") {
  StudySetup s = desk_fishing();
  auto report = delta_sweep(s, {1.0, 8.0}, std::nullopt, 12);
  REQUIRE(report.deltas.size() == 2);
  REQUIRE(report.distances.size() == 2);
  for (int i = 0; i < 2; ++i) {
    CHECK(report.distances[1][i] < report.distances[0][i]);
    REQUIRE(report.fits[i].has_value());
    CHECK(report.fits[i]->slope < 0.0);
  }
  auto single = delta_sweep(s, {2.0}, std::nullopt, 12);
  CHECK_FALSE(single.fits[0].has_value());  // degenerate fit is absent
}

TEST_CASE("mass scenario sweep reports concentration diagnostics") {
  StudySetup s = desk_fishing();
  auto report = scenario_sweep(s, SweepKind::kMasses, {0.5, 0.9},
                               SolverKind::kGld, 16);
  REQUIRE(report.runs.size() == 2);
  CHECK(report.runs[0].label == "m1=0.5");
  CHECK(report.runs[1].label == "m1=0.9");
  bool saw_concentration = false;
  for (const auto& [key, value] : report.diagnostics) {
    if (key.rfind("type2_mass_below", 0) == 0) {
      saw_concentration = true;
      CHECK(value >= 0.0);
      CHECK(value <= 1.0 + 1e-12);
    }
  }
  CHECK(saw_concentration);
  // per-run masses are normalized per scenario
  for (const auto& run : report.runs) {
    double total = 0.0;
    for (double v : run.density) total += v / 16.0;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("growing the licensed population pushes the other toward zero") {
  // published parameter set at full spatial resolution, stationary dynamic
  StudySetup s;
  s.scenario = Scenario::kFishing;
  s.params = TsallisParams{0.8, 0.01};
  s.pops = make_population({0.7, 0.3});
  s.gld_max_steps = 2000000;
  auto report = scenario_sweep(s, SweepKind::kMasses, {0.5, 0.9},
                               SolverKind::kGld, 150);
  double below[2] = {0.0, 0.0};
  for (const auto& [key, value] : report.diagnostics) {
    if (key == "type2_mass_below_0.1[m1=0.5]") below[0] = value;
    if (key == "type2_mass_below_0.1[m1=0.9]") below[1] = value;
  }
  // measured on this scheme: ~2e-5 at m1 = 0.5 versus ~0.31 at m1 = 0.9
  CHECK(below[1] > 100.0 * below[0]);
  CHECK(below[1] > 0.25);
  // the mean arrival intensity of the penalized type drops as well
  auto mean_arrival = [&](const std::vector<double>& density) {
    double m = 0.0;
    for (int l = 0; l < 150; ++l) {
      m += (l + 0.5) / 150.0 * density[150 + l] / 150.0;
    }
    return m;
  };
  const double lo = mean_arrival(report.runs[0].density) / 0.5;
  const double hi = mean_arrival(report.runs[1].density) / 0.1;
  CHECK(hi < 0.5 * lo);
}

TEST_CASE("epsilon sweep applies to the congestion game only") {
  StudySetup s = desk_fishing();
  CHECK_THROWS_AS(
      scenario_sweep(s, SweepKind::kEpsilon, {0.5}, SolverKind::kGld, 8),
      ValidationError);
}
