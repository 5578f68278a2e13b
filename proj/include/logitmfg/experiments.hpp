#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "logitmfg/gld.hpp"
#include "logitmfg/mfg.hpp"

namespace logitmfg {

enum class Scenario { kFishing, kTourism, kCustom };
enum class SolverKind { kGld, kMfg };

// Everything a batch study needs to instantiate solvers at any resolution.
struct StudySetup {
  Scenario scenario = Scenario::kFishing;
  TsallisParams params{0.8, 0.01};
  PopulationSpec pops{{0.7, 0.3}};
  FishingParams fishing{};
  TourismParams tourism{};
  double horizon_t = 240.0;
  double delta = 1.0;
  double relaxation = 0.5;
  double iter_tol = 1e-10;
  long max_iters = 500;
  double stationary_tol = 1e-10;
  long gld_max_steps = 0;  // 0: the grid's n_t
  StrictCfl strict_cfl = StrictCfl::kAuto;
  InitProfile gld_init = InitProfile::kTilted;
  InitProfile mfg_init = InitProfile::kUniform;
};

// Model with the masses synchronized to the setup's population.
std::unique_ptr<UtilityModel> make_model(const StudySetup& setup);

// Stationary (evolutionary dynamic) or mid-horizon (game) densities of a
// single run, flat [type * n_x + cell]; the value slice is filled for the
// game only.
struct RunSlices {
  std::vector<double> density;
  std::vector<double> value;
  long steps_or_iters = 0;
};

RunSlices run_scenario(const StudySetup& setup, SolverKind solver,
                       const GridSpec& grid);

struct ConvergenceRow {
  int m;  // coarse cell count
  std::vector<double> max_err;
  std::vector<double> avg_err;
};

struct ConvergenceReport {
  Scenario scenario;
  SolverKind target;
  int reference_n_x = 0;
  std::vector<std::string> quantities;  // p_1, p_2 [, phi_1, phi_2]
  std::vector<ConvergenceRow> rows;     // ascending m
};

// Coarse runs at (N_t, N_x) = (horizon m / 2, m) against a reference at
// (horizon R, R); the reference densities are cell-averaged onto each
// coarse grid and both error norms are tabulated on densities (and on the
// value slices for the game).
ConvergenceReport convergence_study(const StudySetup& setup, SolverKind target,
                                    std::vector<int> coarse_ms,
                                    int reference_n_x);

// Error tabulation for one coarse/reference pair: cell-averages the
// reference onto the m-cell grid and takes both norms per quantity.
// Comparing a run with itself gives exact zeros.
ConvergenceRow tabulate_convergence_row(const RunSlices& coarse,
                                        const RunSlices& reference, int m,
                                        int reference_n_x, SolverKind target,
                                        int n_types);

struct LineFit {
  double slope;
  double intercept;
};

// Least squares y = slope x + intercept; nullopt for fewer than 2 points.
std::optional<LineFit> fit_line(std::span<const double> x,
                                std::span<const double> y);

struct DeltaSweepReport {
  std::vector<double> deltas;
  // distances[d][i]: max-norm gap between the stationary evolutionary
  // densities and the mid-horizon game densities of type i at deltas[d]
  std::vector<std::vector<double>> distances;
  std::vector<std::optional<LineFit>> fits;  // log10 dist vs log10 delta
};

DeltaSweepReport delta_sweep(const StudySetup& setup,
                             std::vector<double> deltas,
                             std::optional<double> eta_override, int n_x);

enum class SweepKind { kMasses, kEpsilon };

struct ScenarioRun {
  std::string label;
  std::vector<double> density;  // flat [type * n_x + cell]
};

struct ScenarioSweepReport {
  int n_x = 0;
  int n_types = 0;
  std::vector<ScenarioRun> runs;
  std::vector<std::pair<std::string, double>> diagnostics;
};

// Batch-runs the scenario over first-type masses or indicator smoothings
// and reports labeled slices for plotting plus summary diagnostics (type-2
// concentration, mass above the threshold, mass-swap density ratios,
// normalized shape gaps).
ScenarioSweepReport scenario_sweep(const StudySetup& setup, SweepKind kind,
                                   std::vector<double> values,
                                   SolverKind solver, int n_x);

}  // namespace logitmfg
