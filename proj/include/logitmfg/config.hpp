#pragma once

#include <optional>
#include <string>
#include <vector>

#include "logitmfg/experiments.hpp"

namespace logitmfg {

// Parsed, validated run description.  The schema is flat key = value lines
// grouped into [sections]; see README.md for the full key list.  Defaults
// follow the published parameter sets.
struct RunConfig {
  int spec_version = 1;

  // [run]
  SolverKind solver = SolverKind::kGld;
  Scenario scenario = Scenario::kFishing;
  std::string out_dir = "out";
  long stride = 0;  // 0: endpoints only
  StrictCfl strict_cfl = StrictCfl::kAuto;
  bool quiet = false;

  // [grid]
  int n_x = 150;
  long n_t = 36000;
  double horizon_t = 240.0;

  // [tsallis]
  double q = 0.8;
  double eta = 0.01;

  // [population]; empty means the scenario default
  std::vector<double> masses;

  // [init]; unset means tilted for the evolutionary dynamic and uniform
  // for the game
  std::optional<InitProfile> init;

  // [gld]
  double stationary_tol = 1e-10;
  long gld_max_steps = 0;  // 0: n_t
  bool avg_norm_stationarity = false;

  // [mfg]
  double delta = 1.0;
  double relaxation = 0.5;
  double iter_tol = 1e-10;
  long max_iters = 500;

  // [fishing] (masses come from [population])
  FishingParams fishing;

  // [tourism]
  TourismParams tourism;

  // [custom]: density-independent utility tables at cell centers
  int custom_types = 0;
  std::vector<double> custom_u;  // flat [type * n_x + cell]

  // [convergence]
  SolverKind convergence_target = SolverKind::kGld;
  std::vector<int> coarse_ms = {50, 100, 150};
  int reference_n_x = 300;

  // [delta_sweep]
  std::vector<double> deltas = {1, 5, 10, 25, 50, 100};
  std::optional<double> sweep_eta = 0.001;

  // [scenario_sweep]
  SweepKind sweep_kind = SweepKind::kMasses;
  std::vector<double> sweep_values;  // empty: scenario default
  std::optional<SolverKind> sweep_solver;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// Canonical text form; parse_config_text(serialize_config(c)) reproduces c.
std::string serialize_config(const RunConfig& config);

// Derived objects.
GridSpec grid_from_config(const RunConfig& config);
PopulationSpec population_from_config(const RunConfig& config);
std::unique_ptr<UtilityModel> model_from_config(const RunConfig& config);
StudySetup study_setup_from_config(const RunConfig& config);
InitProfile init_profile_for(const RunConfig& config, SolverKind solver);

}  // namespace logitmfg
