#pragma once

#include <string>
#include <vector>

#include "logitmfg/config.hpp"

namespace logitmfg {

// All emitters write LF-terminated rows with floats at 17 significant
// digits, so re-running an identical configuration reproduces every file
// byte for byte.

void ensure_out_dir(const std::string& dir);

// density_<i>.csv (t, x, p) or value_<i>.csv (t, x, phi) from a full field,
// strided in time; stride <= 0 keeps the first and last slices only.
void emit_field_csv(const std::string& dir, const std::string& prefix,
                    const Field& field, const GridSpec& grid, long stride,
                    bool density_view);

// density_<i>.csv from recorded trajectory samples.
void emit_trajectory_csv(const std::string& dir,
                         const std::vector<TrajectorySample>& samples,
                         const GridSpec& grid, int n_types);

// stationary.csv: x plus one density column per type.
void emit_stationary_csv(const std::string& dir,
                         const std::vector<double>& density, int n_types,
                         const GridSpec& grid);

void emit_iterations_csv(const std::string& dir, const IterationLog& log);

void emit_potential_csv(const std::string& dir,
                        const std::vector<std::pair<double, double>>& series);

void emit_convergence_csv(const std::string& dir,
                          const ConvergenceReport& report);

// report_delta_sweep.csv plus the fitted slopes in fit.csv.
void emit_delta_sweep_csv(const std::string& dir,
                          const DeltaSweepReport& report, int n_types);

// stationary_<label>.csv per run plus report_scenario_sweep.csv.
void emit_scenario_sweep_csv(const std::string& dir,
                             const ScenarioSweepReport& report);

}  // namespace logitmfg
