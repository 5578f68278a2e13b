#pragma once

#include <limits>
#include <string>
#include <vector>

#include "logitmfg/grid.hpp"
#include "logitmfg/kernel.hpp"
#include "logitmfg/utility.hpp"

namespace logitmfg {

// How to treat a time step that exceeds the guaranteed stability bound:
// abort (kOn), keep going (kOff), or decide from the regime -- strict when
// the guarantee is applicable (q >= 1 or the bound margin is positive),
// warn-only otherwise, which is how the published parameter sets run.
enum class StrictCfl { kAuto, kOn, kOff };

bool resolve_strict(StrictCfl mode, const TsallisParams& params,
                    double utility_bound);

struct StepGuard {
  double utility_bound = std::numeric_limits<double>::quiet_NaN();
  bool strict = false;
};

// Transition kernel of the evolutionary dynamic built from a utility slice,
// flat [destination * n_x + current].
std::vector<double> gld_transition_kernel(std::span<const double> u,
                                          const TsallisParams& params,
                                          const GridSpec& grid);

// One explicit update of the cell masses of a single type.  With a finite
// guard bound and strict mode, throws CflViolation when dt exceeds the
// guaranteed step; any negative output mass raises NonnegativityLost.
std::vector<double> gld_step(std::span<const double> mu,
                             std::span<const double> u,
                             const TsallisParams& params, const GridSpec& grid,
                             const StepGuard& guard = {});

struct GldConfig {
  TsallisParams params;
  GridSpec grid;
  PopulationSpec pops;
  const UtilityModel* model = nullptr;
  double stationary_tol = 1e-10;
  long max_steps = 0;          // 0: grid.n_t
  bool avg_norm_stationarity = false;
  StrictCfl strict_cfl = StrictCfl::kAuto;
  long trajectory_stride = 0;  // 0: keep only endpoints
};

struct TrajectorySample {
  double t;
  std::vector<double> mu;  // flat [type * n_x + cell]
};

struct GldResult {
  std::vector<double> stationary_mu;  // flat [type * n_x + cell]
  long steps = 0;
  double last_residual = 0.0;
  std::vector<TrajectorySample> trajectory;
  std::vector<std::pair<double, double>> potential_series;  // (t, P)
  std::vector<std::string> warnings;
};

// Iterates gld_step with the utility re-evaluated every step until the
// successive density change drops below stationary_tol (max norm over all
// types and cells, or average norm per the config flag).  Throws
// NotConverged when max_steps is exhausted.
GldResult solve_gld_stationary(const GldConfig& config,
                               std::span<const double> init_mu);

// Density view p = mu / dx of a flat mass slice.
std::vector<double> to_density(std::span<const double> mu, double dx);

}  // namespace logitmfg
