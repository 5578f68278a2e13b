#pragma once

#include <string>
#include <vector>

#include "logitmfg/gld.hpp"
#include "logitmfg/grid.hpp"
#include "logitmfg/utility.hpp"

namespace logitmfg {

struct CflLimits {
  double dt_hjb;        // 1/(1 + delta), keeps the value function in range
  double dt_fp;         // 1/theta_bar, keeps cell masses nonnegative;
                        // 0 means "no guarantee"
  bool assumption2_ok;  // positive deformed-exponential margin
};

CflLimits cfl_limits(const UtilityModel& model, const TsallisParams& params,
                     double delta);
CflLimits cfl_limits_from_bound(double utility_bound,
                                const TsallisParams& params, double delta);

// One explicit backward step of the value function for a single type:
//   phi_k = phi_{k+1} + dt { eta ln_q(sum_m exp_q(eta^{-1}(phi_{k+1,m} -
//           phi_{k+1,l})) dx) - delta phi_{k+1,l} + delta u_{k,l} }.
std::vector<double> hjb_backward_step(std::span<const double> phi_next,
                                      std::span<const double> u_k,
                                      const TsallisParams& params,
                                      double delta, const GridSpec& grid);

// Closed-form optimal distortion of the uniform re-sampling measure, same
// structure as the evolutionary kernel with the value function in place of
// the utility.  Flat [destination * n_x + current].
std::vector<double> optimal_control_kernel(std::span<const double> phi,
                                           const TsallisParams& params,
                                           const GridSpec& grid);

// One explicit forward step of the cell masses driven by a given control
// kernel (entries are raised to the q-th power internally).
std::vector<double> fp_forward_step(std::span<const double> mu,
                                    std::span<const double> kernel,
                                    const TsallisParams& params,
                                    const GridSpec& grid,
                                    const StepGuard& guard = {});

struct MfgConfig {
  TsallisParams params{0.8, 0.01};
  GridSpec grid;
  PopulationSpec pops;
  const UtilityModel* model = nullptr;
  double delta = 1.0;       // discount rate; the utility weight equals it
  double relaxation = 0.5;  // in (0, 1]
  double iter_tol = 1e-10;
  long max_iters = 500;
  StrictCfl strict_cfl = StrictCfl::kAuto;
};

struct IterationLog {
  std::vector<double> residuals;  // one entry per completed iteration
  bool converged = false;
  long iterations = 0;
};

struct MfgResult {
  DensityField mu;
  ValueField phi;
  IterationLog log;
  std::vector<std::string> warnings;
};

// Alternating backward/forward sweeps with relaxation:
//   1. backward sweep of the value function using the previous iterate's
//      densities inside the utility;
//   2. forward sweep of the densities using the fresh value function;
//   3. residual = max over all entries of both field differences;
//   4. stop when residual <= iter_tol, else relax both fields and repeat.
// The initial guess replicates init_mu across time with a zero value field
// unless explicit guess fields are supplied.
MfgResult solve_mfg(const MfgConfig& config, std::span<const double> init_mu);
MfgResult solve_mfg(const MfgConfig& config, std::span<const double> init_mu,
                    const DensityField& mu_guess, const ValueField& phi_guess);

// Per-type slices at the mid-horizon index n_t/2 (rounded down when n_t is
// odd), flat [type * n_x + cell].  The mid slice stands in for the
// stationary state on account of the turnpike behavior.
std::vector<double> extract_turnpike_slice(const Field& field);

}  // namespace logitmfg
