#include "logitmfg/gld.hpp"

#include <cmath>
#include <string>

#include "parallel_util.hpp"

namespace logitmfg {

bool resolve_strict(StrictCfl mode, const TsallisParams& params,
                    double utility_bound) {
  switch (mode) {
    case StrictCfl::kOn:
      return true;
    case StrictCfl::kOff:
      return false;
    case StrictCfl::kAuto:
      return params.q >= 1.0 ||
             params.within_guaranteed_regime(utility_bound);
  }
  return true;
}

std::vector<double> gld_transition_kernel(std::span<const double> u,
                                          const TsallisParams& params,
                                          const GridSpec& grid) {
  if (u.size() != static_cast<size_t>(grid.n_x)) {
    throw ShapeMismatch("gld_transition_kernel: slice length != n_x");
  }
  return transition_kernel(u, params, grid.dx);
}

namespace {

void check_nonnegative(std::span<const double> mu_next, const char* who) {
  for (double v : mu_next) {
    if (v < 0.0) {
      throw NonnegativityLost(std::string(who) +
                              ": a cell mass became negative; reduce dt");
    }
    if (!std::isfinite(v)) {
      throw NonFiniteValue(std::string(who) + ": non-finite cell mass");
    }
  }
}

}  // namespace

std::vector<double> gld_step(std::span<const double> mu,
                             std::span<const double> u,
                             const TsallisParams& params, const GridSpec& grid,
                             const StepGuard& guard) {
  if (mu.size() != u.size() || mu.size() != static_cast<size_t>(grid.n_x)) {
    throw ShapeMismatch("gld_step: slice length != n_x");
  }
  if (guard.strict && std::isfinite(guard.utility_bound)) {
    const double dt_fp = guaranteed_fp_time_step(guard.utility_bound, params);
    if (grid.dt > dt_fp) {
      throw CflViolation("gld_step: dt = " + std::to_string(grid.dt) +
                         " exceeds the guaranteed bound " +
                         std::to_string(dt_fp));
    }
  }
  std::vector<double> mu_next(mu.size());
  conservation_step(u, mu, params, grid.dx, grid.dt, mu_next);
  check_nonnegative(mu_next, "gld_step");
  return mu_next;
}

std::vector<double> to_density(std::span<const double> mu, double dx) {
  std::vector<double> p(mu.begin(), mu.end());
  for (double& v : p) v /= dx;
  return p;
}

GldResult solve_gld_stationary(const GldConfig& config,
                               std::span<const double> init_mu) {
  const GridSpec& grid = config.grid;
  const int n_types = config.pops.n_types();
  const int nx = grid.n_x;
  if (config.model == nullptr || config.model->n_types() != n_types) {
    throw ValidationError("solve_gld_stationary: model/population mismatch");
  }
  if (!(config.stationary_tol > 0.0)) {
    throw ValidationError("solve_gld_stationary: tolerance must be > 0");
  }
  if (init_mu.size() != static_cast<size_t>(n_types) * nx) {
    throw ShapeMismatch("solve_gld_stationary: init slice has wrong shape");
  }
  for (int i = 0; i < n_types; ++i) {
    double sum = 0.0;
    for (int l = 0; l < nx; ++l) {
      const double v = init_mu[static_cast<size_t>(i) * nx + l];
      if (v < 0.0) throw NegativeDensity("solve_gld_stationary: init < 0");
      sum += v;
    }
    if (std::fabs(sum - config.pops.masses[i]) > 1e-12) {
      throw ValidationError("solve_gld_stationary: init mass != m_i");
    }
  }

  GldResult result;
  const double bound = config.model->bound();
  const bool strict = resolve_strict(config.strict_cfl, config.params, bound);
  const double dt_fp = guaranteed_fp_time_step(bound, config.params);
  if (grid.dt > dt_fp) {
    const std::string msg =
        "dt = " + std::to_string(grid.dt) +
        " has no guaranteed positivity (bound " + std::to_string(dt_fp) + ")";
    if (strict) throw CflViolation("solve_gld_stationary: " + msg);
    result.warnings.push_back(msg);
  }

  const long max_steps = config.max_steps > 0 ? config.max_steps : grid.n_t;
  const double limit = bound * (1.0 + 1e-12) + 1e-12;

  std::vector<double> mu(init_mu.begin(), init_mu.end());
  std::vector<double> mu_next(mu.size());
  std::vector<double> u(mu.size());

  auto record = [&](long step) {
    if (config.trajectory_stride > 0 &&
        (step % config.trajectory_stride == 0)) {
      result.trajectory.push_back({step * grid.dt, mu});
      try {
        result.potential_series.emplace_back(
            step * grid.dt, potential_value(*config.model, mu, grid));
      } catch (const UnsupportedModel&) {
      }
    }
  };

  double residual = std::numeric_limits<double>::infinity();
  long step = 0;
  for (; step < max_steps; ++step) {
    record(step);
    config.model->evaluate(grid, mu, u);
    for (double v : u) {
      if (!(std::fabs(v) <= limit)) {
        throw EvaluationError(
            "solve_gld_stationary: utility exceeded its declared bound");
      }
    }
    detail::parallel_over_types(n_types, [&](int i) {
      conservation_step(
          std::span<const double>(u.data() + static_cast<size_t>(i) * nx, nx),
          std::span<const double>(mu.data() + static_cast<size_t>(i) * nx, nx),
          config.params, grid.dx, grid.dt,
          std::span<double>(mu_next.data() + static_cast<size_t>(i) * nx, nx));
    });
    check_nonnegative(mu_next, "solve_gld_stationary");

    // Successive change of the probability densities, joint over types.
    if (config.avg_norm_stationarity) {
      residual = 0.0;
      for (int i = 0; i < n_types; ++i) {
        double acc = 0.0;
        for (int l = 0; l < nx; ++l) {
          const size_t j = static_cast<size_t>(i) * nx + l;
          acc += std::fabs(mu_next[j] - mu[j]);
        }
        residual = std::max(residual, acc / (grid.dx * nx));
      }
    } else {
      double m = 0.0;
      for (size_t j = 0; j < mu.size(); ++j) {
        m = std::max(m, std::fabs(mu_next[j] - mu[j]));
      }
      residual = m / grid.dx;
    }
    mu.swap(mu_next);
    if (residual < config.stationary_tol) {
      ++step;
      break;
    }
  }
  result.last_residual = residual;
  result.steps = step;
  if (residual >= config.stationary_tol) {
    throw NotConverged("solve_gld_stationary: residual " +
                           std::to_string(residual) + " after " +
                           std::to_string(step) + " steps",
                       residual, step);
  }
  if (config.trajectory_stride > 0) {
    result.trajectory.push_back({step * grid.dt, mu});
    try {
      result.potential_series.emplace_back(
          step * grid.dt, potential_value(*config.model, mu, grid));
    } catch (const UnsupportedModel&) {
    }
  }
  result.stationary_mu = std::move(mu);
  return result;
}

}  // namespace logitmfg
