#include "logitmfg/mfg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "parallel_util.hpp"

namespace logitmfg {

CflLimits cfl_limits_from_bound(double utility_bound,
                                const TsallisParams& params, double delta) {
  CflLimits lim;
  lim.dt_hjb = 1.0 / (1.0 + delta);
  lim.dt_fp = guaranteed_fp_time_step(utility_bound, params);
  lim.assumption2_ok = params.within_guaranteed_regime(utility_bound);
  return lim;
}

CflLimits cfl_limits(const UtilityModel& model, const TsallisParams& params,
                     double delta) {
  return cfl_limits_from_bound(model.bound(), params, delta);
}

std::vector<double> hjb_backward_step(std::span<const double> phi_next,
                                      std::span<const double> u_k,
                                      const TsallisParams& params,
                                      double delta, const GridSpec& grid) {
  const int n = grid.n_x;
  if (phi_next.size() != static_cast<size_t>(n) ||
      u_k.size() != static_cast<size_t>(n)) {
    throw ShapeMismatch("hjb_backward_step: slice length != n_x");
  }
  std::vector<double> term(n);
  softmax_log_terms(phi_next, params, grid.dx, term);
  std::vector<double> phi(n);
  for (int l = 0; l < n; ++l) {
    phi[l] = phi_next[l] +
             grid.dt * (term[l] - delta * phi_next[l] + delta * u_k[l]);
    if (!std::isfinite(phi[l])) {
      throw NonFiniteValue("hjb_backward_step: non-finite value");
    }
  }
  return phi;
}

std::vector<double> optimal_control_kernel(std::span<const double> phi,
                                           const TsallisParams& params,
                                           const GridSpec& grid) {
  if (phi.size() != static_cast<size_t>(grid.n_x)) {
    throw ShapeMismatch("optimal_control_kernel: slice length != n_x");
  }
  return transition_kernel(phi, params, grid.dx);
}

std::vector<double> fp_forward_step(std::span<const double> mu,
                                    std::span<const double> kernel,
                                    const TsallisParams& params,
                                    const GridSpec& grid,
                                    const StepGuard& guard) {
  if (mu.size() != static_cast<size_t>(grid.n_x)) {
    throw ShapeMismatch("fp_forward_step: slice length != n_x");
  }
  if (guard.strict && std::isfinite(guard.utility_bound)) {
    const double dt_fp = guaranteed_fp_time_step(guard.utility_bound, params);
    if (grid.dt > dt_fp) {
      throw CflViolation("fp_forward_step: dt exceeds the guaranteed bound " +
                         std::to_string(dt_fp));
    }
  }
  std::vector<double> mu_next =
      step_with_kernel(mu, kernel, params, grid.dx, grid.dt);
  for (double v : mu_next) {
    if (v < 0.0) {
      throw NonnegativityLost("fp_forward_step: a cell mass became negative");
    }
    if (!std::isfinite(v)) {
      throw NonFiniteValue("fp_forward_step: non-finite cell mass");
    }
  }
  return mu_next;
}

std::vector<double> extract_turnpike_slice(const Field& field) {
  const long k = field.n_t() / 2;
  std::vector<double> out(static_cast<size_t>(field.n_types()) * field.n_x());
  for (int i = 0; i < field.n_types(); ++i) {
    auto s = field.slice(i, k);
    std::copy(s.begin(), s.end(),
              out.begin() + static_cast<size_t>(i) * field.n_x());
  }
  return out;
}

namespace {

struct SweepChecks {
  bool check_phi_range;  // dt within the backward bound
  double phi_lo;
  double phi_hi;
};

void verify_phi_slice(std::span<const double> phi, const SweepChecks& chk) {
  for (double v : phi) {
    if (!std::isfinite(v)) {
      throw NonFiniteValue("solve_mfg: non-finite value function");
    }
  }
  if (!chk.check_phi_range) return;
  for (double v : phi) {
    if (v < chk.phi_lo || v > chk.phi_hi) {
      throw Error("solve_mfg: value function left [" +
                  std::to_string(chk.phi_lo) + ", " +
                  std::to_string(chk.phi_hi) + "]");
    }
  }
}

}  // namespace

MfgResult solve_mfg(const MfgConfig& config, std::span<const double> init_mu,
                    const DensityField& mu_guess,
                    const ValueField& phi_guess) {
  const GridSpec& grid = config.grid;
  const int n_types = config.pops.n_types();
  const int nx = grid.n_x;
  const long nt = grid.n_t;
  if (config.model == nullptr || config.model->n_types() != n_types) {
    throw ValidationError("solve_mfg: model/population mismatch");
  }
  if (!(config.relaxation > 0.0 && config.relaxation <= 1.0)) {
    throw ValidationError("solve_mfg: relaxation must lie in (0, 1]");
  }
  if (!(config.iter_tol > 0.0) || config.max_iters <= 0) {
    throw ValidationError("solve_mfg: bad iteration controls");
  }
  if (init_mu.size() != static_cast<size_t>(n_types) * nx) {
    throw ShapeMismatch("solve_mfg: init slice has wrong shape");
  }
  if (mu_guess.n_types() != n_types || mu_guess.n_t() != nt ||
      mu_guess.n_x() != nx || phi_guess.n_types() != n_types ||
      phi_guess.n_t() != nt || phi_guess.n_x() != nx) {
    throw ShapeMismatch("solve_mfg: guess fields have wrong shape");
  }

  MfgResult result;
  const double bound = config.model->bound();
  const bool strict = resolve_strict(config.strict_cfl, config.params, bound);
  const CflLimits lim = cfl_limits_from_bound(bound, config.params,
                                              config.delta);
  if (grid.dt > lim.dt_hjb) {
    const std::string msg = "dt = " + std::to_string(grid.dt) +
                            " exceeds the value-function bound " +
                            std::to_string(lim.dt_hjb);
    if (strict) throw CflViolation("solve_mfg: " + msg);
    result.warnings.push_back(msg);
  }
  if (grid.dt > lim.dt_fp) {
    const std::string msg =
        "dt = " + std::to_string(grid.dt) +
        " has no guaranteed positivity (bound " + std::to_string(lim.dt_fp) +
        ")";
    if (strict) throw CflViolation("solve_mfg: " + msg);
    result.warnings.push_back(msg);
  }

  SweepChecks chk;
  chk.check_phi_range = grid.dt <= lim.dt_hjb;
  const double phi_tol = bound * 1e-9 + 1e-9;
  chk.phi_hi = bound + phi_tol;
  chk.phi_lo = config.model->nonnegative() ? -phi_tol : -(bound + phi_tol);

  DensityField mu_prev = mu_guess;
  ValueField phi_prev = phi_guess;
  DensityField mu_new(n_types, nt, nx);
  ValueField phi_new(n_types, nt, nx);

  const double utility_limit = bound * (1.0 + 1e-12) + 1e-12;
  const double sigma = config.relaxation;

  IterationLog log;
  for (long r = 1; r <= config.max_iters; ++r) {
    // Backward sweep; the utility sees the previous iterate's densities.
    // Types are independent given those densities, so they run in parallel
    // (each worker re-evaluates the shared utility slice for itself).
    detail::parallel_over_types(n_types, [&](int i) {
      std::vector<double> mu_k(static_cast<size_t>(n_types) * nx);
      std::vector<double> u(static_cast<size_t>(n_types) * nx);
      std::vector<double> term(nx);
      auto terminal = phi_new.slice(i, nt);
      std::fill(terminal.begin(), terminal.end(), 0.0);
      for (long k = nt - 1; k >= 0; --k) {
        for (int j = 0; j < n_types; ++j) {
          auto s = mu_prev.slice(j, k);
          std::copy(s.begin(), s.end(),
                    mu_k.begin() + static_cast<size_t>(j) * nx);
        }
        config.model->evaluate(grid, mu_k, u);
        const double* u_i = u.data() + static_cast<size_t>(i) * nx;
        for (int l = 0; l < nx; ++l) {
          if (!(std::fabs(u_i[l]) <= utility_limit)) {
            throw EvaluationError(
                "solve_mfg: utility exceeded its declared bound");
          }
        }
        auto phi_next = phi_new.slice(i, k + 1);
        softmax_log_terms(phi_next, config.params, grid.dx, term);
        auto phi_out = phi_new.slice(i, k);
        for (int l = 0; l < nx; ++l) {
          phi_out[l] = phi_next[l] + grid.dt * (term[l] -
                                                config.delta * phi_next[l] +
                                                config.delta * u_i[l]);
        }
        verify_phi_slice(phi_out, chk);
      }
    });

    // Forward sweep driven by the fresh value function.
    detail::parallel_over_types(n_types, [&](int i) {
      auto first = mu_new.slice(i, 0);
      std::copy(init_mu.begin() + static_cast<size_t>(i) * nx,
                init_mu.begin() + static_cast<size_t>(i + 1) * nx,
                first.begin());
      for (long k = 0; k < nt; ++k) {
        conservation_step(phi_new.slice(i, k), mu_new.slice(i, k),
                          config.params, grid.dx, grid.dt,
                          mu_new.slice(i, k + 1));
        for (double v : mu_new.slice(i, k + 1)) {
          if (v < 0.0) {
            throw NonnegativityLost(
                "solve_mfg: a cell mass became negative; reduce dt");
          }
          if (!std::isfinite(v)) {
            throw NonFiniteValue("solve_mfg: non-finite cell mass");
          }
        }
      }
    });

    // Iteration error over both fields, then either stop or relax.
    double eps = 0.0;
    {
      auto a = phi_new.raw();
      auto b = phi_prev.raw();
      for (size_t j = 0; j < a.size(); ++j) {
        eps = std::max(eps, std::fabs(a[j] - b[j]));
      }
      auto c = mu_new.raw();
      auto d = mu_prev.raw();
      for (size_t j = 0; j < c.size(); ++j) {
        eps = std::max(eps, std::fabs(c[j] - d[j]));
      }
    }
    log.residuals.push_back(eps);
    log.iterations = r;
    if (eps <= config.iter_tol) {
      log.converged = true;
      result.mu = std::move(mu_new);
      result.phi = std::move(phi_new);
      result.log = std::move(log);
      return result;
    }
    {
      auto a = phi_prev.raw();
      auto b = phi_new.raw();
      for (size_t j = 0; j < a.size(); ++j) {
        a[j] = sigma * b[j] + (1.0 - sigma) * a[j];
      }
      auto c = mu_prev.raw();
      auto d = mu_new.raw();
      for (size_t j = 0; j < c.size(); ++j) {
        c[j] = sigma * d[j] + (1.0 - sigma) * c[j];
      }
    }
  }
  const double last = log.residuals.back();
  throw NotConverged("solve_mfg: residual " + std::to_string(last) +
                         " after " + std::to_string(log.iterations) +
                         " iterations",
                     last, log.iterations, std::move(log.residuals));
}

MfgResult solve_mfg(const MfgConfig& config, std::span<const double> init_mu) {
  const int n_types = config.pops.n_types();
  const int nx = config.grid.n_x;
  const long nt = config.grid.n_t;
  if (init_mu.size() != static_cast<size_t>(n_types) * nx) {
    throw ShapeMismatch("solve_mfg: init slice has wrong shape");
  }
  DensityField mu_guess(n_types, nt, nx);
  for (int i = 0; i < n_types; ++i) {
    for (long k = 0; k <= nt; ++k) {
      auto s = mu_guess.slice(i, k);
      std::copy(init_mu.begin() + static_cast<size_t>(i) * nx,
                init_mu.begin() + static_cast<size_t>(i + 1) * nx, s.begin());
    }
  }
  ValueField phi_guess(n_types, nt, nx);
  return solve_mfg(config, init_mu, mu_guess, phi_guess);
}

}  // namespace logitmfg
