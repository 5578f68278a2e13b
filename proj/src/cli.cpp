#include "logitmfg/cli.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "logitmfg/csv.hpp"

namespace logitmfg {

namespace {

struct CliOverrides {
  std::string config_path;
  std::string out_dir;
  long stride = -1;
  std::string strict;
  bool quiet = false;
};

RunConfig load_config(const CliOverrides& o) {
  RunConfig c = o.config_path.empty() ? RunConfig{}
                                      : parse_config_file(o.config_path);
  // precedence: --out flag, then LOGITMFG_OUT_DIR, then the config file
  if (const char* env = std::getenv("LOGITMFG_OUT_DIR");
      env != nullptr && o.out_dir.empty() && env[0] != '\0') {
    c.out_dir = env;
  }
  if (!o.out_dir.empty()) c.out_dir = o.out_dir;
  if (o.stride >= 0) c.stride = o.stride;
  if (!o.strict.empty()) {
    if (o.strict == "auto") c.strict_cfl = StrictCfl::kAuto;
    else if (o.strict == "on" || o.strict == "true") c.strict_cfl = StrictCfl::kOn;
    else if (o.strict == "off" || o.strict == "false") c.strict_cfl = StrictCfl::kOff;
    else throw ValidationError("--strict-cfl must be auto/on/off");
  }
  if (o.quiet) c.quiet = true;
  return c;
}

void print_cfl(const RunConfig& c, const UtilityModel& model) {
  const TsallisParams params(c.q, c.eta);
  const CflLimits lim = cfl_limits(model, params, c.delta);
  const GridSpec grid = grid_from_config(c);
  std::printf("cfl: dt=%.6g dt_hjb=%.6g dt_fp=%.6g margin=%s strict=%s\n",
              grid.dt, lim.dt_hjb, lim.dt_fp,
              lim.assumption2_ok ? "ok" : "violated",
              resolve_strict(c.strict_cfl, params, model.bound()) ? "on"
                                                                  : "off");
  if (const auto* tourism = dynamic_cast<const TourismUtility*>(&model)) {
    // value bound vs the O(1/epsilon) smoothness scale
    std::printf("bounds: value %.6g, lipschitz scale %.6g\n", tourism->bound(),
                tourism->lipschitz_scale());
  }
}

int run_gld(const RunConfig& c) {
  const GridSpec grid = grid_from_config(c);
  const PopulationSpec pops = population_from_config(c);
  auto model = model_from_config(c);
  GldConfig cfg{TsallisParams(c.q, c.eta), grid, pops, model.get(),
                c.stationary_tol};
  cfg.max_steps = c.gld_max_steps;
  cfg.avg_norm_stationarity = c.avg_norm_stationarity;
  cfg.strict_cfl = c.strict_cfl;
  cfg.trajectory_stride = c.stride;
  auto init = init_density(grid, pops, init_profile_for(c, SolverKind::kGld));

  const auto t0 = std::chrono::steady_clock::now();
  GldResult res = solve_gld_stationary(cfg, init);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  ensure_out_dir(c.out_dir);
  emit_stationary_csv(c.out_dir, to_density(res.stationary_mu, grid.dx),
                      pops.n_types(), grid);
  if (!res.trajectory.empty()) {
    emit_trajectory_csv(c.out_dir, res.trajectory, grid, pops.n_types());
  } else {
    // no stride requested: keep the endpoints
    std::vector<TrajectorySample> endpoints;
    endpoints.push_back({0.0, init});
    endpoints.push_back({res.steps * grid.dt, res.stationary_mu});
    emit_trajectory_csv(c.out_dir, endpoints, grid, pops.n_types());
  }
  if (!res.potential_series.empty()) {
    emit_potential_csv(c.out_dir, res.potential_series);
  }
  if (!c.quiet) {
    std::printf("solver: gld\n");
    print_cfl(c, *model);
    for (const auto& w : res.warnings) std::printf("warning: %s\n", w.c_str());
    std::printf("steps: %ld residual: %.6g\n", res.steps, res.last_residual);
    std::printf("wall: %.3f s\nout: %s\n", wall, c.out_dir.c_str());
  }
  return 0;
}

int run_mfg(const RunConfig& c) {
  const GridSpec grid = grid_from_config(c);
  const PopulationSpec pops = population_from_config(c);
  auto model = model_from_config(c);
  MfgConfig cfg;
  cfg.params = TsallisParams(c.q, c.eta);
  cfg.grid = grid;
  cfg.pops = pops;
  cfg.model = model.get();
  cfg.delta = c.delta;
  cfg.relaxation = c.relaxation;
  cfg.iter_tol = c.iter_tol;
  cfg.max_iters = c.max_iters;
  cfg.strict_cfl = c.strict_cfl;
  auto init = init_density(grid, pops, init_profile_for(c, SolverKind::kMfg));

  const auto t0 = std::chrono::steady_clock::now();
  MfgResult res = solve_mfg(cfg, init);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  ensure_out_dir(c.out_dir);
  emit_field_csv(c.out_dir, "density", res.mu, grid, c.stride, true);
  emit_field_csv(c.out_dir, "value", res.phi, grid, c.stride, false);
  emit_stationary_csv(
      c.out_dir, to_density(extract_turnpike_slice(res.mu), grid.dx),
      pops.n_types(), grid);
  emit_iterations_csv(c.out_dir, res.log);
  if (!c.quiet) {
    std::printf("solver: mfg\n");
    print_cfl(c, *model);
    for (const auto& w : res.warnings) std::printf("warning: %s\n", w.c_str());
    std::printf("iterations: %ld residual: %.6g\n", res.log.iterations,
                res.log.residuals.empty() ? 0.0 : res.log.residuals.back());
    std::printf("wall: %.3f s\nout: %s\n", wall, c.out_dir.c_str());
  }
  return 0;
}

int run_convergence(const RunConfig& c) {
  StudySetup setup = study_setup_from_config(c);
  const auto t0 = std::chrono::steady_clock::now();
  ConvergenceReport report = convergence_study(setup, c.convergence_target,
                                               c.coarse_ms, c.reference_n_x);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  ensure_out_dir(c.out_dir);
  emit_convergence_csv(c.out_dir, report);
  if (!c.quiet) {
    std::printf("convergence study: %s, reference n_x=%d\n",
                c.convergence_target == SolverKind::kGld ? "gld" : "mfg",
                c.reference_n_x);
    for (const auto& row : report.rows) {
      std::printf("m=%d", row.m);
      for (size_t j = 0; j < report.quantities.size(); ++j) {
        std::printf(" max_%s=%.3e", report.quantities[j].c_str(),
                    row.max_err[j]);
      }
      std::printf("\n");
    }
    std::printf("wall: %.3f s\nout: %s\n", wall, c.out_dir.c_str());
  }
  return 0;
}

int run_delta_sweep(const RunConfig& c) {
  StudySetup setup = study_setup_from_config(c);
  const auto t0 = std::chrono::steady_clock::now();
  DeltaSweepReport report = delta_sweep(setup, c.deltas, c.sweep_eta, c.n_x);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  ensure_out_dir(c.out_dir);
  emit_delta_sweep_csv(c.out_dir, report, setup.pops.n_types());
  if (!c.quiet) {
    std::printf("delta sweep (%zu solves)\n", report.deltas.size());
    for (size_t j = 0; j < report.deltas.size(); ++j) {
      std::printf("delta=%g", report.deltas[j]);
      for (size_t i = 0; i < report.distances[j].size(); ++i) {
        std::printf(" dist_p%zu=%.4e", i + 1, report.distances[j][i]);
      }
      std::printf("\n");
    }
    for (size_t i = 0; i < report.fits.size(); ++i) {
      if (report.fits[i]) {
        std::printf("fit p%zu: slope=%.4f intercept=%.4f\n", i + 1,
                    report.fits[i]->slope, report.fits[i]->intercept);
      }
    }
    std::printf("wall: %.3f s\nout: %s\n", wall, c.out_dir.c_str());
  }
  return 0;
}

int run_scenario_sweep(const RunConfig& c) {
  StudySetup setup = study_setup_from_config(c);
  std::vector<double> values = c.sweep_values;
  if (values.empty()) {
    if (c.sweep_kind == SweepKind::kEpsilon) {
      values = {1e-6, 1e-2, 1.0};
    } else if (c.scenario == Scenario::kTourism) {
      values = {0.8, 0.2};
    } else {
      values = {0.5, 0.7, 0.9};
    }
  }
  const SolverKind solver = c.sweep_solver.value_or(
      (c.scenario == Scenario::kTourism && c.sweep_kind == SweepKind::kMasses)
          ? SolverKind::kGld
          : SolverKind::kMfg);
  const auto t0 = std::chrono::steady_clock::now();
  ScenarioSweepReport report =
      scenario_sweep(setup, c.sweep_kind, values, solver, c.n_x);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  ensure_out_dir(c.out_dir);
  emit_scenario_sweep_csv(c.out_dir, report);
  if (!c.quiet) {
    std::printf("scenario sweep: %zu runs (%s)\n", report.runs.size(),
                solver == SolverKind::kGld ? "gld" : "mfg");
    for (const auto& [key, value] : report.diagnostics) {
      std::printf("%s = %.6g\n", key.c_str(), value);
    }
    std::printf("wall: %.3f s\nout: %s\n", wall, c.out_dir.c_str());
  }
  return 0;
}

}  // namespace

int run_command(int argc, const char* const* argv) {
  CLI::App app{"Generalized logit dynamics and their discounted "
               "mean-field-game counterparts on [0,1]"};
  app.require_subcommand(1);

  CliOverrides o;
  auto add_common = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "configuration file");
    sub->add_option("--out", o.out_dir, "output directory");
    sub->add_option("--stride", o.stride, "time stride for emitted fields");
    sub->add_option("--strict-cfl", o.strict, "auto|on|off");
    sub->add_flag("--quiet", o.quiet, "suppress the summary block");
  };
  CLI::App* gld = app.add_subcommand("gld", "stationary evolutionary dynamic");
  CLI::App* mfg = app.add_subcommand("mfg", "forward-backward game solve");
  CLI::App* conv =
      app.add_subcommand("convergence", "grid-refinement error table");
  CLI::App* dsweep =
      app.add_subcommand("delta-sweep", "discount-rate linkage study");
  CLI::App* ssweep =
      app.add_subcommand("scenario-sweep", "parameter scenario batch");
  for (CLI::App* sub : {gld, mfg, conv, dsweep, ssweep}) add_common(sub);

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    const RunConfig c = load_config(o);
    if (gld->parsed()) return run_gld(c);
    if (mfg->parsed()) return run_mfg(c);
    if (conv->parsed()) return run_convergence(c);
    if (dsweep->parsed()) return run_delta_sweep(c);
    if (ssweep->parsed()) return run_scenario_sweep(c);
    std::fprintf(stderr, "error: no subcommand\n");
    return 2;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 2;
  } catch (const NotConverged& e) {
    std::fprintf(stderr, "not converged: %s (residual %.6g after %ld)\n",
                 e.what(), e.residual, e.iterations);
    return 1;
  } catch (const Error& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace logitmfg
