#include "logitmfg/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace logitmfg {

std::unique_ptr<UtilityModel> make_model(const StudySetup& setup) {
  switch (setup.scenario) {
    case Scenario::kFishing: {
      FishingParams p = setup.fishing;
      p.m1 = setup.pops.masses.at(0);
      p.m2 = setup.pops.masses.at(1);
      return std::make_unique<FishingUtility>(p);
    }
    case Scenario::kTourism: {
      TourismParams p = setup.tourism;
      p.m1 = setup.pops.masses.at(0);
      p.m2 = setup.pops.masses.at(1);
      return std::make_unique<TourismUtility>(p);
    }
    case Scenario::kCustom:
      break;
  }
  throw ValidationError("make_model: custom scenarios need an explicit model");
}

RunSlices run_scenario(const StudySetup& setup, SolverKind solver,
                       const GridSpec& grid) {
  auto model = make_model(setup);
  RunSlices out;
  if (solver == SolverKind::kGld) {
    GldConfig cfg{setup.params, grid,      setup.pops,
                  model.get(),  setup.stationary_tol};
    cfg.max_steps = setup.gld_max_steps;
    cfg.strict_cfl = setup.strict_cfl;
    auto init = init_density(grid, setup.pops, setup.gld_init);
    GldResult res = solve_gld_stationary(cfg, init);
    out.density = to_density(res.stationary_mu, grid.dx);
    out.steps_or_iters = res.steps;
  } else {
    MfgConfig cfg;
    cfg.params = setup.params;
    cfg.grid = grid;
    cfg.pops = setup.pops;
    cfg.model = model.get();
    cfg.delta = setup.delta;
    cfg.relaxation = setup.relaxation;
    cfg.iter_tol = setup.iter_tol;
    cfg.max_iters = setup.max_iters;
    cfg.strict_cfl = setup.strict_cfl;
    auto init = init_density(grid, setup.pops, setup.mfg_init);
    MfgResult res = solve_mfg(cfg, init);
    out.density = to_density(extract_turnpike_slice(res.mu), grid.dx);
    out.value = extract_turnpike_slice(res.phi);
    out.steps_or_iters = res.log.iterations;
  }
  return out;
}

namespace {

GridSpec reference_grid(const StudySetup& setup, int n_x) {
  // dt = dx, the fine-run pattern
  return make_grid(n_x, std::lround(setup.horizon_t * n_x), setup.horizon_t);
}

GridSpec coarse_grid(const StudySetup& setup, int m) {
  // dt = 2 dx, the table pattern
  return make_grid(m, std::lround(setup.horizon_t * m / 2.0),
                   setup.horizon_t);
}

}  // namespace

ConvergenceReport convergence_study(const StudySetup& setup, SolverKind target,
                                    std::vector<int> coarse_ms,
                                    int reference_n_x) {
  for (int m : coarse_ms) {
    if (m <= 0 || reference_n_x % m != 0) {
      throw IncompatibleResolution(
          "convergence_study: every m must divide the reference resolution");
    }
  }
  std::sort(coarse_ms.begin(), coarse_ms.end());

  ConvergenceReport report;
  report.scenario = setup.scenario;
  report.target = target;
  report.reference_n_x = reference_n_x;
  const int n_types = setup.pops.n_types();
  for (int i = 0; i < n_types; ++i) {
    report.quantities.push_back("p_" + std::to_string(i + 1));
  }
  if (target == SolverKind::kMfg) {
    for (int i = 0; i < n_types; ++i) {
      report.quantities.push_back("phi_" + std::to_string(i + 1));
    }
  }

  const RunSlices ref =
      run_scenario(setup, target, reference_grid(setup, reference_n_x));

  for (int m : coarse_ms) {
    const RunSlices coarse = run_scenario(setup, target, coarse_grid(setup, m));
    report.rows.push_back(tabulate_convergence_row(coarse, ref, m,
                                                   reference_n_x, target,
                                                   n_types));
  }
  return report;
}

ConvergenceRow tabulate_convergence_row(const RunSlices& coarse,
                                        const RunSlices& reference, int m,
                                        int reference_n_x, SolverKind target,
                                        int n_types) {
  ConvergenceRow row;
  row.m = m;
  auto add = [&](const std::vector<double>& fine,
                 const std::vector<double>& crs) {
    for (int i = 0; i < n_types; ++i) {
      auto ref_i = std::span<const double>(
          fine.data() + static_cast<size_t>(i) * reference_n_x,
          reference_n_x);
      auto ref_down = downsample_cell_average(ref_i, m);
      auto coarse_i =
          std::span<const double>(crs.data() + static_cast<size_t>(i) * m, m);
      row.max_err.push_back(max_norm_diff(coarse_i, ref_down));
      row.avg_err.push_back(avg_norm_diff(coarse_i, ref_down));
    }
  };
  add(reference.density, coarse.density);
  if (target == SolverKind::kMfg) add(reference.value, coarse.value);
  return row;
}

std::optional<LineFit> fit_line(std::span<const double> x,
                                std::span<const double> y) {
  const size_t n = x.size();
  if (n != y.size() || n < 2) return std::nullopt;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t j = 0; j < n; ++j) {
    sx += x[j];
    sy += y[j];
    sxx += x[j] * x[j];
    sxy += x[j] * y[j];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return std::nullopt;
  LineFit f;
  f.slope = (n * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

DeltaSweepReport delta_sweep(const StudySetup& setup,
                             std::vector<double> deltas,
                             std::optional<double> eta_override, int n_x) {
  if (deltas.empty()) {
    throw ValidationError("delta_sweep: need at least one delta");
  }
  for (double d : deltas) {
    if (!(d > 0.0)) throw ValidationError("delta_sweep: deltas must be > 0");
  }
  std::sort(deltas.begin(), deltas.end());
  if (std::adjacent_find(deltas.begin(), deltas.end()) != deltas.end()) {
    throw ValidationError("delta_sweep: deltas must be distinct");
  }

  StudySetup local = setup;
  if (eta_override) {
    local.params = TsallisParams(setup.params.q, *eta_override);
  }
  const GridSpec grid = reference_grid(local, n_x);
  const int n_types = local.pops.n_types();

  const RunSlices gld = run_scenario(local, SolverKind::kGld, grid);

  DeltaSweepReport report;
  report.deltas = deltas;
  for (double d : deltas) {
    StudySetup per = local;
    per.delta = d;
    const RunSlices mfg = run_scenario(per, SolverKind::kMfg, grid);
    std::vector<double> dist(n_types);
    for (int i = 0; i < n_types; ++i) {
      auto a = std::span<const double>(
          gld.density.data() + static_cast<size_t>(i) * n_x, n_x);
      auto b = std::span<const double>(
          mfg.density.data() + static_cast<size_t>(i) * n_x, n_x);
      dist[i] = max_norm_diff(a, b);
    }
    report.distances.push_back(std::move(dist));
  }

  std::vector<double> log_delta(deltas.size());
  for (size_t j = 0; j < deltas.size(); ++j) {
    log_delta[j] = std::log10(deltas[j]);
  }
  for (int i = 0; i < n_types; ++i) {
    std::vector<double> log_dist(deltas.size());
    for (size_t j = 0; j < deltas.size(); ++j) {
      log_dist[j] = std::log10(report.distances[j][i]);
    }
    report.fits.push_back(fit_line(log_delta, log_dist));
  }
  return report;
}

namespace {

std::string format_value(const char* key, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s=%g", key, v);
  return buf;
}

// Mass fraction of type i placed at cells with center above x_cut.
double mass_fraction_above(std::span<const double> density, int n_x, int i,
                           double x_cut, double m_i) {
  const double dx = 1.0 / n_x;
  double s = 0.0;
  for (int l = 0; l < n_x; ++l) {
    if ((l + 0.5) * dx > x_cut) {
      s += density[static_cast<size_t>(i) * n_x + l] * dx;
    }
  }
  return s / m_i;
}

}  // namespace

ScenarioSweepReport scenario_sweep(const StudySetup& setup, SweepKind kind,
                                   std::vector<double> values,
                                   SolverKind solver, int n_x) {
  if (values.empty()) {
    throw ValidationError("scenario_sweep: empty sweep list");
  }
  ScenarioSweepReport report;
  report.n_x = n_x;
  report.n_types = setup.pops.n_types();
  const GridSpec grid = reference_grid(setup, n_x);

  for (double v : values) {
    StudySetup per = setup;
    std::string label;
    if (kind == SweepKind::kMasses) {
      if (!(v > 0.0 && v < 1.0)) {
        throw ValidationError("scenario_sweep: masses must lie in (0,1)");
      }
      per.pops = make_population({v, 1.0 - v});
      label = format_value("m1", v);
    } else {
      if (!(v > 0.0)) {
        throw ValidationError("scenario_sweep: epsilon must be > 0");
      }
      if (setup.scenario != Scenario::kTourism) {
        throw ValidationError(
            "scenario_sweep: the epsilon sweep applies to tourism");
      }
      per.tourism.epsilon = v;
      label = format_value("eps", v);
    }
    const RunSlices run = run_scenario(per, solver, grid);
    report.runs.push_back({label, run.density});

    const auto& density = report.runs.back().density;
    if (setup.scenario == Scenario::kFishing) {
      // concentration of the penalized type at the lowest intensities
      const double below =
          1.0 - mass_fraction_above(density, n_x, 1, 0.1,
                                    per.pops.masses[1]);
      report.diagnostics.emplace_back("type2_mass_below_0.1[" + label + "]",
                                      below);
    } else {
      for (int i = 0; i < per.pops.n_types(); ++i) {
        report.diagnostics.emplace_back(
            "mass_above_xhat_p" + std::to_string(i + 1) + "[" + label + "]",
            mass_fraction_above(density, n_x, i, per.tourism.x_hat,
                                per.pops.masses[i]));
      }
      // normalized shapes of the two types
      double shape_gap = 0.0;
      for (int l = 0; l < n_x; ++l) {
        const double a = density[l] / per.pops.masses[0];
        const double b =
            density[static_cast<size_t>(n_x) + l] / per.pops.masses[1];
        shape_gap = std::max(shape_gap, std::fabs(a - b));
      }
      report.diagnostics.emplace_back("shape_gap[" + label + "]", shape_gap);
    }
  }

  // Mass-swap ratio between the first and last runs of a two-point masses
  // sweep, averaged over cells where both densities are meaningful.
  if (kind == SweepKind::kMasses && values.size() == 2) {
    for (int i = 0; i < report.n_types; ++i) {
      const auto& a = report.runs.front().density;
      const auto& b = report.runs.back().density;
      double sum = 0.0;
      long count = 0;
      for (int l = 0; l < n_x; ++l) {
        const double pa = a[static_cast<size_t>(i) * n_x + l];
        const double pb = b[static_cast<size_t>(i) * n_x + l];
        if (pa > 1e-6 && pb > 1e-6) {
          sum += pa / pb;
          ++count;
        }
      }
      report.diagnostics.emplace_back(
          "swap_ratio_p" + std::to_string(i + 1),
          count > 0 ? sum / count : std::numeric_limits<double>::quiet_NaN());
    }
  }
  return report;
}

}  // namespace logitmfg
