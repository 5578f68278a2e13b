#include "logitmfg/csv.hpp"

#include <cstdio>
#include <filesystem>
#include <memory>

namespace logitmfg {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_csv(const std::string& dir, const std::string& name) {
  const std::string path = dir + "/" + name;
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  return f;
}

void put(std::FILE* f, double v) { std::fprintf(f, "%.17g", v); }

std::string sanitize(const std::string& label) {
  std::string out = label;
  for (char& ch : out) {
    if (ch == '=' || ch == ' ' || ch == '/') ch = '_';
  }
  return out;
}

}  // namespace

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "'");
}

void emit_field_csv(const std::string& dir, const std::string& prefix,
                    const Field& field, const GridSpec& grid, long stride,
                    bool density_view) {
  const char* col = density_view ? "p" : "phi";
  for (int i = 0; i < field.n_types(); ++i) {
    auto f = open_csv(dir, prefix + "_" + std::to_string(i + 1) + ".csv");
    std::fprintf(f.get(), "t,x,%s\n", col);
    const long step = stride > 0 ? stride : field.n_t();
    for (long k = 0; k <= field.n_t(); k += step) {
      auto s = field.slice(i, k);
      for (int l = 0; l < grid.n_x; ++l) {
        put(f.get(), k * grid.dt);
        std::fputc(',', f.get());
        put(f.get(), grid.cell_center(l));
        std::fputc(',', f.get());
        put(f.get(), density_view ? s[l] / grid.dx : s[l]);
        std::fputc('\n', f.get());
      }
      if (k < field.n_t() && k + step > field.n_t()) {
        // make sure the terminal slice is always present
        k = field.n_t() - step;
      }
    }
  }
}

void emit_trajectory_csv(const std::string& dir,
                         const std::vector<TrajectorySample>& samples,
                         const GridSpec& grid, int n_types) {
  for (int i = 0; i < n_types; ++i) {
    auto f = open_csv(dir, "density_" + std::to_string(i + 1) + ".csv");
    std::fprintf(f.get(), "t,x,p\n");
    for (const auto& sample : samples) {
      for (int l = 0; l < grid.n_x; ++l) {
        put(f.get(), sample.t);
        std::fputc(',', f.get());
        put(f.get(), grid.cell_center(l));
        std::fputc(',', f.get());
        put(f.get(), sample.mu[static_cast<size_t>(i) * grid.n_x + l] /
                         grid.dx);
        std::fputc('\n', f.get());
      }
    }
  }
}

void emit_stationary_csv(const std::string& dir,
                         const std::vector<double>& density, int n_types,
                         const GridSpec& grid) {
  auto f = open_csv(dir, "stationary.csv");
  std::fprintf(f.get(), "x");
  for (int i = 0; i < n_types; ++i) std::fprintf(f.get(), ",p_%d", i + 1);
  std::fputc('\n', f.get());
  for (int l = 0; l < grid.n_x; ++l) {
    put(f.get(), grid.cell_center(l));
    for (int i = 0; i < n_types; ++i) {
      std::fputc(',', f.get());
      put(f.get(), density[static_cast<size_t>(i) * grid.n_x + l]);
    }
    std::fputc('\n', f.get());
  }
}

void emit_iterations_csv(const std::string& dir, const IterationLog& log) {
  auto f = open_csv(dir, "iterations.csv");
  std::fprintf(f.get(), "iter,residual\n");
  for (size_t r = 0; r < log.residuals.size(); ++r) {
    std::fprintf(f.get(), "%zu,", r + 1);
    put(f.get(), log.residuals[r]);
    std::fputc('\n', f.get());
  }
}

void emit_potential_csv(const std::string& dir,
                        const std::vector<std::pair<double, double>>& series) {
  auto f = open_csv(dir, "report_potential.csv");
  std::fprintf(f.get(), "t,potential\n");
  for (const auto& [t, v] : series) {
    put(f.get(), t);
    std::fputc(',', f.get());
    put(f.get(), v);
    std::fputc('\n', f.get());
  }
}

void emit_convergence_csv(const std::string& dir,
                          const ConvergenceReport& report) {
  auto f = open_csv(dir, "report_convergence.csv");
  std::fprintf(f.get(), "m");
  for (const auto& q : report.quantities) {
    std::fprintf(f.get(), ",max_%s", q.c_str());
  }
  for (const auto& q : report.quantities) {
    std::fprintf(f.get(), ",avg_%s", q.c_str());
  }
  std::fputc('\n', f.get());
  for (const auto& row : report.rows) {
    std::fprintf(f.get(), "%d", row.m);
    for (double v : row.max_err) {
      std::fputc(',', f.get());
      put(f.get(), v);
    }
    for (double v : row.avg_err) {
      std::fputc(',', f.get());
      put(f.get(), v);
    }
    std::fputc('\n', f.get());
  }
}

void emit_delta_sweep_csv(const std::string& dir,
                          const DeltaSweepReport& report, int n_types) {
  {
    auto f = open_csv(dir, "report_delta_sweep.csv");
    std::fprintf(f.get(), "delta");
    for (int i = 0; i < n_types; ++i) std::fprintf(f.get(), ",dist_p%d", i + 1);
    std::fputc('\n', f.get());
    for (size_t j = 0; j < report.deltas.size(); ++j) {
      put(f.get(), report.deltas[j]);
      for (int i = 0; i < n_types; ++i) {
        std::fputc(',', f.get());
        put(f.get(), report.distances[j][i]);
      }
      std::fputc('\n', f.get());
    }
  }
  auto f = open_csv(dir, "fit.csv");
  std::fprintf(f.get(), "type,slope,intercept\n");
  for (int i = 0; i < n_types; ++i) {
    if (i < static_cast<int>(report.fits.size()) && report.fits[i]) {
      std::fprintf(f.get(), "p%d,", i + 1);
      put(f.get(), report.fits[i]->slope);
      std::fputc(',', f.get());
      put(f.get(), report.fits[i]->intercept);
      std::fputc('\n', f.get());
    }
  }
}

void emit_scenario_sweep_csv(const std::string& dir,
                             const ScenarioSweepReport& report) {
  const double dx = 1.0 / report.n_x;
  for (const auto& run : report.runs) {
    auto f = open_csv(dir, "stationary_" + sanitize(run.label) + ".csv");
    std::fprintf(f.get(), "x");
    for (int i = 0; i < report.n_types; ++i) {
      std::fprintf(f.get(), ",p_%d", i + 1);
    }
    std::fputc('\n', f.get());
    for (int l = 0; l < report.n_x; ++l) {
      put(f.get(), (l + 0.5) * dx);
      for (int i = 0; i < report.n_types; ++i) {
        std::fputc(',', f.get());
        put(f.get(), run.density[static_cast<size_t>(i) * report.n_x + l]);
      }
      std::fputc('\n', f.get());
    }
  }
  auto f = open_csv(dir, "report_scenario_sweep.csv");
  std::fprintf(f.get(), "key,value\n");
  for (const auto& [key, value] : report.diagnostics) {
    std::fprintf(f.get(), "%s,", key.c_str());
    put(f.get(), value);
    std::fputc('\n', f.get());
  }
}

}  // namespace logitmfg
