#include "logitmfg/grid.hpp"

#include <cmath>
#include <string>

namespace logitmfg {

GridSpec make_grid(int n_x, long n_t, double horizon_t) {
  if (n_x <= 0) throw InvalidGrid("make_grid: n_x must be positive");
  if (n_t <= 0) throw InvalidGrid("make_grid: n_t must be positive");
  if (!(horizon_t > 0.0)) {
    throw InvalidGrid("make_grid: horizon must be positive");
  }
  GridSpec g;
  g.n_x = n_x;
  g.n_t = n_t;
  g.horizon_t = horizon_t;
  g.dx = 1.0 / n_x;
  g.dt = horizon_t / n_t;
  return g;
}

PopulationSpec make_population(std::vector<double> masses) {
  if (masses.empty()) {
    throw ValidationError("population: at least one type required");
  }
  double sum = 0.0;
  for (double m : masses) {
    if (!(m > 0.0)) {
      throw ValidationError("population: every mass must be positive");
    }
    sum += m;
  }
  if (std::fabs(sum - 1.0) > 1e-14) {
    throw ValidationError("population: masses sum to " + std::to_string(sum) +
                          ", expected 1");
  }
  return PopulationSpec{std::move(masses)};
}

std::vector<double> init_density(
    const GridSpec& grid, const PopulationSpec& pops,
    const std::function<double(int, double)>& sampler) {
  const int nx = grid.n_x;
  std::vector<double> mu(static_cast<size_t>(pops.n_types()) * nx);
  for (int i = 0; i < pops.n_types(); ++i) {
    double total = 0.0;
    for (int l = 0; l < nx; ++l) {
      const double p = sampler(i, grid.cell_center(l));
      if (p < 0.0) {
        throw NegativeDensity("init_density: profile negative at cell " +
                              std::to_string(l));
      }
      mu[static_cast<size_t>(i) * nx + l] = p * grid.dx;
      total += p * grid.dx;
    }
    if (!(total > 0.0)) {
      throw NegativeDensity("init_density: profile vanishes for type " +
                            std::to_string(i + 1));
    }
    const double scale = pops.masses[i] / total;
    for (int l = 0; l < nx; ++l) {
      mu[static_cast<size_t>(i) * nx + l] *= scale;
    }
  }
  return mu;
}

std::vector<double> init_density(const GridSpec& grid,
                                 const PopulationSpec& pops,
                                 InitProfile profile) {
  switch (profile) {
    case InitProfile::kUniform:
      return init_density(grid, pops,
                          [](int, double) { return 1.0; });
    case InitProfile::kTilted:
      return init_density(grid, pops, [](int, double x) {
        return 1.0 + 0.25 * (2.0 * x - 1.0);
      });
  }
  throw ValidationError("init_density: unknown profile");
}

double max_norm_diff(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ShapeMismatch("max_norm_diff: slice lengths differ");
  }
  double m = 0.0;
  for (size_t l = 0; l < a.size(); ++l) {
    const double d = std::fabs(a[l] - b[l]);
    if (d > m) m = d;
  }
  return m;
}

double avg_norm_diff(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ShapeMismatch("avg_norm_diff: slice lengths differ");
  }
  double s = 0.0;
  for (size_t l = 0; l < a.size(); ++l) s += std::fabs(a[l] - b[l]);
  return s / static_cast<double>(a.size());
}

namespace {

int downsample_ratio(size_t fine_n, int coarse_n_x) {
  if (coarse_n_x <= 0 || fine_n % static_cast<size_t>(coarse_n_x) != 0) {
    throw IncompatibleResolution(
        "downsample: coarse resolution must divide the fine one");
  }
  return static_cast<int>(fine_n / coarse_n_x);
}

}  // namespace

std::vector<double> downsample_cell_average(std::span<const double> fine,
                                            int coarse_n_x) {
  const int r = downsample_ratio(fine.size(), coarse_n_x);
  std::vector<double> coarse(coarse_n_x);
  for (int l = 0; l < coarse_n_x; ++l) {
    double s = 0.0;
    for (int j = 0; j < r; ++j) s += fine[static_cast<size_t>(l) * r + j];
    coarse[l] = s / r;
  }
  return coarse;
}

std::vector<double> downsample_cell_sum(std::span<const double> fine,
                                        int coarse_n_x) {
  const int r = downsample_ratio(fine.size(), coarse_n_x);
  std::vector<double> coarse(coarse_n_x);
  for (int l = 0; l < coarse_n_x; ++l) {
    double s = 0.0;
    for (int j = 0; j < r; ++j) s += fine[static_cast<size_t>(l) * r + j];
    coarse[l] = s;
  }
  return coarse;
}

}  // namespace logitmfg
