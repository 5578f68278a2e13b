#pragma once

#include <functional>
#include <span>
#include <vector>

#include "logitmfg/errors.hpp"

namespace logitmfg {

// Uniform space-time grid: n_x cells on [0,1], n_t steps on [0,T].
// Cell l (0-based) is [l dx, (l+1) dx) with center x_l = (l + 1/2) dx.
struct GridSpec {
  int n_x = 0;
  long n_t = 0;
  double horizon_t = 0.0;
  double dx = 0.0;
  double dt = 0.0;

  double cell_center(int l) const { return (l + 0.5) * dx; }
};

GridSpec make_grid(int n_x, long n_t, double horizon_t);

// Type proportions m_i, positive and summing to 1.
struct PopulationSpec {
  std::vector<double> masses;

  int n_types() const { return static_cast<int>(masses.size()); }
};

PopulationSpec make_population(std::vector<double> masses);

// Per-type, per-time-step cell masses (or vertex values).  Flat storage,
// index order [type][time][cell].  The same container backs both the
// density and the value fields; the invariants differ and are enforced by
// the solvers, not the container.
class Field {
 public:
  Field() = default;
  Field(int n_types, long n_t, int n_x, double fill = 0.0)
      : n_types_(n_types),
        n_t_(n_t),
        n_x_(n_x),
        v_(static_cast<size_t>(n_types) * (n_t + 1) * n_x, fill) {}

  int n_types() const { return n_types_; }
  long n_t() const { return n_t_; }
  int n_x() const { return n_x_; }

  double& at(int i, long k, int l) {
    return v_[(static_cast<size_t>(i) * (n_t_ + 1) + k) * n_x_ + l];
  }
  double at(int i, long k, int l) const {
    return v_[(static_cast<size_t>(i) * (n_t_ + 1) + k) * n_x_ + l];
  }

  std::span<double> slice(int i, long k) {
    return {v_.data() + (static_cast<size_t>(i) * (n_t_ + 1) + k) * n_x_,
            static_cast<size_t>(n_x_)};
  }
  std::span<const double> slice(int i, long k) const {
    return {v_.data() + (static_cast<size_t>(i) * (n_t_ + 1) + k) * n_x_,
            static_cast<size_t>(n_x_)};
  }

  std::span<double> raw() { return v_; }
  std::span<const double> raw() const { return v_; }

 private:
  int n_types_ = 0;
  long n_t_ = 0;
  int n_x_ = 0;
  std::vector<double> v_;
};

using DensityField = Field;
using ValueField = Field;

enum class InitProfile { kUniform, kTilted };

// Initial cell masses for all types, flat [type*n_x + cell].  The profile
// is sampled at cell centers, scaled by dx, then renormalized so each
// type's masses sum to m_i exactly; the explicit scheme propagates that
// base case.  kTilted is the density m_i (1 + 0.25 (2x - 1)).
std::vector<double> init_density(const GridSpec& grid,
                                 const PopulationSpec& pops,
                                 InitProfile profile);

// Same with a caller-supplied density sampler per (type, x).  Throws
// NegativeDensity if the sampler is negative at any cell center.
std::vector<double> init_density(
    const GridSpec& grid, const PopulationSpec& pops,
    const std::function<double(int, double)>& sampler);

// max_l |a_l - b_l|
double max_norm_diff(std::span<const double> a, std::span<const double> b);

// (1/N) sum_l |a_l - b_l|
double avg_norm_diff(std::span<const double> a, std::span<const double> b);

// Coarse slice whose entries are arithmetic means of the covered fine
// entries (density view).  coarse_n_x must divide fine.size().
std::vector<double> downsample_cell_average(std::span<const double> fine,
                                            int coarse_n_x);

// Mass view: covered fine entries are summed instead, so the total is
// preserved exactly.
std::vector<double> downsample_cell_sum(std::span<const double> fine,
                                        int coarse_n_x);

}  // namespace logitmfg
