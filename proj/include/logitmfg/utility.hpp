#pragma once

#include <memory>
#include <span>
#include <vector>

#include "logitmfg/grid.hpp"

namespace logitmfg {

// Evaluator of the per-type utilities on the grid given the current cell
// masses, together with an analytic sup-bound L on |U|.
//
// evaluate() receives the masses flat as [type*n_x + cell] and writes the
// utilities in the same layout.  Implementations must be pure functions of
// the slice so they can be called concurrently.
class UtilityModel {
 public:
  virtual ~UtilityModel() = default;

  virtual int n_types() const = 0;

  // Analytic sup-bound: |U_i(x, {mu})| <= bound() on admissible inputs.
  virtual double bound() const = 0;

  // Whether U >= 0 holds on admissible inputs.  When false, the value
  // function's lower-bound assertion is relaxed from 0 to -L.
  virtual bool nonnegative() const = 0;

  virtual void evaluate(const GridSpec& grid, std::span<const double> mu,
                        std::span<double> u_out) const = 0;
};

// Utilities of the generic aggregate form evaluated at cell centers:
//   U_{i,l} = F_i(x_l, { sum_m G_j(x_m) mu_{j,m} }_j),
// with the aggregate sums computed once per slice in ascending cell order.
// Convenience wrapper that also enforces the sup-bound at runtime.
std::vector<double> eval_utility_grid(const UtilityModel& model,
                                      std::span<const double> mu,
                                      const GridSpec& grid);

struct FishingParams {
  double alpha = 0.5;   // utility exponent
  double beta = 2.0;    // proportional cost
  double kappa = 0.1;   // penalty on the second type
  double m1 = 0.7;
  double m2 = 0.3;
};

// Two-type harvesting game:
//   U_i(x) = x^alpha - beta x (1 + kappa (m1/m2) [i=2]) A,
//   A = integral of y d(mu_1 + mu_2).
// Can be negative for large x, so nonnegative() is false.
class FishingUtility : public UtilityModel {
 public:
  explicit FishingUtility(const FishingParams& p);

  int n_types() const override { return 2; }
  double bound() const override { return bound_; }
  bool nonnegative() const override { return false; }
  void evaluate(const GridSpec& grid, std::span<const double> mu,
                std::span<double> u_out) const override;

  const FishingParams& params() const { return p_; }
  double penalty_factor(int i) const { return i == 1 ? penalty_ : 1.0; }

 private:
  FishingParams p_;
  double penalty_;  // 1 + kappa m1/m2
  double bound_;
};

struct TourismParams {
  double theta = 1.0;
  double gamma1 = 0.01;  // travel cost, residents
  double gamma2 = 0.1;   // travel cost, tourists; gamma1 < gamma2
  double x_hat = 0.65;   // sustainability threshold
  double epsilon = 1e-6; // indicator smoothing
  double m1 = 0.8;
  double m2 = 0.2;
};

// (1 + tanh((x_hat - x)/epsilon)) / 2, decreasing in x, 1/2 at x = x_hat.
double smooth_indicator(double x, double x_hat, double epsilon);

// Two-type congestion game:
//   U_i(x) = I_eps(x <= x_hat) / (theta + C) - gamma_i x,
//   C = integral of (1 - I_eps(y <= x_hat)) d(mu_1 + mu_2),
// the congestion integral running over the population's actions y.
//
// bound() is the value bound 1/theta + max gamma_i, which is what the
// kernel-domain and value-range guards need; the Lipschitz scale is
// O(1/epsilon) and reported separately via lipschitz_scale() because the
// utility is nearly discontinuous for small epsilon.
class TourismUtility : public UtilityModel {
 public:
  explicit TourismUtility(const TourismParams& p);

  int n_types() const override { return 2; }
  double bound() const override { return bound_; }
  bool nonnegative() const override { return false; }
  void evaluate(const GridSpec& grid, std::span<const double> mu,
                std::span<double> u_out) const override;

  const TourismParams& params() const { return p_; }
  double lipschitz_scale() const;

 private:
  TourismParams p_;
  double bound_;
};

// Density-independent utility given as per-type tables sampled at cell
// centers.  Used by the custom scenario and by randomized tests.
class TabularUtility : public UtilityModel {
 public:
  // tables flat [type*n_x + cell]; bound defaults to max |entry|.
  TabularUtility(std::vector<double> tables, int n_types, int n_x);

  int n_types() const override { return n_types_; }
  double bound() const override { return bound_; }
  bool nonnegative() const override { return nonneg_; }
  void evaluate(const GridSpec& grid, std::span<const double> mu,
                std::span<double> u_out) const override;

 private:
  std::vector<double> tables_;
  int n_types_;
  int n_x_;
  double bound_;
  bool nonneg_;
};

// Discrete potential-function diagnostic for the two shipped games, with
// the integrals replaced by cell sums.  Throws UnsupportedModel for other
// models.
//
// The penalty part of the harvesting potential does not follow from the
// utilities alone (no common scalar potential exists when the two types
// carry different cost factors); this evaluator weights the kappa term by
// the type-2 share of the mean arrival rate and is a monitoring aid, not
// an authority: monotonicity along trajectories is not guaranteed.
double potential_value(const UtilityModel& model, std::span<const double> mu,
                       const GridSpec& grid);

}  // namespace logitmfg
