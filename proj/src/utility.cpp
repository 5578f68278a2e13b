#include "logitmfg/utility.hpp"

#include <cmath>
#include <string>

namespace logitmfg {

std::vector<double> eval_utility_grid(const UtilityModel& model,
                                      std::span<const double> mu,
                                      const GridSpec& grid) {
  const size_t want = static_cast<size_t>(model.n_types()) * grid.n_x;
  if (mu.size() != want) {
    throw ShapeMismatch("eval_utility_grid: slice has wrong shape");
  }
  std::vector<double> u(want);
  model.evaluate(grid, mu, u);
  const double limit = model.bound() * (1.0 + 1e-12) + 1e-12;
  for (double value : u) {
    if (!std::isfinite(value)) {
      throw EvaluationError("utility evaluation produced a non-finite value");
    }
    if (std::fabs(value) > limit) {
      throw EvaluationError("utility exceeded its declared bound " +
                            std::to_string(model.bound()));
    }
  }
  return u;
}

FishingUtility::FishingUtility(const FishingParams& p) : p_(p) {
  if (!(p.alpha > 0.0) || !(p.beta > 0.0) || p.kappa < 0.0) {
    throw ValidationError("fishing: need alpha > 0, beta > 0, kappa >= 0");
  }
  if (!(p.m1 > 0.0) || !(p.m2 > 0.0)) {
    throw ValidationError("fishing: masses must be positive");
  }
  penalty_ = 1.0 + p.kappa * p.m1 / p.m2;
  // |x^alpha| <= 1 on [0,1]; mean arrival rate <= total mass 1.
  bound_ = 1.0 + p.beta * penalty_;
}

void FishingUtility::evaluate(const GridSpec& grid, std::span<const double> mu,
                              std::span<double> u_out) const {
  const int nx = grid.n_x;
  double arrival = 0.0;  // sum_m x_m (mu_1 + mu_2)_m, ascending order
  for (int l = 0; l < nx; ++l) {
    arrival += grid.cell_center(l) * (mu[l] + mu[static_cast<size_t>(nx) + l]);
  }
  for (int i = 0; i < 2; ++i) {
    const double cost = p_.beta * penalty_factor(i) * arrival;
    for (int l = 0; l < nx; ++l) {
      const double x = grid.cell_center(l);
      u_out[static_cast<size_t>(i) * nx + l] = std::pow(x, p_.alpha) - cost * x;
    }
  }
}

double smooth_indicator(double x, double x_hat, double epsilon) {
  if (!(epsilon > 0.0)) {
    throw DomainError("smooth_indicator: epsilon must be > 0");
  }
  return 0.5 * (1.0 + std::tanh((x_hat - x) / epsilon));
}

TourismUtility::TourismUtility(const TourismParams& p) : p_(p) {
  if (!(p.theta > 0.0)) throw ValidationError("tourism: theta must be > 0");
  if (!(p.gamma1 < p.gamma2)) {
    throw ValidationError("tourism: need gamma1 < gamma2");
  }
  if (!(p.x_hat > 0.0 && p.x_hat < 1.0)) {
    throw ValidationError("tourism: x_hat must lie in (0,1)");
  }
  if (!(p.epsilon > 0.0)) {
    throw ValidationError("tourism: epsilon must be > 0");
  }
  if (!(p.m1 > 0.0) || !(p.m2 > 0.0)) {
    throw ValidationError("tourism: masses must be positive");
  }
  bound_ = 1.0 / p.theta + std::max(p.gamma1, p.gamma2);
}

void TourismUtility::evaluate(const GridSpec& grid, std::span<const double> mu,
                              std::span<double> u_out) const {
  const int nx = grid.n_x;
  double congestion = 0.0;  // mass placed above the threshold, smoothed
  for (int l = 0; l < nx; ++l) {
    const double over =
        1.0 - smooth_indicator(grid.cell_center(l), p_.x_hat, p_.epsilon);
    congestion += over * (mu[l] + mu[static_cast<size_t>(nx) + l]);
  }
  const double gain = 1.0 / (p_.theta + congestion);
  const double gamma[2] = {p_.gamma1, p_.gamma2};
  for (int i = 0; i < 2; ++i) {
    for (int l = 0; l < nx; ++l) {
      const double x = grid.cell_center(l);
      u_out[static_cast<size_t>(i) * nx + l] =
          smooth_indicator(x, p_.x_hat, p_.epsilon) * gain - gamma[i] * x;
    }
  }
}

double TourismUtility::lipschitz_scale() const {
  return 0.5 / (p_.epsilon * p_.theta) + std::max(p_.gamma1, p_.gamma2);
}

TabularUtility::TabularUtility(std::vector<double> tables, int n_types,
                               int n_x)
    : tables_(std::move(tables)), n_types_(n_types), n_x_(n_x) {
  if (tables_.size() != static_cast<size_t>(n_types) * n_x) {
    throw ShapeMismatch("TabularUtility: table size mismatch");
  }
  bound_ = 0.0;
  nonneg_ = true;
  for (double v : tables_) {
    bound_ = std::max(bound_, std::fabs(v));
    if (v < 0.0) nonneg_ = false;
  }
  if (bound_ == 0.0) bound_ = 1e-300;  // keep the bound strictly positive
}

void TabularUtility::evaluate(const GridSpec& grid, std::span<const double>,
                              std::span<double> u_out) const {
  if (grid.n_x != n_x_) {
    throw ShapeMismatch("TabularUtility: grid does not match the table");
  }
  for (size_t j = 0; j < tables_.size(); ++j) u_out[j] = tables_[j];
}

namespace {

double mean_arrival(std::span<const double> mu, const GridSpec& grid, int i) {
  double s = 0.0;
  for (int l = 0; l < grid.n_x; ++l) {
    s += grid.cell_center(l) * mu[static_cast<size_t>(i) * grid.n_x + l];
  }
  return s;
}

}  // namespace

double potential_value(const UtilityModel& model, std::span<const double> mu,
                       const GridSpec& grid) {
  const int nx = grid.n_x;
  if (mu.size() != static_cast<size_t>(model.n_types()) * nx) {
    throw ShapeMismatch("potential_value: slice has wrong shape");
  }
  if (const auto* fishing = dynamic_cast<const FishingUtility*>(&model)) {
    const FishingParams& p = fishing->params();
    double gain = 0.0;
    for (int l = 0; l < nx; ++l) {
      gain += std::pow(grid.cell_center(l), p.alpha) *
              (mu[l] + mu[static_cast<size_t>(nx) + l]);
    }
    const double a1 = mean_arrival(mu, grid, 0);
    const double a2 = mean_arrival(mu, grid, 1);
    const double a = a1 + a2;
    const double kap = p.kappa * p.m1 / p.m2;
    return gain - 0.5 * p.beta * (a * a + kap * a * a2);
  }
  if (const auto* tourism = dynamic_cast<const TourismUtility*>(&model)) {
    const TourismParams& p = tourism->params();
    double congestion = 0.0;
    double travel = 0.0;
    for (int l = 0; l < nx; ++l) {
      const double x = grid.cell_center(l);
      const double over = 1.0 - smooth_indicator(x, p.x_hat, p.epsilon);
      congestion += over * (mu[l] + mu[static_cast<size_t>(nx) + l]);
      travel += x * (p.gamma1 * mu[l] + p.gamma2 * mu[static_cast<size_t>(nx) + l]);
    }
    return -std::log(p.theta + congestion) - travel;
  }
  throw UnsupportedModel("potential_value: only the shipped games have one");
}

}  // namespace logitmfg
