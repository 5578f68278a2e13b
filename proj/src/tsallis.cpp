#include "logitmfg/tsallis.hpp"

#include <cmath>

namespace logitmfg {

double exp_q(double z, const TsallisParams& params) {
  const double q = params.q;
  if (q == 1.0) return std::exp(z);
  const double omq = 1.0 - q;
  const double x = omq * z;
  if (x <= -1.0) {
    if (q > 1.0) {
      throw UndefinedDeformedExp("exp_q: 1 + (1-q) z <= 0 with q > 1");
    }
    return 0.0;
  }
  // (1 + x)^{1/omq} through log1p, which stays accurate as q -> 1
  return std::exp(std::log1p(x) / omq);
}

double ln_q(double y, const TsallisParams& params) {
  if (!(y > 0.0)) throw DomainError("ln_q: argument must be > 0");
  const double q = params.q;
  if (q == 1.0) return std::log(y);
  const double omq = 1.0 - q;
  // (y^omq - 1)/omq through expm1, the exact inverse of the form above
  return std::expm1(omq * std::log(y)) / omq;
}

double divergence_cost(double u, const TsallisParams& params) {
  if (u < 0.0) throw DomainError("divergence_cost: argument must be >= 0");
  const double q = params.q;
  if (q == 1.0) {
    const double ulnu = u == 0.0 ? 0.0 : u * std::log(u);
    return params.eta * (ulnu - u + 1.0);
  }
  return params.eta * (1.0 - std::pow(u, q) + q * (u - 1.0)) / (1.0 - q);
}

double outflow_rate_bound(double utility_bound, const TsallisParams& params) {
  const double inf = std::numeric_limits<double>::infinity();
  if (utility_bound < 0.0) {
    throw DomainError("outflow_rate_bound: utility bound must be >= 0");
  }
  const double z = 2.0 * utility_bound / params.eta;
  if (params.q == 1.0) {
    return std::exp(2.0 * params.q * z);  // e^{4L/eta}
  }
  double num;
  try {
    num = exp_q(z, params);
  } catch (const UndefinedDeformedExp&) {
    return inf;  // q > 1 with the numerator out of domain
  }
  const double den = exp_q(-z, params);
  if (den == 0.0) return inf;  // q < 1 with the denominator clipped
  const double ratio = num / den;
  if (!std::isfinite(ratio)) return inf;
  return std::pow(ratio, params.q);
}

double guaranteed_fp_time_step(double utility_bound,
                               const TsallisParams& params) {
  if (utility_bound < 0.0) {
    throw DomainError("guaranteed_fp_time_step: utility bound must be >= 0");
  }
  const double z = 2.0 * utility_bound / params.eta;
  if (params.q == 1.0) {
    // e^{-4L/eta}; underflows to 0 for extreme L/eta, which is exactly the
    // "no guarantee" signal callers expect.
    return std::exp(-2.0 * params.q * z);
  }
  double num, den;
  try {
    num = exp_q(-z, params);  // clips to 0 for q < 1 and large z
    den = exp_q(z, params);   // out of domain for q > 1 and large z
  } catch (const UndefinedDeformedExp&) {
    return 0.0;
  }
  if (num == 0.0 || !std::isfinite(den)) return 0.0;
  return std::pow(num / den, params.q);
}

}  // namespace logitmfg
