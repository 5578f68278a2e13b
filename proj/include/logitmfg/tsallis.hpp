#pragma once

#include <limits>

#include "logitmfg/errors.hpp"

namespace logitmfg {

// Entropic index q and uncertainty scale eta shared by every softmax and
// divergence computation in the library.
//
// The q = 1 branch is selected by exact comparison; callers that want the
// classical exponential pass q = 1.0 explicitly.  There is no blending near
// q = 1.
struct TsallisParams {
  double q;
  double eta;

  TsallisParams(double q_, double eta_) : q(q_), eta(eta_) {
    if (!(q > 0.0)) throw DomainError("TsallisParams: q must be > 0");
    if (!(eta > 0.0)) throw DomainError("TsallisParams: eta must be > 0");
  }

  // 1 - 2|1-q| L / eta.  Positive margin means the deformed exponential
  // stays in-domain for every utility difference bounded by 2L, so the
  // guaranteed time-step bounds apply.  For q = 1 the condition is empty
  // and the margin is reported as 1.
  double assumption_margin(double utility_bound) const {
    if (q == 1.0) return 1.0;
    double aq = q > 1.0 ? q - 1.0 : 1.0 - q;
    return 1.0 - 2.0 * aq * utility_bound / eta;
  }

  // Outside this regime the solvers still run, but the stability guards
  // downgrade from hard errors to warnings.
  bool within_guaranteed_regime(double utility_bound) const {
    return assumption_margin(utility_bound) > 0.0;
  }
};

// Tsallis q-exponential.
//
//   exp_q(z) = (1 + (1-q) z)_+^{1/(1-q)}   for q != 1
//   exp_q(z) = exp(z)                      for q  = 1
//
// For 0 < q < 1 the clipped base yields exactly 0.  For q > 1 a
// non-positive base has no finite value and UndefinedDeformedExp is thrown.
double exp_q(double z, const TsallisParams& params);

// Inverse of exp_q on (0, inf):  (y^{1-q} - 1)/(1-q), natural log at q = 1.
// Throws DomainError for y <= 0.
double ln_q(double y, const TsallisParams& params);

// Convex divergence cost of distorting the uniform re-sampling measure by a
// factor u >= 0.  Zero exactly at u = 1.
//
//   phi(u) = eta (1 - u^q + q(u-1)) / (1-q)   for q != 1
//   phi(u) = eta (u ln u - u + 1)             for q  = 1,  0 ln 0 = 0
double divergence_cost(double u, const TsallisParams& params);

// Uniform bound on the outflow rate of the transition kernels,
//
//   theta_bar = { exp_q(2L/eta) / exp_q(-2L/eta) }^q.
//
// Returns +infinity when the bound degenerates (the denominator clips to 0
// for q < 1, or the numerator leaves the domain for q > 1); callers must
// treat that as "no guaranteed time step".
double outflow_rate_bound(double utility_bound, const TsallisParams& params);

// Largest time step with guaranteed nonnegativity of the explicit
// conservation-law update, 1 / theta_bar evaluated without overflow.
// Returns 0 when there is no guarantee.
double guaranteed_fp_time_step(double utility_bound,
                               const TsallisParams& params);

}  // namespace logitmfg
