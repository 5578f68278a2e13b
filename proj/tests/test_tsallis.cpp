#include <cmath>
#include <random>

#include "doctest.h"
#include "logitmfg/tsallis.hpp"

using namespace logitmfg;

TEST_CASE("exp_q pinned values") {
  for (double q : {0.3, 0.5, 0.8, 1.0, 1.5, 2.0}) {
    CHECK(exp_q(0.0, {q, 1.0}) == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK(exp_q(1.0, {0.5, 1.0}) == doctest::Approx(2.25).epsilon(1e-15));
  CHECK(exp_q(1.0, {1.0, 1.0}) ==
        doctest::Approx(std::exp(1.0)).epsilon(1e-15));
  CHECK_THROWS_AS(exp_q(1.0, {2.0, 1.0}), UndefinedDeformedExp);
  // base clips to zero for q < 1
  CHECK(exp_q(-10.0, {0.5, 1.0}) == 0.0);
}

TEST_CASE("exp_q is nondecreasing in z") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uq(0.2, 1.8);
  for (int trial = 0; trial < 500; ++trial) {
    double q = uq(rng);
    if (std::fabs(q - 1.0) < 1e-3) q = 1.0;
    // keep z inside the q > 1 domain, z < 1/(q-1)
    const double hi = q > 1.0 ? 0.99 / (q - 1.0) : 6.0;
    std::uniform_real_distribution<double> uz(-6.0, hi);
    double z1 = uz(rng), z2 = uz(rng);
    if (z1 > z2) std::swap(z1, z2);
    CHECK(exp_q(z1, {q, 1.0}) <= exp_q(z2, {q, 1.0}) + 1e-14);
  }
}

TEST_CASE("ln_q inverts exp_q") {
  TsallisParams p05{0.5, 1.0};
  CHECK(ln_q(1.0, p05) == 0.0);
  CHECK(ln_q(1.0, {1.3, 1.0}) == 0.0);
  CHECK(ln_q(2.25, p05) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(ln_q(0.0, p05), DomainError);
  CHECK_THROWS_AS(ln_q(-1.0, p05), DomainError);
  for (double q : {0.5, 0.8, 1.0, 1.5}) {
    for (double z : {-1.0, 0.3, 2.0}) {
      TsallisParams p{q, 1.0};
      double y;
      try {
        y = exp_q(z, p);
      } catch (const UndefinedDeformedExp&) {
        continue;
      }
      if (!(y > 0.0) || !std::isfinite(y)) continue;
      CHECK(ln_q(y, p) == doctest::Approx(z).epsilon(1e-12));
    }
  }
}

TEST_CASE("divergence cost pinned values and convexity") {
  for (double q : {0.5, 0.8, 1.0, 1.5}) {
    for (double eta : {0.5, 1.0, 2.0}) {
      CHECK(divergence_cost(1.0, {q, eta}) ==
            doctest::Approx(0.0).epsilon(1e-15));
    }
  }
  CHECK(divergence_cost(std::exp(1.0), {1.0, 1.0}) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(divergence_cost(4.0, {0.5, 2.0}) ==
        doctest::Approx(2.0).epsilon(1e-14));
  CHECK(divergence_cost(0.0, {1.0, 1.0}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(divergence_cost(-0.1, {1.0, 1.0}), DomainError);

  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> uu(0.0, 5.0);
  std::uniform_real_distribution<double> ul(0.0, 1.0);
  std::uniform_real_distribution<double> uq(0.2, 1.8);
  for (int trial = 0; trial < 500; ++trial) {
    TsallisParams p{uq(rng), 1.0};
    const double u1 = uu(rng), u2 = uu(rng), lam = ul(rng);
    const double lhs = divergence_cost(lam * u1 + (1 - lam) * u2, p);
    const double rhs =
        lam * divergence_cost(u1, p) + (1 - lam) * divergence_cost(u2, p);
    CHECK(lhs <= rhs + 1e-12);
    CHECK(divergence_cost(uu(rng), p) >= 0.0);
  }
}

TEST_CASE("continuity across the q = 1 branch") {
  for (double z = -5.0; z <= 5.0; z += 0.25) {
    const double lo = exp_q(z, {1.0 - 1e-12, 1.0});
    const double hi = exp_q(z, {1.0 + 1e-12, 1.0});
    CHECK(lo == doctest::Approx(std::exp(z)).epsilon(1e-8));
    CHECK(hi == doctest::Approx(std::exp(z)).epsilon(1e-8));
  }
}

TEST_CASE("outflow rate bound") {
  CHECK(outflow_rate_bound(0.0, {0.7, 0.3}) == doctest::Approx(1.0));
  CHECK(outflow_rate_bound(0.5, {1.0, 1.0}) ==
        doctest::Approx(std::exp(2.0)).epsilon(1e-13));
  // The published harvesting parameter set sits outside the guaranteed
  // regime: the denominator of the bound clips to zero, so there is no
  // finite outflow bound and no guaranteed step (regression-pinned).
  TsallisParams fishing{0.8, 0.01};
  const double L = 1.0 + 2.0 * (1.0 + 0.1 * 0.7 / 0.3);
  CHECK(std::isinf(outflow_rate_bound(L, fishing)));
  CHECK(guaranteed_fp_time_step(L, fishing) == 0.0);
  CHECK(fishing.assumption_margin(L) < 0.0);
  // A regime where the guarantee is live.
  TsallisParams mild{0.8, 10.0};
  CHECK(mild.within_guaranteed_regime(1.0));
  const double tb = outflow_rate_bound(1.0, mild);
  CHECK(std::isfinite(tb));
  CHECK(tb > 1.0);
  CHECK(guaranteed_fp_time_step(1.0, mild) ==
        doctest::Approx(1.0 / tb).epsilon(1e-12));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(TsallisParams(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(TsallisParams(-0.5, 1.0), DomainError);
  CHECK_THROWS_AS(TsallisParams(1.0, 0.0), DomainError);
  CHECK(TsallisParams(1.0, 1.0).assumption_margin(100.0) == 1.0);
}
