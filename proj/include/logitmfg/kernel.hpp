#pragma once

#include <span>
#include <vector>

#include "logitmfg/tsallis.hpp"

namespace logitmfg {

// Deformed-softmax transition structure built from a slice of values V
// (utilities for the evolutionary dynamic, value-function slices for the
// optimal control):
//
//   E(d, r)  = exp_q(eta^{-1} (V_d - V_r))
//   D(r)     = sum_d E(d, r) dx      column normalizer, >= dx
//   K(d, r)  = E(d, r) / D(r)        column-stochastic kernel density
//   Kq(d, r) = K(d, r)^q             effective transition rate
//
// d indexes the destination cell (rows), r the current cell (columns).
//
// Internally every column is scaled by the entry maximizing E before
// powering, so intermediates stay in [0, 1] for any eta, and when 1/(1-q)
// is an integer the powers are computed by multiplication.  All sums run
// in ascending index order; results are deterministic.

// Materialized kernel K, flat [d * n_x + r].  Throws UndefinedDeformedExp
// when q > 1 and some value difference leaves the domain of exp_q.
std::vector<double> transition_kernel(std::span<const double> values,
                                      const TsallisParams& params, double dx);

// eta * ln_q(D(r)) for every r, the nonlocal term of the explicit backward
// value-function step.  Computed through D^{1-q} directly so it stays
// finite for any spread of V.
void softmax_log_terms(std::span<const double> values,
                       const TsallisParams& params, double dx,
                       std::span<double> out);

// One explicit conservation-law update for a single type,
//
//   mu'_l = mu_l (1 - dt * sum_d Kq(d, l) dx) + dt * sum_r Kq(l, r) mu_r dx,
//
// written in the factored form above so cell masses cannot round below
// zero while the stability bound holds.
void conservation_step(std::span<const double> values,
                       std::span<const double> mu,
                       const TsallisParams& params, double dx, double dt,
                       std::span<double> mu_next);

// Applies one conservation-law update with an explicitly given kernel K
// (as returned by transition_kernel); entries are raised to the q-th power
// on the fly.  This is the test-facing path; the solvers use the fused
// conservation_step.
std::vector<double> step_with_kernel(std::span<const double> mu,
                                     std::span<const double> kernel,
                                     const TsallisParams& params, double dx,
                                     double dt);

}  // namespace logitmfg
