// NCCP - first-order primal-dual solvers for nonlinear convex cone programs
// Copyright 2026 NCCP Contributors
// Licensed under Apache 2.0
//
// Accelerated variant for strongly convex G with variable parameters
//
//   rho_k = (k+1) eta,   eps_k = 1 / ((k+1) eta tau^2 + B_G + B_Omega + beta_G),
//   eta   = beta_G / (2 tau^2),
//
// restricted to the half-squared core. One step, from (u, p) at iteration k:
//
//   q~ = proj(p + rho_k Theta(u))
//   u+ = argmin_{u' in U} <grad G(u), u'> + J(u')
//          + <q~, dOmega(u) u' + Phi(u')> + |u' - u|^2 / (2 eps_k)
//   p+ = proj(p + rho_k Theta(u+))
//
// Ergodic averages weight u+ and q~ by (c0 + k) with
// c0 = 2 (B_G + B_Omega) / beta_G + 2. The per-iteration merit
// a_k |u* - u|^2 + b_k |p* - p|^2 built from the weights below is the
// scheme's generalized distance; run traces carry it in dist_sq and expose
// a_k, b_k, rho_k columns.

#ifndef NCCP_VAPP_STRONG_HPP_
#define NCCP_VAPP_STRONG_HPP_

#include <optional>

#include "nccp/vapp_core.hpp"

namespace nccp {

// The constants the variable-parameter schedule is made of.
struct StrongSchedule {
  double eta = 0.0;     // beta_G / (2 tau^2)
  double c0 = 0.0;      // 2 (B_G + B_Omega) / beta_G + 2, always >= 1
  double beta_g = 0.0;  // strong-convexity modulus of G
  double b_g = 0.0;
  double b_omega = 0.0;
  double tau = 0.0;
};

// Validates the problem for the accelerated variant (half-squared core,
// beta_G > 0, declared B_G / B_Omega / tau) and assembles the schedule.
// Apply normalize_strong_convexity first when J carries the modulus.
StrongSchedule make_strong_schedule(const NccpProblem& problem, const SolverConfig& config);

struct StrongParams {
  double rho = 0.0;
  double eps = 0.0;
};

// (rho_k, eps_k) of the schedule at iteration k.
StrongParams params_strong(const StrongSchedule& schedule, int k);

struct StrongWeights {
  double a = 0.0;  // (c0 + k) [1/(2 eps_k) - beta_G/2] >= beta_G/4 (k+1)^2
  double b = 0.0;  // (c0 + k) / (2 rho_k)              >= 1/(2 eta)
};

// Merit weights (a_k, b_k) at iteration k.
StrongWeights weights_ab(const StrongSchedule& schedule, int k);

// Fresh state for the accelerated run (projected start, schedule's eps_0).
SolverState init_strong_state(const NccpProblem& problem, const SolverConfig& config,
                              const StrongSchedule& schedule);

// One iteration at the state's k with the schedule's (rho_k, eps_k).
// Ergodic accumulators gain weight c0 + k.
void vapp_s_step(const NccpProblem& problem, SolverState& state, const StrongSchedule& schedule,
                 const std::optional<double>& dual_bound, double inner_tol);

struct Lemma2Terms {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack() const { return rhs - lhs; }
};

// Per-step descent inequality of the weighted merit at a probe (u, p) in
// U x C*, evaluated on a state that has taken at least one accelerated step:
//   lhs = [a_{k+1}|u-u+|^2 + b_{k+1}|p-p+|^2] - [a_k|u-u_prev|^2 + b_k|p-p_prev|^2]
//   rhs = (c0+k) [L(u,q~) - L(u+,p)]
//         - (c0 beta_G/2)|u_prev-u+|^2 - 1/(2 eta) |q~-p_prev|^2
// and lhs <= rhs.
Lemma2Terms lemma2_terms(const NccpProblem& problem, const StrongSchedule& schedule,
                         const SolverState& stepped, const Vec& probe_u, const Vec& probe_p);

// Full accelerated solve with tracing; shares the stopping rule of run_vapp.
// Applies normalize_strong_convexity up front, so a modulus declared on J is
// honored automatically.
RunResult run_vapp_s(const NccpProblem& problem, const SolverConfig& config);

}  // namespace nccp

#endif  // NCCP_VAPP_STRONG_HPP_
