// NCCP - first-order primal-dual solvers for nonlinear convex cone programs
// Copyright 2026 NCCP Contributors
// Licensed under Apache 2.0
//
// The base primal-dual iteration. One step, from (u, p) with step size eps:
//
//   q  = proj(p + gamma Theta(u))                        (anchor multiplier)
//   u+ = argmin_{u' in U} <grad G(u), u'> + J(u')
//          + <q, dOmega(u) u' + Phi(u')> + D(u', u)/eps  (linearized subproblem)
//   p+ = proj(p + gamma Theta(u+))                       (dual ascent)
//
// where proj is the projection onto C*, or onto C* intersected with a ball of
// radius M when a dual bound is configured. Ergodic averages weight u+ and q
// by eps. The step-size window in fixed mode, the certificate delta_k driving
// backtracking, and the per-step descent inequality are exposed for tests.

#ifndef NCCP_VAPP_CORE_HPP_
#define NCCP_VAPP_CORE_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nccp/analysis.hpp"
#include "nccp/oracles.hpp"
#include "nccp/types.hpp"

namespace nccp {

enum class StepMode { Fixed, Backtracking };

struct SolverConfig {
  double gamma = 1.0;
  // Fixed mode: eps0 <= 0 derives 0.9 * window from the declared constants;
  // an explicit value must stay below 0.99 * window.
  double eps0 = 0.0;
  StepMode step_mode = StepMode::Fixed;
  double backtrack_eta = 0.5;  // in (0,1)
  int backtrack_cap = 60;
  std::optional<double> dual_bound;  // M: bounded-multiplier variant
  int max_iter = 100000;
  double tol_feas = 1e-8;
  double tol_obj = 1e-8;
  double inner_tol = 0.0;  // <= 0 derives min(1e-10, tol_obj/10)
  std::uint64_t seed = 0;
  std::optional<Vec> u0, p0;
  int trace_every = 1;
  double divergence_guard = 1e12;
  bool certify = true;  // fill delta/lemma1/kkt trace columns

  double effective_inner_tol() const;
};

// Curvature data the step-size window is made of.
struct ProblemConstants {
  double beta = 1.0;             // Bregman core strong convexity
  double core_smoothness = 1.0;  // Lipschitz modulus of grad K
  std::optional<double> b_g;
  std::optional<double> b_omega;
  std::optional<double> tau;
  bool complete() const { return b_g && b_omega && tau; }
  // beta / (B_G + B_Omega + gamma tau^2) when all constants are known.
  std::optional<double> eps_window(double gamma) const;
};

// b_omega resolution: a directly declared bound wins; otherwise per-row
// components are aggregated against the dual ball radius (or the unit radius
// plus nothing when unbounded duals make the aggregate infinite).
ProblemConstants derive_constants(const NccpProblem& problem, const SolverConfig& config);

struct SolverState {
  int k = 0;
  Vec u, p;
  Vec q;       // multiplier anchor of the step that produced (u, p)
  Vec u_prev, p_prev;
  double eps_k = 0.0;
  Vec ergodic_u_num, ergodic_p_num;
  double ergodic_wsum = 0.0;

  PrimalDual last() const { return {u, p}; }
  PrimalDual ergodic() const;
};

SolverState init_state(const NccpProblem& problem, const SolverConfig& config);

// proj(p + rho theta_next), onto C* or C* cap ball(M).
Vec dual_update(const ConeSpec& cone, const Vec& p, const Vec& theta_next, double rho,
                const std::optional<double>& dual_bound);

// The linearized proximal subproblem above; exact for the closed-form paths.
Vec solve_primal_subproblem(const NccpProblem& problem, const Vec& u_k, const Vec& q_k,
                            double eps_k, double inner_tol);

struct DeltaCertificate {
  double value = 0.0;
  std::optional<double> lower_bound;  // (beta - eps (B_G+B_Omega+gamma tau^2))/2 |u-v|^2
};

// D(v,u) - eps [ (G(v) - G(u) - <grad G(u), v-u>)
//              + <q, Omega(v) - Omega(u) - dOmega(u)(v-u)>
//              + gamma/2 |Theta(u) - Theta(v)|^2 ].
// Nonnegative whenever eps sits inside the window; its sign drives
// backtracking.
DeltaCertificate delta_certificate(const NccpProblem& problem, const Vec& u, const Vec& v,
                                   const Vec& q_k, double eps_k, double gamma,
                                   const ProblemConstants* constants = nullptr);

// Commits an accepted primal trial: dual ascent at u_next, iterate and
// previous-iterate shift, the q anchor, and the ergodic accumulators. The
// specialized steppers share this tail so their bookkeeping cannot drift.
void commit_step(const NccpProblem& problem, SolverState& state, const SolverConfig& config,
                 const Vec& q, const Vec& u_next, double eps);

// One iteration at the state's eps_k. Updates iterates, the q anchor, the
// previous-iterate snapshot, and the ergodic accumulators.
void vapp_step(const NccpProblem& problem, SolverState& state, const SolverConfig& config);

// One iteration that first shrinks eps by factors of eta until the
// certificate is nonnegative (trial primal point re-solved each time).
void backtracking_step(const NccpProblem& problem, SolverState& state,
                       const SolverConfig& config);

struct Lemma1Terms {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack() const { return rhs - lhs; }
};

// Per-step descent inequality at a probe (u, p) in U x C* (cap ball(M) when
// bounded), evaluated on a state that has taken at least one step:
//   lhs = [D(u,u+) + eps/(2g)|p-p+|^2] - [D(u,u_prev) + eps/(2g)|p-p_prev|^2]
//   rhs = eps [L(u,q) - L(u+,p)] - [delta + eps/(2g)|q-p_prev|^2]
// and lhs <= rhs. The step's own eps weights both brackets; the sequence of
// eps being nonincreasing, this implies the variant with the next step's
// coefficient on the new bracket.
Lemma1Terms lemma1_terms(const NccpProblem& problem, const SolverState& stepped,
                         const Vec& probe_u, const Vec& probe_p, double gamma);

struct RunResult {
  RunStatus status = RunStatus::IterationLimit;
  PrimalDual last, ergodic;
  std::vector<TraceRecord> trace;
  int iterations = 0;
  double wall_time_s = 0.0;
  std::string message;
};

// Full solve loop with tracing. Stops when the ergodic iterate meets
// tol_feas and the objective-gap estimate meets tol_obj. The gap estimate is
// |obj - reference optimum| when one is declared, otherwise complementarity
// plus scaled displacement.
RunResult run_vapp(const NccpProblem& problem, const SolverConfig& config);

// A single iteration, drop-in compatible with vapp_step.
using StepFn = std::function<void(const NccpProblem&, SolverState&, const SolverConfig&)>;

// The same loop around a caller-supplied stepper (specialized closed-form
// paths, the splitting view). The stepper owns the whole iteration; the loop
// keeps stopping, tracing, and divergence handling identical to run_vapp.
RunResult run_vapp_with(const NccpProblem& problem, const SolverConfig& config,
                        const StepFn& step);

}  // namespace nccp

#endif  // NCCP_VAPP_CORE_HPP_
