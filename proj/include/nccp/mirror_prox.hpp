// NCCP - first-order primal-dual solvers for nonlinear convex cone programs
// Copyright 2026 NCCP Contributors
// Licensed under Apache 2.0
//
// Extragradient baseline for the smooth saddle form
//
//   min_u max_{p in C* cap B_M}  L(u, p) = G(u) + <p, Omega(u)>,
//
// the classical two-stage scheme: a predictor gradient step to (u~, p~),
// then the same update re-evaluated at the predictor. The dual side projects
// onto C* (truncated to the ball when a bound is given); the primal side is
// an unconstrained gradient step, so the baseline insists on a smooth
// objective, a smooth constraint map, and a full primal space.

#ifndef NCCP_MIRROR_PROX_HPP_
#define NCCP_MIRROR_PROX_HPP_

#include <optional>

#include "nccp/oracles.hpp"
#include "nccp/vapp_core.hpp"

namespace nccp {

struct MirrorProxState {
  Vec u, p;
  Vec u_tilde, p_tilde;  // predictor pair of the step that produced (u, p)
  double gamma_k = 0.0;
};

// One extragradient iteration at step gamma_k. Both dual projections anchor
// at the incoming p. The dual iterates stay in C* (and in the ball when
// m_bound is set) after every update.
MirrorProxState mirror_prox_step(const NccpProblem& problem, const MirrorProxState& state,
                                 double gamma_k, const std::optional<double>& m_bound);

// 1 / L_hat with L_hat a power-iteration estimate of the saddle gradient's
// Lipschitz modulus: the primal Hessian block plus the coupling block's top
// singular value at u0, both probed through symmetric differences. The
// Hessian block is measured at p0 and, when a ball is given, at a
// ball-scale dual - the curvature the iterates can actually meet there.
// Deterministic: fixed probe seed, fixed iteration count.
double mirror_prox_auto_step(const NccpProblem& problem, const Vec& u0, const Vec& p0,
                             const std::optional<double>& m_bound = std::nullopt);

// Full loop sharing the run_vapp trace schema and stopping rules; the
// certificate and descent-inequality columns stay empty, the step column
// carries gamma, and the ergodic pair averages the predictor iterates with
// gamma weights. An empty step means the auto estimate at the start point.
RunResult run_mirror_prox(const NccpProblem& problem, const SolverConfig& config,
                          std::optional<double> step = std::nullopt);

}  // namespace nccp

#endif  // NCCP_MIRROR_PROX_HPP_
