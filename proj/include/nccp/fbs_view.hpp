// NCCP - first-order primal-dual solvers for nonlinear convex cone programs
// Copyright 2026 NCCP Contributors
// Licensed under Apache 2.0
//
// The solver's step seen as forward-backward splitting on the saddle-point
// inclusion 0 in A(w) + B(w) over w = (u, p):
//
//   A(w) = ( dJ(u) + N_U(u) ; 0 )
//   B(w) = ( grad G(u) + (dOmega(u) + dPhi(u))' proj(p + gamma Theta(u)) ;
//            -[proj(p + gamma Theta(u)) - p] / gamma )
//
// with the iteration-dependent Bregman operator, anchored at w^k,
//
//   Gamma^k(w) = ( grad K(u)/eps_k + (dPhi(u))' q^k ;
//                  [p - proj(p^k + gamma Theta(u))] / gamma ),
//   q^k = proj(p^k + gamma Theta(u^k)),
//
// so that w^{k+1} = (Gamma^k + A)^{-1} (Gamma^k - B) w^k reproduces the base
// primal-dual step exactly. This module is a verification view: the resolvent
// reuses the shared subproblem machinery, and the operator evaluators exist
// so tests can probe monotonicity and the step equivalence. Phi must be
// differentiable or linear here; the separable nonsmooth form is rejected.

#ifndef NCCP_FBS_VIEW_HPP_
#define NCCP_FBS_VIEW_HPP_

#include "nccp/vapp_core.hpp"

namespace nccp {

struct OperatorEval {
  Vec primal_part;  // length n
  Vec dual_part;    // length m
};

// B(w) above. Monotone; zero exactly at saddle points paired with 0 in A(w).
OperatorEval op_b(const NccpProblem& problem, const PrimalDual& w, double gamma);

// Gamma^k(w) above, with the multiplier anchor taken from `anchor`. Strongly
// monotone with moduli (beta/(2 eps_k), 1/(2 gamma)) whenever
// eps_k <= beta / (gamma tau^2).
OperatorEval gamma_op(const NccpProblem& problem, const PrimalDual& w, const PrimalDual& anchor,
                      double eps_k, double gamma);

// One forward-backward pass at the state's eps_k. Identical bookkeeping and
// identical output to the base step on the same state.
void fbs_step(const NccpProblem& problem, SolverState& state, const SolverConfig& config);

}  // namespace nccp

#endif  // NCCP_FBS_VIEW_HPP_
