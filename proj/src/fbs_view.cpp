// NCCP - first-order primal-dual solvers for nonlinear convex cone programs
// Copyright 2026 NCCP Contributors
// Licensed under Apache 2.0

#include "nccp/fbs_view.hpp"

namespace nccp {

namespace {

void require_splitting_phi(const NccpProblem& problem) {
  require(problem.theta.phi.kind != PhiKind::SeparableL1,
          "fbs: the splitting view needs a differentiable or linear Phi");
}

}  // namespace

OperatorEval op_b(const NccpProblem& problem, const PrimalDual& w, double gamma) {
  require_splitting_phi(problem);
  require(gamma > 0.0, "fbs: gamma must be positive");
  require(w.u.size() == problem.n && w.p.size() == problem.m, "fbs: point has wrong dimensions");
  const Vec proj = project_dual(problem.cone, w.p + gamma * problem.theta_value(w.u));
  OperatorEval out;
  out.primal_part = problem.g.gradient(w.u) + problem.theta.omega_jtp(w.u, proj) +
                    problem.theta.phi.jacobian_transpose_apply(w.u, proj);
  out.dual_part = -(proj - w.p) / gamma;
  return out;
}

OperatorEval gamma_op(const NccpProblem& problem, const PrimalDual& w, const PrimalDual& anchor,
                      double eps_k, double gamma) {
  require_splitting_phi(problem);
  require(gamma > 0.0, "fbs: gamma must be positive");
  require(eps_k > 0.0, "fbs: eps_k must be positive");
  require(w.u.size() == problem.n && w.p.size() == problem.m, "fbs: point has wrong dimensions");
  require(anchor.u.size() == problem.n && anchor.p.size() == problem.m,
          "fbs: anchor has wrong dimensions");
  const Vec q =
      project_dual(problem.cone, anchor.p + gamma * problem.theta_value(anchor.u));
  OperatorEval out;
  out.primal_part = problem.core.gradient(w.u) / eps_k +
                    problem.theta.phi.jacobian_transpose_apply(w.u, q);
  out.dual_part =
      (w.p - project_dual(problem.cone, anchor.p + gamma * problem.theta_value(w.u))) / gamma;
  return out;
}

void fbs_step(const NccpProblem& problem, SolverState& state, const SolverConfig& config) {
  require_splitting_phi(problem);
  // Forward pass at w^k: the dual components of Gamma^k and B cancel, and the
  // primal ones collapse to grad K(u^k)/eps - grad G(u^k) - dOmega(u^k)' q^k.
  // The backward pass (Gamma^k + A)^{-1} is then the linearized proximal
  // subproblem followed by the multiplier projection, shared with the base
  // step, so both code paths coincide iterate for iterate.
  const Vec q = dual_update(problem.cone, state.p, problem.theta_value(state.u), config.gamma,
                            config.dual_bound);
  const Vec u_next =
      solve_primal_subproblem(problem, state.u, q, state.eps_k, config.effective_inner_tol());
  commit_step(problem, state, config, q, u_next, state.eps_k);
}

}  // namespace nccp
