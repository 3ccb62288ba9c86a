// NCCP - first-order primal-dual solvers for nonlinear convex cone programs
// Copyright 2026 NCCP Contributors
// Licensed under Apache 2.0

#include "nccp/vapp_strong.hpp"

#include <chrono>
#include <cmath>

#include "nccp/lagrangian.hpp"

namespace nccp {

StrongSchedule make_strong_schedule(const NccpProblem& problem, const SolverConfig& config) {
  require(problem.core.kind == CoreKind::HalfSquared,
          "vapp-s: the accelerated variant requires the half-squared core");
  const double beta_g = problem.g.strong_convexity.value_or(0.0);
  require(beta_g > 0.0, "vapp-s: missing strong convexity modulus beta_G");
  const ProblemConstants constants = derive_constants(problem, config);
  require(constants.b_g.has_value() && constants.b_omega.has_value() &&
              constants.tau.has_value(),
          "vapp-s: the parameter schedule needs B_G, B_Omega, and tau");
  require(*constants.tau > 0.0, "vapp-s: tau must be positive");

  StrongSchedule s;
  s.beta_g = beta_g;
  s.b_g = *constants.b_g;
  s.b_omega = *constants.b_omega;
  s.tau = *constants.tau;
  s.eta = 0.5 * beta_g / (s.tau * s.tau);
  s.c0 = 2.0 * (s.b_g + s.b_omega) / beta_g + 2.0;
  return s;
}

StrongParams params_strong(const StrongSchedule& schedule, int k) {
  require(k >= 0, "params_strong: iteration index must be nonnegative");
  const double kk = static_cast<double>(k) + 1.0;
  StrongParams p;
  p.rho = kk * schedule.eta;
  p.eps = 1.0 / (kk * schedule.eta * schedule.tau * schedule.tau + schedule.b_g +
                 schedule.b_omega + schedule.beta_g);
  return p;
}

StrongWeights weights_ab(const StrongSchedule& schedule, int k) {
  const StrongParams prm = params_strong(schedule, k);
  const double w = schedule.c0 + static_cast<double>(k);
  StrongWeights out;
  out.a = w * (0.5 / prm.eps - 0.5 * schedule.beta_g);
  out.b = 0.5 * w / prm.rho;
  return out;
}

SolverState init_strong_state(const NccpProblem& problem, const SolverConfig& config,
                              const StrongSchedule& schedule) {
  if (config.dual_bound) require(*config.dual_bound > 0.0, "solver: dual bound must be positive");
  SolverState state;
  state.u = config.u0 ? problem.set.project(*config.u0)
                      : problem.set.project(Vec::Zero(problem.n));
  const Vec p_raw = config.p0 ? *config.p0 : Vec::Zero(problem.m);
  state.p = config.dual_bound ? project_cone_ball(problem.cone, *config.dual_bound, p_raw)
                              : project_dual(problem.cone, p_raw);
  state.u_prev = state.u;
  state.p_prev = state.p;
  state.q = Vec::Zero(problem.m);
  state.ergodic_u_num = Vec::Zero(problem.n);
  state.ergodic_p_num = Vec::Zero(problem.m);
  state.eps_k = params_strong(schedule, 0).eps;
  return state;
}

void vapp_s_step(const NccpProblem& problem, SolverState& state, const StrongSchedule& schedule,
                 const std::optional<double>& dual_bound, double inner_tol) {
  const StrongParams prm = params_strong(schedule, state.k);
  const Vec q = dual_update(problem.cone, state.p, problem.theta_value(state.u), prm.rho,
                            dual_bound);
  const Vec u_next = solve_primal_subproblem(problem, state.u, q, prm.eps, inner_tol);
  const Vec p_next =
      dual_update(problem.cone, state.p, problem.theta_value(u_next), prm.rho, dual_bound);
  const double w = schedule.c0 + static_cast<double>(state.k);
  state.u_prev = state.u;
  state.p_prev = state.p;
  state.q = q;
  state.u = u_next;
  state.p = p_next;
  state.eps_k = prm.eps;
  state.ergodic_u_num += w * u_next;
  state.ergodic_p_num += w * q;
  state.ergodic_wsum += w;
  ++state.k;
}

Lemma2Terms lemma2_terms(const NccpProblem& problem, const StrongSchedule& schedule,
                         const SolverState& stepped, const Vec& probe_u, const Vec& probe_p) {
  require(stepped.k > 0, "lemma2_terms: state has not taken a step");
  const int k = stepped.k - 1;
  const StrongWeights wk = weights_ab(schedule, k);
  const StrongWeights wk1 = weights_ab(schedule, k + 1);
  const double lhs = wk1.a * (probe_u - stepped.u).squaredNorm() +
                     wk1.b * (probe_p - stepped.p).squaredNorm() -
                     wk.a * (probe_u - stepped.u_prev).squaredNorm() -
                     wk.b * (probe_p - stepped.p_prev).squaredNorm();
  const double rhs =
      (schedule.c0 + static_cast<double>(k)) *
          (lagrangian(problem, probe_u, stepped.q) - lagrangian(problem, stepped.u, probe_p)) -
      0.5 * schedule.c0 * schedule.beta_g * (stepped.u_prev - stepped.u).squaredNorm() -
      0.5 / schedule.eta * (stepped.q - stepped.p_prev).squaredNorm();
  return {lhs, rhs};
}

RunResult run_vapp_s(const NccpProblem& raw, const SolverConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  const NccpProblem problem = normalize_strong_convexity(raw);
  const StrongSchedule schedule = make_strong_schedule(problem, config);
  SolverState state = init_strong_state(problem, config, schedule);

  RunResult result;
  result.trace.reserve(static_cast<std::size_t>(
      std::min(config.max_iter, 1 + config.max_iter / std::max(config.trace_every, 1))));

  for (int k = 0; k < config.max_iter; ++k) {
    const StrongParams prm = params_strong(schedule, state.k);
    vapp_s_step(problem, state, schedule, config.dual_bound, config.effective_inner_tol());

    if (!state.u.allFinite() || state.u.norm() > config.divergence_guard) {
      result.status = RunStatus::Diverged;
      result.message = "primal iterate exceeded the divergence guard";
      break;
    }

    const PrimalDual erg = state.ergodic();
    const double obj_erg = problem.objective(erg.u);
    const double feas_erg = feasibility_residual(problem.cone, problem.theta_value(erg.u));

    const bool last_iter = k + 1 == config.max_iter;
    double gap;
    if (problem.opt_value) {
      gap = std::abs(obj_erg - *problem.opt_value);
    } else if (problem.reference) {
      gap = std::abs(obj_erg - problem.objective(problem.reference->u));
    } else {
      gap = std::abs(erg.p.dot(problem.theta_value(erg.u))) +
            (state.u - state.u_prev).norm() / state.eps_k;
    }
    const bool stop = feas_erg <= config.tol_feas && gap <= config.tol_obj;

    if (k % std::max(config.trace_every, 1) == 0 || stop || last_iter) {
      TraceRecord rec;
      rec.iter = state.k;
      rec.wall_time_s = elapsed();
      rec.obj = problem.objective(state.u);
      rec.obj_ergodic = obj_erg;
      rec.feas = feasibility_residual(problem.cone, problem.theta_value(state.u));
      rec.feas_ergodic = feas_erg;
      rec.dual_norm = state.p.norm();
      rec.eps_k = state.eps_k;
      const StrongWeights weights = weights_ab(schedule, state.k);
      rec.a_k = weights.a;
      rec.b_k = weights.b;
      rec.rho_k = prm.rho;
      if (config.certify) {
        // The step certificate holds with the step's own rho in place of
        // gamma: eps_k sits strictly inside that window by construction.
        rec.delta_k =
            delta_certificate(problem, state.u_prev, state.u, state.q, state.eps_k, prm.rho)
                .value;
        if (problem.reference) {
          rec.dist_sq = weights.a * (problem.reference->u - state.u).squaredNorm() +
                        weights.b * (problem.reference->p - state.p).squaredNorm();
        }
      }
      result.trace.push_back(std::move(rec));
    }
    if (stop) {
      result.status = RunStatus::Converged;
      break;
    }
  }

  result.last = state.last();
  result.ergodic = state.ergodic();
  result.iterations = state.k;
  result.wall_time_s = elapsed();
  if (result.status == RunStatus::IterationLimit)
    result.message = "iteration limit reached before tolerances were met";
  return result;
}

}  // namespace nccp
