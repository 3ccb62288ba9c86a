// NCCP - first-order primal-dual solvers for nonlinear convex cone programs
// Copyright 2026 NCCP Contributors
// Licensed under Apache 2.0

#include "nccp/vapp_core.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "nccp/lagrangian.hpp"
#include "nccp/subproblem.hpp"

namespace nccp {

double SolverConfig::effective_inner_tol() const {
  if (inner_tol > 0.0) return inner_tol;
  return std::min(1e-10, tol_obj / 10.0);
}

std::optional<double> ProblemConstants::eps_window(double gamma) const {
  if (!complete()) return std::nullopt;
  const double denom = *b_g + *b_omega + gamma * *tau * *tau;
  if (denom <= 0.0) return std::nullopt;  // any positive eps works; no finite window
  return beta / denom;
}

ProblemConstants derive_constants(const NccpProblem& problem, const SolverConfig& config) {
  ProblemConstants c;
  c.beta = problem.core.beta;
  c.core_smoothness = problem.core.smoothness;
  c.b_g = problem.g.lipschitz_grad;
  c.tau = problem.theta.theta_lipschitz;
  if (problem.theta.b_omega) {
    c.b_omega = *problem.theta.b_omega;
  } else if (problem.theta.b_omega_components.size() > 0) {
    if (config.dual_bound) {
      c.b_omega = aggregate_b_omega(problem.theta.b_omega_components, *config.dual_bound);
    } else if (problem.theta.b_omega_components.lpNorm<1>() == 0.0) {
      c.b_omega = 0.0;
    }
  }
  return c;
}

PrimalDual SolverState::ergodic() const {
  if (ergodic_wsum <= 0.0) return {u, p};
  return {ergodic_u_num / ergodic_wsum, ergodic_p_num / ergodic_wsum};
}

Vec dual_update(const ConeSpec& cone, const Vec& p, const Vec& theta_next, double rho,
                const std::optional<double>& dual_bound) {
  require(rho > 0.0, "dual_update: rho must be positive");
  const Vec shifted = p + rho * theta_next;
  return dual_bound ? project_cone_ball(cone, *dual_bound, shifted)
                    : project_dual(cone, shifted);
}

Vec solve_primal_subproblem(const NccpProblem& problem, const Vec& u_k, const Vec& q_k,
                            double eps_k, double inner_tol) {
  const Vec linear = problem.g.gradient(u_k) + problem.theta.omega_jtp(u_k, q_k);
  return solve_linearized_subproblem(problem, u_k, linear, q_k, eps_k, inner_tol).u;
}

DeltaCertificate delta_certificate(const NccpProblem& problem, const Vec& u, const Vec& v,
                                   const Vec& q_k, double eps_k, double gamma,
                                   const ProblemConstants* constants) {
  require(eps_k > 0.0 && gamma > 0.0, "delta_certificate: eps and gamma must be positive");
  require(u.size() == v.size() && u.size() == problem.n,
          "delta_certificate: dimension mismatch");
  const Vec d = v - u;
  const double g_v = problem.g.value(v);
  const double g_u = problem.g.value(u);
  const double g_lin = problem.g.gradient(u).dot(d);
  const double g_rem = g_v - g_u - g_lin;
  const Vec omega_u = problem.theta.omega(u);
  const Vec omega_v = problem.theta.omega(v);
  const double w_v = q_k.dot(omega_v);
  const double w_u = q_k.dot(omega_u);
  const double w_lin = problem.theta.omega_jtp(u, q_k).dot(d);
  const double omega_rem = w_v - w_u - w_lin;
  const Vec phi_u = problem.theta.phi.value(u);
  const Vec phi_v = problem.theta.phi.value(v);
  const double theta_gap = (omega_u + phi_u - omega_v - phi_v).squaredNorm();
  const double dist = bregman_distance(problem.core, v, u);
  DeltaCertificate cert;
  cert.value = dist - eps_k * (g_rem + omega_rem + 0.5 * gamma * theta_gap);
  // Near a fixed point the value differences above cancel almost exactly and
  // the computed sign is rounding noise; snapping those to zero keeps the
  // sign-driven step-size logic from shrinking eps on noise.
  const double scale =
      std::abs(dist) + eps_k * (std::abs(g_v) + std::abs(g_u) + std::abs(g_lin) + std::abs(w_v) +
                                std::abs(w_u) + std::abs(w_lin) + 0.5 * gamma * theta_gap);
  constexpr double kNoise = 64.0 * std::numeric_limits<double>::epsilon();
  if (cert.value < 0.0 && -cert.value <= kNoise * scale) cert.value = 0.0;
  if (constants && constants->complete()) {
    const double coeff =
        constants->beta -
        eps_k * (*constants->b_g + *constants->b_omega + gamma * *constants->tau * *constants->tau);
    cert.lower_bound = 0.5 * coeff * d.squaredNorm();
  }
  return cert;
}

SolverState init_state(const NccpProblem& problem, const SolverConfig& config) {
  require(config.gamma > 0.0, "solver: gamma must be positive");
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

  const ProblemConstants constants = derive_constants(problem, config);
  const auto window = constants.eps_window(config.gamma);
  if (config.step_mode == StepMode::Fixed) {
    if (config.eps0 > 0.0) {
      if (window) {
        require(config.eps0 <= 0.99 * *window,
                "solver: fixed eps0 must stay below 0.99x the step window");
      } else {
        require(constants.complete(),
                "solver: fixed step mode needs declared curvature constants");
      }
      state.eps_k = config.eps0;
    } else {
      require(window.has_value(),
              "solver: fixed step mode needs declared curvature constants");
      state.eps_k = 0.9 * *window;
    }
  } else {
    require(config.backtrack_eta > 0.0 && config.backtrack_eta < 1.0,
            "solver: backtracking eta must lie in (0,1)");
    if (config.eps0 > 0.0)
      state.eps_k = config.eps0;
    else
      state.eps_k = window ? 0.9 * *window : 1.0;
  }
  return state;
}

void commit_step(const NccpProblem& problem, SolverState& state, const SolverConfig& config,
                 const Vec& q, const Vec& u_next, double eps) {
  const Vec p_next =
      dual_update(problem.cone, state.p, problem.theta_value(u_next), config.gamma,
                  config.dual_bound);
  state.u_prev = state.u;
  state.p_prev = state.p;
  state.q = q;
  state.u = u_next;
  state.p = p_next;
  state.eps_k = eps;
  state.ergodic_u_num += eps * u_next;
  state.ergodic_p_num += eps * q;
  state.ergodic_wsum += eps;
  ++state.k;
}

void vapp_step(const NccpProblem& problem, SolverState& state, const SolverConfig& config) {
  const Vec q = dual_update(problem.cone, state.p, problem.theta_value(state.u), config.gamma,
                            config.dual_bound);
  const Vec u_next =
      solve_primal_subproblem(problem, state.u, q, state.eps_k, config.effective_inner_tol());
  commit_step(problem, state, config, q, u_next, state.eps_k);
}

void backtracking_step(const NccpProblem& problem, SolverState& state,
                       const SolverConfig& config) {
  require(config.step_mode == StepMode::Backtracking,
          "backtracking_step: config is not in backtracking mode");
  const Vec q = dual_update(problem.cone, state.p, problem.theta_value(state.u), config.gamma,
                            config.dual_bound);
  const Vec linear = problem.g.gradient(state.u) + problem.theta.omega_jtp(state.u, q);
  // A trial that moves the anchor by at most rounding noise means the anchor
  // is already the subproblem's fixed point; the certificate is then pure
  // evaluation noise, so such steps are accepted without consulting it.
  const double stall = 16.0 * std::numeric_limits<double>::epsilon() *
                       (1.0 + state.u.lpNorm<Eigen::Infinity>());
  double eps = state.eps_k;
  for (int i = 0; i <= config.backtrack_cap; ++i) {
    const Vec u_trial =
        solve_linearized_subproblem(problem, state.u, linear, q, eps,
                                    config.effective_inner_tol())
            .u;
    if ((u_trial - state.u).lpNorm<Eigen::Infinity>() <= stall) {
      commit_step(problem, state, config, q, u_trial, eps);
      return;
    }
    const double delta =
        delta_certificate(problem, state.u, u_trial, q, eps, config.gamma).value;
    if (delta >= 0.0) {
      commit_step(problem, state, config, q, u_trial, eps);
      return;
    }
    eps *= config.backtrack_eta;
  }
  throw InvalidProblem(
      "backtracking: certificate stayed negative through the shrink cap; "
      "an oracle or its declared constants are inconsistent");
}

Lemma1Terms lemma1_terms(const NccpProblem& problem, const SolverState& stepped,
                         const Vec& probe_u, const Vec& probe_p, double gamma) {
  require(stepped.k > 0, "lemma1_terms: state has not taken a step");
  const double eps = stepped.eps_k;
  const double half_eg = eps / (2.0 * gamma);
  const double lhs =
      (bregman_distance(problem.core, probe_u, stepped.u) +
       half_eg * (probe_p - stepped.p).squaredNorm()) -
      (bregman_distance(problem.core, probe_u, stepped.u_prev) +
       half_eg * (probe_p - stepped.p_prev).squaredNorm());
  const double delta =
      delta_certificate(problem, stepped.u_prev, stepped.u, stepped.q, eps, gamma).value;
  const double rhs =
      eps * (lagrangian(problem, probe_u, stepped.q) - lagrangian(problem, stepped.u, probe_p)) -
      (delta + half_eg * (stepped.q - stepped.p_prev).squaredNorm());
  return {lhs, rhs};
}

RunResult run_vapp(const NccpProblem& problem, const SolverConfig& config) {
  return run_vapp_with(problem, config, [](const NccpProblem& pb, SolverState& st,
                                           const SolverConfig& cf) {
    if (cf.step_mode == StepMode::Fixed)
      vapp_step(pb, st, cf);
    else
      backtracking_step(pb, st, cf);
  });
}

RunResult run_vapp_with(const NccpProblem& problem, const SolverConfig& config,
                        const StepFn& step) {
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  SolverState state = init_state(problem, config);
  const ProblemConstants constants = derive_constants(problem, config);
  const Vec probe_u = state.u;
  const Vec probe_p = state.p;

  RunResult result;
  result.trace.reserve(static_cast<std::size_t>(
      std::min(config.max_iter, 1 + config.max_iter / std::max(config.trace_every, 1))));

  for (int k = 0; k < config.max_iter; ++k) {
    step(problem, state, config);

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
      if (config.certify) {
        const auto cert = delta_certificate(problem, state.u_prev, state.u, state.q,
                                            state.eps_k, config.gamma, &constants);
        rec.delta_k = cert.value;
        const Vec& lu = problem.reference ? problem.reference->u : probe_u;
        const Vec& lp = problem.reference ? problem.reference->p : probe_p;
        const auto lem = lemma1_terms(problem, state, lu, lp, config.gamma);
        rec.lemma1_lhs = lem.lhs;
        rec.lemma1_rhs = lem.rhs;
        rec.kkt_res = kkt_residual(problem, {state.u_prev, state.p_prev}, {state.u, state.p},
                                   state.q, state.eps_k, config.gamma);
        if (problem.reference) {
          const double gd = generalized_distance(problem.core, config.gamma, state.eps_k,
                                                 state.last(), *problem.reference);
          rec.dist_sq = gd * gd;
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
