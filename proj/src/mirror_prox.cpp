// NCCP - first-order primal-dual solvers for nonlinear convex cone programs
// Copyright 2026 NCCP Contributors
// Licensed under Apache 2.0

#include "nccp/mirror_prox.hpp"

#include <cmath>
#include <memory>
#include <random>

namespace nccp {

namespace {

void check_smooth_saddle(const NccpProblem& problem) {
  require(problem.j.prox_kind == ProxKind::Zero,
          "mirror_prox: the saddle baseline needs a smooth objective (J must be zero)");
  require(problem.theta.phi.kind == PhiKind::Zero,
          "mirror_prox: the saddle baseline needs a smooth constraint map (Phi must be zero)");
  require(problem.set.kind == SetKind::Full,
          "mirror_prox: the saddle baseline runs over an unconstrained primal space");
}

Vec saddle_grad_u(const NccpProblem& problem, const Vec& u, const Vec& p) {
  return problem.g.gradient(u) + problem.theta.omega_jtp(u, p);
}

// A unit dual direction that exercises the ball: the epigraph axis for norm
// cones (the dual point with the largest head), the uniform ray otherwise;
// products concatenate their parts.
Vec dual_probe_direction(const ConeSpec& cone) {
  if (cone.kind == ConeKind::Norm) {
    Vec e = Vec::Zero(cone.dim);
    e[0] = 1.0;
    return e;
  }
  if (cone.kind == ConeKind::Product) {
    Vec e(cone.dim);
    Eigen::Index at = 0;
    for (const auto& part : cone.parts) {
      e.segment(at, part.dim) = dual_probe_direction(part);
      at += part.dim;
    }
    return Vec(e / e.norm());
  }
  return Vec(Vec::Constant(cone.dim, 1.0 / std::sqrt(static_cast<double>(cone.dim))));
}

}  // namespace

MirrorProxState mirror_prox_step(const NccpProblem& problem, const MirrorProxState& state,
                                 double gamma_k, const std::optional<double>& m_bound) {
  check_smooth_saddle(problem);
  require(gamma_k > 0.0, "mirror_prox: step size must be positive");

  MirrorProxState next;
  next.gamma_k = gamma_k;
  next.u_tilde = state.u - gamma_k * saddle_grad_u(problem, state.u, state.p);
  next.p_tilde =
      dual_update(problem.cone, state.p, problem.theta.omega(state.u), gamma_k, m_bound);
  next.u = state.u - gamma_k * saddle_grad_u(problem, next.u_tilde, next.p_tilde);
  next.p = dual_update(problem.cone, state.p, problem.theta.omega(next.u_tilde), gamma_k,
                       m_bound);
  return next;
}

double mirror_prox_auto_step(const NccpProblem& problem, const Vec& u0, const Vec& p0,
                             const std::optional<double>& m_bound) {
  check_smooth_saddle(problem);
  constexpr int kIters = 50;
  const double h = 1e-6 * (1.0 + u0.norm());
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto draw = [&](Eigen::Index n) {
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = gauss(rng);
    return Vec(v / std::max(v.norm(), 1e-300));
  };

  // Primal Hessian block of the saddle gradient, probed by symmetric
  // differences; power iteration gives its spectral norm. The start point's
  // dual alone can hide all the constraint curvature (it is often zero), so
  // a ball-scale dual along the cone's probe axis is measured as well and
  // the worse block wins.
  std::vector<Vec> duals = {p0};
  if (m_bound) duals.push_back(Vec(*m_bound * dual_probe_direction(problem.cone)));
  double h_norm = 0.0;
  for (const Vec& p : duals) {
    double block = 0.0;
    Vec d = draw(problem.n);
    for (int i = 0; i < kIters; ++i) {
      const Vec hd = (saddle_grad_u(problem, u0 + h * d, p) -
                      saddle_grad_u(problem, u0 - h * d, p)) /
                     (2.0 * h);
      block = hd.norm();
      if (block < 1e-300) break;
      d = hd / block;
    }
    h_norm = std::max(h_norm, block);
  }

  // Coupling block: top singular value of the constraint linearization,
  // iterated on the normal map with the adjoint supplied by the oracle.
  double sigma_sq = 0.0;
  Vec v = draw(problem.n);
  for (int i = 0; i < kIters; ++i) {
    const Vec jv =
        (problem.theta.omega(u0 + h * v) - problem.theta.omega(u0 - h * v)) / (2.0 * h);
    const Vec jtjv = problem.theta.omega_jtp(u0, jv);
    sigma_sq = jtjv.norm();
    if (sigma_sq < 1e-300) break;
    v = jtjv / sigma_sq;
  }

  const double l_hat = h_norm + std::sqrt(sigma_sq);
  return l_hat > 0.0 ? 1.0 / l_hat : 1.0;
}

RunResult run_mirror_prox(const NccpProblem& problem, const SolverConfig& config,
                          std::optional<double> step) {
  check_smooth_saddle(problem);
  if (!step) {
    const Vec u0 = config.u0 ? *config.u0 : Vec::Zero(problem.n);
    const Vec p0 = config.p0 ? *config.p0 : Vec::Zero(problem.m);
    step = mirror_prox_auto_step(problem, u0, p0, config.dual_bound);
  }
  require(*step > 0.0, "mirror_prox: step size must be positive");

  // The shared loop owns stopping, tracing, and the divergence guard. The
  // stepper keeps the extragradient pair in a side state and fills the
  // solver state's slots: gamma in the step column, the predictor pair into
  // the ergodic accumulators, the corrected pair as the iterate.
  SolverConfig cfg = config;
  cfg.step_mode = StepMode::Backtracking;  // init gate only; no window needed
  cfg.eps0 = *step;
  cfg.certify = false;  // certificate and descent columns stay empty

  const double gamma = *step;
  const std::optional<double> bound = config.dual_bound;
  const auto mp = std::make_shared<MirrorProxState>();
  return run_vapp_with(problem, cfg,
                       [mp, gamma, bound](const NccpProblem& pb, SolverState& st,
                                          const SolverConfig&) {
                         if (st.k == 0) {
                           mp->u = st.u;
                           mp->p = st.p;
                         }
                         *mp = mirror_prox_step(pb, *mp, gamma, bound);
                         st.u_prev = st.u;
                         st.p_prev = st.p;
                         st.u = mp->u;
                         st.p = mp->p;
                         st.q = mp->p_tilde;
                         st.eps_k = gamma;
                         st.ergodic_u_num += gamma * mp->u_tilde;
                         st.ergodic_p_num += gamma * mp->p_tilde;
                         st.ergodic_wsum += gamma;
                         ++st.k;
                       });
}

}  // namespace nccp
