// NCCP - first-order primal-dual solvers for nonlinear convex cone programs
// Copyright 2026 NCCP Contributors
// Licensed under Apache 2.0

#include "nccp/subproblem.hpp"

#include <cmath>
#include <cstdlib>
#include <thread>

#include "nccp/linalg.hpp"

namespace nccp {

int block_thread_count() {
  const char* env = std::getenv("NCCP_THREADS");
  if (env == nullptr) return 1;
  const int v = std::atoi(env);
  return v < 2 ? 1 : v;
}

namespace {

// Box bounds of a set built from Full/Box leaves; false if other leaves occur.
bool collect_box_bounds(const FeasibleSet& set, Eigen::Index offset, Vec& lo, Vec& hi) {
  switch (set.kind) {
    case SetKind::Full:
      lo.segment(offset, set.dim).setConstant(-kInf);
      hi.segment(offset, set.dim).setConstant(kInf);
      return true;
    case SetKind::Box:
      lo.segment(offset, set.dim) = set.lo;
      hi.segment(offset, set.dim) = set.hi;
      return true;
    case SetKind::Ball:
      return false;
    case SetKind::Blocks: {
      Eigen::Index off = offset;
      for (const auto& blk : set.blocks) {
        if (!collect_box_bounds(blk, off, lo, hi)) return false;
        off += blk.dim;
      }
      return true;
    }
  }
  return false;
}

// Exact coordinatewise minimizer of
//   c_i u + lam |u| + (ridge/2) u^2 + (w_i / (2 eps)) (u - a_i)^2  over [lo_i, hi_i].
void separable_solve(const Vec& anchor, const Vec& c, const Vec& w, double eps, double lam,
                     double ridge, const Vec& lo, const Vec& hi, Eigen::Index begin,
                     Eigen::Index end, Vec& out) {
  for (Eigen::Index i = begin; i < end; ++i) {
    const double denom = w[i] + eps * ridge;
    const double z = (w[i] * anchor[i] - eps * c[i]) / denom;
    const double t = eps * lam / denom;
    double ui = z > t ? z - t : (z < -t ? z + t : 0.0);
    if (ui < lo[i]) ui = lo[i];
    if (ui > hi[i]) ui = hi[i];
    out[i] = ui;
  }
}

Vec conjugate_gradient(const std::function<Vec(const Vec&)>& apply, const Vec& rhs,
                       double tol, int max_iter) {
  Vec x = Vec::Zero(rhs.size());
  Vec r = rhs;
  Vec p = r;
  double rs = r.squaredNorm();
  const double stop = tol * tol * std::max(1.0, rhs.squaredNorm());
  for (int it = 0; it < max_iter && rs > stop; ++it) {
    const Vec ap = apply(p);
    const double alpha = rs / p.dot(ap);
    x += alpha * p;
    r -= alpha * ap;
    const double rs_new = r.squaredNorm();
    p = r + (rs_new / rs) * p;
    rs = rs_new;
  }
  return x;
}

double estimate_operator_norm(const std::function<Vec(const Vec&)>& apply, Eigen::Index n) {
  Vec v = Vec::Ones(n).normalized();
  double lam = 0.0;
  for (int it = 0; it < 60; ++it) {
    Vec w = apply(v);
    lam = w.norm();
    if (lam <= 0.0) return 0.0;
    v = w / lam;
  }
  return lam * 1.05;
}

}  // namespace

SubproblemResult solve_linearized_subproblem(const NccpProblem& problem, const Vec& anchor,
                                             const Vec& linear, const Vec& q, double eps,
                                             double inner_tol) {
  require(eps > 0.0, "subproblem: step size must be positive");
  const Eigen::Index n = problem.n;
  require(anchor.size() == n && linear.size() == n, "subproblem: dimension mismatch");

  // Fold the nonsmooth constraint part into the subproblem data.
  Vec c = linear;
  double extra_l1 = 0.0;
  switch (problem.theta.phi.kind) {
    case PhiKind::Zero: break;
    case PhiKind::Linear: c += problem.theta.phi.A.transpose() * q; break;
    case PhiKind::SeparableL1: {
      extra_l1 = problem.theta.phi.l1_coeff.dot(q);
      require(extra_l1 >= -1e-12, "subproblem: negative l1 weight from dual coupling");
      extra_l1 = std::max(extra_l1, 0.0);
      break;
    }
    case PhiKind::Custom:
      throw InvalidProblem("subproblem: custom Phi has no proximal form");
  }

  const bool j_l1_like =
      problem.j.prox_kind == ProxKind::Zero || problem.j.prox_kind == ProxKind::L1;
  const double lam = extra_l1 + (problem.j.prox_kind == ProxKind::L1 ? problem.j.l1_weight : 0.0);
  const double ridge = problem.j.prox_kind == ProxKind::L1 ? problem.j.ridge : 0.0;
  const bool core_diag =
      problem.core.kind == CoreKind::HalfSquared || problem.core.kind == CoreKind::Diagonal;

  SubproblemResult result;

  // Coordinatewise closed form: diagonal core, l1-or-zero nonsmooth parts,
  // box-like feasible set.
  if (j_l1_like && core_diag) {
    Vec lo(n), hi(n);
    if (collect_box_bounds(problem.set, 0, lo, hi)) {
      const Vec w = problem.core.kind == CoreKind::Diagonal ? problem.core.weights
                                                            : Vec::Ones(n);
      result.u.resize(n);
      const int threads = problem.set.kind == SetKind::Blocks ? block_thread_count() : 1;
      if (threads > 1 && n >= 2 * threads) {
        std::vector<std::thread> pool;
        const Eigen::Index chunk = (n + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
          const Eigen::Index b = t * chunk;
          const Eigen::Index e = std::min<Eigen::Index>(n, b + chunk);
          if (b >= e) break;
          pool.emplace_back([&, b, e] {
            separable_solve(anchor, c, w, eps, lam, ridge, lo, hi, b, e, result.u);
          });
        }
        for (auto& th : pool) th.join();
      } else {
        separable_solve(anchor, c, w, eps, lam, ridge, lo, hi, 0, n, result.u);
      }
      return result;
    }
  }

  // Isotropic quadratic over an arbitrary projectable set: project the
  // unconstrained minimizer.
  if (j_l1_like && lam == 0.0 && problem.core.kind == CoreKind::HalfSquared) {
    const Vec center = (anchor - eps * c) / (1.0 + eps * ridge);
    result.u = problem.set.project(center);
    return result;
  }

  // Quadratic J on the full space: a single SPD solve.
  if (problem.j.prox_kind == ProxKind::Quadratic && extra_l1 == 0.0 &&
      problem.set.kind == SetKind::Full && core_diag) {
    const Vec w = problem.core.kind == CoreKind::Diagonal ? problem.core.weights
                                                          : Vec::Ones(n);
    auto apply = [&](const Vec& x) {
      return Vec(problem.j.quad_apply(x) + (w.array() / eps * x.array()).matrix());
    };
    Vec rhs = (w.array() * anchor.array() / eps).matrix() - c;
    if (problem.j.quad_linear.size() == n) rhs -= problem.j.quad_linear;
    result.u = conjugate_gradient(apply, rhs, 1e-14, static_cast<int>(10 * n + 100));
    result.closed_form = false;
    result.iterations = 1;
    return result;
  }

  // Custom prox on the full space with the plain squared-norm core.
  if (problem.j.prox_kind == ProxKind::Custom && extra_l1 == 0.0 &&
      problem.set.kind == SetKind::Full && problem.core.kind == CoreKind::HalfSquared) {
    result.u = problem.j.prox(eps, anchor - eps * c);
    return result;
  }

  // Generic accelerated projected proximal-gradient fallback.
  const bool custom_prox_path = problem.j.prox_kind == ProxKind::Custom;
  if (custom_prox_path) {
    require(problem.set.kind == SetKind::Full && extra_l1 == 0.0,
            "subproblem: custom J requires a full feasible set and smooth coupling");
  }
  if (lam > 0.0) {
    Vec lo(n), hi(n);
    require(collect_box_bounds(problem.set, 0, lo, hi),
            "subproblem: l1 terms need a box-like feasible set");
  }
  if (problem.j.prox_kind == ProxKind::Quadratic) {
    require(problem.set.kind != SetKind::Blocks || extra_l1 == 0.0,
            "subproblem: quadratic J does not mix with coupled l1 terms");
  }

  double smooth_l = problem.core.smoothness / eps + ridge;
  double smooth_mu = problem.core.beta / eps + ridge;
  std::function<Vec(const Vec&)> quad_apply;
  Vec quad_lin = Vec::Zero(n);
  if (problem.j.prox_kind == ProxKind::Quadratic) {
    quad_apply = problem.j.quad_apply;
    if (problem.j.quad_linear.size() == n) quad_lin = problem.j.quad_linear;
    smooth_l += estimate_operator_norm(quad_apply, n);
  }
  const Vec grad_anchor = problem.core.gradient(anchor);
  auto grad_f = [&](const Vec& u) {
    Vec g = c + (problem.core.gradient(u) - grad_anchor) / eps;
    if (ridge != 0.0) g += ridge * u;
    if (quad_apply) g += quad_apply(u) + quad_lin;
    return g;
  };
  auto prox_r = [&](double t, const Vec& v) {
    if (custom_prox_path) return problem.j.prox(t, v);
    const Vec w = lam > 0.0 ? soft_threshold(v, t * lam) : v;
    return problem.set.project(w);
  };

  const double kappa = std::min(1.0, smooth_mu / smooth_l);
  const double momentum = (1.0 - std::sqrt(kappa)) / (1.0 + std::sqrt(kappa));
  Vec x = problem.set.project(anchor);
  Vec x_prev = x;
  Vec y = x;
  double residual = kInf;
  const int max_inner = 50000;
  int it = 0;
  for (; it < max_inner; ++it) {
    const Vec g = grad_f(y);
    const Vec x_new = prox_r(1.0 / smooth_l, y - g / smooth_l);
    y = x_new + momentum * (x_new - x_prev);
    x_prev = x;
    x = x_new;
    if (it % 10 == 0 || it + 1 == max_inner) {
      const Vec gx = grad_f(x);
      const Vec tx = prox_r(1.0 / smooth_l, x - gx / smooth_l);
      residual = smooth_l * (x - tx).norm();
      if (residual <= inner_tol) break;
    }
  }
  result.u = x;
  result.residual = residual;
  result.iterations = it + 1;
  result.closed_form = false;
  return result;
}

}  // namespace nccp
