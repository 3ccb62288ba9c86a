// NCCP - first-order primal-dual solvers for nonlinear convex cone programs
// Copyright 2026 NCCP Contributors
// Licensed under Apache 2.0

#include "nccp/structured.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nccp/linalg.hpp"

namespace nccp {

namespace {

Eigen::Index layered_rows(const StructuredMapSpec& spec, bool mixed, bool affine) {
  Eigen::Index rows = 1;
  if (mixed) rows += spec.q_mix.rows();
  if (affine) rows += spec.a.rows();
  return rows;
}

}  // namespace

ConeMapOracle build_structured_map(const StructuredMapSpec& spec) {
  const bool mixed = spec.variant != StructuredVariant::AffineRows;
  const bool affine = spec.variant != StructuredVariant::MixedRows;
  const Eigen::Index l = static_cast<Eigen::Index>(spec.g.size());

  require(spec.n > 0, "structured: primal dimension must be positive");
  require(bool(spec.g0.value) && bool(spec.g0.gradient), "structured: g0 oracle is incomplete");
  for (const auto& gj : spec.g)
    require(bool(gj.value) && bool(gj.gradient), "structured: component oracle is incomplete");

  if (mixed) {
    require(l > 0, "structured: the mixed variant needs at least one component");
    require(spec.q_mix.rows() > 0 && spec.q_mix.cols() == l,
            "structured: mixing matrix must have one column per component");
    require(spec.head_weights.size() == l,
            "structured: head weights must match the component count");
    require(spec.q_mix.minCoeff() >= 0.0,
            "structured: mixing matrix entries must be nonnegative");
    for (Eigen::Index j = 0; j < l; ++j) {
      require(spec.head_weights[j] >= spec.q_mix.col(j).sum(),
              "structured: head weight " + std::to_string(j) +
                  " must dominate its mixing column sum");
    }
  } else {
    require(l == 0 && spec.q_mix.size() == 0 && spec.head_weights.size() == 0,
            "structured: the affine variant takes no component block");
  }
  if (affine) {
    require(spec.a.rows() > 0 && spec.a.cols() == spec.n && spec.b.size() == spec.a.rows(),
            "structured: affine block has mismatched dimensions");
  } else {
    require(spec.a.size() == 0 && spec.b.size() == 0,
            "structured: this variant takes no affine block");
  }

  const Eigen::Index rows = layered_rows(spec, mixed, affine);
  const auto sp = std::make_shared<const StructuredMapSpec>(spec);

  ConeMapOracle out;
  out.out_dim = rows;
  out.omega = [sp, mixed, affine, rows](const Vec& u) {
    Vec th(rows);
    double head = sp->g0.value(u);
    Eigen::Index at = 1;
    if (mixed) {
      const Eigen::Index nc = static_cast<Eigen::Index>(sp->g.size());
      Vec gv(nc);
      for (Eigen::Index j = 0; j < nc; ++j) gv[j] = sp->g[j].value(u);
      head += sp->head_weights.dot(gv);
      th.segment(at, sp->q_mix.rows()) = sp->q_mix * gv;
      at += sp->q_mix.rows();
    }
    if (affine) th.segment(at, sp->a.rows()) = sp->a * u - sp->b;
    th[0] = head;
    return th;
  };
  out.omega_jtp = [sp, mixed, affine](const Vec& u, const Vec& p) {
    Vec r = Vec(p[0] * sp->g0.gradient(u));
    Eigen::Index at = 1;
    if (mixed) {
      const Eigen::Index nc = static_cast<Eigen::Index>(sp->g.size());
      const Vec coef =
          p[0] * sp->head_weights + sp->q_mix.transpose() * p.segment(at, sp->q_mix.rows());
      for (Eigen::Index j = 0; j < nc; ++j) r += coef[j] * sp->g[j].gradient(u);
      at += sp->q_mix.rows();
    }
    if (affine) r += sp->a.transpose() * p.segment(at, sp->a.rows());
    return r;
  };
  out.phi = PhiOracle::zero(rows);
  out.c_convex_certified = true;

  // Per-row curvature carries over when every participating oracle declares
  // its own: the head accumulates g0 plus the weighted components, mixed rows
  // mix the component bounds, affine rows have none.
  bool have_curvature = spec.g0.lipschitz_grad.has_value();
  Vec component_l(l);
  for (Eigen::Index j = 0; j < l; ++j) {
    have_curvature = have_curvature && spec.g[j].lipschitz_grad.has_value();
    if (have_curvature) component_l[j] = *spec.g[j].lipschitz_grad;
  }
  if (have_curvature) {
    Vec comp = Vec::Zero(rows);
    comp[0] = *spec.g0.lipschitz_grad;
    if (mixed) {
      comp[0] += spec.head_weights.dot(component_l);
      comp.segment(1, spec.q_mix.rows()) = spec.q_mix * component_l;
    }
    out.b_omega_components = comp;
  }
  return out;
}

ConeSpec structured_cone(const StructuredMapSpec& spec, NormExponent nu) {
  const bool mixed = spec.variant != StructuredVariant::AffineRows;
  const bool affine = spec.variant != StructuredVariant::MixedRows;
  return ConeSpec::norm_cone(nu, layered_rows(spec, mixed, affine));
}

double SenSvmInstance::scalar_dual_bound() const {
  return b.squaredNorm() / (2.0 * delta) + 1.0;
}

double SenSvmInstance::cone_dual_bound() const {
  return std::sqrt(static_cast<double>(n + 1)) * b.squaredNorm() / (2.0 * delta) + 1.0;
}

SenSvmInstance gen_sen_svm(Eigen::Index m, Eigen::Index n, Eigen::Index s, double alpha,
                           std::uint64_t seed) {
  require(m >= 1 && n >= 1, "sen_svm: dimensions must be positive");
  require(s >= 1 && s <= n, "sen_svm: sparsity must lie in [1, n]");
  require(alpha > 0.0 && alpha < 1.0, "sen_svm: alpha must lie in (0, 1)");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  SenSvmInstance inst;
  inst.m = m;
  inst.n = n;
  inst.s = s;
  inst.alpha = alpha;

  inst.a.resize(m, n);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < n; ++j) inst.a(i, j) = gauss(rng);

  Mat basis(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) basis(i, j) = gauss(rng);
  Mat gram = Mat::Zero(n, n);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(basis.transpose());
  inst.q = Mat(gram.selfadjointView<Eigen::Lower>());
  // A square random Gram matrix can be numerically singular; a ridge far
  // below every tolerance in the suite keeps it positive definite.
  inst.q.diagonal().array() += 1e-10;

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) order[static_cast<std::size_t>(j)] = j;
  inst.u_star = Vec::Zero(n);
  for (Eigen::Index k = 0; k < s; ++k) {
    std::uniform_int_distribution<Eigen::Index> pick(k, n - 1);
    std::swap(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(pick(rng))]);
    inst.u_star[order[static_cast<std::size_t>(k)]] = gauss(rng);
  }

  inst.b = inst.a * inst.u_star;
  inst.delta = alpha * inst.u_star.lpNorm<1>() +
               (1.0 - alpha) * inst.u_star.dot(inst.q * inst.u_star);
  require(inst.delta > 0.0, "sen_svm: the planted point degenerated to zero");
  return inst;
}

NccpProblem sen_svm_scalar_form(const SenSvmInstance& inst) {
  NccpProblem pb;
  pb.n = inst.n;
  pb.m = 1;
  pb.g = SmoothOracle::least_squares(inst.a, inst.b);
  pb.j = NonsmoothOracle::zero();
  const auto qs = std::make_shared<const Mat>(inst.q);
  const double alpha = inst.alpha;
  const double delta = inst.delta;
  pb.theta.out_dim = 1;
  pb.theta.omega = [qs, alpha, delta](const Vec& u) {
    Vec v(1);
    v[0] = (1.0 - alpha) * u.dot(*qs * u) - delta;
    return v;
  };
  pb.theta.omega_jtp = [qs, alpha](const Vec& u, const Vec& p) {
    // Q is symmetric by construction, so the gradient of u'Qu is 2 Q u.
    return Vec((2.0 * (1.0 - alpha) * p[0]) * (*qs * u));
  };
  pb.theta.phi = PhiOracle::separable_l1(Vec::Constant(1, alpha));
  // One row, convex as an l1 term plus a positive semidefinite quadratic.
  pb.theta.c_convex_certified = true;
  pb.cone = ConeSpec::nonneg_orthant(1);
  pb.set = FeasibleSet::full(inst.n);
  pb.opt_value = 0.0;
  return pb;
}

NccpProblem sen_svm_cone_form(const SenSvmInstance& inst) {
  NccpProblem pb;
  pb.n = inst.n;
  pb.m = inst.n + 1;
  pb.g = SmoothOracle::least_squares(inst.a, inst.b);
  pb.j = NonsmoothOracle::zero();
  const auto qs = std::make_shared<const Mat>(inst.q);
  const double alpha = inst.alpha;
  const double delta = inst.delta;
  const Eigen::Index n = inst.n;
  pb.theta.out_dim = n + 1;
  pb.theta.omega = [qs, alpha, delta, n](const Vec& u) {
    Vec v(n + 1);
    v[0] = (1.0 - alpha) * u.dot(*qs * u) - delta;
    v.tail(n) = alpha * u;
    return v;
  };
  pb.theta.omega_jtp = [qs, alpha, n](const Vec& u, const Vec& p) {
    return Vec((2.0 * (1.0 - alpha) * p[0]) * (*qs * u) + alpha * p.tail(n));
  };
  pb.theta.phi = PhiOracle::zero(n + 1);
  // Layered shape: a convex head over an affine tail whose rows the head
  // dominates through the constraint level, as in build_structured_map.
  pb.theta.c_convex_certified = true;
  pb.cone = ConeSpec::norm_cone(NormExponent::One, n + 1);
  pb.set = FeasibleSet::full(inst.n);
  pb.opt_value = 0.0;
  return pb;
}

namespace {

Vec sen_svm_theta(const SenSvmInstance& inst, SenSvmForm form, const Vec& u, const Vec& qu) {
  const double head = (1.0 - inst.alpha) * u.dot(qu) - inst.delta;
  if (form == SenSvmForm::Scalar) {
    Vec v(1);
    v[0] = head + inst.alpha * u.lpNorm<1>();
    return v;
  }
  Vec v(inst.n + 1);
  v[0] = head;
  v.tail(inst.n) = inst.alpha * u;
  return v;
}

}  // namespace

void sen_svm_closed_form_step(const SenSvmInstance& inst, SenSvmForm form,
                              const NccpProblem& problem, SolverState& state,
                              const SolverConfig& config) {
  const Eigen::Index want_m = form == SenSvmForm::Scalar ? 1 : inst.n + 1;
  require(problem.n == inst.n && problem.m == want_m,
          "sen_svm: formulation does not match the requested form");

  const Vec qu = inst.q * state.u;
  const Vec q = dual_update(problem.cone, state.p, sen_svm_theta(inst, form, state.u, qu),
                            config.gamma, config.dual_bound);
  const Vec grad = inst.a.transpose() * (inst.a * state.u - inst.b);
  Vec zeta(inst.n);
  if (form == SenSvmForm::Scalar)
    zeta = grad + (2.0 * (1.0 - inst.alpha) * q[0]) * qu;
  else
    zeta = grad + ((2.0 * (1.0 - inst.alpha) * q[0]) * qu + inst.alpha * q.tail(inst.n));

  // The scalar form's subproblem is min a q0 |u|_1 + |u - (u_k - eps zeta)|^2
  // / (2 eps): a soft threshold whose weight vanishes gracefully with q0, so
  // a slack multiplier degrades the step to plain gradient descent. The cone
  // form has no nonsmooth part at all.
  auto trial = [&](double eps) {
    Vec v = state.u - eps * zeta;
    if (form == SenSvmForm::Scalar) return soft_threshold(v, eps * (inst.alpha * q[0]));
    return v;
  };

  if (config.step_mode == StepMode::Fixed) {
    commit_step(problem, state, config, q, trial(state.eps_k), state.eps_k);
    return;
  }
  // Same stall rule as the generic backtracking loop: a trial displaced by
  // at most rounding noise is already the fixed point, and its certificate
  // would be pure evaluation noise.
  const double stall = 16.0 * std::numeric_limits<double>::epsilon() *
                       (1.0 + state.u.lpNorm<Eigen::Infinity>());
  double eps = state.eps_k;
  for (int i = 0; i <= config.backtrack_cap; ++i) {
    const Vec u_trial = trial(eps);
    if ((u_trial - state.u).lpNorm<Eigen::Infinity>() <= stall) {
      commit_step(problem, state, config, q, u_trial, eps);
      return;
    }
    if (delta_certificate(problem, state.u, u_trial, q, eps, config.gamma).value >= 0.0) {
      commit_step(problem, state, config, q, u_trial, eps);
      return;
    }
    eps *= config.backtrack_eta;
  }
  throw InvalidProblem(
      "sen_svm: certificate stayed negative through the shrink cap; "
      "an oracle or its declared constants are inconsistent");
}

StepFn sen_svm_stepper(const SenSvmInstance& inst, SenSvmForm form) {
  return [&inst, form](const NccpProblem& pb, SolverState& st, const SolverConfig& cf) {
    sen_svm_closed_form_step(inst, form, pb, st, cf);
  };
}

}  // namespace nccp
