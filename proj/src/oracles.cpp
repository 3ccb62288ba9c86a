// NCCP - first-order primal-dual solvers for nonlinear convex cone programs
// Copyright 2026 NCCP Contributors
// Licensed under Apache 2.0

#include "nccp/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "nccp/linalg.hpp"

namespace nccp {

SmoothOracle SmoothOracle::zero(Eigen::Index n) {
  SmoothOracle o;
  o.value = [](const Vec&) { return 0.0; };
  o.gradient = [n](const Vec&) { return Vec::Zero(n); };
  o.lipschitz_grad = 0.0;
  o.strong_convexity = 0.0;
  return o;
}

SmoothOracle SmoothOracle::quadratic(const Mat& P, const Vec& c) {
  require(P.rows() == P.cols() && P.rows() == c.size(), "quadratic oracle: shape mismatch");
  const Mat S = 0.5 * (P + P.transpose());
  const auto [lo, hi] = sym_eig_bounds(S);
  require(lo >= -1e-10, "quadratic oracle: matrix must be positive semidefinite");
  SmoothOracle o;
  o.value = [S, c](const Vec& u) { return 0.5 * u.dot(S * u) + c.dot(u); };
  o.gradient = [S, c](const Vec& u) { return Vec(S * u + c); };
  o.lipschitz_grad = std::max(hi, 0.0);
  o.strong_convexity = std::max(lo, 0.0);
  return o;
}

SmoothOracle SmoothOracle::least_squares(const Mat& A, const Vec& b) {
  require(A.rows() == b.size(), "least_squares oracle: shape mismatch");
  const Mat gram = A.transpose() * A;
  const auto [lo, hi] = sym_eig_bounds(gram);
  SmoothOracle o;
  o.value = [A, b](const Vec& u) { return 0.5 * (A * u - b).squaredNorm(); };
  o.gradient = [A, b](const Vec& u) { return Vec(A.transpose() * (A * u - b)); };
  o.lipschitz_grad = std::max(hi, 0.0);
  o.strong_convexity = std::max(lo, 0.0);
  return o;
}

NonsmoothOracle NonsmoothOracle::zero() {
  NonsmoothOracle o;
  o.value = [](const Vec&) { return 0.0; };
  o.prox_kind = ProxKind::Zero;
  return o;
}

NonsmoothOracle NonsmoothOracle::l1(double weight, double ridge) {
  require(weight >= 0.0 && ridge >= 0.0, "l1 oracle: weights must be nonnegative");
  NonsmoothOracle o;
  o.value = [weight, ridge](const Vec& u) {
    double v = weight * u.lpNorm<1>();
    if (ridge > 0.0) v += 0.5 * ridge * u.squaredNorm();
    return v;
  };
  o.prox_kind = ProxKind::L1;
  o.l1_weight = weight;
  o.ridge = ridge;
  return o;
}

NonsmoothOracle NonsmoothOracle::custom(std::function<double(const Vec&)> value,
                                        std::function<Vec(double, const Vec&)> prox) {
  NonsmoothOracle o;
  o.value = std::move(value);
  o.prox = std::move(prox);
  o.prox_kind = ProxKind::Custom;
  return o;
}

Vec PhiOracle::value(const Vec& u) const {
  switch (kind) {
    case PhiKind::Zero: return Vec::Zero(out_dim);
    case PhiKind::Linear: return A * u + b;
    case PhiKind::SeparableL1: return l1_coeff * u.lpNorm<1>();
    case PhiKind::Custom: return value_fn(u);
  }
  return Vec::Zero(out_dim);
}

Vec PhiOracle::jacobian_transpose_apply(const Vec& u, const Vec& p) const {
  switch (kind) {
    case PhiKind::Zero: return Vec::Zero(u.size());
    case PhiKind::Linear: return A.transpose() * p;
    case PhiKind::SeparableL1: {
      const double w = l1_coeff.dot(p);
      return Vec(w * u.array().sign().matrix());
    }
    case PhiKind::Custom: return jtp_fn(u, p);
  }
  return Vec::Zero(u.size());
}

PhiOracle PhiOracle::zero(Eigen::Index m) {
  PhiOracle o;
  o.kind = PhiKind::Zero;
  o.out_dim = m;
  return o;
}

PhiOracle PhiOracle::linear(const Mat& A, const Vec& b) {
  require(A.rows() == b.size(), "linear Phi: shape mismatch");
  PhiOracle o;
  o.kind = PhiKind::Linear;
  o.out_dim = A.rows();
  o.A = A;
  o.b = b;
  return o;
}

PhiOracle PhiOracle::separable_l1(const Vec& coeff) {
  require(coeff.minCoeff() >= 0.0, "separable_l1 Phi: coefficients must be nonnegative");
  PhiOracle o;
  o.kind = PhiKind::SeparableL1;
  o.out_dim = coeff.size();
  o.l1_coeff = coeff;
  return o;
}

Vec ConeMapOracle::theta(const Vec& u) const {
  Vec v = omega(u);
  if (phi.kind != PhiKind::Zero) v += phi.value(u);
  return v;
}

ConeMapOracle ConeMapOracle::affine(const Mat& A, const Vec& b) {
  require(A.rows() == b.size(), "affine map: shape mismatch");
  ConeMapOracle o;
  o.out_dim = A.rows();
  o.omega = [A, b](const Vec& u) { return Vec(A * u - b); };
  o.omega_jtp = [A](const Vec&, const Vec& p) { return Vec(A.transpose() * p); };
  o.phi = PhiOracle::zero(A.rows());
  o.theta_lipschitz = spectral_norm(A);
  o.b_omega = 0.0;
  o.b_omega_components = Vec::Zero(A.rows());
  o.c_convex_certified = true;  // affine maps are C-convex for every cone
  return o;
}

double aggregate_b_omega(const Vec& components, double radius) {
  require(radius >= 0.0, "aggregate_b_omega: radius must be nonnegative");
  require(components.size() == 0 || components.minCoeff() >= 0.0,
          "aggregate_b_omega: component bounds must be nonnegative");
  return radius * components.sum();
}

Vec FeasibleSet::project(const Vec& u) const {
  require(u.size() == dim, "feasible set projection: dimension mismatch");
  switch (kind) {
    case SetKind::Full: return u;
    case SetKind::Box: return u.cwiseMax(lo).cwiseMin(hi);
    case SetKind::Ball: {
      const Vec d = u - center;
      const double n = d.norm();
      if (n <= radius) return u;
      return center + (radius / n) * d;
    }
    case SetKind::Blocks: {
      Vec out(dim);
      Eigen::Index off = 0;
      for (const auto& blk : blocks) {
        out.segment(off, blk.dim) = blk.project(u.segment(off, blk.dim));
        off += blk.dim;
      }
      return out;
    }
  }
  return u;
}

bool FeasibleSet::contains(const Vec& u, double tol) const {
  return (project(u) - u).norm() <= tol;
}

FeasibleSet FeasibleSet::full(Eigen::Index n) {
  FeasibleSet s;
  s.kind = SetKind::Full;
  s.dim = n;
  return s;
}

FeasibleSet FeasibleSet::box(Vec lo, Vec hi) {
  require(lo.size() == hi.size(), "box set: bound sizes differ");
  require((hi - lo).minCoeff() >= 0.0, "box set: needs lo <= hi");
  FeasibleSet s;
  s.kind = SetKind::Box;
  s.dim = lo.size();
  s.lo = std::move(lo);
  s.hi = std::move(hi);
  return s;
}

FeasibleSet FeasibleSet::ball(Vec center, double radius) {
  require(radius >= 0.0, "ball set: radius must be nonnegative");
  FeasibleSet s;
  s.kind = SetKind::Ball;
  s.dim = center.size();
  s.center = std::move(center);
  s.radius = radius;
  return s;
}

FeasibleSet FeasibleSet::product(std::vector<FeasibleSet> blocks) {
  FeasibleSet s;
  s.kind = SetKind::Blocks;
  s.dim = 0;
  for (const auto& b : blocks) s.dim += b.dim;
  s.blocks = std::move(blocks);
  return s;
}

double BregmanCore::value(const Vec& u) const {
  switch (kind) {
    case CoreKind::HalfSquared: return 0.5 * u.squaredNorm();
    case CoreKind::Diagonal: return 0.5 * (weights.array() * u.array().square()).sum();
    case CoreKind::Custom: return k_value(u);
  }
  return 0.0;
}

Vec BregmanCore::gradient(const Vec& u) const {
  switch (kind) {
    case CoreKind::HalfSquared: return u;
    case CoreKind::Diagonal: return Vec(weights.cwiseProduct(u));
    case CoreKind::Custom: return k_gradient(u);
  }
  return u;
}

BregmanCore BregmanCore::half_squared() { return BregmanCore{}; }

BregmanCore BregmanCore::diagonal(Vec w) {
  require(w.size() > 0 && w.minCoeff() > 0.0, "diagonal core: weights must be positive");
  BregmanCore c;
  c.kind = CoreKind::Diagonal;
  c.beta = w.minCoeff();
  c.smoothness = w.maxCoeff();
  c.weights = std::move(w);
  return c;
}

BregmanCore BregmanCore::custom(std::function<double(const Vec&)> value,
                                std::function<Vec(const Vec&)> gradient, double beta,
                                double smoothness) {
  require(beta > 0.0 && smoothness >= beta, "custom core: needs 0 < beta <= smoothness");
  BregmanCore c;
  c.kind = CoreKind::Custom;
  c.k_value = std::move(value);
  c.k_gradient = std::move(gradient);
  c.beta = beta;
  c.smoothness = smoothness;
  return c;
}

double bregman_distance(const BregmanCore& core, const Vec& u, const Vec& v) {
  switch (core.kind) {
    case CoreKind::HalfSquared: return 0.5 * (u - v).squaredNorm();
    case CoreKind::Diagonal:
      return 0.5 * (core.weights.array() * (u - v).array().square()).sum();
    case CoreKind::Custom:
      return core.k_value(u) - core.k_value(v) - core.k_gradient(v).dot(u - v);
  }
  return 0.0;
}

NccpProblem normalize_strong_convexity(const NccpProblem& problem) {
  if (problem.j.prox_kind != ProxKind::L1 || problem.j.ridge <= 0.0) return problem;
  NccpProblem out = problem;
  const double r = problem.j.ridge;
  const SmoothOracle g_old = problem.g;
  out.g.value = [g_old, r](const Vec& u) { return g_old.value(u) + 0.5 * r * u.squaredNorm(); };
  out.g.gradient = [g_old, r](const Vec& u) { return Vec(g_old.gradient(u) + r * u); };
  if (g_old.lipschitz_grad) out.g.lipschitz_grad = *g_old.lipschitz_grad + r;
  out.g.strong_convexity = g_old.strong_convexity.value_or(0.0) + r;
  out.j = NonsmoothOracle::l1(problem.j.l1_weight, 0.0);
  return out;
}

bool ValidationReport::all_passed() const {
  return std::all_of(items.begin(), items.end(),
                     [](const ValidationItem& i) { return i.passed; });
}

namespace {

Vec gaussian(std::mt19937_64& rng, Eigen::Index n, double scale) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = scale * g(rng);
  return v;
}

}  // namespace

ValidationReport validate_problem(const NccpProblem& problem, int samples,
                                  std::uint64_t seed) {
  ValidationReport report;
  std::mt19937_64 rng(seed);
  const Eigen::Index n = problem.n;

  auto push = [&report](const std::string& name, double worst, double tol) {
    report.items.push_back({name, worst <= tol, worst});
  };

  {
    double bad = 0.0;
    if (problem.set.dim != n) bad = 1.0;
    if (problem.cone.dim != problem.m) bad = 1.0;
    if (problem.theta.out_dim != problem.m) bad = 1.0;
    const Vec probe = problem.set.project(Vec::Zero(n));
    if (problem.theta_value(probe).size() != problem.m) bad = 1.0;
    if (problem.g.gradient(probe).size() != n) bad = 1.0;
    push("dimensions", bad, 0.0);
  }

  auto draw_point = [&](double scale) { return problem.set.project(gaussian(rng, n, scale)); };

  {  // finite-difference directional derivative of G
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
      const Vec u = draw_point(1.5);
      Vec d = gaussian(rng, n, 1.0);
      d.normalize();
      const double h = 1e-6 * std::max(1.0, u.norm());
      const double fd = (problem.g.value(u + h * d) - problem.g.value(u - h * d)) / (2.0 * h);
      const double an = problem.g.gradient(u).dot(d);
      worst = std::max(worst, std::abs(fd - an) / std::max(1.0, std::abs(an)));
    }
    push("smooth_gradient_fd", worst, 1e-5);
  }

  {  // convexity and the declared curvature bound of G
    double worst_cvx = 0.0, worst_descent = 0.0;
    const double bg = problem.g.lipschitz_grad.value_or(kInf);
    const double sc = problem.g.strong_convexity.value_or(0.0);
    for (int s = 0; s < samples; ++s) {
      const Vec u = draw_point(1.5);
      const Vec v = draw_point(1.5);
      const double gap =
          problem.g.value(v) - problem.g.value(u) - problem.g.gradient(u).dot(v - u);
      worst_cvx = std::max(worst_cvx, 0.5 * sc * (v - u).squaredNorm() - gap);
      if (std::isfinite(bg)) {
        worst_descent = std::max(worst_descent, gap - 0.5 * bg * (v - u).squaredNorm());
      }
    }
    push("smooth_convexity", worst_cvx, 1e-8);
    if (std::isfinite(bg)) push("smooth_curvature_bound", worst_descent, 1e-8);
  }

  // C-convexity of Theta: the convexity defect must lie in -C. Maps carrying
  // a structural certificate skip the sampling.
  if (!problem.theta.c_convex_certified) {
    double worst = 0.0;
    std::uniform_real_distribution<double> unif(0.05, 0.95);
    for (int s = 0; s < samples; ++s) {
      const Vec u = draw_point(1.5);
      const Vec v = draw_point(1.5);
      const double lam = unif(rng);
      const Vec mid = problem.set.project(lam * u + (1.0 - lam) * v);
      // Projection keeps mid in U; for convex U the combination already is.
      const Vec defect = problem.theta_value(mid) - lam * problem.theta_value(u) -
                         (1.0 - lam) * problem.theta_value(v);
      worst = std::max(worst, project_dual(problem.cone, defect).norm());
    }
    push("theta_c_convexity", worst, 1e-8);
  }

  if (problem.theta.theta_lipschitz) {  // Lipschitz bound of Theta
    const double tau = *problem.theta.theta_lipschitz;
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
      const Vec u = draw_point(1.5);
      const Vec v = draw_point(1.5);
      const double lhs = (problem.theta_value(u) - problem.theta_value(v)).norm();
      const double rhs = tau * (u - v).norm();
      worst = std::max(worst, (lhs - rhs) / std::max(1.0, rhs));
    }
    push("theta_lipschitz", worst, 1e-8);
  }

  {  // curvature of <p, Omega(.)> for unit duals
    double bound = kInf;
    if (problem.theta.b_omega_components.size() > 0) {
      bound = aggregate_b_omega(problem.theta.b_omega_components, 1.0);
    } else if (problem.theta.b_omega) {
      bound = *problem.theta.b_omega;
    }
    if (std::isfinite(bound)) {
      double worst = 0.0;
      for (int s = 0; s < samples; ++s) {
        const Vec u = draw_point(1.5);
        const Vec v = draw_point(1.5);
        Vec p = project_dual(problem.cone, gaussian(rng, problem.m, 1.0));
        const double pn = p.norm();
        if (pn > 1e-12) p /= pn;
        const double gap = p.dot(problem.theta.omega(v) - problem.theta.omega(u)) -
                           problem.theta.omega_jtp(u, p).dot(v - u);
        worst = std::max(worst, gap - 0.5 * bound * (v - u).squaredNorm());
      }
      push("omega_curvature_bound", worst, 1e-8);
    }
  }

  {  // Bregman sandwich between the squared-norm envelopes
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
      const Vec u = gaussian(rng, n, 2.0);
      const Vec v = gaussian(rng, n, 2.0);
      const double d = bregman_distance(problem.core, u, v);
      const double sq = 0.5 * (u - v).squaredNorm();
      worst = std::max(worst, problem.core.beta * sq - d);
      worst = std::max(worst, d - problem.core.smoothness * sq);
    }
    push("bregman_sandwich", worst, 1e-8);
  }

  {  // feasible-set projection sanity
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
      const Vec x = gaussian(rng, n, 3.0);
      const Vec y = gaussian(rng, n, 3.0);
      const Vec px = problem.set.project(x);
      const Vec py = problem.set.project(y);
      worst = std::max(worst, (problem.set.project(px) - px).norm());
      worst = std::max(worst, (px - py).norm() - (x - y).norm());
    }
    push("set_projection", worst, 1e-10);
  }

  {  // J: declared form and midpoint convexity
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
      const Vec u = gaussian(rng, n, 2.0);
      const Vec v = gaussian(rng, n, 2.0);
      if (problem.j.prox_kind == ProxKind::L1) {
        const double expect =
            problem.j.l1_weight * u.lpNorm<1>() + 0.5 * problem.j.ridge * u.squaredNorm();
        worst = std::max(worst, std::abs(problem.j.value(u) - expect));
      }
      const double mid = problem.j.value(0.5 * (u + v));
      worst = std::max(worst, mid - 0.5 * (problem.j.value(u) + problem.j.value(v)));
    }
    push("nonsmooth_value", worst, 1e-8);
  }

  return report;
}

}  // namespace nccp
