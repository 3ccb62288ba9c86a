// NCCP - first-order primal-dual solvers for nonlinear convex cone programs
// Copyright 2026 NCCP Contributors
// Licensed under Apache 2.0

#include "nccp/lagrangian.hpp"

#include <cmath>

#include "nccp/subproblem.hpp"

namespace nccp {

double lagrangian(const NccpProblem& problem, const Vec& u, const Vec& p) {
  return problem.objective(u) + p.dot(problem.theta_value(u));
}

double cone_penalty(const ConeSpec& cone, const Vec& theta, const Vec& p, double gamma) {
  require(gamma > 0.0, "cone_penalty: gamma must be positive");
  const Vec shifted = project_dual(cone, p + gamma * theta);
  return (shifted.squaredNorm() - p.squaredNorm()) / (2.0 * gamma);
}

Vec cone_penalty_gradient(const ConeSpec& cone, const Vec& theta, const Vec& p, double gamma) {
  require(gamma > 0.0, "cone_penalty: gamma must be positive");
  return project_dual(cone, p + gamma * theta);
}

double aug_lagrangian(const NccpProblem& problem, const Vec& u, const Vec& p, double gamma) {
  return problem.objective(u) + cone_penalty(problem.cone, problem.theta_value(u), p, gamma);
}

DualValueResult dual_value_approx(const NccpProblem& problem, const Vec& p, double gamma,
                                  double eps0, double tol, int max_iter) {
  require(eps0 > 0.0 && gamma > 0.0, "dual_value_approx: eps0 and gamma must be positive");
  DualValueResult result;
  Vec u = problem.set.project(Vec::Zero(problem.n));
  double value = aug_lagrangian(problem, u, p, gamma);
  double eps = eps0;
  const double inner_tol = std::min(1e-10, tol * 1e-2);
  for (int k = 0; k < max_iter; ++k) {
    const Vec q = cone_penalty_gradient(problem.cone, problem.theta_value(u), p, gamma);
    const Vec linear = problem.g.gradient(u) + problem.theta.omega_jtp(u, q);
    Vec u_next;
    double value_next = 0.0;
    bool decreased = false;
    for (int trial = 0; trial < 60; ++trial) {
      u_next = solve_linearized_subproblem(problem, u, linear, q, eps, inner_tol).u;
      value_next = aug_lagrangian(problem, u_next, p, gamma);
      if (value_next <= value + 1e-12 * (1.0 + std::abs(value))) {
        decreased = true;
        break;
      }
      eps *= 0.5;
    }
    require(decreased, "dual_value_approx: no descent step found");
    result.iterations = k + 1;
    const double move = (u - u_next).norm() / eps;
    u = u_next;
    value = value_next;
    if (move <= tol) {
      result.converged = true;
      break;
    }
  }
  result.value = value;
  result.minimizer = u;
  return result;
}

}  // namespace nccp
