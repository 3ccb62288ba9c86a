// NCCP - first-order primal-dual solvers for nonlinear convex cone programs
// Copyright 2026 NCCP Contributors
// Licensed under Apache 2.0
//
// Saddle-point functions built on a problem instance: the Lagrangian
//
//   L(u, p) = G(u) + J(u) + <p, Theta(u)>,     p in C*,
//
// its augmented counterpart
//
//   L_gamma(u, p) = G(u) + J(u) + phi(Theta(u), p),
//   phi(theta, p) = (|proj_{C*}(p + gamma theta)|^2 - |p|^2) / (2 gamma),
//
// and an inner routine approximating the dual function
// psi_gamma(p) = min_{u in U} L_gamma(u, p).

#ifndef NCCP_LAGRANGIAN_HPP_
#define NCCP_LAGRANGIAN_HPP_

#include "nccp/oracles.hpp"
#include "nccp/types.hpp"

namespace nccp {

double lagrangian(const NccpProblem& problem, const Vec& u, const Vec& p);

// phi(theta, p) above; smooth in theta with gradient proj_{C*}(p + gamma theta).
double cone_penalty(const ConeSpec& cone, const Vec& theta, const Vec& p, double gamma);
Vec cone_penalty_gradient(const ConeSpec& cone, const Vec& theta, const Vec& p, double gamma);

double aug_lagrangian(const NccpProblem& problem, const Vec& u, const Vec& p, double gamma);

struct DualValueResult {
  double value = 0.0;  // L_gamma at the final iterate; >= psi_gamma(p) - tol slack
  Vec minimizer;
  int iterations = 0;
  bool converged = false;
};

// Minimizes L_gamma(., p) for a frozen multiplier by successive linearized
// proximal steps, shrinking the step size until each step is a descent step.
// Stops once the scaled displacement |u - u_next| / eps falls below tol.
DualValueResult dual_value_approx(const NccpProblem& problem, const Vec& p, double gamma,
                                  double eps0, double tol, int max_iter);

}  // namespace nccp

#endif  // NCCP_LAGRANGIAN_HPP_
