// NCCP - first-order primal-dual solvers for nonlinear convex cone programs
// Copyright 2026 NCCP Contributors
// Licensed under Apache 2.0
//
// Solver for the linearized proximal subproblem
//
//   minimize_{u in U}  <c, u> + J(u) + <q, Phi(u)> + (1/eps) D(u, anchor),
//
// the primal step of every scheme in this library.  Separable structure
// (coordinatewise nonsmooth terms, box/full/block feasible sets, diagonal
// cores) is solved in closed form; everything else falls back to an
// accelerated projected proximal-gradient loop whose accuracy is measured
// by the norm of the proximal-gradient mapping.

#ifndef NCCP_SUBPROBLEM_HPP_
#define NCCP_SUBPROBLEM_HPP_

#include "nccp/oracles.hpp"
#include "nccp/types.hpp"

namespace nccp {

struct SubproblemResult {
  Vec u;
  double residual = 0.0;   // stationarity residual (0 for closed-form solves)
  int iterations = 0;      // inner iterations (0 for closed-form solves)
  bool closed_form = true;
};

// Number of worker threads for block-separable solves, from NCCP_THREADS
// (values < 2 mean serial).  Results are identical either way.
int block_thread_count();

SubproblemResult solve_linearized_subproblem(const NccpProblem& problem, const Vec& anchor,
                                             const Vec& linear, const Vec& q, double eps,
                                             double inner_tol);

}  // namespace nccp

#endif  // NCCP_SUBPROBLEM_HPP_
