// NCCP - first-order primal-dual solvers for nonlinear convex cone programs
// Copyright 2026 NCCP Contributors
// Licensed under Apache 2.0
//
// Convergence diagnostics shared by every solver variant: the per-iteration
// trace schema, feasibility and KKT residuals, generalized distances, dual
// norm bounds, empirical rate fits, and saddle-gap probes.

#ifndef NCCP_ANALYSIS_HPP_
#define NCCP_ANALYSIS_HPP_

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "nccp/oracles.hpp"
#include "nccp/types.hpp"

namespace nccp {

// One row per iteration. CSV column order:
//   iter,wall_time_s,obj,obj_ergodic,feas,feas_ergodic,dual_norm,eps_k,
//   delta_k,lemma1_lhs,lemma1_rhs,kkt_res,dist_sq
// plus a_k,b_k,rho_k when the accelerated variant fills them. Absent
// optionals serialize as empty cells (JSON: null).
struct TraceRecord {
  int iter = 0;
  std::optional<double> wall_time_s;
  double obj = 0.0;
  double obj_ergodic = 0.0;
  double feas = 0.0;
  double feas_ergodic = 0.0;
  double dual_norm = 0.0;
  double eps_k = 0.0;
  std::optional<double> delta_k;
  std::optional<double> lemma1_lhs;
  std::optional<double> lemma1_rhs;
  std::optional<double> kkt_res;
  std::optional<double> dist_sq;
  std::optional<double> a_k, b_k, rho_k;
};

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace);
void write_trace_json(std::ostream& out, const std::vector<TraceRecord>& trace);

// |proj_{C*}(theta)|: zero exactly when theta lies in -C.
double feasibility_residual(const ConeSpec& cone, const Vec& theta_u);

// Norm of the explicit element of the saddle subdifferential constructed from
// one step (u,p) -> (u+,p+) with its intermediate multiplier q and step eps:
//   primal block: grad G(u+) - grad G(u) + (d Theta(u+))'(p+ - q)
//                 + (d Omega(u+) - d Omega(u))' q + (grad K(u) - grad K(u+))/eps
//   dual block:   (p - p+)/gamma.
double kkt_residual(const NccpProblem& problem, const PrimalDual& w_prev,
                    const PrimalDual& w_next, const Vec& q_k, double eps_k, double gamma);

// [D(u*, u) + eps/(2 gamma) |p - p*|^2]^{1/2} against a reference saddle point.
double generalized_distance(const BregmanCore& core, double gamma, double eps_k,
                            const PrimalDual& w, const PrimalDual& reference);

// Multiplier norm bound from a strictly feasible point and an objective lower
// bound. Orthant cone: gap / min_j(-Theta_j(u_hat)).
double dual_bound_orthant(const NccpProblem& problem, const Vec& u_hat, double lower_bound);

// Norm-cone version: factor(nu, m) * gap / (-theta_0 - |theta_bar|_nu) with
// factor = m^{max((w-2)/(2w),0)} * 2^{1/w}, w the conjugate exponent of nu and
// m the dimension of theta_bar.
double dual_bound_norm_cone(const NccpProblem& problem, const Vec& u_hat, double lower_bound,
                            NormExponent nu);

struct RateFit {
  std::string metric;
  int k_lo = 0, k_hi = 0;             // window actually used
  double loglog_slope = 0.0;          // least-squares slope of log y vs log k
  std::optional<double> contraction_ratio;  // geometric mean of successive ratios
  bool truncated = false;             // window shrank at a nonpositive value
};

// Fit on a raw positive series indexed by iteration numbers.
RateFit rate_fit_series(const std::vector<double>& iters, const std::vector<double>& values,
                        const std::string& metric, double k_lo, double k_hi,
                        bool fit_contraction = false);

// Fit on a trace column; metric is one of: obj, obj_ergodic, feas,
// feas_ergodic, dual_norm, delta_k, kkt_res, dist_sq.
RateFit rate_fit(const std::vector<TraceRecord>& trace, const std::string& metric,
                 double k_lo, double k_hi, bool fit_contraction = false);

// max over probes (u,p) of L(u_bar, p) - L(u, p_bar): a lower bound on the
// saddle gap of the ergodic pair.
double saddle_gap_estimate(const NccpProblem& problem, const PrimalDual& ergodic,
                           const std::vector<PrimalDual>& probes);

}  // namespace nccp

#endif  // NCCP_ANALYSIS_HPP_
