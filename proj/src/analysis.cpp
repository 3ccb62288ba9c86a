// NCCP - first-order primal-dual solvers for nonlinear convex cone programs
// Copyright 2026 NCCP Contributors
// Licensed under Apache 2.0

#include "nccp/analysis.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "nccp/lagrangian.hpp"

namespace nccp {

namespace {

void append_cell(std::string& row, const std::optional<double>& v) {
  row.push_back(',');
  if (!v) return;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", *v);
  row += buf;
}

bool has_schedule_columns(const std::vector<TraceRecord>& trace) {
  for (const auto& r : trace)
    if (r.a_k || r.b_k || r.rho_k) return true;
  return false;
}

}  // namespace

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace) {
  const bool extended = has_schedule_columns(trace);
  out << "iter,wall_time_s,obj,obj_ergodic,feas,feas_ergodic,dual_norm,eps_k,"
         "delta_k,lemma1_lhs,lemma1_rhs,kkt_res,dist_sq";
  if (extended) out << ",a_k,b_k,rho_k";
  out << '\n';
  for (const auto& r : trace) {
    std::string row = std::to_string(r.iter);
    append_cell(row, r.wall_time_s);
    append_cell(row, r.obj);
    append_cell(row, r.obj_ergodic);
    append_cell(row, r.feas);
    append_cell(row, r.feas_ergodic);
    append_cell(row, r.dual_norm);
    append_cell(row, r.eps_k);
    append_cell(row, r.delta_k);
    append_cell(row, r.lemma1_lhs);
    append_cell(row, r.lemma1_rhs);
    append_cell(row, r.kkt_res);
    append_cell(row, r.dist_sq);
    if (extended) {
      append_cell(row, r.a_k);
      append_cell(row, r.b_k);
      append_cell(row, r.rho_k);
    }
    out << row << '\n';
  }
}

void write_trace_json(std::ostream& out, const std::vector<TraceRecord>& trace) {
  using json = nlohmann::ordered_json;
  auto cell = [](const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
  };
  const bool extended = has_schedule_columns(trace);
  json rows = json::array();
  for (const auto& r : trace) {
    json row = {{"iter", r.iter},
                {"wall_time_s", cell(r.wall_time_s)},
                {"obj", r.obj},
                {"obj_ergodic", r.obj_ergodic},
                {"feas", r.feas},
                {"feas_ergodic", r.feas_ergodic},
                {"dual_norm", r.dual_norm},
                {"eps_k", r.eps_k},
                {"delta_k", cell(r.delta_k)},
                {"lemma1_lhs", cell(r.lemma1_lhs)},
                {"lemma1_rhs", cell(r.lemma1_rhs)},
                {"kkt_res", cell(r.kkt_res)},
                {"dist_sq", cell(r.dist_sq)}};
    if (extended) {
      row["a_k"] = cell(r.a_k);
      row["b_k"] = cell(r.b_k);
      row["rho_k"] = cell(r.rho_k);
    }
    rows.push_back(std::move(row));
  }
  out << rows.dump(2) << '\n';
}

double feasibility_residual(const ConeSpec& cone, const Vec& theta_u) {
  return project_dual(cone, theta_u).norm();
}

double kkt_residual(const NccpProblem& problem, const PrimalDual& w_prev,
                    const PrimalDual& w_next, const Vec& q_k, double eps_k, double gamma) {
  require(eps_k > 0.0 && gamma > 0.0, "kkt_residual: eps and gamma must be positive");
  const Vec& u = w_prev.u;
  const Vec& u_next = w_next.u;
  const Vec dp = w_next.p - q_k;
  Vec primal = problem.g.gradient(u_next) - problem.g.gradient(u);
  primal += problem.theta.omega_jtp(u_next, dp) +
            problem.theta.phi.jacobian_transpose_apply(u_next, dp);
  primal += problem.theta.omega_jtp(u_next, q_k) - problem.theta.omega_jtp(u, q_k);
  primal += (problem.core.gradient(u) - problem.core.gradient(u_next)) / eps_k;
  const Vec dual = (w_prev.p - w_next.p) / gamma;
  return std::sqrt(primal.squaredNorm() + dual.squaredNorm());
}

double generalized_distance(const BregmanCore& core, double gamma, double eps_k,
                            const PrimalDual& w, const PrimalDual& reference) {
  require(gamma > 0.0 && eps_k > 0.0, "generalized_distance: eps and gamma must be positive");
  const double d = bregman_distance(core, reference.u, w.u);
  return std::sqrt(d + eps_k / (2.0 * gamma) * (w.p - reference.p).squaredNorm());
}

double dual_bound_orthant(const NccpProblem& problem, const Vec& u_hat, double lower_bound) {
  const Vec theta = problem.theta_value(u_hat);
  require(theta.size() > 0, "dual_bound_orthant: empty constraint map");
  const double margin = -theta.maxCoeff();
  require(margin > 0.0, "dual_bound_orthant: point is not strictly feasible");
  const double gap = problem.objective(u_hat) - lower_bound;
  require(gap >= 0.0, "dual_bound_orthant: lower bound exceeds the objective value");
  return gap / margin;
}

double dual_bound_norm_cone(const NccpProblem& problem, const Vec& u_hat, double lower_bound,
                            NormExponent nu) {
  const Vec theta = problem.theta_value(u_hat);
  require(theta.size() >= 2, "dual_bound_norm_cone: map must have a scalar head and a tail");
  const Eigen::Index m = theta.size() - 1;
  const Vec tail = theta.tail(m);
  double tail_norm = 0.0;
  switch (nu) {
    case NormExponent::One: tail_norm = tail.lpNorm<1>(); break;
    case NormExponent::Two: tail_norm = tail.lpNorm<2>(); break;
    case NormExponent::Inf: tail_norm = tail.lpNorm<Eigen::Infinity>(); break;
  }
  const double margin = -theta[0] - tail_norm;
  require(margin > 0.0, "dual_bound_norm_cone: point is not strictly interior");
  const double gap = problem.objective(u_hat) - lower_bound;
  require(gap >= 0.0, "dual_bound_norm_cone: lower bound exceeds the objective value");
  double factor = 0.0;
  switch (nu) {
    case NormExponent::One:  // conjugate exponent infinite
      factor = std::sqrt(static_cast<double>(m));
      break;
    case NormExponent::Two:
      factor = std::sqrt(2.0);
      break;
    case NormExponent::Inf:  // conjugate exponent 1
      factor = 2.0;
      break;
  }
  return factor * gap / margin;
}

RateFit rate_fit_series(const std::vector<double>& iters, const std::vector<double>& values,
                        const std::string& metric, double k_lo, double k_hi,
                        bool fit_contraction) {
  require(iters.size() == values.size(), "rate_fit: series length mismatch");
  RateFit fit;
  fit.metric = metric;
  std::vector<double> xs, ys;
  bool saw_nonpositive = false;
  for (std::size_t i = 0; i < iters.size(); ++i) {
    const double k = iters[i];
    if (k < k_lo || k > k_hi || k <= 0.0) continue;
    if (values[i] <= 0.0) {
      saw_nonpositive = true;  // truncate: everything past an exact zero is noise
      break;
    }
    xs.push_back(std::log(k));
    ys.push_back(std::log(values[i]));
  }
  require(xs.size() >= 2, "rate_fit: window holds fewer than two positive points");
  fit.truncated = saw_nonpositive;
  fit.k_lo = static_cast<int>(std::exp(xs.front()) + 0.5);
  fit.k_hi = static_cast<int>(std::exp(xs.back()) + 0.5);
  const double n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  fit.loglog_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  if (fit_contraction) {
    // Geometric mean of successive ratios = exp(mean log-ratio).
    double acc = 0.0;
    for (std::size_t i = 1; i < ys.size(); ++i) acc += ys[i] - ys[i - 1];
    fit.contraction_ratio = std::exp(acc / static_cast<double>(ys.size() - 1));
  }
  return fit;
}

RateFit rate_fit(const std::vector<TraceRecord>& trace, const std::string& metric,
                 double k_lo, double k_hi, bool fit_contraction) {
  std::vector<double> iters, values;
  iters.reserve(trace.size());
  values.reserve(trace.size());
  auto pick = [&](const TraceRecord& r) -> std::optional<double> {
    if (metric == "obj") return r.obj;
    if (metric == "obj_ergodic") return r.obj_ergodic;
    if (metric == "feas") return r.feas;
    if (metric == "feas_ergodic") return r.feas_ergodic;
    if (metric == "dual_norm") return r.dual_norm;
    if (metric == "delta_k") return r.delta_k;
    if (metric == "kkt_res") return r.kkt_res;
    if (metric == "dist_sq") return r.dist_sq;
    throw InvalidProblem("rate_fit: unknown metric " + metric);
  };
  for (const auto& r : trace) {
    const auto v = pick(r);
    if (!v) continue;
    iters.push_back(static_cast<double>(r.iter));
    values.push_back(*v);
  }
  return rate_fit_series(iters, values, metric, k_lo, k_hi, fit_contraction);
}

double saddle_gap_estimate(const NccpProblem& problem, const PrimalDual& ergodic,
                           const std::vector<PrimalDual>& probes) {
  require(!probes.empty(), "saddle_gap_estimate: probe list is empty");
  double gap = -kInf;
  for (const auto& probe : probes) {
    const double val =
        lagrangian(problem, ergodic.u, probe.p) - lagrangian(problem, probe.u, ergodic.p);
    if (val > gap) gap = val;
  }
  return gap;
}

}  // namespace nccp
