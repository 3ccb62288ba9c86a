// NCCP - first-order primal-dual solvers for nonlinear convex cone programs
// Copyright 2026 NCCP Contributors
// Licensed under Apache 2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nccp/analysis.hpp"
#include "nccp/lagrangian.hpp"
#include "nccp/vapp_core.hpp"
#include "support/instances.hpp"

using namespace nccp;
using nccp::testing::one_dim_instance;
using nccp::testing::random_inequality_instance;

namespace {

// A constant constraint map Theta(u) == target with a constant objective,
// for pinning the dual-bound formulas by hand.
NccpProblem constant_map_instance(double objective_value, const Vec& theta_target,
                                  const ConeSpec& cone) {
  NccpProblem prob;
  prob.n = 1;
  prob.m = theta_target.size();
  prob.g = SmoothOracle::quadratic(Mat::Zero(1, 1), Vec::Constant(1, objective_value));
  prob.j = NonsmoothOracle::zero();
  prob.theta = ConeMapOracle::affine(Mat::Zero(theta_target.size(), 1), -theta_target);
  prob.cone = cone;
  prob.set = FeasibleSet::full(1);
  return prob;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  cells.push_back(cur);
  return cells;
}

}  // namespace

TEST_CASE("feasibility residual worked values") {
  const ConeSpec orthant2 = ConeSpec::nonneg_orthant(2);
  Vec feasible(2);
  feasible << -1.0, -3.0;
  CHECK(feasibility_residual(orthant2, feasible) == 0.0);

  Vec violated(2);
  violated << 2.0, -1.0;  // only the positive coordinate survives projection
  CHECK(feasibility_residual(orthant2, violated) == doctest::Approx(2.0).epsilon(1e-15));

  // Second-order cone, theta = (0, 3, 4): projection (2.5, 1.5, 2.0).
  const ConeSpec soc3 = ConeSpec::norm_cone(NormExponent::Two, 3);
  Vec theta(3);
  theta << 0.0, 3.0, 4.0;
  CHECK(feasibility_residual(soc3, theta) ==
        doctest::Approx(2.5 * std::sqrt(2.0)).epsilon(1e-14));

  // Zero cone: the dual is everything, so the residual is the plain norm.
  Vec eq(2);
  eq << 0.3, -0.4;
  CHECK(feasibility_residual(ConeSpec::zero(2), eq) == doctest::Approx(0.5).epsilon(1e-15));

  // Product: each factor contributes its own block.
  const ConeSpec prod = ConeSpec::product({ConeSpec::nonneg_orthant(2), ConeSpec::zero(1)});
  Vec mixed(3);
  mixed << 2.0, -1.0, 0.3;
  CHECK(feasibility_residual(prod, mixed) ==
        doctest::Approx(std::sqrt(4.09)).epsilon(1e-14));
}

TEST_CASE("kkt residual on the worked one-dimensional step") {
  const NccpProblem prob = one_dim_instance();
  // Step (0,0) -> (0.5,-0.5) with anchor q = -1, eps = 0.5, gamma = 1:
  // primal block (0.5-0) + 1*(-0.5+1) + 0 + (0-0.5)/0.5 = 0, dual block 0.5.
  const PrimalDual w_prev{Vec::Zero(1), Vec::Zero(1)};
  const PrimalDual w_next{Vec::Constant(1, 0.5), Vec::Constant(1, -0.5)};
  CHECK(kkt_residual(prob, w_prev, w_next, Vec::Constant(1, -1.0), 0.5, 1.0) ==
        doctest::Approx(0.5).epsilon(1e-15));

  // Fixed point: every difference vanishes.
  const PrimalDual star{Vec::Ones(1), -Vec::Ones(1)};
  CHECK(kkt_residual(prob, star, star, -Vec::Ones(1), 0.5, 1.0) == 0.0);

  CHECK_THROWS_AS(kkt_residual(prob, w_prev, w_next, Vec::Constant(1, -1.0), 0.0, 1.0),
                  InvalidProblem);
}

TEST_CASE("kkt residual obeys the curvature bound along runs") {
  // |v|^2 <= a |u - u+|^2 + b |p - p+|^2 with
  // a = (B_G + gamma tau^2 + B_Omega + B/eps)^2 and b = 1/gamma^2.
  struct Setup {
    std::uint64_t seed;
    double l1;
    std::optional<double> bound;
  };
  const std::vector<Setup> setups = {{11, 0.0, std::nullopt},
                                     {12, 0.1, std::nullopt},
                                     {13, 0.0, 4.0}};
  for (const auto& setup : setups) {
    CAPTURE(setup.seed);
    const NccpProblem prob = random_inequality_instance(6, 4, setup.seed, setup.l1);
    SolverConfig config;
    config.gamma = 1.0;
    config.dual_bound = setup.bound;
    const ProblemConstants constants = derive_constants(prob, config);
    REQUIRE(constants.complete());

    SolverState state = init_state(prob, config);
    const double eps = state.eps_k;
    const double a_coef = std::pow(*constants.b_g + config.gamma * *constants.tau * *constants.tau +
                                       *constants.b_omega + constants.core_smoothness / eps,
                                   2.0);
    const double b_coef = 1.0 / (config.gamma * config.gamma);
    double first = 0.0, last = 0.0;
    for (int k = 0; k < 200; ++k) {
      vapp_step(prob, state, config);
      const double res = kkt_residual(prob, {state.u_prev, state.p_prev}, {state.u, state.p},
                                      state.q, state.eps_k, config.gamma);
      const double du2 = (state.u - state.u_prev).squaredNorm();
      const double dp2 = (state.p - state.p_prev).squaredNorm();
      CHECK(res * res <= a_coef * du2 + b_coef * dp2 + 1e-9);
      if (k == 0) first = res;
      last = res;
    }
    CHECK(last < 0.05 * first);  // residual drains as the iterates settle
  }
}

TEST_CASE("generalized distance arithmetic and sandwich") {
  const BregmanCore half = BregmanCore::half_squared();
  const PrimalDual ref{Vec::Ones(2), Vec::Ones(2)};
  CHECK(generalized_distance(half, 1.0, 0.5, ref, ref) == 0.0);

  // eps = 2 gamma: value^2 = 0.5 |du|^2 + |dp|^2 = 12.5 + 2 = 14.5.
  PrimalDual w;
  w.u = Vec(2);
  w.u << 4.0, 5.0;
  w.p = Vec(2);
  w.p << 2.0, 0.0;
  PrimalDual base;
  base.u = Vec(2);
  base.u << 1.0, 1.0;
  base.p = Vec(2);
  base.p << 1.0, 1.0;
  CHECK(generalized_distance(half, 1.0, 2.0, w, base) ==
        doctest::Approx(std::sqrt(14.5)).epsilon(1e-14));

  // b1 dist <= dist_{D,eps} <= b2 dist with b1 = sqrt(min(beta/2, eps/2g)),
  // b2 = sqrt(max(B/2, eps/2g)).
  Vec weights(3);
  weights << 0.5, 1.0, 2.0;
  const BregmanCore diag = BregmanCore::diagonal(weights);
  const double eps = 0.8, gamma = 2.0;
  const double b1 = std::sqrt(std::min(diag.beta / 2.0, eps / (2.0 * gamma)));
  const double b2 = std::sqrt(std::max(diag.smoothness / 2.0, eps / (2.0 * gamma)));
  std::mt19937_64 rng(21);
  std::normal_distribution<double> gauss(0.0, 1.0);
  PrimalDual anchor{Vec::Zero(3), Vec::Zero(3)};
  for (int rep = 0; rep < 100; ++rep) {
    PrimalDual probe;
    probe.u = Vec(3);
    probe.p = Vec(3);
    for (int i = 0; i < 3; ++i) probe.u[i] = 3.0 * gauss(rng);
    for (int i = 0; i < 3; ++i) probe.p[i] = 3.0 * gauss(rng);
    const double plain =
        std::sqrt((probe.u - anchor.u).squaredNorm() + (probe.p - anchor.p).squaredNorm());
    const double value = generalized_distance(diag, gamma, eps, probe, anchor);
    CHECK(value >= b1 * plain - 1e-12);
    CHECK(value <= b2 * plain + 1e-12);
  }
}

TEST_CASE("orthant dual bound") {
  Vec target(2);
  target << -1.0, -2.0;
  const NccpProblem prob = constant_map_instance(5.0, target, ConeSpec::nonneg_orthant(2));
  const Vec u_hat = Vec::Ones(1);
  // gap 5, tightest margin min(1, 2) = 1.
  CHECK(dual_bound_orthant(prob, u_hat, 0.0) == doctest::Approx(5.0).epsilon(1e-15));
  // Zero gap certifies the zero multiplier.
  CHECK(dual_bound_orthant(prob, u_hat, 5.0) == 0.0);

  Vec touching(2);
  touching << 0.0, -2.0;
  const NccpProblem bad = constant_map_instance(5.0, touching, ConeSpec::nonneg_orthant(2));
  CHECK_THROWS_AS(dual_bound_orthant(bad, u_hat, 0.0), InvalidProblem);
  CHECK_THROWS_AS(dual_bound_orthant(prob, u_hat, 6.0), InvalidProblem);
}

TEST_CASE("norm cone dual bounds") {
  // nu = 2 (conjugate 2): factor sqrt(2); gap 3, margin 1.
  Vec soc_target(2);
  soc_target << -1.0, 0.0;
  const NccpProblem soc_prob =
      constant_map_instance(3.0, soc_target, ConeSpec::norm_cone(NormExponent::Two, 2));
  const Vec u_hat = Vec::Ones(1);
  CHECK(dual_bound_norm_cone(soc_prob, u_hat, 0.0, NormExponent::Two) ==
        doctest::Approx(3.0 * std::sqrt(2.0)).epsilon(1e-14));

  // nu = 1 (conjugate infinity): factor sqrt(m) with m = 4; gap 6, margin 2.
  Vec l1_target(5);
  l1_target << -2.0, 0.0, 0.0, 0.0, 0.0;
  const NccpProblem l1_prob =
      constant_map_instance(6.0, l1_target, ConeSpec::norm_cone(NormExponent::One, 5));
  CHECK(dual_bound_norm_cone(l1_prob, u_hat, 0.0, NormExponent::One) ==
        doctest::Approx(6.0).epsilon(1e-14));

  // nu = inf (conjugate 1): factor 2; gap 5, margin 3 - 0.5.
  Vec linf_target(3);
  linf_target << -3.0, 0.5, -0.5;
  const NccpProblem linf_prob =
      constant_map_instance(5.0, linf_target, ConeSpec::norm_cone(NormExponent::Inf, 3));
  CHECK(dual_bound_norm_cone(linf_prob, u_hat, 0.0, NormExponent::Inf) ==
        doctest::Approx(4.0).epsilon(1e-14));

  CHECK(dual_bound_norm_cone(soc_prob, u_hat, 3.0, NormExponent::Two) == 0.0);

  Vec outside(3);
  outside << -1.0, 1.5, 0.0;
  const NccpProblem bad =
      constant_map_instance(5.0, outside, ConeSpec::norm_cone(NormExponent::Two, 3));
  CHECK_THROWS_AS(dual_bound_norm_cone(bad, u_hat, 0.0, NormExponent::Two), InvalidProblem);
}

TEST_CASE("rate fit slopes, contraction, and truncation") {
  std::vector<double> iters, inv_k, geo;
  for (int k = 1; k <= 500; ++k) {
    iters.push_back(k);
    inv_k.push_back(1.0 / k);
    geo.push_back(std::pow(0.9, k));
  }
  const RateFit power = rate_fit_series(iters, inv_k, "feas", 1.0, 500.0);
  CHECK(power.loglog_slope == doctest::Approx(-1.0).epsilon(0.01));
  CHECK(power.metric == "feas");
  CHECK_FALSE(power.truncated);
  CHECK_FALSE(power.contraction_ratio.has_value());

  const RateFit windowed = rate_fit_series(iters, inv_k, "feas", 10.0, 400.0);
  CHECK(windowed.k_lo == 10);
  CHECK(windowed.k_hi == 400);

  const RateFit linear = rate_fit_series(iters, geo, "dist_sq", 1.0, 200.0, true);
  REQUIRE(linear.contraction_ratio.has_value());
  CHECK(*linear.contraction_ratio == doctest::Approx(0.9).epsilon(0.005));
  CHECK(linear.loglog_slope < 0.0);

  // An exact zero truncates the window and leaves the clean prefix.
  std::vector<double> dying = inv_k;
  for (int k = 50; k <= 500; ++k) dying[static_cast<std::size_t>(k - 1)] = 0.0;
  const RateFit cut = rate_fit_series(iters, dying, "feas", 1.0, 200.0);
  CHECK(cut.truncated);
  CHECK(cut.k_hi == 49);
  CHECK(cut.loglog_slope == doctest::Approx(-1.0).epsilon(0.01));

  CHECK_THROWS_AS(rate_fit_series({1.0, 2.0}, {0.5, 0.0}, "feas", 1.0, 2.0), InvalidProblem);

  // Trace-backed fit agrees with the raw series fit.
  std::vector<TraceRecord> trace;
  for (int k = 1; k <= 500; ++k) {
    TraceRecord r;
    r.iter = k;
    r.feas = 1.0 / k;
    trace.push_back(r);
  }
  const RateFit via_trace = rate_fit(trace, "feas", 10.0, 400.0);
  CHECK(via_trace.loglog_slope == doctest::Approx(windowed.loglog_slope).epsilon(1e-12));
  CHECK_THROWS_AS(rate_fit(trace, "entropy", 10.0, 400.0), InvalidProblem);
}

TEST_CASE("saddle gap probes") {
  const NccpProblem prob = one_dim_instance();
  // The ergodic point probed against itself cancels exactly.
  const PrimalDual self{Vec::Constant(1, 0.5), -Vec::Ones(1)};
  CHECK(saddle_gap_estimate(prob, self, {self}) == 0.0);

  // L(0,3) - L(2,0) = -3 - 2 = -5; adding the ergodic point as a probe
  // lifts the max back to zero.
  const PrimalDual origin{Vec::Zero(1), Vec::Zero(1)};
  const PrimalDual far{Vec::Constant(1, 2.0), Vec::Constant(1, 3.0)};
  CHECK(saddle_gap_estimate(prob, origin, {far}) == doctest::Approx(-5.0).epsilon(1e-15));
  CHECK(saddle_gap_estimate(prob, origin, {far, origin}) == 0.0);

  // Probing at the saddle point lower-bounds the true gap, hence >= 0.
  SolverConfig config;
  config.gamma = 1.0;
  config.eps0 = 0.4;
  config.max_iter = 50;
  config.tol_feas = 0.0;
  config.tol_obj = 0.0;
  const RunResult run = run_vapp(prob, config);
  CHECK(saddle_gap_estimate(prob, run.ergodic, {*prob.reference}) >= 0.0);

  CHECK_THROWS_AS(saddle_gap_estimate(prob, self, {}), InvalidProblem);
}

TEST_CASE("trace csv format") {
  TraceRecord plain;
  plain.iter = 1;
  plain.obj = 0.5;
  plain.obj_ergodic = 0.25;
  plain.feas = 1.0;
  plain.feas_ergodic = 2.0;
  plain.dual_norm = 3.0;
  plain.eps_k = 0.125;

  TraceRecord full = plain;
  full.iter = 2;
  full.wall_time_s = 0.5;
  full.delta_k = 1.0 / 3.0;
  full.lemma1_lhs = -0.0625;
  full.lemma1_rhs = 0.1875;
  full.kkt_res = 7.0;
  full.dist_sq = 0.75;

  std::ostringstream out;
  write_trace_csv(out, {plain, full});
  std::istringstream in(out.str());
  std::string header, row1, row2;
  std::getline(in, header);
  std::getline(in, row1);
  std::getline(in, row2);
  CHECK(header ==
        "iter,wall_time_s,obj,obj_ergodic,feas,feas_ergodic,dual_norm,eps_k,"
        "delta_k,lemma1_lhs,lemma1_rhs,kkt_res,dist_sq");
  CHECK(row1 == "1,,0.5,0.25,1,2,3,0.125,,,,,");

  const auto cells = split_csv_line(row2);
  REQUIRE(cells.size() == 13);
  CHECK(cells[0] == "2");
  CHECK(cells[1] == "0.5");
  // %.17g cells parse back to the exact double.
  CHECK(std::stod(cells[8]) == 1.0 / 3.0);
  CHECK(cells[9] == "-0.0625");
  CHECK(cells[10] == "0.1875");
  CHECK(cells[12] == "0.75");

  // Schedule columns appear only when some record carries them, and then
  // every row gains the cells.
  TraceRecord scheduled = plain;
  scheduled.iter = 3;
  scheduled.a_k = 3.0;
  scheduled.b_k = 4.0;
  scheduled.rho_k = 0.5;
  std::ostringstream out2;
  write_trace_csv(out2, {plain, scheduled});
  std::istringstream in2(out2.str());
  std::getline(in2, header);
  std::getline(in2, row1);
  std::getline(in2, row2);
  CHECK(header ==
        "iter,wall_time_s,obj,obj_ergodic,feas,feas_ergodic,dual_norm,eps_k,"
        "delta_k,lemma1_lhs,lemma1_rhs,kkt_res,dist_sq,a_k,b_k,rho_k");
  CHECK(row1 == "1,,0.5,0.25,1,2,3,0.125,,,,,,,,");
  CHECK(row2 == "3,,0.5,0.25,1,2,3,0.125,,,,,,3,4,0.5");
}

TEST_CASE("trace json mirrors the csv schema") {
  TraceRecord r;
  r.iter = 4;
  r.obj = 0.5;
  r.obj_ergodic = 0.25;
  r.feas = 1.0;
  r.feas_ergodic = 2.0;
  r.dual_norm = 3.0;
  r.eps_k = 0.125;
  r.delta_k = 0.0625;

  std::ostringstream out;
  write_trace_json(out, {r});
  const auto parsed = nlohmann::ordered_json::parse(out.str());
  REQUIRE(parsed.is_array());
  REQUIRE(parsed.size() == 1);
  const auto& row = parsed[0];
  CHECK(row["iter"] == 4);
  CHECK(row["wall_time_s"].is_null());
  CHECK(row["obj"] == 0.5);
  CHECK(row["eps_k"] == 0.125);
  CHECK(row["delta_k"] == 0.0625);
  CHECK(row["lemma1_lhs"].is_null());
  CHECK(row["dist_sq"].is_null());
  CHECK_FALSE(row.contains("a_k"));

  std::vector<std::string> keys;
  for (const auto& item : row.items()) keys.push_back(item.key());
  const std::vector<std::string> expect = {
      "iter",      "wall_time_s", "obj",        "obj_ergodic", "feas",
      "feas_ergodic", "dual_norm", "eps_k",     "delta_k",     "lemma1_lhs",
      "lemma1_rhs", "kkt_res",    "dist_sq"};
  CHECK(keys == expect);

  TraceRecord s = r;
  s.rho_k = 0.5;
  std::ostringstream out2;
  write_trace_json(out2, {s});
  const auto parsed2 = nlohmann::ordered_json::parse(out2.str());
  CHECK(parsed2[0]["a_k"].is_null());
  CHECK(parsed2[0]["rho_k"] == 0.5);
}

TEST_CASE("ergodic objective sandwich on the worked instance") {
  // With M0 >= |p*| and d1 = D(u*,u0) + eps0/(2 gamma) (M0 + 1 + |p0|)^2:
  //   -M0 d1 / (eps_min t) <= (G+J)(u_bar) - (G+J)(u*) <= d1 / (eps_min t).
  // Here u0 = 0, p0 = 0, eps = 0.4, gamma = 1, M0 = 1: d1 = 0.5 + 0.2*4 = 1.3.
  const NccpProblem prob = one_dim_instance();
  SolverConfig config;
  config.gamma = 1.0;
  config.eps0 = 0.4;
  config.max_iter = 2000;
  config.tol_feas = 0.0;
  config.tol_obj = 0.0;
  const RunResult run = run_vapp(prob, config);
  REQUIRE(run.trace.size() == 2000);

  const double m0 = 1.0;
  const double d1 = 0.5 + 0.2 * 4.0;
  for (const auto& r : run.trace) {
    const double budget = d1 / (0.4 * r.iter);
    const double gap = r.obj_ergodic - 0.5;
    CHECK(gap <= budget + 1e-9);
    CHECK(gap >= -m0 * budget - 1e-9);
    CHECK(r.feas_ergodic <= budget + 1e-9);
  }
}

TEST_CASE("ergodic objective sandwich on a random orthant instance") {
  NccpProblem prob = random_inequality_instance(5, 3, 99);

  // High-accuracy reference from a long run (the last iterate settles far
  // faster than the ergodic average on this strongly convex instance).
  SolverConfig ref_config;
  ref_config.gamma = 1.0;
  ref_config.max_iter = 150000;
  ref_config.tol_feas = 0.0;
  ref_config.tol_obj = 0.0;
  ref_config.trace_every = 150000;
  ref_config.certify = false;
  const RunResult ref_run = run_vapp(prob, ref_config);
  const double opt = prob.objective(ref_run.last.u);
  const Vec u_star = ref_run.last.u;

  // The objective is a nonnegative least-squares term, so 0 lower-bounds it,
  // and the origin is strictly feasible by construction.
  const double m0 = dual_bound_orthant(prob, Vec::Zero(5), 0.0);

  SolverConfig config;
  config.gamma = 1.0;
  config.max_iter = 5000;
  config.tol_feas = 0.0;
  config.tol_obj = 0.0;
  config.certify = false;
  const RunResult run = run_vapp(prob, config);
  const double eps0 = run.trace.front().eps_k;
  const double d1 = bregman_distance(prob.core, u_star, Vec::Zero(5)) +
                    eps0 / (2.0 * config.gamma) * (m0 + 1.0) * (m0 + 1.0);
  for (const auto& r : run.trace) {
    const double budget = d1 / (eps0 * r.iter);
    const double gap = r.obj_ergodic - opt;
    CHECK(gap <= budget + 1e-6);
    CHECK(gap >= -m0 * budget - 1e-6);
    CHECK(r.feas_ergodic <= budget + 1e-6);
  }
}
