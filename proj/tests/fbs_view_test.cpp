// NCCP - first-order primal-dual solvers for nonlinear convex cone programs
// Copyright 2026 NCCP Contributors
// Licensed under Apache 2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "nccp/fbs_view.hpp"
#include "nccp/linalg.hpp"
#include "support/instances.hpp"

using namespace nccp;
using namespace nccp::testing;

namespace {

SolverConfig fixed_config(double gamma, double eps0) {
  SolverConfig cfg;
  cfg.gamma = gamma;
  cfg.eps0 = eps0;
  cfg.step_mode = StepMode::Fixed;
  return cfg;
}

double pair_inner(const OperatorEval& a, const PrimalDual& w) {
  return a.primal_part.dot(w.u) + a.dual_part.dot(w.p);
}

PrimalDual random_point(const NccpProblem& prob, std::mt19937_64& rng, bool project) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec u(prob.n), p(prob.m);
  for (Eigen::Index i = 0; i < prob.n; ++i) u[i] = gauss(rng);
  for (Eigen::Index i = 0; i < prob.m; ++i) p[i] = gauss(rng);
  if (project) u = prob.set.project(u);
  return {u, p};
}

}  // namespace

TEST_CASE("operator worked values on the one dimensional instance") {
  const NccpProblem prob = one_dim_instance();

  const OperatorEval b0 = op_b(prob, {Vec::Zero(1), Vec::Zero(1)}, 1.0);
  CHECK(b0.primal_part[0] == -1.0);  // grad G(0) + 1 * proj(0 + (0 - 1))
  CHECK(b0.dual_part[0] == 1.0);     // -(proj(-1) - 0) / 1

  // At the saddle point both components vanish, pairing with 0 in A(w*).
  const OperatorEval bstar = op_b(prob, *prob.reference, 1.0);
  CHECK(bstar.primal_part[0] == 0.0);
  CHECK(bstar.dual_part[0] == 0.0);

  const PrimalDual anchor{Vec::Zero(1), Vec::Zero(1)};
  const OperatorEval g1 = gamma_op(prob, {Vec::Ones(1), Vec::Zero(1)}, anchor, 0.5, 1.0);
  CHECK(g1.primal_part[0] == 2.0);  // grad K(1)/0.5, Phi absent
  CHECK(g1.dual_part[0] == 0.0);    // (0 - proj(0 + (1 - 1))) / 1
}

TEST_CASE("a vanishing constraint map reduces B to the bare gradient") {
  NccpProblem prob = one_dim_instance();
  prob.theta = ConeMapOracle::affine(Mat::Zero(1, 1), Vec::Zero(1));
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double u = gauss(rng), p = gauss(rng);
    const OperatorEval b = op_b(prob, {Vec::Constant(1, u), Vec::Constant(1, p)}, 2.0);
    CHECK(b.primal_part[0] == prob.g.gradient(Vec::Constant(1, u))[0]);
    CHECK(b.dual_part[0] == 0.0);
  }
}

TEST_CASE("a linear Phi block acts exactly like the same rows folded into Omega") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Eigen::Index n = 4, m = 3;
  Mat a1(m, n), a2(m, n);
  Vec b(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    b[i] = gauss(rng);
    for (Eigen::Index j = 0; j < n; ++j) {
      a1(i, j) = gauss(rng);
      a2(i, j) = gauss(rng);
    }
  }

  NccpProblem split;  // Omega carries a1, Phi carries a2
  split.n = n;
  split.m = m;
  split.g = SmoothOracle::quadratic(Mat::Identity(n, n), Vec::Zero(n));
  split.j = NonsmoothOracle::zero();
  split.theta = ConeMapOracle::affine(a1, b);
  split.theta.phi = PhiOracle::linear(a2, Vec::Zero(m));
  split.theta.theta_lipschitz = spectral_norm(Mat(a1 + a2));
  split.cone = ConeSpec::nonneg_orthant(m);
  split.set = FeasibleSet::full(n);

  NccpProblem folded = split;  // one affine map with the summed matrix
  folded.theta = ConeMapOracle::affine(a1 + a2, b);

  for (int i = 0; i < 25; ++i) {
    const PrimalDual w = random_point(split, rng, false);
    const PrimalDual anchor = random_point(split, rng, false);
    const OperatorEval bs = op_b(split, w, 0.8);
    const OperatorEval bf = op_b(folded, w, 0.8);
    CHECK((bs.primal_part - bf.primal_part).norm() <= 1e-12);
    CHECK((bs.dual_part - bf.dual_part).norm() <= 1e-12);
    // The anchored operator is not invariant under the refactoring: its
    // primal block keeps the linear Phi rows as a preconditioner shift of
    // exactly (dPhi)' q^k, while the dual block agrees.
    const OperatorEval gs = gamma_op(split, w, anchor, 0.3, 0.8);
    const OperatorEval gf = gamma_op(folded, w, anchor, 0.3, 0.8);
    const Vec qk = project_dual(split.cone, anchor.p + 0.8 * split.theta_value(anchor.u));
    CHECK((gs.primal_part - gf.primal_part - a2.transpose() * qk).norm() <= 1e-12);
    CHECK((gs.dual_part - gf.dual_part).norm() <= 1e-12);
  }

  const SolverConfig cfg = fixed_config(0.8, 0.0);
  SolverState ss = init_state(split, cfg);
  SolverState sf = init_state(folded, cfg);
  REQUIRE(ss.eps_k == sf.eps_k);  // same declared constants, same window
  for (int k = 0; k < 60; ++k) {
    fbs_step(split, ss, cfg);
    fbs_step(folded, sf, cfg);
    CHECK((ss.u - sf.u).norm() <= 1e-10);
    CHECK((ss.p - sf.p).norm() <= 1e-10);
  }
}

TEST_CASE("the separable nonsmooth Phi is rejected by the splitting view") {
  NccpProblem prob = one_dim_instance();
  prob.theta.phi = PhiOracle::separable_l1(Vec::Constant(1, 0.5));
  const PrimalDual w{Vec::Zero(1), Vec::Zero(1)};
  CHECK_THROWS_WITH_AS(op_b(prob, w, 1.0),
                       "fbs: the splitting view needs a differentiable or linear Phi",
                       InvalidProblem);
  CHECK_THROWS_AS(gamma_op(prob, w, w, 0.4, 1.0), InvalidProblem);
  const SolverConfig cfg = fixed_config(1.0, 0.1);
  SolverState st;
  st.u = Vec::Zero(1);
  st.p = Vec::Zero(1);
  st.eps_k = 0.1;
  CHECK_THROWS_AS(fbs_step(prob, st, cfg), InvalidProblem);
}

TEST_CASE("sampled monotonicity of the forward operator") {
  std::mt19937_64 rng(23);
  std::vector<NccpProblem> probs;
  probs.push_back(one_dim_instance());
  probs.push_back(equality_qp_instance(6, 3, 41));
  probs.push_back(orthant_active_set_instance(6, 4, 2, 42));
  probs.push_back(random_inequality_instance(5, 3, 21));

  for (const NccpProblem& prob : probs) {
    for (double gamma : {0.5, 1.0, 2.0}) {
      for (int i = 0; i < 60; ++i) {
        const PrimalDual w1 = random_point(prob, rng, false);
        const PrimalDual w2 = random_point(prob, rng, false);
        const OperatorEval b1 = op_b(prob, w1, gamma);
        const OperatorEval b2 = op_b(prob, w2, gamma);
        const OperatorEval diff{b1.primal_part - b2.primal_part, b1.dual_part - b2.dual_part};
        const PrimalDual dw{w1.u - w2.u, w1.p - w2.p};
        CHECK(pair_inner(diff, dw) >= -1e-8);
      }
    }
  }
}

TEST_CASE("anchored operator is strongly monotone inside the step window") {
  std::mt19937_64 rng(29);
  std::vector<NccpProblem> probs;
  probs.push_back(one_dim_instance());
  probs.push_back(equality_qp_instance(6, 3, 41));
  NccpProblem weighted = one_dim_instance();
  weighted.core = BregmanCore::diagonal(Vec::Constant(1, 2.0));
  probs.push_back(weighted);

  for (const NccpProblem& prob : probs) {
    for (double gamma : {0.5, 1.0}) {
      SolverConfig cfg = fixed_config(gamma, 0.0);
      const ProblemConstants constants = derive_constants(prob, cfg);
      const double eps = 0.9 * *constants.eps_window(gamma);
      const double beta = prob.core.beta;
      for (int i = 0; i < 60; ++i) {
        const PrimalDual anchor = random_point(prob, rng, false);
        const PrimalDual w1 = random_point(prob, rng, false);
        const PrimalDual w2 = random_point(prob, rng, false);
        const OperatorEval g1 = gamma_op(prob, w1, anchor, eps, gamma);
        const OperatorEval g2 = gamma_op(prob, w2, anchor, eps, gamma);
        const OperatorEval diff{g1.primal_part - g2.primal_part, g1.dual_part - g2.dual_part};
        const PrimalDual dw{w1.u - w2.u, w1.p - w2.p};
        const double floor_val = 0.5 * beta / eps * dw.u.squaredNorm() +
                                 0.5 / gamma * dw.p.squaredNorm();
        CHECK(pair_inner(diff, dw) >= floor_val - 1e-8);
      }
    }
  }
}

TEST_CASE("forward difference at the anchor collapses to the explicit part") {
  // (Gamma^k - B) at w = w^k: the dual components cancel exactly and the Phi
  // terms drop out of the primal one, leaving grad K/eps - grad G - dOmega' q.
  std::mt19937_64 rng(31);
  const NccpProblem prob = orthant_active_set_instance(5, 3, 1, 44);
  const double gamma = 0.9, eps = 0.2;
  for (int i = 0; i < 40; ++i) {
    const PrimalDual wk = random_point(prob, rng, false);
    const OperatorEval g = gamma_op(prob, wk, wk, eps, gamma);
    const OperatorEval b = op_b(prob, wk, gamma);
    const Vec q = project_dual(prob.cone, wk.p + gamma * prob.theta_value(wk.u));
    const Vec expected = prob.core.gradient(wk.u) / eps - prob.g.gradient(wk.u) -
                         prob.theta.omega_jtp(wk.u, q);
    CHECK((g.primal_part - b.primal_part - expected).norm() <= 1e-12);
    CHECK((g.dual_part - b.dual_part).norm() == 0.0);
  }
}

TEST_CASE("splitting step reproduces the worked base step") {
  const NccpProblem prob = one_dim_instance();
  const SolverConfig cfg = fixed_config(1.0, 0.4);
  SolverState state = init_state(prob, cfg);
  state.eps_k = 0.5;
  fbs_step(prob, state, cfg);
  CHECK(state.q[0] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(state.u[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(state.p[0] == doctest::Approx(-0.5).epsilon(1e-15));

  SolverState base = init_state(prob, cfg);
  base.eps_k = 0.5;
  vapp_step(prob, base, cfg);
  CHECK(std::abs(state.u[0] - base.u[0]) <= 1e-12);
  CHECK(std::abs(state.p[0] - base.p[0]) <= 1e-12);

  // Saddle points are fixed points of the splitting pass too.
  SolverState fixed = init_state(prob, cfg);
  fixed.u = Vec::Ones(1);
  fixed.p = -Vec::Ones(1);
  fbs_step(prob, fixed, cfg);
  CHECK(fixed.u[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(fixed.p[0] == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("step equivalence across the random smooth suite") {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    NccpProblem prob;
    switch (seed % 3) {
      case 0:
        prob = random_inequality_instance(3 + seed % 5, 2 + seed % 3, 1000 + seed,
                                          seed % 2 ? 0.2 : 0.0);
        break;
      case 1:
        prob = equality_qp_instance(4 + seed % 4, 2 + seed % 2, 1000 + seed);
        break;
      default:
        prob = orthant_active_set_instance(4 + seed % 4, 3, 1 + seed % 2, 1000 + seed);
        break;
    }
    if (seed % 7 == 0) {
      Vec w(prob.n);
      for (Eigen::Index i = 0; i < prob.n; ++i) w[i] = 1.0 + (i % 3);
      prob.core = BregmanCore::diagonal(w);
    }
    const double gamma = 0.5 + 0.5 * static_cast<double>(seed % 3);
    const SolverConfig cfg = fixed_config(gamma, 0.0);

    SolverState base = init_state(prob, cfg);
    SolverState view = init_state(prob, cfg);
    for (int k = 0; k < 100; ++k) {
      vapp_step(prob, base, cfg);
      fbs_step(prob, view, cfg);
      const double du = (base.u - view.u).norm();
      const double dp = (base.p - view.p).norm();
      worst = std::max({worst, du, dp});
      REQUIRE(du <= 1e-10);
      REQUIRE(dp <= 1e-10);
    }
    CHECK((base.ergodic().u - view.ergodic().u).norm() <= 1e-10);
    CHECK((base.ergodic().p - view.ergodic().p).norm() <= 1e-10);
  }
  CHECK(worst <= 1e-10);
}
