// NCCP - first-order primal-dual solvers for nonlinear convex cone programs
// Copyright 2026 NCCP Contributors
// Licensed under Apache 2.0
//
// Oracle bundles describing a problem instance
//
//   minimize  G(u) + J(u)   subject to   Theta(u) in -C,  u in U,
//
// with G convex and smooth, J convex and prox-friendly, and
// Theta = Omega + Phi a C-convex constraint map whose smooth part is Omega.
// Solvers touch instances only through these closures plus the declared
// curvature/Lipschitz constants.

#ifndef NCCP_ORACLES_HPP_
#define NCCP_ORACLES_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nccp/cones.hpp"
#include "nccp/types.hpp"

namespace nccp {

// Smooth convex term with Lipschitz gradient.
struct SmoothOracle {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  std::optional<double> lipschitz_grad;    // bound on the gradient's Lipschitz constant
  std::optional<double> strong_convexity;  // modulus; 0 when merely convex

  static SmoothOracle zero(Eigen::Index n);
  // 0.5 u'Pu + c'u with P symmetric positive semidefinite; constants are
  // derived from P's spectrum.
  static SmoothOracle quadratic(const Mat& P, const Vec& c);
  // 0.5 |Au - b|^2; constants derived from A'A.
  static SmoothOracle least_squares(const Mat& A, const Vec& b);
};

// How the nonsmooth term J couples into proximal subproblems.
enum class ProxKind {
  Zero,       // J == 0
  L1,         // J = l1_weight |u|_1 + (ridge/2)|u|^2
  Quadratic,  // J = 0.5 u'Qu + q'u given matrix-free; prox solved by CG
  Custom,     // caller supplies prox(t, v) = argmin J(x) + |x - v|^2 / (2t)
};

struct NonsmoothOracle {
  std::function<double(const Vec&)> value;
  ProxKind prox_kind = ProxKind::Zero;
  double l1_weight = 0.0;
  double ridge = 0.0;  // quadratic shift carried by J; movable into G
  std::function<Vec(const Vec&)> quad_apply;  // Quadratic: u -> Qu
  Vec quad_linear;                            // Quadratic: q
  std::function<Vec(double, const Vec&)> prox;  // Custom

  static NonsmoothOracle zero();
  static NonsmoothOracle l1(double weight, double ridge = 0.0);
  static NonsmoothOracle custom(std::function<double(const Vec&)> value,
                                std::function<Vec(double, const Vec&)> prox);
};

// Structure of the nonsmooth constraint part Phi.
enum class PhiKind {
  Zero,
  Linear,       // Phi(u) = A u + b
  SeparableL1,  // Phi_j(u) = l1_coeff_j |u|_1 (coefficients entrywise >= 0)
  Custom,
};

struct PhiOracle {
  PhiKind kind = PhiKind::Zero;
  Eigen::Index out_dim = 0;
  Mat A;
  Vec b;
  Vec l1_coeff;
  std::function<Vec(const Vec&)> value_fn;
  // Subgradient-transpose action (du Phi(u))' p for the Custom kind.
  std::function<Vec(const Vec&, const Vec&)> jtp_fn;

  Vec value(const Vec& u) const;
  // A subgradient selection: for the l1 structure, sign(u) with 0 at 0.
  Vec jacobian_transpose_apply(const Vec& u, const Vec& p) const;

  static PhiOracle zero(Eigen::Index m);
  static PhiOracle linear(const Mat& A, const Vec& b);
  static PhiOracle separable_l1(const Vec& coeff);
};

// C-convex constraint map Theta = Omega + Phi with smooth Omega.
struct ConeMapOracle {
  Eigen::Index out_dim = 0;
  std::function<Vec(const Vec&)> omega;
  std::function<Vec(const Vec&, const Vec&)> omega_jtp;  // (d Omega(u))' p
  PhiOracle phi;
  std::optional<double> theta_lipschitz;  // tau: |Theta(u) - Theta(v)| <= tau |u - v|
  // Curvature of u -> <p, Omega(u)> for unit-norm duals, if known directly.
  std::optional<double> b_omega;
  // Per-row curvature bounds of Omega; aggregated against a dual-ball radius.
  Vec b_omega_components;
  bool c_convex_certified = false;

  Vec theta(const Vec& u) const;

  // Theta(u) = A u - b (all-affine map; zero curvature, tau = |A|_2).
  static ConeMapOracle affine(const Mat& A, const Vec& b);
};

// Curvature bound for u -> <p, Omega(u)> over duals with |p| <= radius,
// from per-row bounds: radius * sum_j components_j.
double aggregate_b_omega(const Vec& components, double radius);

enum class SetKind { Full, Box, Ball, Blocks };

// Closed convex feasible set U with exact projection.
struct FeasibleSet {
  SetKind kind = SetKind::Full;
  Eigen::Index dim = 0;
  Vec lo, hi;  // Box
  Vec center;  // Ball
  double radius = 0.0;
  std::vector<FeasibleSet> blocks;

  Vec project(const Vec& u) const;
  bool contains(const Vec& u, double tol) const;

  static FeasibleSet full(Eigen::Index n);
  static FeasibleSet box(Vec lo, Vec hi);
  static FeasibleSet ball(Vec center, double radius);
  static FeasibleSet product(std::vector<FeasibleSet> blocks);
};

enum class CoreKind { HalfSquared, Diagonal, Custom };

// Bregman core K: strongly convex with Lipschitz gradient, inducing
// D(u, v) = K(u) - K(v) - <grad K(v), u - v>.
struct BregmanCore {
  CoreKind kind = CoreKind::HalfSquared;
  Vec weights;  // Diagonal: K(u) = 0.5 sum_i w_i u_i^2
  std::function<double(const Vec&)> k_value;
  std::function<Vec(const Vec&)> k_gradient;
  double beta = 1.0;        // strong-convexity modulus of K
  double smoothness = 1.0;  // Lipschitz modulus of grad K

  double value(const Vec& u) const;
  Vec gradient(const Vec& u) const;

  static BregmanCore half_squared();
  static BregmanCore diagonal(Vec w);
  static BregmanCore custom(std::function<double(const Vec&)> value,
                            std::function<Vec(const Vec&)> gradient, double beta,
                            double smoothness);
};

double bregman_distance(const BregmanCore& core, const Vec& u, const Vec& v);

// Full problem instance.
struct NccpProblem {
  Eigen::Index n = 0;  // primal dimension
  Eigen::Index m = 0;  // constraint dimension
  SmoothOracle g;
  NonsmoothOracle j;
  ConeMapOracle theta;
  ConeSpec cone;
  FeasibleSet set;
  BregmanCore core = BregmanCore::half_squared();
  std::optional<PrimalDual> reference;  // saddle point, when known to high accuracy
  std::optional<double> opt_value;

  double objective(const Vec& u) const { return g.value(u) + j.value(u); }
  Vec theta_value(const Vec& u) const { return theta.theta(u); }
};

// Moves the declared quadratic shift of J into G (values, gradients, and
// the declared constants), leaving J with the bare nonsmooth part.
NccpProblem normalize_strong_convexity(const NccpProblem& problem);

struct ValidationItem {
  std::string name;
  bool passed = false;
  double worst = 0.0;  // worst violation magnitude observed
};

struct ValidationReport {
  std::vector<ValidationItem> items;
  bool all_passed() const;
};

// Sampled consistency checks of the declared oracle data: finite-difference
// gradients, curvature constants, C-convexity of Theta, Lipschitz bounds,
// the Bregman sandwich, and set-projection sanity.
ValidationReport validate_problem(const NccpProblem& problem, int samples = 100,
                                  std::uint64_t seed = 0x5eed);

}  // namespace nccp

#endif  // NCCP_ORACLES_HPP_
