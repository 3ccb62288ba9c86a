// NCCP - first-order primal-dual solvers for nonlinear convex cone programs
// Copyright 2026 NCCP Contributors
// Licensed under Apache 2.0
//
// Certified constructors for norm-cone-convex constraint maps of the layered
// shape
//
//   Theta(u) = ( w'g(u) + g0(u) ;  Q g(u) ;  A u - b ),
//
// with g0 and every component g_j convex, Q entrywise nonnegative, and each
// head weight w_j at least the j-th column sum of Q. For any convex
// combination the component defects d_j = g_j(mid) - combination are
// nonpositive, so
//
//   |Q d|_nu <= |Q d|_1 = sum_j (-d_j) colsum_j(Q) <= -w'd,
//
// while the head defect is w'd + d0 <= w'd <= -|Q d|_nu and the affine rows
// contribute nothing; the stacked defect lies in -K_nu for every nu >= 1.
// The emitted oracle therefore carries the convexity certificate instead of
// relying on sampled checks.
//
// Also here: a planted sparse-recovery benchmark family (SEN-SVM), posing
//
//   minimize 0.5 |A u - b|^2
//   subject to alpha |u|_1 + (1 - alpha) u'Qu <= delta
//
// either as a scalar inequality or as a layered map into the 1-norm cone,
// together with specialized closed-form steppers for the bounded-multiplier
// iteration on both forms.

#ifndef NCCP_STRUCTURED_HPP_
#define NCCP_STRUCTURED_HPP_

#include <cstdint>
#include <vector>

#include "nccp/oracles.hpp"
#include "nccp/vapp_core.hpp"

namespace nccp {

// Which blocks sit under the head row.
enum class StructuredVariant {
  MixedRows,        // ( w'g + g0 ; Q g )
  AffineRows,       // ( g0 ; A u - b )
  MixedAffineRows,  // ( w'g + g0 ; Q g ; A u - b )
};

struct StructuredMapSpec {
  StructuredVariant variant = StructuredVariant::MixedRows;
  Eigen::Index n = 0;           // primal dimension
  SmoothOracle g0;              // convex scalar head term
  std::vector<SmoothOracle> g;  // convex scalar components
  Mat q_mix;                    // nonnegative mixing matrix, one row per mixed row
  Vec head_weights;             // w: per-component head weights
  Mat a;                        // affine rows
  Vec b;
};

// Validates the layered shape (rejecting any head weight below its mixing
// column sum, by column index) and emits the stacked map with its convexity
// certificate set. Rows: head, then mixed, then affine. Per-row curvature
// bounds are filled in when every participating oracle declares one.
ConeMapOracle build_structured_map(const StructuredMapSpec& spec);

// The norm cone the certificate is for, at the matching dimension.
ConeSpec structured_cone(const StructuredMapSpec& spec, NormExponent nu);

// One planted benchmark instance. b = a u_star exactly and delta makes
// u_star exactly feasible, so the optimal value is 0.
struct SenSvmInstance {
  Eigen::Index m = 0, n = 0, s = 0;
  double alpha = 0.0;  // l1 weight in the constraint, in (0, 1)
  double delta = 0.0;  // constraint level, > 0
  Mat a;               // m x n design, i.i.d. standard normal entries
  Mat q;               // n x n symmetric positive definite
  Vec u_star;          // s-sparse planted point, normal nonzeros
  Vec b;               // a * u_star

  // Multiplier radii from the duality gap at u_hat = 0 (one more than the
  // bound, so the ball has slack): |b|^2/(2 delta) + 1 for the scalar form.
  double scalar_dual_bound() const;
  // The cone form uses the sqrt(n+1) prefactor; the generic norm-cone bound
  // sharpens it to sqrt(n), so this radius is conservative but valid.
  double cone_dual_bound() const;
};

// Deterministic per seed: identical seeds give bit-identical instances.
SenSvmInstance gen_sen_svm(Eigen::Index m, Eigen::Index n, Eigen::Index s, double alpha,
                           std::uint64_t seed);

// The constraint as one inequality over the nonnegative orthant: smooth row
// (1 - alpha) u'Qu - delta, nonsmooth row alpha |u|_1.
NccpProblem sen_svm_scalar_form(const SenSvmInstance& inst);

// The constraint as ((1 - alpha) u'Qu - delta ; alpha u) in -K_1^{n+1},
// built entirely smooth.
NccpProblem sen_svm_cone_form(const SenSvmInstance& inst);

enum class SenSvmForm { Scalar, Cone };

// One iteration via the closed-form updates - the multiplier clamp and
// soft-threshold for the scalar form, the cone-and-ball projection and plain
// gradient step for the cone form - drop-in equivalent to vapp_step /
// backtracking_step on the matching formulation (pass the matching
// sen_svm_*_form problem; it supplies the cone, the certificate values in
// backtracking mode, and the trace objectives).
void sen_svm_closed_form_step(const SenSvmInstance& inst, SenSvmForm form,
                              const NccpProblem& problem, SolverState& state,
                              const SolverConfig& config);

// Adapter for run_vapp_with. The instance must outlive the stepper.
StepFn sen_svm_stepper(const SenSvmInstance& inst, SenSvmForm form);

}  // namespace nccp

#endif  // NCCP_STRUCTURED_HPP_
