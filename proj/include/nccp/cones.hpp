// NCCP - first-order primal-dual solvers for nonlinear convex cone programs
// Copyright 2026 NCCP Contributors
// Licensed under Apache 2.0
//
// Closed convex cones and exact Euclidean projections onto them, their
// duals, their negatives, and dual-cone/ball intersections.  Supported
// families: the zero cone {0}, the full space, the nonnegative orthant,
// norm cones K_nu = {(t, x) : t >= |x|_nu} for nu in {1, 2, inf}, and
// finite products of these.
//
// Layout convention for norm cones: component 0 is the epigraph scalar t,
// components 1..k-1 are the vector part x.

#ifndef NCCP_CONES_HPP_
#define NCCP_CONES_HPP_

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "nccp/types.hpp"

namespace nccp {

enum class ConeKind { Zero, Free, NonnegOrthant, Norm, Product };

// Exponent nu of a norm cone K_nu.
enum class NormExponent { One, Two, Inf };

inline NormExponent conjugate_exponent(NormExponent nu) {
  switch (nu) {
    case NormExponent::One: return NormExponent::Inf;
    case NormExponent::Two: return NormExponent::Two;
    case NormExponent::Inf: return NormExponent::One;
  }
  return NormExponent::Two;
}

struct ConeSpec {
  ConeKind kind = ConeKind::Zero;
  NormExponent nu = NormExponent::Two;  // meaningful only for Norm
  Eigen::Index dim = 0;                 // ambient dimension (total over parts)
  std::vector<ConeSpec> parts;          // meaningful only for Product

  static ConeSpec zero(Eigen::Index d) { return {ConeKind::Zero, NormExponent::Two, d, {}}; }
  static ConeSpec free_space(Eigen::Index d) { return {ConeKind::Free, NormExponent::Two, d, {}}; }
  static ConeSpec nonneg_orthant(Eigen::Index d) {
    return {ConeKind::NonnegOrthant, NormExponent::Two, d, {}};
  }
  static ConeSpec norm_cone(NormExponent nu, Eigen::Index d) {
    require(d >= 1, "norm cone needs dimension >= 1");
    return {ConeKind::Norm, nu, d, {}};
  }
  static ConeSpec product(std::vector<ConeSpec> factors) {
    ConeSpec c;
    c.kind = ConeKind::Product;
    c.dim = 0;
    for (const auto& f : factors) c.dim += f.dim;
    c.parts = std::move(factors);
    return c;
  }
};

// The dual cone C* = {y : <y, x> >= 0 for all x in C}.  Zero and the full
// space are dual to each other; the orthant is self-dual; norm cones pair
// up through the conjugate exponent; products dualize factor-wise.
inline ConeSpec dual_cone(const ConeSpec& c) {
  switch (c.kind) {
    case ConeKind::Zero: return ConeSpec::free_space(c.dim);
    case ConeKind::Free: return ConeSpec::zero(c.dim);
    case ConeKind::NonnegOrthant: return c;
    case ConeKind::Norm: return ConeSpec::norm_cone(conjugate_exponent(c.nu), c.dim);
    case ConeKind::Product: {
      std::vector<ConeSpec> duals;
      duals.reserve(c.parts.size());
      for (const auto& p : c.parts) duals.push_back(dual_cone(p));
      return ConeSpec::product(std::move(duals));
    }
  }
  return c;
}

namespace detail {

// Projection onto K_2 (the second-order cone).  Three cases: inside the
// cone (identity), inside the polar -K_2 (apex), otherwise the unique
// boundary point obtained by averaging t with |x|.
template <typename Scalar>
void project_soc_inplace(Eigen::Ref<DenseVec<Scalar>> x) {
  const Eigen::Index k = x.size();
  if (k == 1) {
    x[0] = std::max(x[0], Scalar(0));
    return;
  }
  const Scalar t = x[0];
  const Scalar a = x.tail(k - 1).norm();
  if (a <= t) return;           // already in the cone (boundary included)
  if (a <= -t) {                // in the polar cone: nearest point is the apex
    x.setZero();
    return;
  }
  const Scalar c = (t + a) / Scalar(2);
  x[0] = c;
  x.tail(k - 1) *= c / a;
}

// Projection onto K_1 = epi |.|_1.  With the vector part z fixed at the
// soft threshold S_lam(x) and the scalar at t + lam, optimality reduces to
// a one-dimensional piecewise-linear root find in lam, solved exactly by
// sorting the magnitudes (O(k log k)).  The apex case falls out of the
// same formula: the computed scalar is sum_i (|x_i| - lam)_+ >= 0.
template <typename Scalar>
void project_l1_cone_inplace(Eigen::Ref<DenseVec<Scalar>> x) {
  const Eigen::Index k = x.size();
  if (k == 1) {
    x[0] = std::max(x[0], Scalar(0));
    return;
  }
  const Scalar t = x[0];
  auto xv = x.tail(k - 1);
  if (xv.template lpNorm<1>() <= t) return;  // inside (boundary ties included)

  std::vector<Scalar> a(static_cast<std::size_t>(k - 1));
  for (Eigen::Index i = 0; i < k - 1; ++i) a[static_cast<std::size_t>(i)] = std::abs(xv[i]);
  std::sort(a.begin(), a.end(), std::greater<Scalar>());

  Scalar lam;
  if (-t >= a[0]) {
    lam = -t;  // no component survives the threshold
  } else {
    lam = Scalar(0);
    Scalar prefix = Scalar(0);
    const std::size_t n = a.size();
    for (std::size_t j = 1; j <= n; ++j) {
      prefix += a[j - 1];
      const Scalar cand = (prefix - t) / Scalar(j + 1);
      if (cand <= a[j - 1] && (j == n || cand >= a[j])) {
        lam = cand;
        break;
      }
    }
  }
  Scalar tsum = Scalar(0);
  for (Eigen::Index i = 0; i < k - 1; ++i) {
    const Scalar m = std::abs(xv[i]) - lam;
    if (m > Scalar(0)) {
      tsum += m;
      xv[i] = xv[i] > Scalar(0) ? m : -m;
    } else {
      xv[i] = Scalar(0);
    }
  }
  x[0] = tsum;
}

// Projection onto K_inf = epi |.|_inf.  For fixed scalar t the vector part
// clamps to [-t, t]; the optimal t is the root of a piecewise-linear
// increasing function, again found by sorting the magnitudes.
template <typename Scalar>
void project_linf_cone_inplace(Eigen::Ref<DenseVec<Scalar>> x) {
  const Eigen::Index k = x.size();
  if (k == 1) {
    x[0] = std::max(x[0], Scalar(0));
    return;
  }
  const Scalar t0 = x[0];
  auto xv = x.tail(k - 1);
  const Scalar amax = xv.template lpNorm<Eigen::Infinity>();
  if (amax <= t0) return;                           // inside the cone
  if (-t0 >= xv.template lpNorm<1>()) {             // inside the polar -K_1
    x.setZero();
    return;
  }

  std::vector<Scalar> a(static_cast<std::size_t>(k - 1));
  for (Eigen::Index i = 0; i < k - 1; ++i) a[static_cast<std::size_t>(i)] = std::abs(xv[i]);
  std::sort(a.begin(), a.end(), std::greater<Scalar>());

  Scalar t = Scalar(0);
  Scalar prefix = Scalar(0);
  const std::size_t n = a.size();
  for (std::size_t j = 1; j <= n; ++j) {
    prefix += a[j - 1];
    const Scalar cand = (t0 + prefix) / Scalar(j + 1);
    if (cand <= a[j - 1] && (j == n || cand >= a[j])) {
      t = cand;
      break;
    }
  }
  x[0] = t;
  for (Eigen::Index i = 0; i < k - 1; ++i) {
    xv[i] = std::clamp(xv[i], -t, t);
  }
}

}  // namespace detail

// Projection onto the norm cone K_nu, first coordinate the epigraph scalar.
template <typename Derived>
DenseVec<typename Derived::Scalar> project_norm_cone(NormExponent nu,
                                                     const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  DenseVec<Scalar> x = v;
  switch (nu) {
    case NormExponent::One: detail::project_l1_cone_inplace<Scalar>(x); break;
    case NormExponent::Two: detail::project_soc_inplace<Scalar>(x); break;
    case NormExponent::Inf: detail::project_linf_cone_inplace<Scalar>(x); break;
  }
  return x;
}

// Projection onto the (primal) cone described by `cone`.
template <typename Derived>
DenseVec<typename Derived::Scalar> project_cone(const ConeSpec& cone,
                                                const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  require(v.size() == cone.dim, "project_cone: dimension mismatch");
  switch (cone.kind) {
    case ConeKind::Zero: return DenseVec<Scalar>::Zero(cone.dim);
    case ConeKind::Free: return v;
    case ConeKind::NonnegOrthant: return v.cwiseMax(Scalar(0));
    case ConeKind::Norm: return project_norm_cone(cone.nu, v);
    case ConeKind::Product: {
      DenseVec<Scalar> out(cone.dim);
      Eigen::Index off = 0;
      for (const auto& p : cone.parts) {
        out.segment(off, p.dim) = project_cone(p, v.segment(off, p.dim).eval());
        off += p.dim;
      }
      return out;
    }
  }
  return v;
}

// Projection onto the dual cone C*.
template <typename Derived>
DenseVec<typename Derived::Scalar> project_dual(const ConeSpec& cone,
                                                const Eigen::MatrixBase<Derived>& v) {
  return project_cone(dual_cone(cone), v);
}

// Projection onto -C, computed as -P_C(-v).
template <typename Derived>
DenseVec<typename Derived::Scalar> project_neg_cone(const ConeSpec& cone,
                                                    const Eigen::MatrixBase<Derived>& v) {
  DenseVec<typename Derived::Scalar> w = project_cone(cone, (-v).eval());
  return -w;
}

// Projection onto C* intersected with the centered ball of the given
// radius: project onto C* first, then truncate radially.  The two steps
// commute with each other because C* is a cone and the ball is centered
// at the origin.
template <typename Derived>
DenseVec<typename Derived::Scalar> project_cone_ball(const ConeSpec& cone,
                                                     typename Derived::Scalar radius,
                                                     const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  require(radius >= Scalar(0), "project_cone_ball: radius must be nonnegative");
  DenseVec<Scalar> w = project_dual(cone, v);
  const Scalar n = w.norm();
  if (n > radius) w *= radius / n;
  return w;
}

// Membership helpers (up to the given absolute tolerance).
template <typename Derived>
bool in_cone(const ConeSpec& cone, const Eigen::MatrixBase<Derived>& v,
             typename Derived::Scalar tol) {
  return (project_cone(cone, v) - v).norm() <= tol;
}

}  // namespace nccp

#endif  // NCCP_CONES_HPP_
