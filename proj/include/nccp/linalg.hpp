// NCCP - first-order primal-dual solvers for nonlinear convex cone programs
// Copyright 2026 NCCP Contributors
// Licensed under Apache 2.0

#ifndef NCCP_LINALG_HPP_
#define NCCP_LINALG_HPP_

#include <Eigen/Dense>
#include <utility>

#include "nccp/types.hpp"

namespace nccp {

// Extreme eigenvalues (min, max) of the symmetrized matrix (P + P') / 2.
inline std::pair<double, double> sym_eig_bounds(const Mat& P) {
  const Mat S = 0.5 * (P + P.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(S, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return {ev.minCoeff(), ev.maxCoeff()};
}

// Spectral norm |A|_2 via the eigenvalues of A'A (dense, small problems).
inline double spectral_norm(const Mat& A) {
  const Mat gram = A.cols() <= A.rows() ? Mat(A.transpose() * A) : Mat(A * A.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(gram, Eigen::EigenvaluesOnly);
  const double lam = es.eigenvalues().maxCoeff();
  return lam > 0.0 ? std::sqrt(lam) : 0.0;
}

inline Vec soft_threshold(const Vec& v, double t) {
  if (t <= 0.0) return v;
  return v.array().sign() * (v.array().abs() - t).max(0.0);
}

// Soft threshold with per-coordinate thresholds.
inline Vec soft_threshold(const Vec& v, const Vec& t) {
  return v.array().sign() * (v.array().abs() - t.array()).max(0.0);
}

}  // namespace nccp

#endif  // NCCP_LINALG_HPP_
