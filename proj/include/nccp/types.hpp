// NCCP - first-order primal-dual solvers for nonlinear convex cone programs
// Copyright 2026 NCCP Contributors
// Licensed under Apache 2.0

#ifndef NCCP_TYPES_HPP_
#define NCCP_TYPES_HPP_

#include <Eigen/Core>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace nccp {

template <typename Scalar>
using DenseVec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using DenseMat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vec = DenseVec<double>;
using Mat = DenseMat<double>;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Primal-dual pair (u, p).  The dual lives in the dual cone of the
// constraint cone, the primal in the feasible set.
struct PrimalDual {
  Vec u;
  Vec p;
};

enum class RunStatus {
  Converged,      // feasibility and objective-gap tolerances met
  IterationLimit, // max_iter reached before tolerances
  Diverged,       // iterate norm guard tripped
  Error,          // invalid configuration or oracle failure
};

inline const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return "converged";
    case RunStatus::IterationLimit: return "iteration_limit";
    case RunStatus::Diverged: return "diverged";
    case RunStatus::Error: return "error";
  }
  return "unknown";
}

// Thrown on contract violations: dimension mismatches, malformed
// specifications, missing oracle data.
class InvalidProblem : public std::invalid_argument {
 public:
  explicit InvalidProblem(const std::string& what)
      : std::invalid_argument(what) {}
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw InvalidProblem(what);
}

}  // namespace nccp

#endif  // NCCP_TYPES_HPP_
