// NCCP - first-order primal-dual solvers for nonlinear convex cone programs
// Copyright 2026 NCCP Contributors
// Licensed under Apache 2.0
//
// Seeded self-check suites.  Each suite draws deterministic random samples
// and reports the worst violation observed, so the same machinery can back
// unit tests and the command-line `check` subcommand.

#ifndef NCCP_CHECKS_HPP_
#define NCCP_CHECKS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "nccp/cones.hpp"
#include "nccp/types.hpp"

namespace nccp::checks {

// Worst violations of the projection identities over a sample set.
// Values are violation magnitudes: 0 means the identity held exactly.
struct IdentityReport {
  double moreau = 0.0;            // |P_dual(v) + P_negcone(v) - v|
  double complementarity = 0.0;   // |<P_dual(v), P_negcone(v)>|
  double nonexpansive = 0.0;      // (|P v - P w| - |v - w|)_+
  double three_point = 0.0;       // violation of the shifted-projection inequality
  double idempotence = 0.0;       // |P(P v) - P v|
  double cross_membership = 0.0;  // (-<P_dual(v), x>)_+ for sampled x in C
  double variational = 0.0;       // (<v - P v, y - P v>)_+ for sampled y in the set

  double max_violation() const;
};

// A fixed menagerie of cone specifications covering every supported family,
// including a nested product.
std::vector<std::pair<std::string, ConeSpec>> standard_cone_zoo();

// Runs the identity checks on `samples` Gaussian draws (a mix of unit and
// wide scales) against the given cone.
IdentityReport projection_identity_report(const ConeSpec& cone, int samples,
                                          std::uint64_t seed);

}  // namespace nccp::checks

#endif  // NCCP_CHECKS_HPP_
