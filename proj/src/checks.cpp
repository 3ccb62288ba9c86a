// NCCP - first-order primal-dual solvers for nonlinear convex cone programs
// Copyright 2026 NCCP Contributors
// Licensed under Apache 2.0

#include "nccp/checks.hpp"

#include <algorithm>
#include <random>

namespace nccp::checks {

double IdentityReport::max_violation() const {
  return std::max({moreau, complementarity, nonexpansive, three_point, idempotence,
                   cross_membership, variational});
}

std::vector<std::pair<std::string, ConeSpec>> standard_cone_zoo() {
  std::vector<std::pair<std::string, ConeSpec>> zoo;
  zoo.emplace_back("zero4", ConeSpec::zero(4));
  zoo.emplace_back("free3", ConeSpec::free_space(3));
  zoo.emplace_back("orthant6", ConeSpec::nonneg_orthant(6));
  zoo.emplace_back("norm1_5", ConeSpec::norm_cone(NormExponent::One, 5));
  zoo.emplace_back("norm2_5", ConeSpec::norm_cone(NormExponent::Two, 5));
  zoo.emplace_back("norminf_5", ConeSpec::norm_cone(NormExponent::Inf, 5));
  zoo.emplace_back("product_mixed",
                   ConeSpec::product({ConeSpec::norm_cone(NormExponent::Two, 3),
                                      ConeSpec::nonneg_orthant(2), ConeSpec::zero(2),
                                      ConeSpec::norm_cone(NormExponent::One, 4),
                                      ConeSpec::norm_cone(NormExponent::Inf, 3)}));
  return zoo;
}

IdentityReport projection_identity_report(const ConeSpec& cone, int samples,
                                          std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Eigen::Index d = cone.dim;
  auto draw = [&](double scale) {
    Vec v(d);
    for (Eigen::Index i = 0; i < d; ++i) v[i] = scale * gauss(rng);
    return v;
  };

  IdentityReport rep;
  for (int s = 0; s < samples; ++s) {
    const double scale = (s % 3 == 0) ? 5.0 : 1.0;
    const Vec v = draw(scale);
    const Vec w = draw(scale);

    const Vec pd = project_dual(cone, v);
    const Vec pn = project_neg_cone(cone, v);
    rep.moreau = std::max(rep.moreau, (pd + pn - v).norm());
    rep.complementarity = std::max(rep.complementarity, std::abs(pd.dot(pn)));

    const Vec pw = project_dual(cone, w);
    rep.nonexpansive = std::max(rep.nonexpansive, (pd - pw).norm() - (v - w).norm());
    rep.idempotence = std::max(rep.idempotence, (project_dual(cone, pd) - pd).norm());

    // <P_dual(v), x> >= 0 for any x in the primal cone.
    const Vec x_in_cone = project_cone(cone, draw(scale));
    rep.cross_membership = std::max(rep.cross_membership, -pd.dot(x_in_cone));

    // Variational characterization: <v - P v, y - P v> <= 0 for y in the set.
    const Vec pc = project_cone(cone, v);
    const Vec y_in_cone = project_cone(cone, draw(scale));
    rep.variational = std::max(rep.variational, (v - pc).dot(y_in_cone - pc));

    // Shifted-projection inequality: for any anchor w and increments u, v,
    //   2 <P(w+u) - P(w+v), u> <= |u - v|^2 + |P(w+u) - w|^2 - |P(w+v) - w|^2.
    const Vec anchor = draw(1.0);
    const Vec du = draw(1.0);
    const Vec dv = draw(1.0);
    const Vec pu = project_cone(cone, anchor + du);
    const Vec pv = project_cone(cone, anchor + dv);
    const double lhs = 2.0 * (pu - pv).dot(du);
    const double rhs = (du - dv).squaredNorm() + (pu - anchor).squaredNorm() -
                       (pv - anchor).squaredNorm();
    rep.three_point = std::max(rep.three_point, lhs - rhs);
  }
  return rep;
}

}  // namespace nccp::checks
