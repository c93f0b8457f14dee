#pragma once

// Zeroth-order (reaction) terms of the curvature evolution equations and the
// algebraic bounds used to control them.

#include <cmath>
#include <string>

#include "mcf/pinching.hpp"
#include "mcf/tensor_core.hpp"

namespace mcf {

struct ReactionReport {
  std::string context;
  double R1 = 0.0;
  double R2 = 0.0;
  double reaction_gap = 0.0;
  double lhs_bound = 0.0;
  double rhs_bound = 0.0;
  double slack = 0.0;
  // Set only by the space-form estimate.
  bool blowup_checked = false;
  double blowup_slack = 0.0;
};

/// sum_{alpha beta} <A^alpha, A^beta>^2 without the normal-curvature part.
inline double inner_products_squared(const std::vector<Mat>& comps) {
  double s = 0.0;
  for (size_t a = 0; a < comps.size(); ++a)
    for (size_t b = 0; b < comps.size(); ++b) {
      const double ip = (comps[a].array() * comps[b].array()).sum();
      s += ip * ip;
    }
  return s;
}

inline double R1(const SecondFundamentalForm& A) {
  double s = inner_products_squared(A.components());
  for (int a = 0; a < A.m(); ++a)
    for (int b = 0; b < A.m(); ++b) s += (A[a] * A[b] - A[b] * A[a]).squaredNorm();
  return s;
}

inline double R2(const SecondFundamentalForm& A, const MeanCurvature& H) {
  return A.contract(H.vector).squaredNorm();
}

/// c R2 - sum <A_ij, A_pq>^2 - |R^perp|^2, i.e. c R2 - R1.
inline double reaction_gap(const SecondFundamentalForm& A, const MeanCurvature& H,
                           const NormalCurvature& Rn, double c) {
  return c * R2(A, H) - inner_products_squared(A.components()) - Rn.norm2;
}

/// Squared norms the reaction lemmas are phrased in.
struct ReactionNorms {
  double hring2 = 0, minus2 = 0, H2 = 0;
  double cross = 0;        // sum over normal slots of <h-ring, A^-_beta>^2
  double minus_inner = 0;  // sum_{alpha beta} <A^-_alpha, A^-_beta>^2
  double hat_perp = 0;     // |R-hat^perp|^2
  double principal_perp = 0;  // sum |R^perp(nu1)|^2
  double R1 = 0, R2 = 0, gap = 0;
};

inline ReactionNorms reaction_norms(const SecondFundamentalForm& A, const PrincipalDecomposition& d,
                                    double c) {
  const NormalCurvature Rn = normal_curvature(A, d);
  ReactionNorms r;
  r.hring2 = d.hring2;
  r.minus2 = d.Aminus2;
  r.H2 = d.H.norm * d.H.norm;
  for (int a = 0; a < A.m(); ++a) {
    const double ip = (d.h_ring.array() * d.a_minus[a].array()).sum();
    r.cross += ip * ip;
  }
  r.minus_inner = inner_products_squared(d.a_minus.components());
  r.hat_perp = Rn.hat_part_norm2;
  r.principal_perp = Rn.principal_norm2;
  r.R1 = R1(A);
  r.R2 = R2(A, d.H);
  r.gap = c * r.R2 - r.R1;
  return r;
}

inline ReactionReport make_report(std::string ctx, double lhs, double rhs) {
  ReactionReport r;
  r.context = std::move(ctx);
  r.lhs_bound = lhs;
  r.rhs_bound = rhs;
  r.slack = rhs - lhs;
  return r;
}

/// Lower bound of the reaction gap by f|A^-|^2 and f|h-ring|^2 (flat background).
inline ReactionReport lemma43_lower_bound(const SecondFundamentalForm& A, const PrincipalDecomposition& d,
                                          double f, double c) {
  const int n = A.n();
  if (!(f > 0)) throw NotPinched("f must be positive");
  if (!(c > 1.0 / n) || c > 4.0 / (3.0 * n)) throw InvalidConstants("need 1/n < c <= 4/(3n)");
  const ReactionNorms r = reaction_norms(A, d, c);
  const double k = n * c - 1.0;
  ReactionReport rep = make_report("gap_lower", 2.0 / k * f * r.minus2 + n * c / k * f * r.hring2, r.gap);
  rep.R1 = r.R1;
  rep.R2 = r.R2;
  rep.reaction_gap = r.gap;
  return rep;
}

/// Upper bound for 2R1 - 2cR2 on the boundary f = 0 of the pinching cone.
inline ReactionReport boundary_reaction_bound(const SecondFundamentalForm& A,
                                              const PrincipalDecomposition& d, double c, double dn) {
  const int n = A.n();
  if (!(c > 1.0 / n)) throw InvalidConstants("need c > 1/n");
  const ReactionNorms r = reaction_norms(A, d, c);
  const double k = n * c - 1.0;  // n (c - 1/n)
  const double e = c - 1.0 / n;
  const double rhs = (6.0 - 2.0 / k) * r.hring2 * r.minus2 + (3.0 - 2.0 / k) * r.minus2 * r.minus2 -
                     2.0 * c * dn / e * r.hring2 - 4.0 * dn / k * r.minus2 - 2.0 * dn * dn / k;
  ReactionReport rep = make_report("boundary_reaction", 2.0 * r.R1 - 2.0 * c * r.R2, rhs);
  rep.R1 = r.R1;
  rep.R2 = r.R2;
  rep.reaction_gap = r.gap;
  return rep;
}

/// Space-form estimate of 2R1 - 2cR2 together with the background terms.
/// When Q <= 0 and the constants admit it, also checks the quadratic blow-up bound.
inline ReactionReport cc_reaction_upper_bound(const SecondFundamentalForm& A,
                                              const PrincipalDecomposition& d, double Q, double c,
                                              double dn, double Kbar) {
  const int n = A.n();
  if (!(c > 1.0 / n)) throw InvalidConstants("need c > 1/n");
  const ReactionNorms r = reaction_norms(A, d, c);
  const double e = c - 1.0 / n;
  const double g = (1.0 / n) / e;  // (1/n)/(c - 1/n)
  const double dg = (dn / n) / e;
  const double h2 = r.hring2, m2 = r.minus2, H2 = r.H2;
  const double Aring2 = h2 + m2;
  const double lhs = 2.0 * r.R1 - 2.0 * c * r.R2 - 2.0 * n * Kbar * Aring2 - 2.0 * n * Kbar * e * H2;
  const double rhs = (6.0 - 2.0 * g) * h2 * m2 + (3.0 - 2.0 * g) * m2 * m2 +
                     2.0 * (dg + dn - 2.0 * n) * Kbar * h2 + 4.0 * (dg - n) * Kbar * m2 +
                     2.0 * (n - dg) * dn * Kbar * Kbar + 2.0 * (1.0 + g) * h2 * Q +
                     2.0 * g * Q * (2.0 * m2 - Q) + 2.0 * (n - 2.0 * dg) * Kbar * Q;
  ReactionReport rep = make_report("space_form_reaction", lhs, rhs);
  rep.R1 = r.R1;
  rep.R2 = r.R2;
  rep.reaction_gap = r.gap;
  const bool constants_ok = c <= std::min(4.0 / (3.0 * n), 3.0 / (n + 2.0)) && dn >= 2.0 * n - 2.0 / c;
  if (Q <= 0 && Kbar <= 0 && constants_ok) {
    rep.blowup_checked = true;
    rep.blowup_slack = -2.0 * g * Q * Q - lhs;
  }
  return rep;
}

}  // namespace mcf
