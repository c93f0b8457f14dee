#pragma once

// Pinching constants and the pinching quantities f and Q.

#include <boost/rational.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "mcf/tensor_core.hpp"

namespace mcf {

using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& r) { return boost::rational_cast<double>(r); }

enum class CRegime { general, codim_estimate };

/// Largest admissible pinching coefficient for dimension n.
inline Rational c_n(int n, CRegime regime) {
  if (n < 5) throw UnsupportedDimension("c_n needs n >= 5, got " + std::to_string(n));
  if (regime == CRegime::general) return std::min(Rational(4, 3 * n), Rational(1, n - 2));
  if (n >= 8) return Rational(4, 3 * n);
  return Rational(3 * (n + 1), 2 * n * (n + 2));
}

inline double kappa_n(int n, double c) {
  const double k = 3.0 / (n + 2) - c;
  if (!(k > 0.0)) throw NonpositiveKappa("3/(n+2) - c = " + std::to_string(k));
  return k;
}

struct BackgroundBounds {
  double K1 = 0.0;
  double K2 = 0.0;
  double L = 0.0;
};

struct AbsorptionWeights {
  double rho = 1.0;
  double theta = 1.0;
  double vartheta = 1.0;
};

/// Coefficients of |h-ring|^2, |A^-|^2, d and 1 in an upper bound for a
/// background curvature package in the pinching-preservation argument.
struct BoundCoefficients {
  double hring = 0.0;
  double minus = 0.0;
  double d = 0.0;
  double constant = 0.0;

  BoundCoefficients& operator+=(const BoundCoefficients& o) {
    hring += o.hring;
    minus += o.minus;
    d += o.d;
    constant += o.constant;
    return *this;
  }
};

/// Bounds for the four background packages, each as an affine function of
/// |h-ring|^2, |A^-|^2 and d. The package names follow the proof they come from:
/// the curvature-times-A term, the normal-direction term, the mixed normal
/// curvature term, and the derivative-of-curvature term.
struct BackgroundPackages {
  BoundCoefficients curvature, normal_direction, mixed, derivative;
};

inline BackgroundPackages background_packages(int n, int m, double c, BackgroundBounds b,
                                              AbsorptionWeights w = {}) {
  const double e = c - 1.0 / n;
  const double s = b.K1 + b.K2;
  const double q = 2.0 * (n * c * b.K1 + b.K2) / e;
  BackgroundPackages p;
  p.curvature = {4.0 * n * b.K1, 4.0 * n * b.K1, 0.0, 0.0};
  p.normal_direction = {2.0 * n * b.K2 + q + (w.rho * n * (m - 1) + n * (m - 2.0)) * s,
                        q + n / w.rho * s + 2.0 * n * b.K2, q, 0.0};
  p.mixed = {16.0 / 3.0 * w.rho * (n - 1) * (m - 1) * s,
             (16.0 / (3.0 * w.rho) * (n - 1) + 8.0 / 3.0 * std::sqrt(n - 1.0) * (m - 2)) * s, 0.0,
             0.0};
  if (s != 0.0) {
    p.derivative = {w.theta, n * w.vartheta, 0.0, b.L * b.L / w.theta + 4.0 * b.L * b.L / w.vartheta};
  }
  return p;
}

struct LowerBoundTerms {
  double C1 = 0.0, C2 = 0.0, C3 = 0.0, C4 = 0.0;
  double branch_hring = 0.0, branch_minus = 0.0, branch_constant = 0.0;
  double d = 0.0;
};

/// Closed-form constants C1..C4 and the three branches of the lower bound for d.
inline LowerBoundTerms d_lower_bound_terms(int n, int m, double c, BackgroundBounds b,
                                           AbsorptionWeights w = {}) {
  if (!(c > 1.0 / n)) throw InvalidConstants("need c > 1/n");
  if (b.K1 < 0 || b.K2 < 0 || b.L < 0) throw InvalidConstants("background bounds must be nonnegative");
  if (!(w.rho > 0 && w.theta > 0 && w.vartheta > 0)) throw InvalidConstants("weights must be positive");
  const double e = c - 1.0 / n;
  const double s = b.K1 + b.K2;
  LowerBoundTerms t;
  const double base = 4.0 * n * b.K1 + 2.0 * n * b.K2 + 2.0 * (n * c * b.K1 + b.K2) / e;
  t.C1 = base + (w.rho * n * (m - 1) + n * (m - 2.0) + 16.0 / 3.0 * w.rho * (n - 1) * (m - 1)) * s + w.theta;
  t.C2 = base +
         (n / w.rho + 16.0 / (3.0 * w.rho) * (n - 1) + 8.0 / 3.0 * std::sqrt(n - 1.0) * (m - 2)) * s +
         n * w.vartheta;
  t.C3 = 2.0 * (n * c * b.K1 + b.K2) / e;
  t.C4 = s != 0.0 ? b.L * b.L / w.theta + 4.0 * b.L * b.L / w.vartheta : 0.0;
  if (s == 0.0) return t;  // flat-type background: d = 0
  t.branch_hring = t.C1 * e / (2.0 * c);
  t.branch_minus = t.C2 * n * e / 4.0;
  t.branch_constant = n * e / 4.0 * (t.C3 + std::sqrt(t.C3 * t.C3 + 8.0 * t.C4 / (n * e)));
  t.d = std::max({t.branch_hring, t.branch_minus, t.branch_constant});
  return t;
}

inline double d_lower_bound(int n, int m, double c, BackgroundBounds b, AbsorptionWeights w = {}) {
  return d_lower_bound_terms(n, m, c, b, w).d;
}

enum class Regime { euclidean, bounded_background, space_form };

struct PinchingConstants {
  Dims dims;
  double c = 0.0;
  double d = 0.0;
  Regime regime = Regime::euclidean;
  BackgroundBounds bounds{};
  double Kbar = 0.0;

  /// Equality with the bounded-background lower bound: the preservation
  /// argument wants strict inequality, so callers may want to warn.
  bool at_lower_bound = false;

  static PinchingConstants euclidean(Dims dims, double c, double d) {
    PinchingConstants k{dims, c, d, Regime::euclidean};
    k.validate();
    return k;
  }
  static PinchingConstants bounded(Dims dims, double c, double d, BackgroundBounds b) {
    PinchingConstants k{dims, c, d, Regime::bounded_background, b};
    k.validate();
    return k;
  }
  static PinchingConstants space_form(Dims dims, double c, double d, double Kbar) {
    PinchingConstants k{dims, c, d, Regime::space_form, {}, Kbar};
    k.validate();
    return k;
  }

  void validate() {
    dims.validate();
    if (!(c > 1.0 / dims.n)) throw InvalidConstants("need c > 1/n");
    switch (regime) {
      case Regime::euclidean:
        if (d < 0) throw InvalidConstants("euclidean regime needs d >= 0");
        break;
      case Regime::bounded_background: {
        const double lb = d_lower_bound(dims.n, dims.m, c, bounds);
        if (d < lb) throw InvalidConstants("d is below the background lower bound " + std::to_string(lb));
        at_lower_bound = (d == lb);
        break;
      }
      case Regime::space_form:
        if (Kbar < 0 && d < 2.0 * dims.n - 2.0 / c)
          throw InvalidConstants("negative curvature needs d >= 2n - 2/c");
        break;
    }
  }
};

/// f = c|H|^2 - |A|^2 - d.
inline double pinching_f(const PrincipalDecomposition& dec, const MeanCurvature& H,
                         const PinchingConstants& k) {
  return k.c * H.norm * H.norm - dec.A2 - k.d;
}

/// Q = |A-ring|^2 - (c - 1/n)|H|^2 - d Kbar.
inline double pinching_Q(const PrincipalDecomposition& dec, const MeanCurvature& H,
                         const PinchingConstants& k) {
  if (k.regime != Regime::space_form) throw InvalidConstants("Q is defined in the space-form regime");
  return dec.Aring2 - (k.c - 1.0 / k.dims.n) * H.norm * H.norm - k.d * k.Kbar;
}

/// Scalar versions used where only the norms are at hand.
inline double pinching_f(double A2, double H2, double c, double d) { return c * H2 - A2 - d; }

}  // namespace mcf
