#include <gtest/gtest.h>

#include "mcf/pinching.hpp"
#include "mcf/samplers.hpp"

namespace mcf {
namespace {

TEST(Pinching, CnGeneral) {
  EXPECT_EQ(c_n(8, CRegime::general), Rational(1, 6));
  EXPECT_EQ(c_n(5, CRegime::general), Rational(4, 15));
}

TEST(Pinching, CnCodimEstimate) {
  EXPECT_EQ(c_n(5, CRegime::codim_estimate), Rational(9, 35));
  EXPECT_EQ(c_n(8, CRegime::codim_estimate), Rational(1, 6));
  EXPECT_EQ(c_n(9, CRegime::codim_estimate), Rational(4, 27));
}

TEST(Pinching, CnRejectsSmallDimensions) { EXPECT_THROW(c_n(4, CRegime::general), UnsupportedDimension); }

TEST(Pinching, CnOrderingAcrossDimensions) {
  for (int n = 5; n <= 12; ++n) {
    const Rational g = c_n(n, CRegime::general);
    const Rational k = c_n(n, CRegime::codim_estimate);
    // For n >= 9 the codimension estimate 4/(3n) exceeds 1/(n-2).
    if (n <= 8) EXPECT_LE(k, g) << n;
    else EXPECT_GT(k, g) << n;
    EXPECT_GT(k, Rational(1, n)) << n;
    EXPECT_GT(g, Rational(1, n)) << n;
  }
}

TEST(Pinching, Kappa) {
  EXPECT_NEAR(kappa_n(8, 1.0 / 6.0), 2.0 / 15.0, 1e-15);
  EXPECT_NEAR(kappa_n(10, 1.0 / 8.0), 1.0 / 8.0, 1e-15);
  EXPECT_THROW(kappa_n(5, 3.0 / 7.0), NonpositiveKappa);
}

TEST(Pinching, DLowerBoundFlatIsZero) {
  EXPECT_EQ(d_lower_bound(8, 2, 1.0 / 6.0, {0, 0, 0}), 0.0);
}

TEST(Pinching, DLowerBoundReferenceValue) {
  // Oracle from an independent script: C1 = 755/3, C2 = 776/3, C3 = 112,
  // branches 31.4583..., 21.5555..., 18.6666...
  const LowerBoundTerms t = d_lower_bound_terms(8, 2, 1.0 / 6.0, {1, 1, 0});
  EXPECT_NEAR(t.C1, 251.66666666666666, 1e-11);
  EXPECT_NEAR(t.C2, 258.66666666666663, 1e-11);
  EXPECT_NEAR(t.C3, 112.0, 1e-12);
  EXPECT_EQ(t.C4, 0.0);
  EXPECT_NEAR(t.d, 31.45833333333333, 1e-12);
}

TEST(Pinching, ZeroLCollapsesConstantBranch) {
  const int n = 8;
  const double c = 1.0 / 6.0;
  const LowerBoundTerms t = d_lower_bound_terms(n, 3, c, {0.5, 2.0, 0.0});
  EXPECT_NEAR(t.branch_constant, n * (c - 1.0 / n) * t.C3 / 2.0, 1e-12);
}

TEST(Pinching, DLowerBoundRejectsSmallC) {
  EXPECT_THROW(d_lower_bound(8, 2, 1.0 / 8.0, {1, 1, 0}), InvalidConstants);
}

TEST(Pinching, PackagesAssembleToTheClosedForms) {
  for (int m : {1, 2, 4}) {
    const BackgroundBounds b{0.7, 1.3, 2.1};
    const AbsorptionWeights w{0.8, 1.5, 0.6};
    const BackgroundPackages p = background_packages(9, m, 0.14, b, w);
    BoundCoefficients sum;
    sum += p.curvature;
    sum += p.normal_direction;
    sum += p.mixed;
    sum += p.derivative;
    const LowerBoundTerms t = d_lower_bound_terms(9, m, 0.14, b, w);
    EXPECT_NEAR(sum.hring, t.C1, 1e-12 * t.C1);
    EXPECT_NEAR(sum.minus, t.C2, 1e-12 * t.C2);
    EXPECT_NEAR(sum.d, t.C3, 1e-12 * t.C3);
    EXPECT_NEAR(sum.constant, t.C4, 1e-12 * t.C4);
  }
}

TEST(Pinching, LowerBoundMakesTheZerothOrderTermsNonpositive) {
  // At d equal to the lower bound every group of terms in the evolution of the
  // pinching quantity is nonpositive.
  const int n = 8, m = 3;
  const double c = 1.0 / 6.0, e = c - 1.0 / n;
  const LowerBoundTerms t = d_lower_bound_terms(n, m, c, {0.3, 0.9, 1.7});
  const double d = t.d;
  EXPECT_LE(-2.0 * c * d / e + t.C1, 1e-12);
  EXPECT_LE(-4.0 * d / (n * e) + t.C2, 1e-12);
  EXPECT_LE(-2.0 * d * d / (n * e) + t.C3 * d + t.C4, 1e-9 * d * d);
}

TEST(Pinching, DLowerBoundMonotoneOnGrid) {
  const double vals[] = {0.0, 0.25, 0.5, 1.0, 2.0};
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      for (int k = 0; k < 5; ++k) {
        const double here = d_lower_bound(8, 3, 1.0 / 6.0, {vals[i], vals[j], vals[k]});
        if (i < 4) {
          EXPECT_LE(here, d_lower_bound(8, 3, 1.0 / 6.0, {vals[i + 1], vals[j], vals[k]}));
        }
        if (j < 4) {
          EXPECT_LE(here, d_lower_bound(8, 3, 1.0 / 6.0, {vals[i], vals[j + 1], vals[k]}));
        }
        if (k < 4) {
          EXPECT_LE(here, d_lower_bound(8, 3, 1.0 / 6.0, {vals[i], vals[j], vals[k + 1]}));
        }
      }
}

TEST(Pinching, FOnModelData) {
  const SecondFundamentalForm sphere(Dims{8, 1}, {0.5 * Mat::Identity(8, 8)});
  const PrincipalDecomposition d = principal_decompose(sphere);
  const auto k = PinchingConstants::euclidean(Dims{8, 1}, 1.0 / 6.0, 0.0);
  EXPECT_NEAR(pinching_f(d, d.H, k), 2.0 / 3.0, 1e-14);
  EXPECT_NEAR(pinching_f(7.0, 49.0, 1.0 / 6.0, 0.0), 7.0 / 6.0, 1e-14);
  EXPECT_EQ(pinching_f(4.0, 30.0, 0.2, 2.0), 0.0);
}

TEST(Pinching, QOnModelData) {
  const int n = 8;
  const double r = 0.5;
  const double coth = 1.0 / std::tanh(r);
  const SecondFundamentalForm A(Dims{n, 2}, {coth * Mat::Identity(n, n), Mat::Zero(n, n)});
  const PrincipalDecomposition d = principal_decompose(A);
  const auto k = PinchingConstants::space_form(Dims{n, 2}, 1.0 / 6.0, 4.0, -1.0);
  // Oracle: -(1/24) 64 coth^2(0.5) + 4.
  EXPECT_NEAR(pinching_Q(d, d.H, k), -8.487185004883116, 1e-12);

  const auto flat = PinchingConstants::space_form(Dims{n, 2}, 1.0 / 6.0, 4.0, 0.0);
  EXPECT_NEAR(pinching_Q(d, d.H, flat), -(1.0 / 24.0) * 64.0 * coth * coth, 1e-12);
  EXPECT_LT(pinching_Q(d, d.H, flat), 0.0);
}

TEST(Pinching, QNeedsSpaceForm) {
  const SecondFundamentalForm A(Dims{5, 1}, {Mat::Identity(5, 5)});
  const PrincipalDecomposition d = principal_decompose(A);
  EXPECT_THROW(pinching_Q(d, d.H, PinchingConstants::euclidean(Dims{5, 1}, 0.25, 0.0)), InvalidConstants);
}

TEST(Pinching, ConstantsValidation) {
  EXPECT_THROW(PinchingConstants::euclidean(Dims{8, 2}, 0.1, 0.0), InvalidConstants);
  EXPECT_THROW(PinchingConstants::euclidean(Dims{8, 2}, 0.15, -1.0), InvalidConstants);
  EXPECT_THROW(PinchingConstants::space_form(Dims{8, 2}, 1.0 / 6.0, 3.0, -1.0), InvalidConstants);
  EXPECT_NO_THROW(PinchingConstants::space_form(Dims{8, 2}, 1.0 / 6.0, 4.0, -1.0));
  const double lb = d_lower_bound(8, 2, 1.0 / 6.0, {1, 1, 0});
  EXPECT_THROW(PinchingConstants::bounded(Dims{8, 2}, 1.0 / 6.0, lb - 1.0, {1, 1, 0}), InvalidConstants);
  EXPECT_TRUE(PinchingConstants::bounded(Dims{8, 2}, 1.0 / 6.0, lb, {1, 1, 0}).at_lower_bound);
  EXPECT_FALSE(PinchingConstants::bounded(Dims{8, 2}, 1.0 / 6.0, lb + 1.0, {1, 1, 0}).at_lower_bound);
}

TEST(Pinching, IdentityLinkingFToTheSplitNorms) {
  for (int trial = 0; trial < 200; ++trial) {
    Rng rng = substream(21, trial);
    const Dims dims{2 + trial % 7, 1 + trial % 4};
    const SecondFundamentalForm A = sample_gaussian(dims, rng);
    const PrincipalDecomposition d = principal_decompose(A);
    const double c = uniform(rng, 1.0 / dims.n + 0.01, 1.0);
    const double dn = uniform(rng, 0.0, 5.0);
    const double f = c * d.H.norm * d.H.norm - d.A2 - dn;
    const double lhs = (dims.n * c - 1.0) / dims.n * d.H.norm * d.H.norm;
    const double rhs = d.Aminus2 + d.hring2 + f + dn;
    EXPECT_NEAR(lhs, rhs, 1e-10 * std::max(1.0, std::abs(lhs)));
  }
}

TEST(Pinching, SpaceFormCoefficientSigns) {
  // With c at most min{4/(3n), 3/(n+2)} and d >= 2n - 2/c the coefficient of
  // Kbar|h-ring|^2 is nonnegative, and (d/n)/(c-1/n) - n >= 2/c - n >= 0.
  for (int n = 5; n <= 12; ++n) {
    const double cmax = std::min(4.0 / (3.0 * n), 3.0 / (n + 2.0));
    for (double frac : {0.1, 0.5, 1.0}) {
      const double c = 1.0 / n + frac * (cmax - 1.0 / n);
      for (double extra : {0.0, 1.0, 10.0}) {
        const double d = 2.0 * n - 2.0 / c + extra;
        const double g = (d / n) / (c - 1.0 / n);
        EXPECT_GE(g + d - 2.0 * n, -1e-12);
        EXPECT_GE(g - n, 2.0 / c - n - 1e-12);
        EXPECT_GE(2.0 / c - n, 0.0);
      }
    }
  }
}

TEST(Pinching, SpaceFormStrongerClaimFailsAtCanonicalConstants) {
  // The stronger claim (d/n)/(c-1/n) - n >= n cannot hold for c > 1/n at the
  // smallest admissible d, where the left side equals 2/c - n. At n = 8,
  // c = 1/6, d = 4 it is 4, below n = 8.
  const int n = 8;
  const double c = 1.0 / 6.0, d = 4.0;
  const double lhs = (d / n) / (c - 1.0 / n) - n;
  EXPECT_NEAR(lhs, 4.0, 1e-12);
  EXPECT_LT(lhs, n);
}

}  // namespace
}  // namespace mcf
