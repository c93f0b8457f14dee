#include <gtest/gtest.h>

#include "mcf/samplers.hpp"
#include "mcf/tensor_core.hpp"

namespace mcf {
namespace {

SecondFundamentalForm round_sphere_8_2() {
  return {Dims{8, 2}, {0.5 * Mat::Identity(8, 8), Mat::Zero(8, 8)}};
}

SecondFundamentalForm product_7_1() {
  Mat a1 = Mat::Zero(8, 8), a2 = Mat::Zero(8, 8);
  for (int i = 0; i < 7; ++i) a1(i, i) = 1.0;
  a2(7, 7) = 0.25;
  return {Dims{8, 2}, {a1, a2}};
}

TEST(TensorCore, MeanCurvatureOfRoundSphere) {
  const MeanCurvature H = mean_curvature(round_sphere_8_2());
  EXPECT_DOUBLE_EQ(H.vector(0), 4.0);
  EXPECT_DOUBLE_EQ(H.vector(1), 0.0);
  EXPECT_DOUBLE_EQ(H.norm, 4.0);
}

TEST(TensorCore, MeanCurvatureOfZeroForm) {
  const MeanCurvature H = mean_curvature(SecondFundamentalForm::zero(Dims{5, 3}));
  EXPECT_EQ(H.norm, 0.0);
  EXPECT_EQ(H.vector.squaredNorm(), 0.0);
}

TEST(TensorCore, MeanCurvatureOfSphereProduct) {
  const MeanCurvature H = mean_curvature(product_7_1());
  EXPECT_DOUBLE_EQ(H.vector(0), 7.0);
  EXPECT_DOUBLE_EQ(H.vector(1), 0.25);
}

TEST(TensorCore, RejectsAsymmetricComponents) {
  Mat a = Mat::Zero(3, 3);
  a(0, 1) = 1.0;
  EXPECT_THROW(SecondFundamentalForm(Dims{3, 1}, {a}), InvalidSample);
  EXPECT_NO_THROW(SecondFundamentalForm::symmetrized(Dims{3, 1}, {a}));
}

TEST(TensorCore, RejectsOversizedDims) {
  EXPECT_THROW(SecondFundamentalForm::zero(Dims{17, 1}), InvalidDims);
  EXPECT_THROW(SecondFundamentalForm::zero(Dims{1, 1}), InvalidDims);
  EXPECT_THROW(SecondFundamentalForm::zero(Dims{4, 0}), InvalidDims);
}

TEST(TensorCore, CodimensionOneDataHasNoMinusPart) {
  Rng rng = substream(3, 0);
  Mat a1 = gaussian_symmetric(5, rng);
  a1 += 3.0 * Mat::Identity(5, 5);
  const SecondFundamentalForm A(Dims{5, 2}, {a1, Mat::Zero(5, 5)});
  const PrincipalDecomposition d = principal_decompose(A);
  EXPECT_NEAR(d.Aminus2, 0.0, 1e-24);
}

TEST(TensorCore, RoundSphereIsUmbilic) {
  const PrincipalDecomposition d = principal_decompose(round_sphere_8_2());
  EXPECT_NEAR(d.h2, 2.0, 1e-14);
  EXPECT_NEAR(d.Aminus2, 0.0, 1e-14);
  EXPECT_NEAR(d.Aring2, 0.0, 1e-14);
  EXPECT_NEAR(d.A2 - d.H.norm * d.H.norm / 8.0, 0.0, 1e-14);
}

TEST(TensorCore, SphereProductDecomposition) {
  const PrincipalDecomposition d = principal_decompose(product_7_1());
  EXPECT_DOUBLE_EQ(d.A2, 7.0625);
  EXPECT_DOUBLE_EQ(d.H.norm * d.H.norm, 49.0625);
  // Oracle: |h|^2 = (7 * 49 + 0.0625^2) / 49.0625 computed independently.
  EXPECT_NEAR(d.h2, 6.991162420382166, 1e-13);
  EXPECT_NEAR(d.Aminus2, 0.07133757961783438, 1e-13);
}

TEST(TensorCore, DegenerateMeanCurvatureThrows) {
  Mat a = Mat::Zero(3, 3);
  a(0, 0) = 1.0;
  a(1, 1) = -1.0;
  EXPECT_THROW(principal_decompose(SecondFundamentalForm(Dims{3, 1}, {a})), DegenerateMeanCurvature);
  EXPECT_THROW(principal_decompose(SecondFundamentalForm::zero(Dims{3, 2})), DegenerateMeanCurvature);
}

TEST(TensorCore, ReconstructionAndOrthogonality) {
  Rng rng = substream(11, 0);
  const SecondFundamentalForm A = sample_gaussian(Dims{6, 4}, rng);
  const PrincipalDecomposition d = principal_decompose(A);
  EXPECT_NEAR(d.nu1.norm(), 1.0, 1e-15);
  for (int a = 0; a < 4; ++a) {
    const Mat rebuilt = d.a_minus[a] + d.nu1(a) * d.h;
    EXPECT_LE((rebuilt - A[a]).cwiseAbs().maxCoeff(), 1e-12);
  }
  EXPECT_LE(d.a_minus.contract(d.nu1).cwiseAbs().maxCoeff(), 1e-12);
  for (int a = 0; a < 4; ++a) EXPECT_LE(std::abs(d.a_minus[a].trace()), 1e-12);
  EXPECT_NEAR(d.h_ring.trace(), 0.0, 1e-12);
}

TEST(TensorCore, NormalFrameIsOrthogonalWithPrincipalFirst) {
  Rng rng = substream(5, 0);
  const Vec nu = random_unit(5, rng);
  const Mat F = normal_frame(nu);
  EXPECT_LE((F.transpose() * F - Mat::Identity(5, 5)).norm(), 1e-14);
  EXPECT_LE((F.col(0) - nu).norm(), 1e-14);
}

TEST(TensorCore, NormalCurvatureVanishesForOneSlot) {
  Rng rng = substream(7, 0);
  Mat a1 = gaussian_symmetric(4, rng) + 2.0 * Mat::Identity(4, 4);
  const SecondFundamentalForm A(Dims{4, 3}, {Mat::Zero(4, 4), a1, Mat::Zero(4, 4)});
  const NormalCurvature R = normal_curvature(A, principal_decompose(A));
  EXPECT_EQ(R.norm2, 0.0);
}

TEST(TensorCore, NormalCurvatureVanishesForSphereProduct) {
  const SecondFundamentalForm A = product_7_1();
  const NormalCurvature R = normal_curvature(A, principal_decompose(A));
  EXPECT_EQ(R.norm2, 0.0);
  EXPECT_EQ(R.hat_part_norm2, 0.0);
}

TEST(TensorCore, NormalCurvatureMatchesQuadrupleLoop) {
  Rng rng = substream(13, 0);
  const SecondFundamentalForm A = sample_gaussian(Dims{3, 3}, rng);
  const NormalCurvature R = normal_curvature(A, principal_decompose(A));
  double brute = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          double v = 0.0;
          for (int p = 0; p < 3; ++p) v += A[a](i, p) * A[b](j, p) - A[b](i, p) * A[a](j, p);
          brute += v * v;
        }
  EXPECT_NEAR(R.norm2, brute, 1e-12 * std::max(1.0, brute));
}

TEST(TensorCore, HatPartMatchesRotatedFrame) {
  Rng rng = substream(17, 0);
  const SecondFundamentalForm A = sample_gaussian(Dims{5, 4}, rng);
  const PrincipalDecomposition d = principal_decompose(A);
  const NormalCurvature R = normal_curvature(A, d);
  const std::vector<Mat> B = rotate_normal(A, normal_frame(d.nu1));
  double hat = 0.0, principal = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const double v = (B[a] * B[b] - B[b] * B[a]).squaredNorm();
      if (a >= 1 && b >= 1) hat += v;
      if (a == 0) principal += v;
    }
  EXPECT_NEAR(R.hat_part_norm2, hat, 1e-10 * std::max(1.0, hat));
  EXPECT_NEAR(R.principal_norm2, principal, 1e-10 * std::max(1.0, principal));
}

}  // namespace
}  // namespace mcf
