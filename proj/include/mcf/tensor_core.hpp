#pragma once

// Pointwise tensor algebra for the second fundamental form of a submanifold
// of dimension n and codimension m, in an orthonormal tangent and normal frame.

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "mcf/errors.hpp"

namespace mcf {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

inline constexpr int kMaxDim = 16;
inline constexpr double kTolH = 1e-12;

struct Dims {
  int n = 2;
  int m = 1;

  void validate() const {
    if (n < 2 || m < 1 || n > kMaxDim || m > kMaxDim) {
      throw InvalidDims("need 2 <= n <= 16 and 1 <= m <= 16, got n=" + std::to_string(n) +
                        " m=" + std::to_string(m));
    }
  }
  friend bool operator==(const Dims&, const Dims&) = default;
};

/// m symmetric n x n matrices A^alpha. Immutable.
class SecondFundamentalForm {
 public:
  SecondFundamentalForm(Dims dims, std::vector<Mat> components)
      : dims_(dims), comps_(std::move(components)) {
    dims_.validate();
    if (static_cast<int>(comps_.size()) != dims_.m) {
      throw InvalidDims("expected " + std::to_string(dims_.m) + " normal components");
    }
    for (const auto& c : comps_) {
      if (c.rows() != dims_.n || c.cols() != dims_.n) throw InvalidDims("component is not n x n");
      if (c != c.transpose()) throw InvalidSample("component matrix is not symmetric");
    }
  }

  static SecondFundamentalForm zero(Dims dims) {
    dims.validate();
    return {dims, std::vector<Mat>(dims.m, Mat::Zero(dims.n, dims.n))};
  }

  /// Replaces each component by its symmetric part before construction.
  static SecondFundamentalForm symmetrized(Dims dims, std::vector<Mat> raw) {
    for (auto& c : raw) {
      Mat s = 0.5 * (c + c.transpose());
      c = s;
    }
    return {dims, std::move(raw)};
  }

  const Dims& dims() const { return dims_; }
  int n() const { return dims_.n; }
  int m() const { return dims_.m; }
  const Mat& operator[](int alpha) const { return comps_[alpha]; }
  const std::vector<Mat>& components() const { return comps_; }

  double norm2() const {
    double s = 0.0;
    for (const auto& c : comps_) s += c.squaredNorm();
    return s;
  }

  SecondFundamentalForm scaled(double lambda) const {
    std::vector<Mat> out;
    out.reserve(comps_.size());
    for (const auto& c : comps_) out.push_back(lambda * c);
    return {dims_, std::move(out)};
  }

  /// Component-wise matrix contraction with a normal vector: sum_alpha v^alpha A^alpha.
  Mat contract(const Vec& v) const {
    Mat out = Mat::Zero(dims_.n, dims_.n);
    for (int a = 0; a < dims_.m; ++a) out += v(a) * comps_[a];
    return out;
  }

 private:
  Dims dims_;
  std::vector<Mat> comps_;
};

struct MeanCurvature {
  Vec vector;
  double norm = 0.0;
};

inline MeanCurvature mean_curvature(const SecondFundamentalForm& A) {
  Vec H(A.m());
  for (int a = 0; a < A.m(); ++a) H(a) = A[a].trace();
  return {H, H.norm()};
}

struct PrincipalDecomposition {
  Dims dims;
  MeanCurvature H;
  Vec nu1;
  Mat h;
  SecondFundamentalForm a_minus;
  Mat h_ring;
  double A2 = 0.0;
  double h2 = 0.0;
  double Aminus2 = 0.0;
  double hring2 = 0.0;
  double Aring2 = 0.0;
};

inline PrincipalDecomposition principal_decompose(const SecondFundamentalForm& A,
                                                  double tol_h = kTolH) {
  const int n = A.n();
  const int m = A.m();
  MeanCurvature H = mean_curvature(A);
  if (!(H.norm > tol_h)) {
    throw DegenerateMeanCurvature("|H| = " + std::to_string(H.norm) + " is below the threshold");
  }
  Vec nu1 = H.vector / H.norm;
  Mat h = A.contract(nu1);
  std::vector<Mat> minus;
  minus.reserve(m);
  for (int a = 0; a < m; ++a) {
    Mat c = A[a] - nu1(a) * h;
    // Roundoff can break exact symmetry; the construction is symmetric in exact arithmetic.
    c = (0.5 * (c + c.transpose())).eval();
    minus.push_back(std::move(c));
  }
  SecondFundamentalForm a_minus(A.dims(), std::move(minus));
  Mat h_ring = h - (H.norm / n) * Mat::Identity(n, n);

  PrincipalDecomposition d{A.dims(), H, nu1, h, a_minus, h_ring};
  d.A2 = A.norm2();
  d.h2 = h.squaredNorm();
  d.Aminus2 = d.a_minus.norm2();
  d.hring2 = h_ring.squaredNorm();
  d.Aring2 = d.hring2 + d.Aminus2;
  return d;
}

/// Orthogonal m x m matrix whose first column is the unit vector nu.
inline Mat normal_frame(const Vec& nu) {
  const auto m = nu.size();
  Eigen::HouseholderQR<Mat> qr(nu);
  Mat Q = qr.householderQ() * Mat::Identity(m, m);
  if (Q.col(0).dot(nu) < 0) Q.col(0) = -Q.col(0);
  return Q;
}

/// Components of A expressed in the normal frame given by the columns of F.
inline std::vector<Mat> rotate_normal(const SecondFundamentalForm& A, const Mat& F) {
  std::vector<Mat> out;
  out.reserve(A.m());
  for (int b = 0; b < A.m(); ++b) out.push_back(A.contract(F.col(b)));
  return out;
}

/// Flat-background normal curvature R^perp_{ij alpha beta} = [A^alpha, A^beta]_{ij}.
struct NormalCurvature {
  Dims dims;
  std::vector<Mat> components;       // index alpha * m + beta
  std::vector<Mat> principal_slice;  // index beta: sum_alpha nu1^alpha R_{ij alpha beta}
  double norm2 = 0.0;                // sum over i,j,alpha,beta
  double principal_norm2 = 0.0;      // sum over i,j,beta of R_{ij}(nu1)
  double hat_part_norm2 = 0.0;       // block orthogonal to nu1 in both normal slots

  const Mat& at(int alpha, int beta) const { return components[alpha * dims.m + beta]; }
};

inline NormalCurvature normal_curvature(const SecondFundamentalForm& A,
                                        const PrincipalDecomposition& decomp) {
  const int n = A.n();
  const int m = A.m();
  NormalCurvature R;
  R.dims = A.dims();
  R.components.resize(static_cast<size_t>(m) * m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      R.components[a * m + b] = A[a] * A[b] - A[b] * A[a];
      R.norm2 += R.components[a * m + b].squaredNorm();
    }
  }
  R.principal_slice.assign(m, Mat::Zero(n, n));
  for (int b = 0; b < m; ++b) {
    for (int a = 0; a < m; ++a) R.principal_slice[b] += decomp.nu1(a) * R.at(a, b);
    R.principal_norm2 += R.principal_slice[b].squaredNorm();
  }
  Mat P = Mat::Identity(m, m) - decomp.nu1 * decomp.nu1.transpose();
  Mat N(m, m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) N(a, b) = R.at(a, b)(i, j);
      R.hat_part_norm2 += (P * N * P).squaredNorm();
    }
  }
  return R;
}

}  // namespace mcf
