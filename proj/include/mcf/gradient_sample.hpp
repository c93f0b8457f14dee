#pragma once

// Pointwise model of the normal covariant derivative of A and its splitting
// along the principal normal nu1.

#include <algorithm>
#include <cmath>
#include <vector>

#include "mcf/tensor_core.hpp"

namespace mcf {

/// Dense array T(a, i, j, k) with a < slots and i, j, k < n.
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(int slots, int n) : slots_(slots), n_(n), v_(static_cast<size_t>(slots) * n * n * n, 0.0) {}

  int slots() const { return slots_; }
  int n() const { return n_; }
  double operator()(int a, int i, int j, int k) const { return v_[idx(a, i, j, k)]; }
  double& operator()(int a, int i, int j, int k) { return v_[idx(a, i, j, k)]; }
  const std::vector<double>& data() const { return v_; }
  std::vector<double>& data() { return v_; }

  double norm2() const {
    double s = 0.0;
    for (double x : v_) s += x * x;
    return s;
  }
  double max_abs() const {
    double s = 0.0;
    for (double x : v_) s = std::max(s, std::abs(x));
    return s;
  }

  Tensor3 scaled(double lambda) const {
    Tensor3 out = *this;
    for (double& x : out.v_) x *= lambda;
    return out;
  }

  /// Average over the six permutations of (i, j, k) in every slot.
  Tensor3 symmetrized() const {
    Tensor3 out(slots_, n_);
    for (int a = 0; a < slots_; ++a)
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
          for (int k = 0; k < n_; ++k) {
            const Tensor3& t = *this;
            out(a, i, j, k) = (t(a, i, j, k) + t(a, i, k, j) + t(a, j, i, k) + t(a, j, k, i) +
                               t(a, k, i, j) + t(a, k, j, i)) /
                              6.0;
          }
    return out;
  }

 private:
  size_t idx(int a, int i, int j, int k) const {
    return ((static_cast<size_t>(a) * n_ + i) * n_ + j) * n_ + k;
  }
  int slots_ = 0;
  int n_ = 0;
  std::vector<double> v_;
};

/// T(a, i, j, k) models the derivative in direction e_i of A^a_{jk}. The Codazzi
/// defect D(a, i, j, k) is the background curvature term in
/// T(a,i,j,k) - T(a,j,i,k) = -D(a,i,j,k); it vanishes in a flat ambient space.
class GradientSample {
 public:
  GradientSample(Dims dims, Tensor3 t) : GradientSample(dims, std::move(t), Tensor3(dims.m, dims.n)) {}

  GradientSample(Dims dims, Tensor3 t, Tensor3 defect)
      : dims_(dims), t_(std::move(t)), defect_(std::move(defect)) {
    dims_.validate();
    if (t_.slots() != dims_.m || t_.n() != dims_.n || defect_.slots() != dims_.m ||
        defect_.n() != dims_.n) {
      throw InvalidDims("gradient sample shape does not match dims");
    }
  }

  /// Flat-background sample: the fully symmetric part of raw.
  static GradientSample fully_symmetric(Dims dims, const Tensor3& raw) {
    return {dims, raw.symmetrized()};
  }

  /// Sample whose antisymmetric part is forced by a background curvature defect.
  /// The defect is projected onto the algebraic curvature symmetries
  /// (antisymmetric in its first two indices, vanishing cyclic sum) first.
  static GradientSample with_defect(Dims dims, const Tensor3& raw, const Tensor3& raw_defect) {
    const int n = dims.n;
    Tensor3 d0(dims.m, n), d(dims.m, n);
    for (int a = 0; a < dims.m; ++a)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) d0(a, i, j, k) = 0.5 * (raw_defect(a, i, j, k) - raw_defect(a, j, i, k));
    for (int a = 0; a < dims.m; ++a)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            d(a, i, j, k) = d0(a, i, j, k) - (d0(a, i, j, k) + d0(a, j, k, i) + d0(a, k, i, j)) / 3.0;
    Tensor3 t = raw.symmetrized();
    for (int a = 0; a < dims.m; ++a)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) t(a, i, j, k) -= (d(a, i, j, k) + d(a, i, k, j)) / 3.0;
    return {dims, std::move(t), std::move(d)};
  }

  const Dims& dims() const { return dims_; }
  const Tensor3& t() const { return t_; }
  const Tensor3& defect() const { return defect_; }

  GradientSample scaled(double lambda) const {
    return {dims_, t_.scaled(lambda), defect_.scaled(lambda)};
  }

  /// Throws InvalidSample unless T is symmetric in its last two indices and
  /// satisfies the Codazzi relation with the stored defect.
  void validate(double tol = 1e-9) const {
    const int n = dims_.n;
    const double scale = std::max(1.0, std::max(t_.max_abs(), defect_.max_abs()));
    for (int a = 0; a < dims_.m; ++a)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            if (std::abs(t_(a, i, j, k) - t_(a, i, k, j)) > tol * scale)
              throw InvalidSample("derivative of A is not symmetric in its matrix indices");
            if (std::abs(t_(a, i, j, k) - t_(a, j, i, k) + defect_(a, i, j, k)) > tol * scale)
              throw InvalidSample("Codazzi symmetry violated");
          }
  }

  /// Gradient of the mean curvature vector, m x n: trace over the matrix indices.
  Mat grad_H() const {
    Mat g = Mat::Zero(dims_.m, dims_.n);
    for (int a = 0; a < dims_.m; ++a)
      for (int i = 0; i < dims_.n; ++i)
        for (int j = 0; j < dims_.n; ++j) g(a, i) += t_(a, i, j, j);
    return g;
  }

  /// The background trace w (m x n) that enters the Kato-type inequality.
  Mat background_trace() const {
    Mat w = Mat::Zero(dims_.m, dims_.n);
    for (int a = 0; a < dims_.m; ++a)
      for (int i = 0; i < dims_.n; ++i)
        for (int j = 0; j < dims_.n; ++j) w(a, i) -= defect_(a, j, i, j);
    return w;
  }

 private:
  Dims dims_;
  Tensor3 t_;
  Tensor3 defect_;
};

/// The pure-trace tensor E built from grad H and w; it carries the same traces
/// as any Codazzi sample with those data.
inline Tensor3 pure_trace_tensor(Dims dims, const Mat& gradH, const Mat& w) {
  const int n = dims.n;
  const double a1 = 1.0 / (n + 2);
  const double a2 = 2.0 / ((n + 2.0) * (n - 1.0));
  const double a3 = n / ((n + 2.0) * (n - 1.0));
  Tensor3 E(dims.m, n);
  for (int a = 0; a < dims.m; ++a)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double v = 0.0;
          if (j == k) v += a1 * gradH(a, i) - a2 * w(a, i);
          if (i == k) v += a1 * gradH(a, j) + a3 * w(a, j);
          if (i == j) v += a1 * gradH(a, k) + a3 * w(a, k);
          E(a, i, j, k) = v;
        }
  return E;
}

/// Pieces of the gradient relative to nu1. Scalar-valued tensors use slot 0.
struct GradientSplit {
  Mat gradH;             // m x n
  Vec grad_absH;         // n: derivative of |H|
  Mat grad_nu1;          // m x n: normal derivative of nu1
  Tensor3 principal;     // <T, nu1> = grad h + <grad A^-, nu1>
  Tensor3 orthogonal;    // T - nu1 <T, nu1> = hat grad A^- + h grad nu1
  Tensor3 grad_h;        // derivative of h
  Tensor3 minus_nu;      // <grad A^-, nu1> = -<A^-, grad nu1>
  Tensor3 grad_minus;    // full derivative of A^-
  Tensor3 hat_minus;     // part of grad A^- orthogonal to nu1
  Tensor3 ring_nu;       // <grad A-ring, nu1>
  Tensor3 Q;             // Q(i, j, k) with the derivative index last

  double gradA2 = 0, gradH2 = 0, grad_absH2 = 0, grad_nu2 = 0;
  double principal2 = 0, orthogonal2 = 0;
  double grad_minus2 = 0, hat_minus2 = 0, minus_nu2 = 0, ring_nu2 = 0;
  double hat_plus_hring2 = 0;   // |hat grad A^- + h-ring grad nu1|^2
  double cross = 0;             // sum Q_ijk <A^-_ij, grad_k nu1>
};

inline GradientSplit split_gradient(const PrincipalDecomposition& d, const GradientSample& g) {
  const int n = d.dims.n;
  const int m = d.dims.m;
  const Tensor3& T = g.t();
  const double absH = d.H.norm;
  GradientSplit s;
  s.gradH = g.grad_H();
  s.grad_absH = s.gradH.transpose() * d.nu1;
  s.grad_nu1 = (s.gradH - d.nu1 * s.grad_absH.transpose()) / absH;

  s.principal = Tensor3(1, n);
  s.orthogonal = Tensor3(m, n);
  s.grad_h = Tensor3(1, n);
  s.minus_nu = Tensor3(1, n);
  s.grad_minus = Tensor3(m, n);
  s.hat_minus = Tensor3(m, n);
  s.ring_nu = Tensor3(1, n);
  s.Q = Tensor3(1, n);

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double p = 0.0, mn = 0.0;
        for (int a = 0; a < m; ++a) {
          p += d.nu1(a) * T(a, i, j, k);
          mn -= d.a_minus[a](j, k) * s.grad_nu1(a, i);
        }
        s.principal(0, i, j, k) = p;
        s.minus_nu(0, i, j, k) = mn;
        s.grad_h(0, i, j, k) = p - mn;
        for (int a = 0; a < m; ++a) {
          s.orthogonal(a, i, j, k) = T(a, i, j, k) - d.nu1(a) * p;
          s.grad_minus(a, i, j, k) =
              T(a, i, j, k) - s.grad_h(0, i, j, k) * d.nu1(a) - d.h(j, k) * s.grad_nu1(a, i);
        }
        double gm_nu = 0.0;
        for (int a = 0; a < m; ++a) gm_nu += d.nu1(a) * s.grad_minus(a, i, j, k);
        for (int a = 0; a < m; ++a) s.hat_minus(a, i, j, k) = s.grad_minus(a, i, j, k) - gm_nu * d.nu1(a);
        s.ring_nu(0, i, j, k) = s.grad_h(0, i, j, k) - (j == k ? s.grad_absH(i) / n : 0.0) + gm_nu;
      }

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        s.Q(0, i, j, k) = s.ring_nu(0, k, i, j) - s.minus_nu(0, k, i, j) -
                          d.h_ring(i, j) * s.grad_absH(k) / absH;
        double c = 0.0;
        for (int a = 0; a < m; ++a) c += d.a_minus[a](i, j) * s.grad_nu1(a, k);
        s.cross += s.Q(0, i, j, k) * c;
        for (int a = 0; a < m; ++a) {
          const double v = s.hat_minus(a, i, j, k) + d.h_ring(j, k) * s.grad_nu1(a, i);
          s.hat_plus_hring2 += v * v;
        }
      }

  s.gradA2 = T.norm2();
  s.gradH2 = s.gradH.squaredNorm();
  s.grad_absH2 = s.grad_absH.squaredNorm();
  s.grad_nu2 = s.grad_nu1.squaredNorm();
  s.principal2 = s.principal.norm2();
  s.orthogonal2 = s.orthogonal.norm2();
  s.grad_minus2 = s.grad_minus.norm2();
  s.hat_minus2 = s.hat_minus.norm2();
  s.minus_nu2 = s.minus_nu.norm2();
  s.ring_nu2 = s.ring_nu.norm2();
  return s;
}

struct FrameResiduals {
  double bochner = 0.0;        // |grad A|^2 against its nu1 / orthogonal split
  double mean_curvature = 0.0; // |grad H|^2 against |H|^2 |grad nu1|^2 + |grad |H||^2
  double minus = 0.0;          // |grad A^-|^2 against its nu1 / orthogonal split
};

inline FrameResiduals frame_identity_residuals(const PrincipalDecomposition& d, const GradientSample& g) {
  g.validate();
  const GradientSplit s = split_gradient(d, g);
  const double H2 = d.H.norm * d.H.norm;
  return {s.gradA2 - (s.orthogonal2 + s.principal2),
          s.gradH2 - (H2 * s.grad_nu2 + s.grad_absH2),
          s.grad_minus2 - (s.hat_minus2 + s.minus_nu2)};
}

}  // namespace mcf
