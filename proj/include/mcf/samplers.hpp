#pragma once

// Seeded random inputs for the inequality checks.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "mcf/gradient_sample.hpp"
#include "mcf/tensor_core.hpp"

namespace mcf {

using Rng = std::mt19937_64;

/// Independent generator for trial `index` of a run seeded with `seed`.
inline Rng substream(std::uint64_t seed, std::uint64_t index, std::uint64_t salt = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    static_cast<std::uint32_t>(salt), static_cast<std::uint32_t>(salt >> 32)};
  return Rng(seq);
}

inline double normal(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }
inline double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
inline double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

inline Mat gaussian_symmetric(int n, Rng& rng, double sigma = 1.0) {
  Mat M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = sigma * normal(rng);
  return 0.5 * (M + M.transpose());
}

inline Vec random_unit(int m, Rng& rng) {
  Vec v(m);
  do {
    for (int a = 0; a < m; ++a) v(a) = normal(rng);
  } while (v.norm() < 1e-8);
  return v / v.norm();
}

/// Gaussian components with a random magnitude per normal slot.
inline SecondFundamentalForm sample_gaussian(Dims dims, Rng& rng, double sigma = 1.0) {
  std::vector<Mat> comps;
  comps.reserve(dims.m);
  for (int a = 0; a < dims.m; ++a) comps.push_back(gaussian_symmetric(dims.n, rng, sigma * log_uniform(rng, 0.1, 10.0)));
  return {dims, std::move(comps)};
}

/// Form with |A|^2 <= c|H|^2 - d. With `boundary` the inequality is an
/// equality; otherwise f is positive, at a log-uniform relative distance from
/// the boundary so that near-boundary data are well represented.
inline SecondFundamentalForm sample_cone(Dims dims, Rng& rng, double c, double d, bool boundary,
                                         double sigma = 1.0) {
  const int n = dims.n;
  const int m = dims.m;
  const Vec nu = random_unit(m, rng);
  std::vector<Mat> ring(m);
  for (int a = 0; a < m; ++a) {
    Mat M = gaussian_symmetric(n, rng, sigma);
    M -= (M.trace() / n) * Mat::Identity(n, n);
    ring[a] = M;
  }
  // Rebalance the part along nu against the part orthogonal to nu.
  Mat along = Mat::Zero(n, n);
  for (int a = 0; a < m; ++a) along += nu(a) * ring[a];
  double s_along = log_uniform(rng, 1e-2, 1e2);
  double s_perp = log_uniform(rng, 1e-2, 1e2);
  const double pick = uniform(rng, 0.0, 1.0);
  if (pick < 0.05) s_along = 0.0;
  else if (pick < 0.10 && m > 1) s_perp = 0.0;
  double ring2 = 0.0;
  for (int a = 0; a < m; ++a) {
    ring[a] = s_along * nu(a) * along + s_perp * (ring[a] - nu(a) * along);
    ring2 += ring[a].squaredNorm();
  }
  if (ring2 + d <= 0.0) {
    ring[0] += gaussian_symmetric(n, rng, sigma);
    ring[0] -= (ring[0].trace() / n) * Mat::Identity(n, n);
    ring2 = 0.0;
    for (int a = 0; a < m; ++a) ring2 += ring[a].squaredNorm();
  }
  const double u = boundary ? 0.0 : log_uniform(rng, 1e-8, 10.0);
  const double H2 = (ring2 + d) / (c - 1.0 / n) * (1.0 + u);
  const double absH = std::sqrt(H2);
  std::vector<Mat> comps(m);
  for (int a = 0; a < m; ++a) comps[a] = ring[a] + (absH / n) * nu(a) * Mat::Identity(n, n);
  return SecondFundamentalForm::symmetrized(dims, std::move(comps));
}

inline Tensor3 gaussian_tensor(int slots, int n, Rng& rng, double sigma = 1.0) {
  Tensor3 t(slots, n);
  for (double& x : t.data()) x = sigma * normal(rng);
  return t;
}

/// Flat-background gradient: a fully symmetric tensor blended with a pure-trace
/// tensor, the blend ratio spread over several orders of magnitude so that the
/// near-equality regime of the trace inequalities is sampled.
inline GradientSample sample_codazzi(Dims dims, Rng& rng, double sigma = 1.0) {
  const int n = dims.n;
  Tensor3 sym = gaussian_tensor(dims.m, n, rng, sigma).symmetrized();
  Mat gradH(dims.m, n);
  for (int a = 0; a < dims.m; ++a)
    for (int i = 0; i < n; ++i) gradH(a, i) = sigma * normal(rng);
  const Tensor3 E = pure_trace_tensor(dims, gradH, Mat::Zero(dims.m, n));
  const double w_sym = log_uniform(rng, 1e-3, 1e1);
  for (size_t q = 0; q < sym.data().size(); ++q) sym.data()[q] = w_sym * sym.data()[q] + E.data()[q];
  return {dims, std::move(sym)};
}

/// Gradient with a genuine background Codazzi defect.
inline GradientSample sample_codazzi_with_defect(Dims dims, Rng& rng, double sigma = 1.0) {
  Tensor3 raw = gaussian_tensor(dims.m, dims.n, rng, sigma);
  Tensor3 defect = gaussian_tensor(dims.m, dims.n, rng, sigma * log_uniform(rng, 1e-2, 1e1));
  return GradientSample::with_defect(dims, raw, defect);
}

}  // namespace mcf
