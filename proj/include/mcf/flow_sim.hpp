#pragma once

// Mean curvature flow families that reduce to ODEs for a few radii: round
// spheres, shrinking cylinders, products of two spheres, and geodesic spheres
// in a space of constant negative curvature.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "mcf/pinching.hpp"
#include "mcf/reaction_terms.hpp"
#include "mcf/tensor_core.hpp"

namespace mcf {

inline constexpr double kRadiusMin = 1e-6;

enum class FamilyKind { sphere, cylinder, product, hyperbolic };

struct FlowFamily {
  FamilyKind kind = FamilyKind::sphere;
  int n = 2;
  int m = 1;
  int p = 0;  // product only: dimensions of the two factors
  int q = 0;
  double r0 = 1.0;  // sphere, cylinder, hyperbolic; first factor radius for products
  double b0 = 1.0;  // product only
  double Kbar = 0.0;

  static FlowFamily sphere(int n, int m, double r0) { return {FamilyKind::sphere, n, m, 0, 0, r0}; }
  static FlowFamily cylinder(int n, int m, double r0) { return {FamilyKind::cylinder, n, m, 0, 0, r0}; }
  static FlowFamily product(int p, int q, int m, double a0, double b0) {
    return {FamilyKind::product, p + q, m, p, q, a0, b0};
  }
  static FlowFamily hyperbolic(int n, int m, double r0, double Kbar) {
    return {FamilyKind::hyperbolic, n, m, 0, 0, r0, 1.0, Kbar};
  }

  void validate() const {
    Dims{n, m}.validate();
    if (kind == FamilyKind::product) {
      if (p < 1 || q < 1 || p + q != n) throw InvalidDims("product needs p, q >= 1 with p + q = n");
      if (m < 2) throw InvalidDims("product needs at least two normal slots");
      if (!(b0 > 0)) throw InvalidConstants("radii must be positive");
    }
    if (kind == FamilyKind::hyperbolic && !(Kbar < 0)) throw InvalidConstants("hyperbolic family needs Kbar < 0");
    if (!(r0 > 0)) throw InvalidConstants("radii must be positive");
  }

  int param_count() const { return kind == FamilyKind::product ? 2 : 1; }

  std::string name() const {
    switch (kind) {
      case FamilyKind::sphere: return "sphere";
      case FamilyKind::cylinder: return "cylinder";
      case FamilyKind::product: return "product";
      case FamilyKind::hyperbolic: return "hyperbolic";
    }
    return "";
  }

  /// Background curvature seen by the flow.
  double background_curvature() const { return kind == FamilyKind::hyperbolic ? Kbar : 0.0; }

  std::array<double, 2> initial() const { return {r0, kind == FamilyKind::product ? b0 : 0.0}; }

  /// Radius velocities.
  std::array<double, 2> rate(const std::array<double, 2>& r) const {
    switch (kind) {
      case FamilyKind::sphere: return {-n / r[0], 0.0};
      case FamilyKind::cylinder: return {-(n - 1) / r[0], 0.0};
      case FamilyKind::product: return {-p / r[0], -q / r[1]};
      case FamilyKind::hyperbolic: {
        const double s = std::sqrt(-Kbar);
        return {-n * s / std::tanh(s * r[0]), 0.0};
      }
    }
    return {0.0, 0.0};
  }

  double blowup_time() const {
    switch (kind) {
      case FamilyKind::sphere: return r0 * r0 / (2.0 * n);
      case FamilyKind::cylinder: return r0 * r0 / (2.0 * (n - 1));
      case FamilyKind::product: return std::min(r0 * r0 / (2.0 * p), b0 * b0 / (2.0 * q));
      case FamilyKind::hyperbolic: {
        const double s2 = -Kbar;
        return std::log(std::cosh(std::sqrt(s2) * r0)) / (n * s2);
      }
    }
    return 0.0;
  }

  /// Exact radii at time t.
  std::array<double, 2> exact(double t) const {
    if (!(t < blowup_time())) throw PastBlowup("t = " + std::to_string(t) + " is past the blow-up time");
    switch (kind) {
      case FamilyKind::sphere: return {std::sqrt(r0 * r0 - 2.0 * n * t), 0.0};
      case FamilyKind::cylinder: return {std::sqrt(r0 * r0 - 2.0 * (n - 1) * t), 0.0};
      case FamilyKind::product: return {std::sqrt(r0 * r0 - 2.0 * p * t), std::sqrt(b0 * b0 - 2.0 * q * t)};
      case FamilyKind::hyperbolic: {
        const double s = std::sqrt(-Kbar);
        return {std::acosh(std::cosh(s * r0) * std::exp(n * Kbar * t)) / s, 0.0};
      }
    }
    return {0.0, 0.0};
  }

  /// Second fundamental form of the family at the given radii.
  SecondFundamentalForm form(const std::array<double, 2>& r) const {
    const Dims dims{n, m};
    std::vector<Mat> comps(m, Mat::Zero(n, n));
    switch (kind) {
      case FamilyKind::sphere:
        comps[0] = Mat::Identity(n, n) / r[0];
        break;
      case FamilyKind::cylinder:
        for (int i = 0; i + 1 < n; ++i) comps[0](i, i) = 1.0 / r[0];
        break;
      case FamilyKind::product:
        for (int i = 0; i < p; ++i) comps[0](i, i) = 1.0 / r[0];
        for (int i = p; i < n; ++i) comps[1](i, i) = 1.0 / r[1];
        break;
      case FamilyKind::hyperbolic: {
        const double s = std::sqrt(-Kbar);
        comps[0] = Mat::Identity(n, n) * (s / std::tanh(s * r[0]));
        break;
      }
    }
    return {dims, std::move(comps)};
  }
};

struct FlowState {
  double t = 0.0;
  std::array<double, 2> params{};
  SecondFundamentalForm A = SecondFundamentalForm::zero(Dims{2, 1});
};

inline FlowState exact_state(const FlowFamily& fam, double t) {
  fam.validate();
  const auto r = fam.exact(t);
  return {t, r, fam.form(r)};
}

inline FlowState initial_state(const FlowFamily& fam) { return exact_state(fam, 0.0); }

namespace detail {

inline std::array<double, 2> axpy(const std::array<double, 2>& x, double h, const std::array<double, 2>& v) {
  return {x[0] + h * v[0], x[1] + h * v[1]};
}

inline bool radii_ok(const FlowFamily& fam, const std::array<double, 2>& r) {
  for (int i = 0; i < fam.param_count(); ++i)
    if (!(r[i] > kRadiusMin)) return false;
  return true;
}

inline std::array<double, 2> rk4(const FlowFamily& fam, const std::array<double, 2>& r, double h) {
  const auto k1 = fam.rate(r);
  const auto r2 = axpy(r, 0.5 * h, k1);
  if (!radii_ok(fam, r2)) throw PastBlowup("radius fell below the minimum");
  const auto k2 = fam.rate(r2);
  const auto r3 = axpy(r, 0.5 * h, k2);
  if (!radii_ok(fam, r3)) throw PastBlowup("radius fell below the minimum");
  const auto k3 = fam.rate(r3);
  const auto r4 = axpy(r, h, k3);
  if (!radii_ok(fam, r4)) throw PastBlowup("radius fell below the minimum");
  const auto k4 = fam.rate(r4);
  std::array<double, 2> out{};
  for (int i = 0; i < 2; ++i) out[i] = r[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

}  // namespace detail

/// Advances by dt with classical RK4, halving the substep while any radius is
/// below 10 * step * |radius velocity|.
inline FlowState step_rk4(const FlowFamily& fam, const FlowState& s, double dt) {
  if (!(dt > 0)) throw InvalidConstants("dt must be positive");
  auto r = s.params;
  double done = 0.0;
  while (done < dt) {
    double h = dt - done;
    for (;;) {
      const auto v = fam.rate(r);
      bool small = false;
      for (int i = 0; i < fam.param_count(); ++i)
        if (r[i] < 10.0 * h * std::abs(v[i])) small = true;
      if (!small) break;
      h *= 0.5;
    }
    r = detail::rk4(fam, r, h);
    if (!detail::radii_ok(fam, r)) throw PastBlowup("radius fell below the minimum");
    done += h;
  }
  return {s.t + dt, r, fam.form(r)};
}

struct TimeSeriesRecord {
  double t = 0.0;
  double param1 = 0.0;
  double param2 = std::numeric_limits<double>::quiet_NaN();
  double A2 = 0.0, H2 = 0.0, h2 = 0.0, Aminus2 = 0.0, f = 0.0;
  double Q = std::numeric_limits<double>::quiet_NaN();
  double ratio_pinch = 0.0, ratio_codim = 0.0, ratio_cyl = 0.0;
};

inline TimeSeriesRecord diagnostics(const FlowFamily& fam, const FlowState& s, const PinchingConstants& k) {
  const PrincipalDecomposition d = principal_decompose(s.A);
  TimeSeriesRecord r;
  r.t = s.t;
  r.param1 = s.params[0];
  if (fam.param_count() == 2) r.param2 = s.params[1];
  r.A2 = d.A2;
  r.H2 = d.H.norm * d.H.norm;
  r.h2 = d.h2;
  r.Aminus2 = d.Aminus2;
  r.f = pinching_f(d, d.H, k);
  if (k.regime == Regime::space_form) r.Q = pinching_Q(d, d.H, k);
  r.ratio_pinch = r.A2 / r.H2;
  r.ratio_codim = r.f != 0.0 ? r.Aminus2 / r.f : std::numeric_limits<double>::quiet_NaN();
  r.ratio_cyl = r.A2 - r.H2 / (fam.n - 1);
  return r;
}

/// Pinching constants matching the family's background.
inline PinchingConstants family_constants(const FlowFamily& fam, double c, double d) {
  if (fam.kind == FamilyKind::hyperbolic) return PinchingConstants::space_form(Dims{fam.n, fam.m}, c, d, fam.Kbar);
  return PinchingConstants::euclidean(Dims{fam.n, fam.m}, c, d);
}

struct SimulationResult {
  std::vector<TimeSeriesRecord> records;
  bool stopped_at_blowup = false;
};

/// Integrates from t = 0 to t_end, recording every `every` steps and the final
/// state. Stops early, without error, when the radius limit is reached.
inline SimulationResult simulate(const FlowFamily& fam, const PinchingConstants& k, double dt, double t_end,
                                 int every = 1) {
  fam.validate();
  if (every < 1) throw InvalidConstants("every must be >= 1");
  SimulationResult out;
  FlowState s = initial_state(fam);
  out.records.push_back(diagnostics(fam, s, k));
  const auto steps = static_cast<long long>(std::llround(t_end / dt));
  for (long long i = 1; i <= steps; ++i) {
    try {
      s = step_rk4(fam, s, dt);
    } catch (const PastBlowup&) {
      out.stopped_at_blowup = true;
      if (out.records.back().t != s.t) out.records.push_back(diagnostics(fam, s, k));
      break;
    }
    s.t = static_cast<double>(i) * dt;
    if (i % every == 0 || i == steps) out.records.push_back(diagnostics(fam, s, k));
  }
  return out;
}

struct EvolutionResidual {
  double t = 0.0;
  double dA2_fd = 0.0, dA2_reaction = 0.0;
  double dH2_fd = 0.0, dH2_reaction = 0.0;
  double rel_A2 = 0.0, rel_H2 = 0.0;
};

/// Compares centered differences of |A|^2 and |H|^2 along the exact solution
/// with the reaction terms of their evolution equations (gradients vanish).
/// h <= 0 picks 1e-5 * min(1, T) so the truncation error is measured in the
/// family's own time scale.
inline EvolutionResidual evolution_residual(const FlowFamily& fam, double t, double h = 0.0) {
  fam.validate();
  if (!(h > 0)) h = 1e-5 * std::min(1.0, fam.blowup_time());
  if (!(t + h < fam.blowup_time())) throw PastBlowup("t + h is past the blow-up time");
  auto norms = [&](double tt) {
    const SecondFundamentalForm A = fam.form(fam.exact(std::max(tt, 0.0)));
    const MeanCurvature H = mean_curvature(A);
    return std::array<double, 2>{A.norm2(), H.norm * H.norm};
  };
  EvolutionResidual r;
  r.t = t;
  std::array<double, 2> lo{}, hi = norms(t + h);
  if (t - h >= 0.0) {
    lo = norms(t - h);
    r.dA2_fd = (hi[0] - lo[0]) / (2.0 * h);
    r.dH2_fd = (hi[1] - lo[1]) / (2.0 * h);
  } else {
    // One-sided second-order difference at the initial time.
    const auto mid = norms(t);
    const auto hi2 = norms(t + 2.0 * h);
    r.dA2_fd = (-3.0 * mid[0] + 4.0 * hi[0] - hi2[0]) / (2.0 * h);
    r.dH2_fd = (-3.0 * mid[1] + 4.0 * hi[1] - hi2[1]) / (2.0 * h);
  }
  const SecondFundamentalForm A = fam.form(fam.exact(t));
  const MeanCurvature H = mean_curvature(A);
  const double K = fam.background_curvature();
  const double A2 = A.norm2(), H2 = H.norm * H.norm;
  r.dA2_reaction = 2.0 * R1(A) + 4.0 * K * H2 - 2.0 * fam.n * K * A2;
  r.dH2_reaction = 2.0 * R2(A, H) + 2.0 * fam.n * K * H2;
  r.rel_A2 = std::abs(r.dA2_fd - r.dA2_reaction) / std::max(std::abs(r.dA2_reaction), 1e-300);
  r.rel_H2 = std::abs(r.dH2_fd - r.dH2_reaction) / std::max(std::abs(r.dH2_reaction), 1e-300);
  return r;
}

struct BarrierVerdict {
  int samples = 0;
  bool holds = true;             // |H(t)|^2 >= barrier at every sample
  double worst_ratio = 1e300;    // min over samples of |H|^2 / barrier
  double max_rel_deviation = 0;  // max |(|H|^2 - barrier)| / barrier
  double barrier_blowup = 0.0;   // n / (2 max |H_0|^2)
  double blowup = 0.0;
};

/// Lower barrier |H(t)|^2 >= 1 / (1/|H_0|^2 - 2t/n) along the exact solution,
/// sampled at `samples` times in [0, min(T, barrier blow-up)).
inline BarrierVerdict blowup_bound_check(const FlowFamily& fam, int samples = 1000) {
  fam.validate();
  BarrierVerdict v;
  v.samples = samples;
  const MeanCurvature H0 = mean_curvature(fam.form(fam.exact(0.0)));
  const double H02 = H0.norm * H0.norm;
  v.barrier_blowup = fam.n / (2.0 * H02);
  v.blowup = fam.blowup_time();
  const double horizon = std::min(v.blowup, v.barrier_blowup);
  for (int k = 0; k < samples; ++k) {
    const double t = horizon * k / samples;
    const MeanCurvature H = mean_curvature(fam.form(fam.exact(t)));
    const double H2 = H.norm * H.norm;
    const double barrier = 1.0 / (1.0 / H02 - 2.0 * t / fam.n);
    const double ratio = H2 / barrier;
    v.worst_ratio = std::min(v.worst_ratio, ratio);
    v.max_rel_deviation = std::max(v.max_rel_deviation, std::abs(ratio - 1.0));
    if (ratio < 1.0 - 1e-12) v.holds = false;
  }
  // If the flow outlives the barrier's blow-up time the barrier cannot hold.
  if (v.blowup > v.barrier_blowup * (1.0 + 1e-12)) v.holds = false;
  return v;
}

// ---------------------------------------------------------------------------
// Quotient identity for the heat operator on a periodic 1-D grid
// ---------------------------------------------------------------------------

/// Discrete residual of
///   (d/dt - Lap)(w/z) = (2/z) <grad(w/z), grad z> + W/z - (w/z^2) Z
/// where (d/dt - Lap) w = W and (d/dt - Lap) z = Z, using centered
/// second-order stencils and one forward Euler step for w and z.
/// Returns the maximum pointwise residual.
inline double quotient_identity_residual(const std::vector<double>& w, const std::vector<double>& z,
                                         const std::vector<double>& W, const std::vector<double>& Z, double dt,
                                         double dx) {
  const size_t N = w.size();
  if (z.size() != N || W.size() != N || Z.size() != N || N < 3) throw InvalidDims("grid size mismatch");
  for (double v : z)
    if (!(v > 0)) throw NonpositiveZ("z must be positive");
  auto lap = [&](const std::vector<double>& u, size_t i) {
    return (u[(i + 1) % N] - 2.0 * u[i] + u[(i + N - 1) % N]) / (dx * dx);
  };
  auto grad = [&](const std::vector<double>& u, size_t i) { return (u[(i + 1) % N] - u[(i + N - 1) % N]) / (2.0 * dx); };
  std::vector<double> u(N), w1(N), z1(N);
  for (size_t i = 0; i < N; ++i) {
    u[i] = w[i] / z[i];
    w1[i] = w[i] + dt * (lap(w, i) + W[i]);
    z1[i] = z[i] + dt * (lap(z, i) + Z[i]);
  }
  double worst = 0.0;
  for (size_t i = 0; i < N; ++i) {
    const double lhs = (w1[i] / z1[i] - u[i]) / dt - lap(u, i);
    const double rhs = 2.0 / z[i] * grad(u, i) * grad(z, i) + W[i] / z[i] - w[i] / (z[i] * z[i]) * Z[i];
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

}  // namespace mcf
