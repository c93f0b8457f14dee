#pragma once

// Randomized, seeded checking of the algebraic inequalities behind the
// pinching, codimension and gradient estimates, with counterexample capture.

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mcf/gradient_sample.hpp"
#include "mcf/pinching.hpp"
#include "mcf/reaction_terms.hpp"
#include "mcf/samplers.hpp"
#include "mcf/tensor_core.hpp"

namespace mcf {

/// Both sides of an inequality lhs <= rhs. `scale` is the size of the terms
/// that cancel inside lhs and rhs; zero when the sides themselves set the scale.
struct Evaluation {
  double lhs = 0.0;
  double rhs = 0.0;
  double scale = 0.0;
  double slack() const { return rhs - lhs; }
  double tolerance(double rel = 1e-9) const {
    return rel * std::max({1.0, std::abs(lhs), std::abs(rhs), scale});
  }
  bool violated(double rel = 1e-9) const { return slack() < -tolerance(rel); }
};

enum class GradientCase { four_thirds, codim };

/// Constants shared by all checks of a run.
struct CheckContext {
  double c = 1.0 / 6.0;
  double d = 0.0;
  double delta = 0.5;
  double eta = 0.0;  // 0 selects (n-1)/(n(n+2))
  GradientCase gcase = GradientCase::four_thirds;
  double eps0 = 0.0;
  double Kbar = -1.0;
};

/// One trial input. Matrix lists for the commutator inequality live in A.
struct Sample {
  SecondFundamentalForm A;
  std::optional<GradientSample> grad;
  Mat w;
};

// ---------------------------------------------------------------------------
// Commutator inequality for symmetric matrices
// ---------------------------------------------------------------------------

inline Evaluation li_evaluate(const std::vector<Mat>& B) {
  double lhs = inner_products_squared(B);
  double norm2 = 0.0;
  for (size_t a = 0; a < B.size(); ++a) {
    norm2 += B[a].squaredNorm();
    for (size_t b = 0; b < B.size(); ++b) lhs += (B[a] * B[b] - B[b] * B[a]).squaredNorm();
  }
  return {lhs, 1.5 * norm2 * norm2};
}

// ---------------------------------------------------------------------------
// Kato-type inequalities
// ---------------------------------------------------------------------------

inline double default_eta(int n) { return (n - 1.0) / (n * (n + 2.0)); }

struct KatoEvaluation {
  Evaluation trace;    // |grad A|^2 against |grad H|^2 and |w|^2 for the given eta
  Evaluation refined;  // the eta = (n-1)/(n(n+2)) consequence
};

inline KatoEvaluation kato_evaluate(const GradientSample& g, const Mat& w, double eta) {
  g.validate();
  if (!(eta > 0)) throw InvalidConstants("eta must be positive");
  const int n = g.dims().n;
  const double gradA2 = g.t().norm2();
  const double gradH2 = g.grad_H().squaredNorm();
  const double w2 = w.squaredNorm();
  KatoEvaluation k;
  k.trace.lhs = (3.0 / (n + 2) - eta) * gradH2 -
                (2.0 / (n + 2)) * ((2.0 / (n + 2)) / eta - n / (n - 1.0)) * w2;
  k.trace.rhs = gradA2;
  k.refined.lhs = (n - 1.0) / (2.0 * n + 1.0) * gradA2 - 2.0 * n / ((n - 1.0) * (2.0 * n + 1.0)) * w2;
  k.refined.rhs = gradA2 - gradH2 / n;
  return k;
}

// ---------------------------------------------------------------------------
// Reaction-term inequalities (flat background)
// ---------------------------------------------------------------------------

namespace detail {

inline void require_four_thirds(int n, double c) {
  if (!(c > 1.0 / n) || c > 4.0 / (3.0 * n)) throw InvalidConstants("need 1/n < c <= 4/(3n)");
}

inline double positive_f(const PrincipalDecomposition& d, double c, double dn) {
  const double f = c * d.H.norm * d.H.norm - d.A2 - dn;
  if (!(f > 0)) throw NotPinched("f = " + std::to_string(f));
  return f;
}

}  // namespace detail

inline Evaluation reaction_evaluate_raw(const std::string& id, const SecondFundamentalForm& A,
                                        const CheckContext& ctx);

/// Evaluates the reaction inequality `id` on the form A. The tolerance scale is
/// (|A|^2 + |d| max(1,|Kbar|))^2, the common size of every degree-4 term.
inline Evaluation reaction_evaluate(const std::string& id, const SecondFundamentalForm& A,
                                    const CheckContext& ctx) {
  Evaluation e = reaction_evaluate_raw(id, A, ctx);
  const double s = A.norm2() + std::abs(ctx.d) * std::max(1.0, std::abs(ctx.Kbar));
  e.scale = s * s;
  return e;
}

inline Evaluation reaction_evaluate_raw(const std::string& id, const SecondFundamentalForm& A,
                                        const CheckContext& ctx) {
  const int n = A.n();
  const PrincipalDecomposition d = principal_decompose(A);
  const ReactionNorms r = reaction_norms(A, d, ctx.c);
  const double k = n * ctx.c - 1.0;
  if (id == "cross_term") return {r.cross + r.principal_perp, 2.0 * r.hring2 * r.minus2};
  if (id == "minus_block") return {r.minus_inner + r.hat_perp, 1.5 * r.minus2 * r.minus2};
  if (id == "combined_upper")
    return {r.minus_inner + r.hat_perp + r.principal_perp, 1.5 * r.minus2 * r.minus2 + 2.0 * r.hring2 * r.minus2};
  if (id == "boundary_reaction") {
    const ReactionReport rep = boundary_reaction_bound(A, d, ctx.c, ctx.d);
    return {rep.lhs_bound, rep.rhs_bound};
  }
  if (id == "space_form_reaction" || id == "space_form_blowup") {
    PinchingConstants K{A.dims(), ctx.c, ctx.d, Regime::space_form, {}, ctx.Kbar};
    const double Q = pinching_Q(d, d.H, K);
    const ReactionReport rep = cc_reaction_upper_bound(A, d, Q, ctx.c, ctx.d, ctx.Kbar);
    if (id == "space_form_reaction") return {rep.lhs_bound, rep.rhs_bound};
    if (!rep.blowup_checked) throw NotPinched("Q > 0 or constants outside the blow-up regime");
    return {rep.lhs_bound, rep.lhs_bound + rep.blowup_slack};
  }
  detail::require_four_thirds(n, ctx.c);
  const double f = detail::positive_f(d, ctx.c, ctx.d);
  if (id == "gap_nonnegative") return {0.0, r.gap};
  if (id == "gap_lower") {
    const ReactionReport rep = lemma43_lower_bound(A, d, f, ctx.c);
    return {rep.lhs_bound, rep.rhs_bound};
  }
  if (id == "weighted_gap")
    return {2.0 / k * r.minus2 * r.minus2 + n * ctx.c / k * r.hring2 * r.minus2, r.minus2 / f * r.gap};
  if (id == "reaction_absorption") {
    if (!(ctx.delta > 0) || ctx.delta > 0.5) throw InvalidConstants("need 0 < delta <= 1/2");
    return {r.minus_inner + r.hat_perp + r.principal_perp, (1.0 - ctx.delta) * r.minus2 / f * r.gap};
  }
  throw InvalidConstants("unknown reaction check '" + id + "'");
}

// ---------------------------------------------------------------------------
// Gradient-term inequalities (flat background)
// ---------------------------------------------------------------------------

/// Validates the constants of the two gradient regimes.
inline void require_gradient_regime(int n, const CheckContext& ctx, bool uses_delta) {
  if (!(ctx.c > 1.0 / n)) throw InvalidConstants("need c > 1/n");
  if (ctx.gcase == GradientCase::four_thirds) {
    if (n < 8) throw InvalidConstants("the 4/(3n) regime needs n >= 8");
    if (ctx.c > 4.0 / (3.0 * n)) throw InvalidConstants("need c <= 4/(3n)");
    if (uses_delta && (!(ctx.delta > 0) || ctx.delta > 1.0 / (5.0 * n - 8.0)))
      throw InvalidConstants("need 0 < delta <= 1/(5n-8)");
  } else {
    if (!(ctx.eps0 > 0)) throw InvalidConstants("need eps0 > 0");
    if (ctx.c > 3.0 * (n + 1) / (2.0 * n * (n + 2)) - ctx.eps0)
      throw InvalidConstants("need c <= 3(n+1)/(2n(n+2)) - eps0");
    const double eps = 2.0 * n * (n + 2) * ctx.eps0 / (3.0 * (n - 1));
    if (uses_delta && (!(ctx.delta > 0) || ctx.delta > std::min(0.5, eps)))
      throw InvalidConstants("delta too large for the chosen eps0");
  }
}

inline Evaluation gradient_evaluate(const std::string& id, const SecondFundamentalForm& A,
                                    const GradientSample& g, const CheckContext& ctx) {
  g.validate();
  const int n = A.n();
  const PrincipalDecomposition d = principal_decompose(A);
  const GradientSplit s = split_gradient(d, g);
  const double H2 = d.H.norm * d.H.norm;
  const double trace_coef = 2.0 * (n - 1.0) / (n * (n + 2.0));
  if (id == "normal_trace") return {3.0 / (n + 2) * H2 * s.grad_nu2, s.orthogonal2};
  if (id == "principal_trace") return {trace_coef * s.grad_absH2, s.ring_nu2};
  if (id == "traceless_normal_trace") return {trace_coef * H2 * s.grad_nu2, s.hat_plus_hring2};

  const bool case1 = ctx.gcase == GradientCase::four_thirds;
  require_gradient_regime(n, ctx, id == "gradient_absorption");
  const double f = detail::positive_f(d, ctx.c, ctx.d);
  const double m2 = d.Aminus2, hr2 = d.hring2, gn2 = s.grad_nu2;
  const double weight = m2 / f;
  if (id == "bochner_minus") {
    if (case1)
      return {(4.0 * n - 10.0) / (n + 2) * hr2 * gn2 + 6.0 * (n - 1.0) / (n + 2) * (m2 + f + ctx.d) * gn2,
              2.0 * s.hat_minus2};
    return {2.0 * hr2 * gn2 + 4.0 * (m2 + f + ctx.d) * gn2, 2.0 * s.hat_minus2};
  }
  if (id == "bochner_f") {
    const double rhs = 2.0 * weight * (s.gradA2 - ctx.c * s.gradH2);
    if (case1)
      return {(5.0 * n - 8.0) / (3.0 * (n - 1.0)) * weight * s.ring_nu2 + (10.0 * n - 16.0) / (n + 2) * m2 * gn2, rhs};
    return {1.5 * weight * s.ring_nu2 + 6.0 * m2 * gn2, rhs};
  }
  if (id == "gradient_cross") {
    const double lhs = 4.0 * s.cross;
    if (case1)
      return {lhs, 2.0 * s.minus_nu2 + (5.0 * n - 9.0) / (3.0 * (n - 1.0)) * weight * s.ring_nu2 +
                       2.0 * m2 * gn2 + 3.0 * (n - 1.0) / (n - 3.0) * f * gn2 +
                       2.0 * (n + 2.0) / (n + 3.0) * hr2 * gn2};
    const double eps = 2.0 * n * (n + 2) * ctx.eps0 / (3.0 * (n - 1));
    return {lhs, 2.0 * s.minus_nu2 + (1.0 - eps) * 1.5 * weight * s.ring_nu2 + 2.0 * m2 * gn2 +
                     4.0 * f * gn2 + 2.0 * hr2 * gn2};
  }
  if (id == "gradient_absorption")
    return {4.0 * s.cross, 2.0 * s.grad_minus2 + 2.0 * (1.0 - ctx.delta) * weight * (s.gradA2 - ctx.c * s.gradH2)};
  throw InvalidConstants("unknown gradient check '" + id + "'");
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

enum class InputKind { matrices, gaussian_form, cone_form, boundary_form, space_form, kato, form_and_gradient };

struct LemmaSpec {
  std::string id;
  InputKind input;
  std::string description;
};

inline const std::vector<LemmaSpec>& lemma_registry() {
  static const std::vector<LemmaSpec> reg = {
      {"li_commutator", InputKind::matrices, "sum <B_a,B_b>^2 + sum |[B_a,B_b]|^2 <= 3/2 (sum |B_a|^2)^2"},
      {"kato_trace", InputKind::kato, "|grad A|^2 >= (3/(n+2) - eta)|grad H|^2 - C(eta)|w|^2"},
      {"kato_refined", InputKind::kato, "|grad A|^2 - |grad H|^2/n >= (n-1)/(2n+1)|grad A|^2 - C|w|^2"},
      {"cross_term", InputKind::gaussian_form, "sum <h-ring,A^-_b>^2 + sum|R(nu1)|^2 <= 2|h-ring|^2|A^-|^2"},
      {"minus_block", InputKind::gaussian_form, "sum <A^-,A^->^2 + |R-hat|^2 <= 3/2 |A^-|^4"},
      {"combined_upper", InputKind::gaussian_form, "minus block plus R(nu1) <= 3/2|A^-|^4 + 2|h-ring|^2|A^-|^2"},
      {"gap_nonnegative", InputKind::cone_form, "c R2 - R1 >= 0 inside the pinching cone"},
      {"gap_lower", InputKind::cone_form, "gap >= 2/(nc-1) f|A^-|^2 + nc/(nc-1) f|h-ring|^2"},
      {"weighted_gap", InputKind::cone_form, "(|A^-|^2/f) gap >= 2/(nc-1)|A^-|^4 + nc/(nc-1)|h-ring|^2|A^-|^2"},
      {"reaction_absorption", InputKind::cone_form, "minus block plus R(nu1) <= (1-delta)(|A^-|^2/f) gap"},
      {"boundary_reaction", InputKind::boundary_form, "2R1 - 2cR2 bound on the boundary f = 0"},
      {"space_form_reaction", InputKind::space_form, "space-form reaction bound in terms of Q"},
      {"space_form_blowup", InputKind::space_form, "space-form reaction <= -(2/n)/(c-1/n) Q^2 when Q <= 0"},
      {"normal_trace", InputKind::form_and_gradient, "3/(n+2)|H|^2|grad nu1|^2 <= |hat grad A^- + h grad nu1|^2"},
      {"principal_trace", InputKind::form_and_gradient, "2(n-1)/(n(n+2))|grad|H||^2 <= |<grad A-ring, nu1>|^2"},
      {"traceless_normal_trace", InputKind::form_and_gradient,
       "2(n-1)/(n(n+2))|H|^2|grad nu1|^2 <= |hat grad A^- + h-ring grad nu1|^2"},
      {"bochner_minus", InputKind::form_and_gradient, "lower bound for 2|hat grad A^-|^2"},
      {"bochner_f", InputKind::form_and_gradient, "lower bound for 2(|A^-|^2/f)(|grad A|^2 - c|grad H|^2)"},
      {"gradient_cross", InputKind::form_and_gradient, "upper bound for 4 sum Q_ijk <A^-_ij, grad_k nu1>"},
      {"gradient_absorption", InputKind::form_and_gradient,
       "4 sum Q <A^-, grad nu1> <= 2|grad A^-|^2 + 2(1-delta)(|A^-|^2/f)(|grad A|^2 - c|grad H|^2)"},
  };
  return reg;
}

inline const LemmaSpec& lemma_spec(const std::string& id) {
  for (const auto& l : lemma_registry())
    if (l.id == id) return l;
  throw InvalidConstants("unknown check id '" + id + "'");
}

inline std::vector<std::string> suite(const std::string& name) {
  std::vector<std::string> out;
  for (const auto& l : lemma_registry()) {
    const bool li = l.input == InputKind::matrices;
    const bool kato = l.input == InputKind::kato;
    const bool grad = l.input == InputKind::form_and_gradient;
    const bool reaction = !li && !kato && !grad;
    if (name == "all" || (name == "li" && li) || (name == "kato" && kato) ||
        (name == "reaction" && reaction) || (name == "gradient" && grad))
      out.push_back(l.id);
  }
  if (out.empty()) throw InvalidConstants("unknown suite '" + name + "'");
  return out;
}

/// Evaluates check `id` on a prepared sample.
inline Evaluation evaluate(const std::string& id, const Sample& s, const CheckContext& ctx) {
  const LemmaSpec& spec = lemma_spec(id);
  switch (spec.input) {
    case InputKind::matrices:
      return li_evaluate(s.A.components());
    case InputKind::kato: {
      const double eta = ctx.eta > 0 ? ctx.eta : default_eta(s.A.n());
      const KatoEvaluation k = kato_evaluate(*s.grad, s.w, eta);
      return id == "kato_trace" ? k.trace : k.refined;
    }
    case InputKind::form_and_gradient:
      return gradient_evaluate(id, s.A, *s.grad, ctx);
    default:
      return reaction_evaluate(id, s.A, ctx);
  }
}

/// Draws the input for check `id` from a trial generator.
inline Sample draw(const std::string& id, Dims dims, const CheckContext& ctx, Rng& rng, double sigma = 1.0) {
  const LemmaSpec& spec = lemma_spec(id);
  switch (spec.input) {
    case InputKind::matrices:
    case InputKind::gaussian_form:
      return {sample_gaussian(dims, rng, sigma), std::nullopt, Mat()};
    case InputKind::cone_form:
      return {sample_cone(dims, rng, ctx.c, ctx.d, false, sigma), std::nullopt, Mat()};
    case InputKind::boundary_form:
      return {sample_cone(dims, rng, ctx.c, ctx.d, true, sigma), std::nullopt, Mat()};
    case InputKind::space_form: {
      // Half the trials lie in the region Q <= 0, the rest are unconstrained.
      if (uniform(rng, 0.0, 1.0) < 0.5)
        return {sample_gaussian(dims, rng, sigma), std::nullopt, Mat()};
      return {sample_cone(dims, rng, ctx.c, std::max(0.0, -ctx.d * ctx.Kbar), false, sigma), std::nullopt, Mat()};
    }
    case InputKind::kato: {
      SecondFundamentalForm A = SecondFundamentalForm::zero(dims);
      if (uniform(rng, 0.0, 1.0) < 0.5) {
        GradientSample g = sample_codazzi_with_defect(dims, rng, sigma);
        Mat w = g.background_trace();
        return {A, std::move(g), std::move(w)};
      }
      GradientSample g = sample_codazzi(dims, rng, sigma);
      const double ws = sigma * log_uniform(rng, 1e-2, 1e1);
      Mat w(dims.m, dims.n);
      for (int a = 0; a < dims.m; ++a)
        for (int i = 0; i < dims.n; ++i) w(a, i) = ws * normal(rng);
      return {A, std::move(g), std::move(w)};
    }
    case InputKind::form_and_gradient: {
      SecondFundamentalForm A = sample_cone(dims, rng, ctx.c, ctx.d, false, sigma);
      return {A, sample_codazzi(dims, rng, sigma), Mat()};
    }
  }
  throw InvalidConstants("unreachable");
}

// ---------------------------------------------------------------------------
// Replay files
// ---------------------------------------------------------------------------

inline std::string fmt17(double x) {
  if (std::isnan(x)) return "NaN";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline nlohmann::json context_json(const CheckContext& ctx) {
  return {{"c", fmt17(ctx.c)},         {"d", fmt17(ctx.d)},
          {"delta", fmt17(ctx.delta)}, {"eta", fmt17(ctx.eta)},
          {"gradient_case", ctx.gcase == GradientCase::four_thirds ? "four_thirds" : "codim"},
          {"eps0", fmt17(ctx.eps0)},   {"Kbar", fmt17(ctx.Kbar)}};
}

inline CheckContext context_from_json(const nlohmann::json& j) {
  CheckContext ctx;
  ctx.c = std::stod(j.at("c").get<std::string>());
  ctx.d = std::stod(j.at("d").get<std::string>());
  ctx.delta = std::stod(j.at("delta").get<std::string>());
  ctx.eta = std::stod(j.at("eta").get<std::string>());
  ctx.gcase = j.at("gradient_case") == "codim" ? GradientCase::codim : GradientCase::four_thirds;
  ctx.eps0 = std::stod(j.at("eps0").get<std::string>());
  ctx.Kbar = std::stod(j.at("Kbar").get<std::string>());
  return ctx;
}

inline nlohmann::json sample_json(const Sample& s) {
  nlohmann::json j;
  j["dims"] = {{"n", s.A.n()}, {"m", s.A.m()}};
  nlohmann::json A = nlohmann::json::array();
  for (const auto& M : s.A.components()) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < M.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int k = 0; k < M.cols(); ++k) row.push_back(fmt17(M(i, k)));
      rows.push_back(row);
    }
    A.push_back(rows);
  }
  j["A"] = A;
  auto flat = [](const std::vector<double>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (double x : v) a.push_back(fmt17(x));
    return a;
  };
  if (s.grad) {
    j["grad"] = flat(s.grad->t().data());
    j["defect"] = flat(s.grad->defect().data());
  }
  if (s.w.size() > 0) {
    std::vector<double> w(s.w.data(), s.w.data() + s.w.size());  // column-major
    j["w"] = flat(w);
  }
  return j;
}

inline Sample sample_from_json(const nlohmann::json& j) {
  const Dims dims{j.at("dims").at("n").get<int>(), j.at("dims").at("m").get<int>()};
  std::vector<Mat> comps;
  for (const auto& rows : j.at("A")) {
    Mat M(dims.n, dims.n);
    for (int i = 0; i < dims.n; ++i)
      for (int k = 0; k < dims.n; ++k) M(i, k) = std::stod(rows.at(i).at(k).get<std::string>());
    comps.push_back(M);
  }
  Sample s{SecondFundamentalForm(dims, std::move(comps)), std::nullopt, Mat()};
  auto unflat = [&](const nlohmann::json& a, std::vector<double>& out) {
    out.clear();
    for (const auto& x : a) out.push_back(std::stod(x.get<std::string>()));
  };
  if (j.contains("grad")) {
    Tensor3 t(dims.m, dims.n), def(dims.m, dims.n);
    unflat(j.at("grad"), t.data());
    unflat(j.at("defect"), def.data());
    s.grad = GradientSample(dims, std::move(t), std::move(def));
  }
  if (j.contains("w")) {
    std::vector<double> w;
    unflat(j.at("w"), w);
    s.w = Eigen::Map<Mat>(w.data(), dims.m, dims.n);
  }
  return s;
}

/// Replay file: dims, every entry as a 17-digit decimal string, check id, constants, seed.
inline nlohmann::json replay_json(const std::string& id, const Sample& s, const CheckContext& ctx,
                                  std::uint64_t seed, std::uint64_t trial) {
  nlohmann::json j = sample_json(s);
  j["lemma_id"] = id;
  j["constants"] = context_json(ctx);
  j["seed"] = seed;
  j["trial"] = trial;
  const Evaluation e = evaluate(id, s, ctx);
  j["lhs"] = fmt17(e.lhs);
  j["rhs"] = fmt17(e.rhs);
  return j;
}

inline Evaluation replay(const nlohmann::json& j) {
  return evaluate(j.at("lemma_id").get<std::string>(), sample_from_json(j), context_from_json(j.at("constants")));
}

inline std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

/// 64-bit FNV-1a digest of the 17-digit rendering of a sample, as hex.
inline std::string sample_digest(const Sample& s) {
  const std::uint64_t h = fnv1a(sample_json(s).dump());
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// Shrinking and campaigns
// ---------------------------------------------------------------------------

/// Still-violating check that tolerates inputs leaving the lemma's domain.
inline bool still_violates(const std::string& id, const Sample& s, const CheckContext& ctx, double rel_tol) {
  try {
    return evaluate(id, s, ctx).violated(rel_tol);
  } catch (const Error&) {
    return false;
  }
}

/// Halves matrix entries (symmetric pairs together) and gradient slots while the
/// violation persists.
inline Sample shrink(const std::string& id, Sample s, const CheckContext& ctx, double rel_tol = 1e-9,
                     int max_passes = 8) {
  if (!still_violates(id, s, ctx, rel_tol)) return s;
  const Dims dims = s.A.dims();
  for (int pass = 0; pass < max_passes; ++pass) {
    bool changed = false;
    for (int a = 0; a < dims.m; ++a)
      for (int i = 0; i < dims.n; ++i)
        for (int k = i; k < dims.n; ++k) {
          if (s.A[a](i, k) == 0.0) continue;
          std::vector<Mat> comps = s.A.components();
          comps[a](i, k) *= 0.5;
          comps[a](k, i) = comps[a](i, k);
          Sample trial{SecondFundamentalForm(dims, std::move(comps)), s.grad, s.w};
          if (still_violates(id, trial, ctx, rel_tol)) {
            s = std::move(trial);
            changed = true;
          }
        }
    if (s.grad) {
      for (int a = 0; a < dims.m; ++a) {
        Tensor3 t = s.grad->t();
        Tensor3 def = s.grad->defect();
        for (int i = 0; i < dims.n; ++i)
          for (int j = 0; j < dims.n; ++j)
            for (int k = 0; k < dims.n; ++k) {
              t(a, i, j, k) *= 0.5;
              def(a, i, j, k) *= 0.5;
            }
        Sample trial{s.A, GradientSample(dims, std::move(t), std::move(def)), s.w};
        if (still_violates(id, trial, ctx, rel_tol)) {
          s = std::move(trial);
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  return s;
}

struct CheckResult {
  std::string lemma_id;
  std::int64_t trials = 0;
  std::int64_t violations = 0;
  double worst_slack = std::numeric_limits<double>::infinity();
  double worst_relative_slack = std::numeric_limits<double>::infinity();
  std::string worst_input_digest;
  std::uint64_t seed = 0;
  std::int64_t skipped = 0;  // trials whose input left the check's domain
  std::optional<nlohmann::json> counterexample;

  friend bool operator==(const CheckResult& a, const CheckResult& b) {
    return a.lemma_id == b.lemma_id && a.trials == b.trials && a.violations == b.violations &&
           a.worst_slack == b.worst_slack && a.worst_input_digest == b.worst_input_digest &&
           a.seed == b.seed && a.skipped == b.skipped;
  }
};

inline nlohmann::json result_json(const CheckResult& r) {
  return {{"lemma_id", r.lemma_id}, {"trials", r.trials},         {"violations", r.violations},
          {"worst_slack", r.worst_slack}, {"seed", r.seed}};
}

struct SamplerSpec {
  Dims dims;
  double sigma = 1.0;
  std::uint64_t seed = 0;
};

/// Runs `trials` independent trials of one check. Trial t draws from the
/// generator substream(seed, t, fnv1a(id)), so results do not depend on order.
inline CheckResult run_check(const std::string& id, const SamplerSpec& spec, const CheckContext& ctx,
                             std::int64_t trials, double rel_tol = 1e-9) {
  const std::uint64_t salt = fnv1a(id);
  CheckResult res;
  res.lemma_id = id;
  res.seed = spec.seed;
  std::optional<Sample> worst;
  std::uint64_t worst_trial = 0;
  bool worst_violates = false;
  for (std::int64_t t = 0; t < trials; ++t) {
    Rng rng = substream(spec.seed, static_cast<std::uint64_t>(t), salt);
    Sample s = draw(id, spec.dims, ctx, rng, spec.sigma);
    Evaluation e;
    try {
      e = evaluate(id, s, ctx);
    } catch (const DegenerateMeanCurvature&) {
      ++res.skipped;
      continue;
    } catch (const NotPinched&) {
      ++res.skipped;
      continue;
    }
    ++res.trials;
    const bool bad = e.violated(rel_tol);
    if (bad) ++res.violations;
    const double rel = e.slack() / e.tolerance(1.0);
    if (e.slack() < res.worst_slack) res.worst_slack = e.slack();
    if (rel < res.worst_relative_slack) {
      res.worst_relative_slack = rel;
      worst = std::move(s);
      worst_trial = static_cast<std::uint64_t>(t);
      worst_violates = bad;
    }
  }
  if (worst) {
    res.worst_input_digest = sample_digest(*worst);
    if (worst_violates) {
      Sample small = shrink(id, *worst, ctx, rel_tol);
      res.counterexample = replay_json(id, small, ctx, spec.seed, worst_trial);
    }
  }
  return res;
}

inline std::vector<CheckResult> run_campaign(const SamplerSpec& spec, const std::vector<std::string>& ids,
                                             std::int64_t trials, const CheckContext& ctx = {},
                                             double rel_tol = 1e-9) {
  std::vector<CheckResult> out;
  out.reserve(ids.size());
  for (const auto& id : ids) out.push_back(run_check(id, spec, ctx, trials, rel_tol));
  return out;
}

}  // namespace mcf
