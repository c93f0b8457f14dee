#include "cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include "mcf/mcf.hpp"

namespace mcf::cli {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string rational_text(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("MCF_SEED")) {
    try {
      size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError("MCF_SEED is not an unsigned integer");
  }
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::map<std::string, double> parse_params(const std::string& text) {
  std::map<std::string, double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("parameter '" + item + "' is not k=v");
    try {
      out[item.substr(0, eq)] = parse_number(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw UsageError("parameter '" + item + "' has a non-numeric value");
    }
  }
  return out;
}

double param(const std::map<std::string, double>& p, const std::string& key, std::optional<double> fallback = {}) {
  const auto it = p.find(key);
  if (it != p.end()) return it->second;
  if (fallback) return *fallback;
  throw UsageError("missing parameter '" + key + "'");
}

int as_int(double v, const std::string& key) {
  if (v != std::floor(v)) throw UsageError("parameter '" + key + "' must be an integer");
  return static_cast<int>(v);
}

/// Default pinching coefficient for dimension n.
double default_c(int n) {
  if (n >= 5) return to_double(c_n(n, CRegime::general));
  return 4.0 / (3.0 * n);
}

std::ostream& open_out(const std::string& path, std::ofstream& file, std::ostream& fallback) {
  if (path.empty() || path == "-") return fallback;
  file.open(path);
  if (!file) throw UsageError("cannot open '" + path + "' for writing");
  return file;
}

// ---------------------------------------------------------------------------

struct ConstantsOpts {
  int n = 0, m = 1;
  std::optional<double> K1, K2, L, Kbar, c;
  std::string regime = "general";
  std::string format = "text";
};

int cmd_constants(const ConstantsOpts& o, std::ostream& out) {
  const CRegime reg = o.regime == "codim" ? CRegime::codim_estimate : CRegime::general;
  nlohmann::json j;
  j["n"] = o.n;
  j["m"] = o.m;
  double c = 0.0;
  if (o.c) {
    c = *o.c;
    j["c"] = fmt17(c);
  } else {
    const Rational r = c_n(o.n, reg);
    c = to_double(r);
    j["c"] = rational_text(r);
  }
  const bool bounded = o.K1 || o.K2 || o.L;
  if (bounded && o.Kbar) throw UsageError("give either --K1/--K2/--L or --Kbar, not both");
  double d = 0.0;
  std::string d_rule = "flat";
  if (bounded) {
    d = d_lower_bound(o.n, o.m, c, {o.K1.value_or(0), o.K2.value_or(0), o.L.value_or(0)});
    d_rule = "bounded_background";
  } else if (o.Kbar) {
    d_rule = "space_form";
    if (*o.Kbar < 0) d = 2.0 * o.n - 2.0 / c;
  }
  j["d"] = fmt17(d);
  j["d_rule"] = d_rule;
  try {
    j["kappa"] = fmt17(kappa_n(o.n, c));
  } catch (const NonpositiveKappa&) {
    j["kappa"] = nullptr;
  }
  if (o.format == "json") {
    out << j.dump(2) << '\n';
  } else {
    out << "n=" << o.n << "\nm=" << o.m << "\nc=" << j["c"].get<std::string>() << "\nd=" << j["d"].get<std::string>()
        << " (" << d_rule << ")\nkappa=" << (j["kappa"].is_null() ? "undefined" : j["kappa"].get<std::string>())
        << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct VerifyOpts {
  std::string suite_name = "all";
  std::int64_t trials = 1000;
  std::optional<std::uint64_t> seed;
  int n = 8, m = 3;
  std::optional<double> c, d, delta, eta, eps0, Kbar;
  std::string out_path;
  std::string cex_prefix = "counterexample";
  double rel_tol = 1e-9;
};

int cmd_verify(const VerifyOpts& o, std::ostream& out, std::ostream& err) {
  if (o.trials < 0) throw UsageError("--trials must be nonnegative");
  Dims{o.n, o.m}.validate();
  const std::uint64_t seed = resolve_seed(o.seed);
  CheckContext ctx;
  const int n = o.n;
  const bool big = n >= 8;
  if (big) {
    ctx.gcase = GradientCase::four_thirds;
    ctx.c = o.c.value_or(default_c(n));
    ctx.delta = o.delta.value_or(1.0 / (5.0 * n - 8.0));
  } else {
    ctx.gcase = GradientCase::codim;
    const double top = 3.0 * (n + 1) / (2.0 * n * (n + 2));
    ctx.eps0 = o.eps0.value_or(0.1 * (top - 1.0 / n));
    ctx.c = o.c.value_or(top - ctx.eps0);
    const double eps = 2.0 * n * (n + 2) * ctx.eps0 / (3.0 * (n - 1));
    ctx.delta = o.delta.value_or(std::min(0.5, eps));
  }
  if (o.eps0) ctx.eps0 = *o.eps0;
  ctx.d = o.d.value_or(0.0);
  ctx.eta = o.eta.value_or(0.0);
  ctx.Kbar = o.Kbar.value_or(-1.0);
  const std::vector<std::string> active = suite(o.suite_name);
  const SamplerSpec spec{Dims{o.n, o.m}, 1.0, seed};
  nlohmann::json report = nlohmann::json::array();
  bool failed = false;
  for (const auto& id : active) {
    CheckResult r;
    try {
      r = run_check(id, spec, ctx, o.trials, o.rel_tol);
    } catch (const InvalidConstants& e) {
      throw UsageError(std::string("check ") + id + ": " + e.what());
    }
    report.push_back(result_json(r));
    if (r.violations > 0) {
      failed = true;
      const std::string path = o.cex_prefix + "_" + id + ".json";
      std::ofstream f(path);
      f << r.counterexample->dump(2) << '\n';
      err << "violation in " << id << ": counterexample written to " << path << '\n';
    }
  }
  std::ofstream file;
  std::ostream& os = open_out(o.out_path, file, out);
  os << report.dump(2) << '\n';
  return failed ? 1 : 0;
}

// ---------------------------------------------------------------------------

struct SimulateOpts {
  std::string family;
  std::string params;
  double dt = 1e-4;
  double t_end = 0.0;
  int every = 1;
  std::optional<double> c, d;
  std::string out_path;
};

FlowFamily family_from(const std::string& kind, const std::map<std::string, double>& p) {
  if (kind == "sphere")
    return FlowFamily::sphere(as_int(param(p, "n"), "n"), as_int(param(p, "m", 1.0), "m"), param(p, "r"));
  if (kind == "cylinder")
    return FlowFamily::cylinder(as_int(param(p, "n"), "n"), as_int(param(p, "m", 1.0), "m"), param(p, "r"));
  if (kind == "product")
    return FlowFamily::product(as_int(param(p, "p"), "p"), as_int(param(p, "q"), "q"), as_int(param(p, "m", 2.0), "m"),
                               param(p, "a"), param(p, "b"));
  if (kind == "hyperbolic")
    return FlowFamily::hyperbolic(as_int(param(p, "n"), "n"), as_int(param(p, "m", 1.0), "m"), param(p, "r"),
                                  param(p, "K", -1.0));
  throw UsageError("unknown family '" + kind + "'");
}

int cmd_simulate(const SimulateOpts& o, std::ostream& out) {
  const FlowFamily fam = family_from(o.family, parse_params(o.params));
  fam.validate();
  if (!(o.dt > 0)) throw UsageError("--dt must be positive");
  if (!(o.t_end >= 0)) throw UsageError("--t-end must be nonnegative");
  const double c = o.c.value_or(default_c(fam.n));
  double d = o.d.value_or(0.0);
  if (!o.d && fam.kind == FamilyKind::hyperbolic) d = 2.0 * fam.n - 2.0 / c;
  const PinchingConstants k = family_constants(fam, c, d);
  const SimulationResult res = simulate(fam, k, o.dt, o.t_end, o.every);
  std::ofstream file;
  std::ostream& os = open_out(o.out_path, file, out);
  write_csv(os, res.records);
  return 0;
}

// ---------------------------------------------------------------------------

struct RescaleOpts {
  std::string in_path;
  long long base_row = 0;
  double d = 0.0;
  double Kbar = 0.0;
  std::string out_path;
};

int cmd_rescale(const RescaleOpts& o, std::ostream& out) {
  std::ifstream in(o.in_path);
  if (!in) throw UsageError("cannot open '" + o.in_path + "'");
  const auto rows = read_csv(in);
  if (o.base_row < 0 || o.base_row >= static_cast<long long>(rows.size())) throw UsageError("--base-row out of range");
  const RescaledSeries s = rescale(rows, static_cast<size_t>(o.base_row), o.d, o.Kbar);
  std::ofstream file;
  std::ostream& os = open_out(o.out_path, file, out);
  write_rescaled_csv(os, s);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pinched mean curvature flow: constants, inequality checks, model flows, rescaling"};
  app.require_subcommand(1);

  ConstantsOpts co;
  auto* constants = app.add_subcommand("constants", "Print c_n, the lower bound for d_n, and kappa_n");
  constants->add_option("--n", co.n, "Dimension")->required();
  constants->add_option("--m", co.m, "Codimension");
  constants->add_option("--K1", co.K1, "Background sectional curvature bound");
  constants->add_option("--K2", co.K2, "Background sectional curvature bound");
  constants->add_option("--L", co.L, "Bound on the derivative of the background curvature");
  constants->add_option("--Kbar", co.Kbar, "Constant background curvature");
  constants->add_option("--c", co.c, "Use this pinching coefficient instead of c_n");
  constants->add_option("--regime", co.regime, "general or codim")->check(CLI::IsMember({"general", "codim"}));
  constants->add_option("--format", co.format, "text or json")->check(CLI::IsMember({"text", "json"}));

  VerifyOpts vo;
  auto* verify = app.add_subcommand("verify", "Run randomized inequality checks");
  verify->add_option("--suite", vo.suite_name, "li, kato, reaction, gradient or all")
      ->check(CLI::IsMember({"li", "kato", "reaction", "gradient", "all"}));
  verify->add_option("--trials", vo.trials, "Trials per check");
  verify->add_option("--seed", vo.seed, "Seed (falls back to MCF_SEED)");
  verify->add_option("--n", vo.n, "Dimension");
  verify->add_option("--m", vo.m, "Codimension (number of matrices for the commutator check)");
  verify->add_option("--c", vo.c, "Pinching coefficient");
  verify->add_option("--d", vo.d, "Pinching offset");
  verify->add_option("--delta", vo.delta, "Absorption margin");
  verify->add_option("--eta", vo.eta, "Kato parameter (default (n-1)/(n(n+2)))");
  verify->add_option("--eps0", vo.eps0, "Margin below 3(n+1)/(2n(n+2)) for n < 8");
  verify->add_option("--Kbar", vo.Kbar, "Background curvature for the space-form checks");
  verify->add_option("--out", vo.out_path, "Write the JSON report here instead of stdout");
  verify->add_option("--counterexample-prefix", vo.cex_prefix, "Prefix for counterexample files");
  verify->add_option("--rel-tol", vo.rel_tol, "Relative violation tolerance (default 1e-9)");

  SimulateOpts so;
  auto* simulate_cmd = app.add_subcommand("simulate", "Evolve a model flow and write a CSV time series");
  simulate_cmd->add_option("--family", so.family, "sphere, cylinder, product or hyperbolic")
      ->required()
      ->check(CLI::IsMember({"sphere", "cylinder", "product", "hyperbolic"}));
  simulate_cmd->add_option("--params", so.params, "k=v pairs, e.g. p=7,q=1,a=1,b=4")->required();
  simulate_cmd->add_option("--dt", so.dt, "Time step");
  simulate_cmd->add_option("--t-end", so.t_end, "Final time")->required();
  simulate_cmd->add_option("--every", so.every, "Record every k-th step");
  simulate_cmd->add_option("--c", so.c, "Pinching coefficient");
  simulate_cmd->add_option("--d", so.d, "Pinching offset");
  simulate_cmd->add_option("--out", so.out_path, "Output CSV (stdout if omitted)");

  RescaleOpts ro;
  auto* rescale_cmd = app.add_subcommand("rescale", "Parabolically rescale a simulated series");
  rescale_cmd->add_option("--in", ro.in_path, "Input CSV")->required();
  rescale_cmd->add_option("--base-row", ro.base_row, "Zero-based data row to normalize at")->required();
  rescale_cmd->add_option("--d", ro.d, "Pinching offset of the series");
  rescale_cmd->add_option("--Kbar", ro.Kbar, "Background curvature of the series");
  rescale_cmd->add_option("--out", ro.out_path, "Output CSV (stdout if omitted)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*constants) return cmd_constants(co, out);
    if (*verify) return cmd_verify(vo, out, err);
    if (*simulate_cmd) return cmd_simulate(so, out);
    if (*rescale_cmd) return cmd_rescale(ro, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const mcf::Error& e) {
    err << "configuration error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace mcf::cli
