// Command-line driver: runs single checks, randomized sweeps and curve
// tables, writing JSON-lines reports (or CSV for curves).
//
// Exit status: 0 when every check passes, 1 when a violation was found,
// 2 on malformed flags, configuration or input.

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dilatrix/dilatrix.hpp"

namespace {

using namespace dilatrix;

constexpr int exit_ok = 0;
constexpr int exit_violation = 1;
constexpr int exit_usage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flags shared by every subcommand.
struct CommonFlags {
  std::uint64_t seed = 0;
  double tolerance = 1e-9;
  std::string out;
};

/// stdout, or the file named by --out.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw UsageError("cannot open output file '" + path + "'");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  [[nodiscard]] bool is_stdout() const noexcept { return !file_; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string shortest(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, res.ptr};
}

Json parse_json_flag(const std::string& field, const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError(field, std::string("invalid JSON: ") + e.what());
  }
}

template <class T>
T required(const std::optional<T>& v, const std::string& flag) {
  if (!v) throw UsageError("missing required flag " + flag);
  return *v;
}

/// Writes one report per line followed by a summary line on stdout.
class ReportWriter {
 public:
  explicit ReportWriter(const CommonFlags& common) : sink_(common.out) {}

  void write(const CheckReport& r) {
    sink_.stream() << to_json(r).dump() << '\n';
    summary_.add(r, index_++);
  }

  void write_extra(const Json& j) { sink_.stream() << j.dump() << '\n'; }

  int finish() {
    sink_.stream().flush();
    std::cout << Json{{"summary", to_json(summary_)}}.dump() << '\n';
    return summary_.all_passed() ? exit_ok : exit_violation;
  }

  [[nodiscard]] const ReportSummary& summary() const noexcept { return summary_; }

 private:
  Sink sink_;
  ReportSummary summary_;
  std::size_t index_ = 0;
};

void add_common(CLI::App* cmd, CommonFlags& common) {
  cmd->add_option("--seed", common.seed, "Seed for all randomness")->capture_default_str();
  cmd->add_option("--tol", common.tolerance, "Gap tolerance")->capture_default_str();
  cmd->add_option("--out", common.out, "Output file (default stdout)");
}

// ---------------------------------------------------------------------------
// Subcommands.

struct DilateFlags {
  std::optional<std::string> set;
  std::optional<double> t;
  bool compare_oracle = false;
  double step = 1e-3;
};

int run_dilate(const DilateFlags& f, const CommonFlags& common) {
  const auto F = interval_set_from_json(parse_json_flag("set", required(f.set, "--set")));
  const double t = required(f.t, "--t");
  if (!(t > 1.0)) throw FormatError("t", "dilation parameter must be > 1");
  const auto Ft = dilate_exact(F, t);
  Sink sink(common.out);
  std::string text;
  for (const auto& c : Ft.components()) text += (text.empty() ? "(" : ",(") + shortest(c.lo) + "," + shortest(c.hi) + ")";
  if (sink.is_stdout()) {
    std::cout << (text.empty() ? "(empty)" : text) << '\n';
  } else {
    sink.stream() << Json{{"t", t}, {"input", to_json(F)}, {"dilated", to_json(Ft)}}.dump() << '\n';
  }
  if (!f.compare_oracle) return exit_ok;
  const auto oracle = dilate_grid_oracle(F, t, f.step);
  CheckReport r;
  r.check_name = "dilation_oracle";
  r.anchor = "dilation_definition";
  r.tolerance = 0.0;
  r.parameters = {{"t", t}, {"step", f.step}, {"boundaryCount", static_cast<double>(boundary_count(Ft))}};
  r.settle(4.0 * static_cast<double>(boundary_count(Ft)) * f.step, symmetric_difference_measure(Ft, oracle));
  std::cout << to_json(r).dump() << '\n';
  return r.pass ? exit_ok : exit_violation;
}

struct AlphaFlags {
  std::optional<std::string> set, body, point;
  std::optional<double> x;
};

int run_alpha(const AlphaFlags& f, const CommonFlags& common) {
  Sink sink(common.out);
  if (f.set) {
    const auto F = interval_set_from_json(parse_json_flag("set", *f.set));
    const double x = required(f.x, "--x");
    sink.stream() << Json{{"alpha", alpha_1d(F, x)}, {"x", x}}.dump() << '\n';
    return exit_ok;
  }
  if (!f.body) throw UsageError("alpha needs --set with --x, or --body with --point");
  const auto K = polytope_from_json(parse_json_flag("body", *f.body));
  const auto point = parse_json_flag("point", required(f.point, "--point"));
  Point x;
  try {
    x = point.get<Point>();
  } catch (const Json::exception&) {
    throw FormatError("point", "expected an array of numbers");
  }
  if (x.size() != static_cast<std::size_t>(K.dimension())) throw FormatError("point", "dimension differs from body");
  const auto a = alpha_convex(K, x);
  Json j{{"alpha", a.value}, {"interior", a.interior}, {"alphaSlab", alpha_slab(K, x)}};
  if (K.origin_symmetric() && K.full_dimensional()) j["gauge"] = gauge(K, x);
  sink.stream() << j.dump() << '\n';
  return exit_ok;
}

struct VerifyFlags {
  std::string check = "theorem1";
  std::optional<std::string> density, set, body, domain;
  std::optional<double> t;
  std::size_t samples = 100000;
};

int run_verify(const VerifyFlags& f, const CommonFlags& common) {
  ReportWriter out(common);
  if (f.check == "corollary2") {
    const auto K = polytope_from_json(parse_json_flag("body", required(f.body, "--body")));
    const auto V = polytope_from_json(parse_json_flag("domain", required(f.domain, "--domain")));
    out.write(corollary2_check(K, V, required(f.t, "--t"), f.samples, common.seed));
    return out.finish();
  }
  const auto mu = density_from_json(parse_json_flag("density", required(f.density, "--density")));
  const auto F = interval_set_from_json(parse_json_flag("set", required(f.set, "--set")));
  if (f.check == "corollary1") {
    out.write(corollary1_check(mu, F));
    return out.finish();
  }
  const double t = required(f.t, "--t");
  if (f.check == "theorem1") {
    out.write(theorem1_check(mu, F, t, common.tolerance));
    return out.finish();
  }
  for (auto v : {ClassicalVariant::borell, ClassicalVariant::guedon, ClassicalVariant::lovasz_simonovits,
                 ClassicalVariant::nsv}) {
    if (f.check == to_string(v)) {
      out.write(classical_check(mu, F, t, v, common.tolerance));
      return out.finish();
    }
  }
  throw FormatError("check", "unknown check '" + f.check + "'");
}

struct SweepFlags {
  std::string checks = "theorem1";
  std::size_t count = 1000;
};

int run_sweep_command(const SweepFlags& f, const CommonFlags& common) {
  std::vector<SweepFamily> families;
  std::stringstream list(f.checks);
  for (std::string name; std::getline(list, name, ',');) {
    if (name == "all") {
      families.assign(std::begin(all_sweep_families), std::end(all_sweep_families));
      continue;
    }
    const auto fam = parse_sweep_family(name);
    if (!fam) throw FormatError("checks", "unknown check family '" + name + "'");
    families.push_back(*fam);
  }
  if (families.empty()) throw FormatError("checks", "no check family given");
  ReportWriter out(common);
  Json by_check = Json::object();
  // Chunks are evaluated in parallel and written in index order, so the
  // stream is deterministic and partial output survives interruption.
  constexpr std::size_t chunk = 256;
  for (auto fam : families) {
    ReportSummary local;
    for (std::size_t start = 0; start < f.count; start += chunk) {
      const std::size_t n = std::min(chunk, f.count - start);
      std::vector<CheckReport> reports(n);
      parallel_for(n, [&](std::size_t k) { reports[k] = sweep_instance(fam, common.seed, start + k, common.tolerance); });
      for (std::size_t k = 0; k < n; ++k) {
        out.write(reports[k]);
        local.add(reports[k], start + k);
      }
    }
    by_check[std::string(to_string(fam))] = to_json(local);
  }
  std::cout << Json{{"byCheck", by_check}}.dump() << '\n';
  return out.finish();
}

struct EqualityFlags {
  std::optional<double> s, a, t;
};

int run_equality(const EqualityFlags& f, const CommonFlags& common) {
  ReportWriter out(common);
  out.write(equality_case_gap(required(f.s, "--s"), required(f.a, "--a"), required(f.t, "--t"), common.tolerance));
  return out.finish();
}

struct ExtremalFlags {
  std::optional<double> s, theta, t;
  int restarts = ExtremalOptions{}.restarts;
};

int run_extremal(const ExtremalFlags& f, const CommonFlags& common) {
  ExtremalOptions opt;
  opt.restarts = f.restarts;
  const auto res =
      extremal_search(required(f.s, "--s"), required(f.theta, "--theta"), required(f.t, "--t"), common.seed, opt);
  ReportWriter out(common);
  out.write(res.report);
  out.write_extra({{"best",
                    {{"set", to_json(res.best.F)},
                     {"shape", res.best.shape},
                     {"muF", res.best.mu_F},
                     {"muFtc", res.best.mu_Ft_complement},
                     {"singleIntervalAtEdge", res.best.single_interval_at_edge}}},
                   {"theoreticalMax", res.theoretical_max}});
  return out.finish();
}

struct RemezFlags {
  std::string mode = "profile";
  std::optional<std::string> polynomial, body, omega, set, box_lo, box_hi, origin, direction;
  std::string norm = "sup";
  int degree = 1;
  std::optional<double> eps, c, t, x;
  int grid = 1000;
  int segments = 200;
  int probes = 20;
  std::size_t samples = 20000;
};

Point point_flag(const std::optional<std::string>& text, const std::string& field, Point fallback) {
  if (!text) return fallback;
  try {
    return parse_json_flag(field, *text).get<Point>();
  } catch (const Json::exception&) {
    throw FormatError(field, "expected an array of numbers");
  }
}

int run_remez(const RemezFlags& f, const CommonFlags& common) {
  ReportWriter out(common);
  if (f.mode == "profile") {
    const auto profile = f.degree == 0 ? gauge_profile() : polynomial_profile(f.degree);
    out.write(profile_chain_check(profile));
    return out.finish();
  }
  const auto P = f.polynomial ? polynomial_from_json(parse_json_flag("polynomial", *f.polynomial))
                              : chebyshev_map(std::max(1, f.degree));
  const auto n = static_cast<std::size_t>(P.inputs());
  std::optional<ConvexPolytope> body;
  if (f.body) body = polytope_from_json(parse_json_flag("body", *f.body));
  const Seminorm norm = [&] {
    if (f.norm == "sup") return Seminorm::sup_norm();
    if (f.norm == "l1") return Seminorm::l1_norm();
    if (f.norm == "l2") return Seminorm::l2_norm();
    if (f.norm == "gauge") {
      if (!body) throw UsageError("--norm gauge needs --body");
      return detail::build_or_throw("body", [&] { return Seminorm::polytope_gauge(*body); });
    }
    throw FormatError("norm", "unknown seminorm '" + f.norm + "'");
  }();

  if (f.mode == "delta") {
    const double eps = required(f.eps, "--eps");
    const auto est = estimate_delta(P, norm, eps, f.segments, f.grid, point_flag(f.box_lo, "box-lo", Point(n, -1.0)),
                                    point_flag(f.box_hi, "box-hi", Point(n, 1.0)), common.seed);
    CheckReport r;
    r.check_name = "delta_estimate";
    r.anchor = "modulus_of_regularity";
    r.tolerance = 0.0;
    const double bound = polynomial_profile(std::max(1, P.degree())).modulus(eps);
    r.parameters = {{"eps", eps}, {"degree", P.degree()}, {"grid", f.grid}, {"bound", bound}};
    r.settle(bound + 2.0 / f.grid, est.value);
    out.write(r);
    return out.finish();
  }
  if (f.mode == "fact2") {
    out.write(fact2_propuf_check(P, norm, required(f.c, "--c"), required(f.t, "--t"), f.probes, common.seed));
    return out.finish();
  }
  if (f.mode == "rivlin") {
    Point e1(n, 0.0);
    e1[0] = 1.0;
    const auto F = f.set ? interval_set_from_json(parse_json_flag("set", *f.set)) : IntervalSet::normalize({{-1, 1}});
    const double x = required(f.x, "--x");
    const auto rs = rivlin_shapiro(P, norm, point_flag(f.origin, "origin", Point(n, 0.0)),
                                   point_flag(f.direction, "direction", e1), F, x);
    CheckReport r;
    r.check_name = "rivlin_shapiro";
    r.anchor = "extremal_polynomial_growth";
    r.parameters = {{"x", x}, {"alpha", rs.alpha}, {"supOnF", rs.sup_on_F}};
    r.settle(rs.bound, rs.value);
    r.gap = rs.bound > 0.0 ? (rs.bound - rs.value) / rs.bound : r.gap;
    r.pass = rs.pass;
    r.status = rs.pass ? CheckStatus::pass : CheckStatus::fail;
    out.write(r);
    return out.finish();
  }
  if (f.mode == "multidim") {
    if (!body) throw UsageError("--mode multidim needs --body (the domain V)");
    const auto omega = polytope_from_json(parse_json_flag("omega", required(f.omega, "--omega")));
    out.write(multidim_remez_check(
        P, norm, *body, [&](const Point& y) { return omega.contains(y); }, f.samples, common.seed));
    return out.finish();
  }
  throw FormatError("mode", "unknown remez mode '" + f.mode + "'");
}

struct DeviationFlags {
  std::string check = "all";
  std::optional<std::string> density, function, set;
  std::optional<double> lambda, t, eps, q, p, s;
};

int run_deviations(const DeviationFlags& f, const CommonFlags& common) {
  const auto mu = density_from_json(parse_json_flag("density", required(f.density, "--density")));
  ReportWriter out(common);
  if (f.check == "reconstruction") {
    const auto F = interval_set_from_json(parse_json_flag("set", required(f.set, "--set")));
    out.write(theorem2_reconstruction(mu, F, required(f.t, "--t"), common.tolerance));
    return out.finish();
  }
  const auto tf = f.function ? test_function_from_json(parse_json_flag("function", *f.function))
                             : TestFunction{Gauge1D{}, gauge_profile()};
  const DeviationOptions opt{.s = f.s, .tolerance = common.tolerance};
  const bool all = f.check == "all";
  bool matched = all;
  tf.visit([&](const auto& g) {
    if (all || f.check == "theorem2") {
      out.write(theorem2_check(mu, g, tf.profile, required(f.lambda, "--lambda"), required(f.t, "--t"), opt));
      matched = true;
    }
    if (all || f.check == "corollary6") {
      out.write(corollary6_check(mu, g, tf.profile, required(f.lambda, "--lambda"), required(f.eps, "--eps"), opt));
      matched = true;
    }
    if (all || f.check == "small_deviation") {
      out.write(small_dev_neg_khintchine(mu, g, tf.profile, required(f.eps, "--eps"), required(f.q, "--q"), opt));
      matched = true;
    }
    if (all || f.check == "large_deviation") {
      out.write(large_dev_pos_khintchine(mu, g, tf.profile, required(f.t, "--t"), required(f.p, "--p"), opt));
      matched = true;
    }
  });
  if (!matched) throw FormatError("check", "unknown deviation check '" + f.check + "'");
  return out.finish();
}

struct CurveFlags {
  int degree = 0;
  double s = 0.0;
  std::optional<std::string> t_grid, eps_grid;
};

std::vector<double> grid_flag(const std::optional<std::string>& text, const std::string& field,
                              std::vector<double> fallback) {
  if (!text) return fallback;
  return detail::numbers_at(parse_json_flag(field, *text), field);
}

int run_curves(const CurveFlags& f, const CommonFlags& common) {
  std::vector<double> ts, epss;
  for (int k = 0; k < 100; ++k) ts.push_back(1.0 + 19.0 * (k + 1) / 100.0);
  for (int k = 1; k <= 20; ++k) epss.push_back(k / 20.0);
  const auto profile = f.degree == 0 ? gauge_profile() : polynomial_profile(f.degree);
  const auto table = bound_curves(profile, f.s, grid_flag(f.t_grid, "t-grid", ts), grid_flag(f.eps_grid, "eps-grid", epss));
  Sink sink(common.out);
  sink.stream() << table.to_csv();
  return exit_ok;
}

// ---------------------------------------------------------------------------
// --config: a JSON object whose "command" names the subcommand and whose
// other keys supply flags not given on the command line.

std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::optional<std::string> path;
  for (std::size_t k = 1; k < args.size(); ++k) {
    if (args[k] == "--config") {
      if (k + 1 >= args.size()) throw UsageError("--config needs a file name");
      path = args[k + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(k), args.begin() + static_cast<std::ptrdiff_t>(k + 2));
      break;
    }
    if (args[k].rfind("--config=", 0) == 0) {
      path = args[k].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(k));
      break;
    }
  }
  if (!path) return args;
  std::ifstream in(*path);
  if (!in) throw UsageError("cannot read config file '" + *path + "'");
  Json config;
  try {
    config = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw FormatError("config", std::string("invalid JSON: ") + e.what());
  }
  if (!config.is_object()) throw FormatError("config", "expected an object");
  if (config.contains("command")) {
    if (!config["command"].is_string()) throw FormatError("command", "expected a string");
    const bool has_command = args.size() > 1 && args[1].rfind("-", 0) != 0;
    if (!has_command) args.insert(args.begin() + 1, config["command"].get<std::string>());
  }
  for (const auto& [key, value] : config.items()) {
    if (key == "command") continue;
    const std::string flag = "--" + key;
    if (std::find(args.begin(), args.end(), flag) != args.end()) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
      continue;
    }
    args.push_back(flag);
    args.push_back(value.is_string() ? value.get<std::string>() : value.dump());
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification toolkit for s-concave measures, dilation, Remez bounds and deviation inequalities"};
  app.require_subcommand(1);
  CommonFlags common;
  std::function<int()> action;

  DilateFlags dilate;
  auto* c_dilate = app.add_subcommand("dilate", "Exact t-dilation of an interval set");
  c_dilate->add_option("--set", dilate.set, "Interval set as JSON");
  c_dilate->add_option("--t", dilate.t, "Dilation parameter t > 1");
  c_dilate->add_flag("--compare-oracle", dilate.compare_oracle, "Also compare with the grid oracle");
  c_dilate->add_option("--step", dilate.step, "Grid step of the oracle")->capture_default_str();
  add_common(c_dilate, common);
  c_dilate->callback([&] { action = [&] { return run_dilate(dilate, common); }; });

  AlphaFlags alpha;
  auto* c_alpha = app.add_subcommand("alpha", "The function alpha_F at a point");
  c_alpha->add_option("--set", alpha.set, "Interval set as JSON (1D)");
  c_alpha->add_option("--x", alpha.x, "Point (1D)");
  c_alpha->add_option("--body", alpha.body, "Convex polytope as JSON");
  c_alpha->add_option("--point", alpha.point, "Point as a JSON array");
  add_common(c_alpha, common);
  c_alpha->callback([&] { action = [&] { return run_alpha(alpha, common); }; });

  VerifyFlags verify;
  auto* c_verify = app.add_subcommand("verify", "One set-level check");
  c_verify->add_option("--check", verify.check,
                       "theorem1|borell|guedon|lovasz_simonovits|nsv|corollary1|corollary2")
      ->capture_default_str();
  c_verify->add_option("--density", verify.density, "Density as JSON");
  c_verify->add_option("--set", verify.set, "Interval set as JSON");
  c_verify->add_option("--t", verify.t, "Dilation parameter");
  c_verify->add_option("--body", verify.body, "Polytope K (corollary2)");
  c_verify->add_option("--domain", verify.domain, "Polytope V carrying the uniform measure (corollary2)");
  c_verify->add_option("--samples", verify.samples, "Monte Carlo samples")->capture_default_str();
  add_common(c_verify, common);
  c_verify->callback([&] { action = [&] { return run_verify(verify, common); }; });

  SweepFlags sweep;
  auto* c_sweep = app.add_subcommand("sweep", "Randomized batch of checks");
  c_sweep->add_option("--checks", sweep.checks, "Comma-separated families, or 'all'")->capture_default_str();
  c_sweep->add_option("--count", sweep.count, "Instances per family")->capture_default_str();
  add_common(c_sweep, common);
  c_sweep->callback([&] { action = [&] { return run_sweep_command(sweep, common); }; });

  EqualityFlags equality;
  auto* c_equality = app.add_subcommand("equality", "Gap on the equality family");
  c_equality->add_option("--s", equality.s, "Concavity exponent");
  c_equality->add_option("--a", equality.a, "Shape parameter a > max(-s, s t)");
  c_equality->add_option("--t", equality.t, "Dilation parameter");
  add_common(c_equality, common);
  c_equality->callback([&] { action = [&] { return run_equality(equality, common); }; });

  ExtremalFlags extremal;
  auto* c_extremal = app.add_subcommand("extremal-search", "Search for near-extremal (measure, set) pairs");
  c_extremal->add_option("--s", extremal.s, "Concavity exponent");
  c_extremal->add_option("--theta", extremal.theta, "Target mu(F_t^c) in (0, 1)");
  c_extremal->add_option("--t", extremal.t, "Dilation parameter");
  c_extremal->add_option("--restarts", extremal.restarts, "Optimizer restarts")->capture_default_str();
  add_common(c_extremal, common);
  c_extremal->callback([&] { action = [&] { return run_extremal(extremal, common); }; });

  RemezFlags remez;
  auto* c_remez = app.add_subcommand("remez", "Remez-type checks for polynomial maps");
  c_remez->add_option("--mode", remez.mode, "profile|delta|fact2|rivlin|multidim")->capture_default_str();
  c_remez->add_option("--polynomial", remez.polynomial, "Polynomial map as JSON (default: T_degree)");
  c_remez->add_option("--degree", remez.degree, "Degree (profile mode: 0 selects the gauge profile)")
      ->capture_default_str();
  c_remez->add_option("--norm", remez.norm, "sup|l1|l2|gauge")->capture_default_str();
  c_remez->add_option("--body", remez.body, "Polytope: gauge body, or the domain V in multidim mode");
  c_remez->add_option("--omega", remez.omega, "Polytope omega (multidim)");
  c_remez->add_option("--eps", remez.eps, "Level epsilon (delta)");
  c_remez->add_option("--grid", remez.grid, "Cells per segment (delta)")->capture_default_str();
  c_remez->add_option("--segments", remez.segments, "Random segments (delta)")->capture_default_str();
  c_remez->add_option("--box-lo", remez.box_lo, "Lower box corner as JSON (delta)");
  c_remez->add_option("--box-hi", remez.box_hi, "Upper box corner as JSON (delta)");
  c_remez->add_option("--c", remez.c, "Sublevel c (fact2)");
  c_remez->add_option("--t", remez.t, "Dilation parameter (fact2)");
  c_remez->add_option("--probes", remez.probes, "Random lines (fact2)")->capture_default_str();
  c_remez->add_option("--set", remez.set, "Set F in line units (rivlin, default [-1,1])");
  c_remez->add_option("--x", remez.x, "Evaluation point in line units (rivlin)");
  c_remez->add_option("--origin", remez.origin, "Line origin (rivlin)");
  c_remez->add_option("--direction", remez.direction, "Line direction (rivlin)");
  c_remez->add_option("--samples", remez.samples, "Monte Carlo samples (multidim)")->capture_default_str();
  add_common(c_remez, common);
  c_remez->callback([&] { action = [&] { return run_remez(remez, common); }; });

  DeviationFlags deviations;
  auto* c_dev = app.add_subcommand("deviations", "Function-level level-set, deviation and moment checks");
  c_dev->add_option("--check", deviations.check,
                    "all|theorem2|corollary6|small_deviation|large_deviation|reconstruction")
      ->capture_default_str();
  c_dev->add_option("--density", deviations.density, "Density as JSON");
  c_dev->add_option("--function", deviations.function, "Test function as JSON (default |x|)");
  c_dev->add_option("--set", deviations.set, "Interval set (reconstruction)");
  c_dev->add_option("--lambda", deviations.lambda, "Level lambda");
  c_dev->add_option("--t", deviations.t, "t > 1");
  c_dev->add_option("--eps", deviations.eps, "epsilon in (0, 1]");
  c_dev->add_option("--q", deviations.q, "Negative exponent in (-1, 0)");
  c_dev->add_option("--p", deviations.p, "Positive exponent");
  c_dev->add_option("--s", deviations.s, "Assumed concavity exponent (<= the density's)");
  add_common(c_dev, common);
  c_dev->callback([&] { action = [&] { return run_deviations(deviations, common); }; });

  CurveFlags curves;
  auto* c_curves = app.add_subcommand("curves", "CSV table of the deviation bound curves");
  c_curves->add_option("--degree", curves.degree, "Chebyshev degree (0: gauge profile)")->capture_default_str();
  c_curves->add_option("--s", curves.s, "Concavity exponent")->capture_default_str();
  c_curves->add_option("--t-grid", curves.t_grid, "t values as a JSON array");
  c_curves->add_option("--eps-grid", curves.eps_grid, "epsilon values as a JSON array");
  add_common(c_curves, common);
  c_curves->callback([&] { action = [&] { return run_curves(curves, common); }; });

  try {
    auto args = expand_config(std::vector<std::string>(argv, argv + argc));
    std::vector<char*> raw;
    for (auto& a : args) raw.push_back(a.data());
    app.parse(static_cast<int>(raw.size()), raw.data());
    return action();
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_violation;
  }
}
