#include "seqtrack/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "seqtrack/boundary.hpp"
#include "seqtrack/config.hpp"
#include "seqtrack/diffusion.hpp"
#include "seqtrack/errors.hpp"
#include "seqtrack/montecarlo.hpp"
#include "seqtrack/ode.hpp"
#include "seqtrack/policy.hpp"
#include "seqtrack/simulate.hpp"

namespace seqtrack::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Shortest text that parses back to the same double.
std::string num(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// Files are written next to their destination and renamed on commit; any
// file not committed is removed when the stage goes out of scope.
class Stage {
 public:
  explicit Stage(fs::path base) : base_(std::move(base)) {}
  Stage(const Stage&) = delete;
  Stage& operator=(const Stage&) = delete;
  ~Stage() {
    std::error_code ec;
    for (auto& f : files_) fs::remove(f.tmp, ec);
  }

  std::ofstream& open(const fs::path& name) {
    fs::path dst = name.is_absolute() || base_.empty() ? name : base_ / name;
    if (dst.has_parent_path()) fs::create_directories(dst.parent_path());
    fs::path tmp = dst;
    tmp += ".partial";
    auto& f = files_.emplace_back(File{dst, tmp, std::make_unique<std::ofstream>(tmp)});
    if (!*f.stream) throw Error("cannot write " + dst.string());
    f.stream->precision(17);
    return *f.stream;
  }

  void commit() {
    for (auto& f : files_) {
      f.stream->close();
      if (!*f.stream) throw Error("write failed: " + f.dst.string());
    }
    for (auto& f : files_) fs::rename(f.tmp, f.dst);
    files_.clear();
  }

 private:
  struct File {
    fs::path dst, tmp;
    std::unique_ptr<std::ofstream> stream;
  };
  fs::path base_;
  std::vector<File> files_;
};

struct Flags {
  std::optional<std::string> config, out, format, scheme;
  std::optional<std::uint64_t> seed;
  std::optional<double> lambda, mu, alpha, c1, c2;
  std::optional<double> dt, horizon, x0, clip;
  std::optional<int> noise_substeps;
  std::optional<std::size_t> paths;
  std::optional<unsigned> threads;
  std::optional<double> epsilon, ode_tol, root_tol, continuous_fit, smooth_fit, ode_residual;
};

RunConfig resolve(const Flags& f) {
  RunConfig cfg = f.config ? load_config(*f.config) : RunConfig{};
  const auto& m = cfg.model;
  cfg.model = ModelParams(f.lambda.value_or(m.lambda()), f.mu.value_or(m.mu()),
                          f.alpha.value_or(m.alpha()), f.c1.value_or(m.c1()),
                          f.c2.value_or(m.c2()));
  auto set = [](auto& dst, const auto& src) {
    if (src) dst = *src;
  };
  set(cfg.sim.seed, f.seed);
  set(cfg.sim.dt, f.dt);
  set(cfg.sim.horizon, f.horizon);
  set(cfg.sim.x0, f.x0);
  set(cfg.sim.clip, f.clip);
  set(cfg.sim.noise_substeps, f.noise_substeps);
  if (f.scheme) cfg.sim.scheme = scheme_from_string(*f.scheme);
  set(cfg.paths, f.paths);
  set(cfg.threads, f.threads);
  set(cfg.numerics.epsilon, f.epsilon);
  set(cfg.numerics.ode_tol, f.ode_tol);
  set(cfg.numerics.root_tol, f.root_tol);
  set(cfg.numerics.fit.continuous_fit, f.continuous_fit);
  set(cfg.numerics.fit.smooth_fit, f.smooth_fit);
  set(cfg.numerics.fit.ode_residual, f.ode_residual);
  set(cfg.output.dir, f.out);
  set(cfg.output.format, f.format);
  cfg.validate();
  return cfg;
}

json report_header(const std::string& command, const RunConfig& cfg) {
  return {{"command", command}, {"version", std::string(version())}, {"config", to_json(cfg)}};
}

struct Solved {
  PhiSolution phi;
  FreeBoundary fb;
};

Solved solve(const RunConfig& cfg, double epsilon) {
  PhiOptions po = cfg.phi_options();
  po.epsilon = epsilon;
  PhiSolution phi = solve_phi(cfg.model, po);
  FreeBoundary fb = solve_free_boundary(cfg.model, phi, cfg.root_options());
  return {std::move(phi), fb};
}

json fit_json(const FitReport& rep) {
  json checks = json::array();
  for (const auto& c : rep.checks) {
    checks.push_back({{"name", c.name},
                      {"value", finite_or_null(c.value)},
                      {"threshold", c.threshold},
                      {"pass", c.passed}});
  }
  return {{"checks", checks}, {"all_passed", rep.all_passed()}};
}

json estimate_json(const CostEstimate& e, CostForm form) {
  return {{"mean", e.mean},       {"stderr", e.std_error}, {"n", e.n},
          {"variance", e.variance}, {"ci95", {e.ci_low, e.ci_high}},
          {"tail_bound", e.tail_bound}, {"form", std::string(to_string(form))}};
}

CostForm form_from_string(const std::string& s) {
  if (s == "m") return CostForm::MForm;
  if (s == "theta") return CostForm::ThetaForm;
  throw ValidationError("form", "form: expected \"m\" or \"theta\"");
}

struct PolicyFlags {
  std::string kind = "none";
  std::optional<double> B;
  double window = 1.0;
  int a_init = 1;
};

// Builds the requested policy. A threshold policy without --B uses the
// solved boundary; `default_B` reports whether that happened.
std::optional<Policy> make_policy(const PolicyFlags& pf, const RunConfig& cfg, bool* default_B) {
  const Side a = side_from_int(pf.a_init);
  if (default_B) *default_B = false;
  if (pf.kind == "none") return std::nullopt;
  if (pf.kind == "never") return Policy::never(a);
  if (pf.kind == "sign") {
    Policy p = Policy::fixed_lag_sign(pf.window, a);
    p.validate();
    return p;
  }
  if (pf.kind == "threshold") {
    double B;
    if (pf.B) {
      B = *pf.B;
    } else {
      const Solved s = solve(cfg, cfg.numerics.epsilon);
      if (!s.fb.B) {
        throw ValidationError("B", "B: never-switch regime has no threshold; pass --B");
      }
      B = *s.fb.B;
      if (default_B) *default_B = true;
    }
    Policy p = Policy::threshold(B, a);
    p.validate();
    return p;
  }
  throw ValidationError("policy", "policy: expected threshold, never, sign or none");
}

void emit(std::ostream& out, Stage& stage, const RunConfig& cfg, const json& report,
          const std::string& command, const std::string& csv) {
  if (!cfg.output.dir.empty()) stage.open(command + ".json") << report.dump(2) << '\n';
  stage.commit();
  if (cfg.output.format == "csv") {
    out << csv;
  } else {
    out << report.dump(2) << '\n';
  }
}

int cmd_solve(const RunConfig& cfg, const std::optional<std::string>& dump_phi,
              const std::optional<std::string>& dump_value, int value_points, std::ostream& out) {
  Stage stage(cfg.output.dir);
  const auto& p = cfg.model;
  const Solved s = solve(cfg, cfg.numerics.epsilon);
  const ValueFunction vf(p, s.phi, s.fb);
  const FitReport fit = verify_fit(vf, cfg.numerics.fit);

  json rep = report_header("solve", cfg);
  rep["regime"] = std::string(to_string(s.fb.regime));
  rep["beta"] = p.beta();
  rep["gamma"] = p.gamma();
  if (s.fb.K) rep["K"] = *s.fb.K;
  if (s.fb.B) rep["B"] = *s.fb.B;
  rep["phi_normalization"] = s.fb.phi_normalization;
  rep["value_at_zero"] = vf.value(0.0, Side::Up);
  rep["phi"] = {{"nodes", s.phi.size()},
                {"x_min", s.phi.x_min()},
                {"x_max", s.phi.x_max()},
                {"truncated", s.phi.truncated()},
                {"rejected_steps", s.phi.rejected_steps()}};
  rep["fit"] = fit_json(fit);

  // B at a second epsilon; K is not compared because it depends on the
  // phi version.
  const double eps = cfg.numerics.epsilon;
  const double eps_alt = eps * 10 <= 1e-2 ? eps * 10 : eps / 10;
  json sens = {{"epsilon", eps}, {"epsilon_alt", eps_alt}};
  if (s.fb.B) {
    const Solved alt = solve(cfg, eps_alt);
    sens["B"] = *s.fb.B;
    sens["B_alt"] = alt.fb.B ? json(*alt.fb.B) : json(nullptr);
    if (alt.fb.B) sens["difference"] = *alt.fb.B - *s.fb.B;
  }
  rep["epsilon_sensitivity"] = sens;

  if (dump_phi) {
    auto& f = stage.open(*dump_phi);
    f << "x,phi,dphi\n";
    for (std::size_t i = 0; i < s.phi.size(); ++i) {
      f << num(s.phi.x()[i]) << ',' << num(s.phi.phi()[i]) << ',' << num(s.phi.dphi()[i]) << '\n';
    }
  }
  if (dump_value) {
    if (value_points < 2) throw ValidationError("value-points", "value-points: must be >= 2");
    auto& f = stage.open(*dump_value);
    f << "x,v_plus,v_minus,v_star\n";
    const double lo = vf.lower(), hi = vf.upper();
    for (int i = 0; i < value_points; ++i) {
      const double x = i + 1 == value_points ? hi : lo + (hi - lo) * i / (value_points - 1);
      f << num(x) << ',' << num(vf.value(x, Side::Up)) << ',' << num(vf.value(x, Side::Down))
        << ',' << num(vf.optimal(x)) << '\n';
    }
  }

  std::ostringstream csv;
  csv << "key,value\n"
      << "regime," << to_string(s.fb.regime) << "\nbeta," << num(p.beta()) << "\ngamma,"
      << num(p.gamma()) << '\n';
  if (s.fb.K) csv << "K," << num(*s.fb.K) << "\nB," << num(*s.fb.B) << '\n';
  emit(out, stage, cfg, rep, "solve", csv.str());
  return fit.all_passed() ? kOk : kFlagged;
}

int cmd_simulate(const RunConfig& cfg, std::size_t n_paths, const PolicyFlags& pf,
                 const std::optional<std::string>& dump, std::ostream& out) {
  Stage stage(cfg.output.dir);
  const auto policy = make_policy(pf, cfg, nullptr);
  const auto& p = cfg.model;

  std::ostringstream csv_buf;
  std::ostream* csv = nullptr;
  if (dump) {
    csv = &stage.open(*dump);
  } else if (cfg.output.format == "csv") {
    csv = &csv_buf;
  }
  if (csv) {
    csv->precision(17);
    *csv << "path_id,t,theta,x,m" << (policy ? ",a" : "") << '\n';
  }

  json paths = json::array();
  for (std::size_t i = 0; i < n_paths; ++i) {
    PathBundle b = simulate_path(p, cfg.sim, i);
    if (policy) b.control = run_policy(*policy, b);
    json row = {{"path_id", i},
                {"theta_jumps", b.theta.jump_times.size()},
                {"m_final", b.m.back()}};
    if (b.control) {
      row["switches"] = b.control->switch_steps.size();
      row["cost_theta"] = cost_theta_form(p, b).total();
      row["cost_m"] = cost_m_form(p, b).total();
    }
    paths.push_back(row);
    if (!csv) continue;
    for (std::size_t k = 0; k < b.t.size(); ++k) {
      *csv << i << ',' << num(b.t[k]) << ',' << int(b.theta.values[k]) << ',' << num(b.x_obs[k])
           << ',' << num(b.m[k]);
      if (b.control) *csv << ',' << int(b.control->values[k]);
      *csv << '\n';
    }
  }

  json rep = report_header("simulate", cfg);
  rep["paths"] = n_paths;
  rep["steps"] = cfg.sim.steps();
  rep["policy"] = policy ? json(policy->name()) : json(nullptr);
  rep["summary"] = paths;
  if (dump) rep["dump"] = *dump;
  if (!cfg.output.dir.empty()) stage.open("simulate.json") << rep.dump(2) << '\n';
  stage.commit();
  if (cfg.output.format == "csv") {
    out << (dump ? std::string() : csv_buf.str());
  } else {
    out << rep.dump(2) << '\n';
  }
  return kOk;
}

int cmd_evaluate(const RunConfig& cfg, const PolicyFlags& pf, const std::string& form_name,
                 std::ostream& out) {
  Stage stage(cfg.output.dir);
  const CostForm form = form_from_string(form_name);
  bool default_B = false;
  const auto policy = make_policy(pf, cfg, &default_B);
  if (!policy) throw ValidationError("policy", "policy: evaluate needs a policy");

  const PolicyEvaluation ev = estimate_cost(cfg.model, *policy, cfg.sim, {cfg.paths, cfg.threads});
  const CostEstimate& e = ev.estimate(form);
  json rep = report_header("evaluate", cfg);
  rep.update(estimate_json(e, form));
  rep["policy"] = policy->name();
  rep["mean_switches"] = ev.mean_switches;
  rep["theta_form"] = estimate_json(ev.theta_form, CostForm::ThetaForm);
  rep["m_form"] = estimate_json(ev.m_form, CostForm::MForm);

  // Closed-form value of the policy when one is known.
  const Side a = policy->a_init;
  const double x0 = cfg.sim.x0;
  if (std::holds_alternative<NeverSwitchRule>(policy->rule)) {
    rep["reference_value"] = v_tilde(cfg.model, sign(a) * x0);
  } else if (default_B) {
    const Solved s = solve(cfg, cfg.numerics.epsilon);
    const ValueFunction vf(cfg.model, s.phi, s.fb);
    if (x0 >= vf.lower() && x0 <= vf.upper()) rep["reference_value"] = vf.value(x0, a);
  }

  std::ostringstream csv;
  csv << "form,mean,stderr,n,tail_bound\n";
  for (auto f : {CostForm::MForm, CostForm::ThetaForm}) {
    const auto& est = ev.estimate(f);
    csv << to_string(f) << ',' << num(est.mean) << ',' << num(est.std_error) << ',' << est.n << ','
        << num(est.tail_bound) << '\n';
  }
  emit(out, stage, cfg, rep, "evaluate", csv.str());
  return kOk;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty()) continue;
    double v;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc{} || ptr != item.data() + item.size() || !(v > 0 && v < 1)) {
      throw ValidationError("grid", "grid: bad threshold \"" + item + "\"; need values in (0, 1)");
    }
    grid.push_back(v);
  }
  return grid;
}

int cmd_sweep(const RunConfig& cfg, const std::optional<std::string>& grid_text, bool with_never,
              bool include_optimal, int a_init, const std::string& form_name,
              const std::optional<std::string>& dump, std::ostream& out) {
  Stage stage(cfg.output.dir);
  const CostForm form = form_from_string(form_name);
  std::vector<double> grid;
  if (grid_text) {
    grid = parse_grid(*grid_text);
  } else {
    for (int j = 0; j <= 8; ++j) grid.push_back(0.44 + 0.05 * j);
  }
  std::optional<double> B_star;
  if (regime(cfg.model) == Regime::Switching) B_star = solve(cfg, cfg.numerics.epsilon).fb.B;
  if (include_optimal && B_star) {
    grid.push_back(*B_star);
    std::sort(grid.begin(), grid.end());
  }

  const SweepResult res = threshold_sweep(cfg.model, cfg.sim, grid, {cfg.paths, cfg.threads}, form,
                                          side_from_int(a_init), with_never);
  json rep = report_header("sweep", cfg);
  rep["form"] = std::string(to_string(form));
  rep["B_star"] = B_star ? json(*B_star) : json(nullptr);
  json rows = json::array();
  std::ostringstream csv;
  csv << "B,mean,stderr\n";
  for (const auto& r : res.rows) {
    const auto& e = form == CostForm::MForm ? r.m_form : r.theta_form;
    rows.push_back({{"B", r.B},
                    {"mean", e.mean},
                    {"stderr", e.std_error},
                    {"ci95", {e.ci_low, e.ci_high}},
                    {"vs_best", {{"mean", r.vs_best.mean}, {"stderr", r.vs_best.std_error}}}});
    csv << num(r.B) << ',' << num(e.mean) << ',' << num(e.std_error) << '\n';
  }
  rep["rows"] = rows;
  rep["argmin_B"] = res.argmin ? json(res.rows[*res.argmin].B) : json(nullptr);
  rep["overlap_set"] = res.overlap_set;
  if (res.baseline) {
    const auto& base = *res.baseline;
    rep["baseline"] = {{"policy", base.policy.name()},
                       {"estimate", estimate_json(base.estimate(form), form)}};
  }
  if (dump) stage.open(*dump) << csv.str();
  emit(out, stage, cfg, rep, "sweep", csv.str());
  return kOk;
}

int cmd_verify(const RunConfig& cfg, bool boundary_only, std::ostream& out) {
  Stage stage(cfg.output.dir);
  const auto& p = cfg.model;
  json rep = report_header("verify", cfg);
  json checks = json::array();
  bool ok = true;
  auto add = [&](const std::string& name, double value, double threshold, bool pass) {
    checks.push_back({{"name", name},
                      {"value", finite_or_null(value)},
                      {"threshold", threshold},
                      {"pass", pass}});
    ok = ok && pass;
  };

  if (!boundary_only) {
    const Solved s = solve(cfg, cfg.numerics.epsilon);
    const ValueFunction vf(p, s.phi, s.fb);
    for (const auto& c : verify_fit(vf, cfg.numerics.fit).checks) {
      add(c.name, c.value, c.threshold, c.passed);
    }
    if (s.fb.B) {
      const int changes = count_root_sign_changes(p, s.phi, 4000);
      add("root_sign_changes", changes, 1, changes == 1);
      rep["K"] = *s.fb.K;
      rep["B"] = *s.fb.B;
    }
    rep["regime"] = std::string(to_string(s.fb.regime));
  }

  const EntranceReport ent = entrance_boundary_check(p);
  json table = json::array();
  for (const auto& r : ent.rows) {
    table.push_back({{"cap", r.cap},
                     {"integral", r.integral},
                     {"increment", finite_or_null(r.increment)}});
  }
  rep["entrance"] = {{"rows", table}, {"converged", ent.converged}, {"tolerance", ent.tolerance}};
  add("entrance_convergence", ent.rows.back().increment, ent.tolerance, ent.converged);

  const ScaleSpeed ss(p);
  const double limit = p.mu() * p.mu() / (4.0 * p.lambda());
  json trace = json::array();
  for (int j = 1; j <= 8; ++j) {
    const double x = 1.0 - std::pow(10.0, -j);
    trace.push_back({{"x", x}, {"ratio", ss.hopital_ratio(x)}});
  }
  rep["gamma_ratio"] = {{"limit", limit}, {"trace", trace}};
  const double rel = std::abs(ss.hopital_ratio(1.0 - 1e-5) / limit - 1.0);
  add("gamma_ratio", rel, 0.01, rel < 0.01);

  rep["checks"] = checks;
  rep["all_passed"] = ok;
  std::ostringstream csv;
  csv << "check,value,threshold,pass\n";
  for (const auto& c : checks) {
    csv << c["name"].get<std::string>() << ','
        << (c["value"].is_null() ? std::string("nan") : num(c["value"].get<double>())) << ','
        << num(c["threshold"].get<double>()) << ',' << (c["pass"].get<bool>() ? "true" : "false")
        << '\n';
  }
  emit(out, stage, cfg, rep, "verify", csv.str());
  return ok ? kOk : kFlagged;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal tracking of a hidden two-state drift"};
  app.name("seqtrack");
  app.require_subcommand(1);
  app.fallthrough();

  Flags f;
  app.add_option("--config", f.config, "JSON config file");
  app.add_option("--seed", f.seed, "Master seed");
  app.add_option("--out", f.out, "Output directory for reports and relative dump paths");
  app.add_option("--format", f.format, "Table printed to stdout")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--lambda", f.lambda);
  app.add_option("--mu", f.mu);
  app.add_option("--alpha", f.alpha);
  app.add_option("--c1", f.c1);
  app.add_option("--c2", f.c2);
  app.add_option("--dt", f.dt);
  app.add_option("--horizon", f.horizon);
  app.add_option("--x0", f.x0);
  app.add_option("--clip", f.clip);
  app.add_option("--noise-substeps", f.noise_substeps);
  app.add_option("--scheme", f.scheme)->check(CLI::IsMember({"euler", "milstein"}));
  app.add_option("--paths", f.paths);
  app.add_option("--threads", f.threads);
  app.add_option("--epsilon", f.epsilon);
  app.add_option("--ode-tol", f.ode_tol);
  app.add_option("--root-tol", f.root_tol);
  app.add_option("--continuous-fit", f.continuous_fit);
  app.add_option("--smooth-fit", f.smooth_fit);
  app.add_option("--ode-residual", f.ode_residual);

  auto* solve_cmd = app.add_subcommand("solve", "Free boundary, value function and fit checks");
  std::optional<std::string> dump_phi, dump_value;
  int value_points = 401;
  solve_cmd->add_option("--dump-phi", dump_phi, "CSV of x, phi, dphi");
  solve_cmd->add_option("--dump-value", dump_value, "CSV of x, v_plus, v_minus, v_star");
  solve_cmd->add_option("--value-points", value_points);

  PolicyFlags pf;
  auto add_policy = [&](CLI::App* cmd, bool required) {
    auto* opt = cmd->add_option("--policy", pf.kind)
                    ->check(CLI::IsMember({"threshold", "never", "sign", "none"}));
    if (required) opt->required();
    cmd->add_option("--B", pf.B, "Threshold (default: the solved B)");
    cmd->add_option("--window", pf.window, "Look-back window of the sign policy");
    cmd->add_option("--a-init", pf.a_init, "Control before time zero")
        ->check(CLI::IsMember({-1, 1}));
  };

  auto* sim_cmd = app.add_subcommand("simulate", "Sample paths of theta, X, M (and A)");
  std::optional<std::string> sim_dump;
  sim_cmd->add_option("--dump", sim_dump, "Long-format CSV");
  add_policy(sim_cmd, false);

  auto* eval_cmd = app.add_subcommand("evaluate", "Monte Carlo cost of one policy");
  std::string form = "m";
  add_policy(eval_cmd, true);
  eval_cmd->add_option("--form", form)->check(CLI::IsMember({"m", "theta"}));

  auto* sweep_cmd = app.add_subcommand("sweep", "Threshold sweep on common random numbers");
  std::optional<std::string> grid, sweep_dump;
  bool with_never = false, no_optimal = false;
  int sweep_a = 1;
  sweep_cmd->add_option("--grid", grid, "Comma-separated thresholds");
  sweep_cmd->add_flag("--with-never", with_never, "Add the never-switch baseline");
  sweep_cmd->add_flag("--no-optimal", no_optimal, "Do not add the solved B to the grid");
  sweep_cmd->add_option("--a-init", sweep_a)->check(CLI::IsMember({-1, 1}));
  sweep_cmd->add_option("--form", form)->check(CLI::IsMember({"m", "theta"}));
  sweep_cmd->add_option("--dump", sweep_dump, "CSV of B, mean, stderr");

  auto* verify_cmd = app.add_subcommand("verify", "Run all numerical checks");
  bool boundary_only = false;
  verify_cmd->add_flag("--boundary", boundary_only, "Only the boundary classification checks");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kError;
  }

  try {
    const RunConfig cfg = resolve(f);
    if (*solve_cmd) return cmd_solve(cfg, dump_phi, dump_value, value_points, out);
    if (*sim_cmd) return cmd_simulate(cfg, f.paths.value_or(1), pf, sim_dump, out);
    if (*eval_cmd) return cmd_evaluate(cfg, pf, form, out);
    if (*sweep_cmd) {
      return cmd_sweep(cfg, grid, with_never, !no_optimal, sweep_a, form, sweep_dump, out);
    }
    if (*verify_cmd) return cmd_verify(cfg, boundary_only, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }
  return kError;
}

}  // namespace seqtrack::cli
