#include "seqtrack/config.hpp"

#include <fstream>
#include <initializer_list>
#include <optional>

#include "seqtrack/errors.hpp"

namespace seqtrack {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<std::string_view> known) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (auto k : known) ok = ok || key == k;
    if (!ok) {
      const std::string full = where.empty() ? key : where + "." + key;
      throw ValidationError(full, full + ": unknown key");
    }
  }
}

const json* section(const json& doc, const char* name) {
  if (!doc.contains(name)) return nullptr;
  const json& s = doc.at(name);
  if (!s.is_object()) throw ValidationError(name, std::string(name) + ": must be an object");
  return &s;
}

double number(const json& obj, const std::string& key) {
  const json& v = obj.at(key);
  if (!v.is_number()) throw ValidationError(key, key + ": must be a number");
  return v.get<double>();
}

template <class T>
void read_int(const json* obj, const std::string& key, T& dst) {
  if (!obj || !obj->contains(key)) return;
  const json& v = obj->at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ValidationError(key, key + ": must be a non-negative integer");
  }
  dst = static_cast<T>(v.get<unsigned long long>());
}

void read_double(const json* obj, const std::string& key, double& dst) {
  if (obj && obj->contains(key)) dst = number(*obj, key);
}

}  // namespace

std::string_view version() noexcept {
#ifdef SEQTRACK_VERSION
  return SEQTRACK_VERSION;
#else
  return "unknown";
#endif
}

std::string_view to_string(FilterScheme s) noexcept {
  return s == FilterScheme::Milstein ? "milstein" : "euler";
}

FilterScheme scheme_from_string(const std::string& s) {
  if (s == "euler") return FilterScheme::EulerMaruyama;
  if (s == "milstein") return FilterScheme::Milstein;
  throw ValidationError("scheme", "scheme: expected \"euler\" or \"milstein\", got \"" + s + "\"");
}

PhiOptions RunConfig::phi_options() const {
  PhiOptions o;
  o.epsilon = numerics.epsilon;
  o.tol = numerics.ode_tol;
  return o;
}

RootOptions RunConfig::root_options() const {
  RootOptions o;
  o.tol = numerics.root_tol;
  return o;
}

void RunConfig::validate() const {
  sim.validate();
  const auto& n = numerics;
  if (!(n.epsilon > 0 && n.epsilon <= 1e-2)) {
    throw ValidationError("epsilon", "epsilon: must lie in (0, 1e-2]");
  }
  if (!(n.ode_tol > 0)) throw ValidationError("ode_tol", "ode_tol: must be > 0");
  if (!(n.root_tol > 0)) throw ValidationError("root_tol", "root_tol: must be > 0");
  if (!(n.fit.continuous_fit > 0)) {
    throw ValidationError("continuous_fit", "continuous_fit: must be > 0");
  }
  if (!(n.fit.smooth_fit > 0)) throw ValidationError("smooth_fit", "smooth_fit: must be > 0");
  if (!(n.fit.ode_residual > 0)) {
    throw ValidationError("ode_residual", "ode_residual: must be > 0");
  }
  if (!(n.fit.sign_margin >= 0)) {
    throw ValidationError("sign_margin", "sign_margin: must be >= 0");
  }
  if (n.fit.grid_points < 10) throw ValidationError("grid_points", "grid_points: must be >= 10");
  if (paths < 1) throw ValidationError("paths", "paths: must be >= 1");
  if (output.format != "json" && output.format != "csv") {
    throw ValidationError("format", "format: expected \"json\" or \"csv\"");
  }
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ValidationError("config", "config: top level must be an object");
  reject_unknown(doc, "",
                 {"model", "sim", "numerics", "output", "seed", "lambda", "mu", "alpha", "c1",
                  "c2"});

  const json* model = section(doc, "model");
  if (model) {
    reject_unknown(*model, "model", {"lambda", "mu", "alpha", "c1", "c2"});
  } else {
    model = &doc;
  }
  for (const char* key : {"lambda", "mu", "alpha", "c1", "c2"}) {
    if (!model->contains(key)) throw ValidationError(key, std::string(key) + ": required");
  }
  RunConfig cfg;
  cfg.model = ModelParams(number(*model, "lambda"), number(*model, "mu"),
                          number(*model, "alpha"), number(*model, "c1"), number(*model, "c2"));

  if (const json* s = section(doc, "sim")) {
    reject_unknown(*s, "sim",
                   {"dt", "horizon", "x0", "scheme", "noise_substeps", "clip", "paths", "threads"});
    read_double(s, "dt", cfg.sim.dt);
    read_double(s, "horizon", cfg.sim.horizon);
    read_double(s, "x0", cfg.sim.x0);
    read_double(s, "clip", cfg.sim.clip);
    read_int(s, "noise_substeps", cfg.sim.noise_substeps);
    read_int(s, "paths", cfg.paths);
    read_int(s, "threads", cfg.threads);
    if (s->contains("scheme")) {
      if (!s->at("scheme").is_string()) throw ValidationError("scheme", "scheme: must be a string");
      cfg.sim.scheme = scheme_from_string(s->at("scheme").get<std::string>());
    }
  }
  if (const json* n = section(doc, "numerics")) {
    reject_unknown(*n, "numerics",
                   {"epsilon", "ode_tol", "root_tol", "continuous_fit", "smooth_fit",
                    "ode_residual", "sign_margin", "grid_points"});
    auto& num = cfg.numerics;
    read_double(n, "epsilon", num.epsilon);
    read_double(n, "ode_tol", num.ode_tol);
    read_double(n, "root_tol", num.root_tol);
    read_double(n, "continuous_fit", num.fit.continuous_fit);
    read_double(n, "smooth_fit", num.fit.smooth_fit);
    read_double(n, "ode_residual", num.fit.ode_residual);
    read_double(n, "sign_margin", num.fit.sign_margin);
    read_int(n, "grid_points", num.fit.grid_points);
  }
  if (const json* o = section(doc, "output")) {
    reject_unknown(*o, "output", {"dir", "format"});
    for (const char* key : {"dir", "format"}) {
      if (!o->contains(key)) continue;
      if (!o->at(key).is_string()) throw ValidationError(key, std::string(key) + ": must be a string");
    }
    if (o->contains("dir")) cfg.output.dir = o->at("dir").get<std::string>();
    if (o->contains("format")) cfg.output.format = o->at("format").get<std::string>();
  }
  read_int(&doc, "seed", cfg.sim.seed);
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config", "config: cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config", "config: " + path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

json to_json(const RunConfig& c) {
  const auto& m = c.model;
  const auto& s = c.sim;
  const auto& n = c.numerics;
  return {
      {"model", {{"lambda", m.lambda()}, {"mu", m.mu()}, {"alpha", m.alpha()}, {"c1", m.c1()},
                 {"c2", m.c2()}}},
      {"sim", {{"dt", s.dt}, {"horizon", s.horizon}, {"x0", s.x0},
               {"scheme", std::string(to_string(s.scheme))},
               {"noise_substeps", s.noise_substeps}, {"clip", s.clip}, {"paths", c.paths},
               {"threads", c.threads}}},
      {"numerics", {{"epsilon", n.epsilon}, {"ode_tol", n.ode_tol}, {"root_tol", n.root_tol},
                    {"continuous_fit", n.fit.continuous_fit}, {"smooth_fit", n.fit.smooth_fit},
                    {"ode_residual", n.fit.ode_residual}, {"sign_margin", n.fit.sign_margin},
                    {"grid_points", n.fit.grid_points}}},
      {"output", {{"dir", c.output.dir}, {"format", c.output.format}}},
      {"seed", s.seed},
  };
}

}  // namespace seqtrack
