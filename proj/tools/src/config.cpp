// Copyright 2025 The phonocool Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <set>

#include "phonocool_cli/cli.hpp"

namespace phonocool::cli {
namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

// Reads keys from one JSON object and rejects whatever was not consumed.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  std::optional<double> number(const std::string& key) {
    const json* v = take(key);
    if (!v) return std::nullopt;
    if (!v->is_number()) throw ConfigError(join(path_, key), "expected a number");
    const double d = v->get<double>();
    if (!std::isfinite(d)) throw ConfigError(join(path_, key), "must be finite");
    return d;
  }

  std::optional<int> integer(const std::string& key) {
    const json* v = take(key);
    if (!v) return std::nullopt;
    if (!v->is_number_integer()) throw ConfigError(join(path_, key), "expected an integer");
    return v->get<int>();
  }

  std::optional<bool> boolean(const std::string& key) {
    const json* v = take(key);
    if (!v) return std::nullopt;
    if (!v->is_boolean()) throw ConfigError(join(path_, key), "expected true or false");
    return v->get<bool>();
  }

  std::optional<std::string> string(const std::string& key) {
    const json* v = take(key);
    if (!v) return std::nullopt;
    if (!v->is_string()) throw ConfigError(join(path_, key), "expected a string");
    return v->get<std::string>();
  }

  const json* object(const std::string& key) {
    const json* v = take(key);
    if (v && !v->is_object()) throw ConfigError(join(path_, key), "expected an object");
    return v;
  }

  std::string path(const std::string& key) const { return join(path_, key); }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.count(it.key())) throw ConfigError(join(path_, it.key()), "unknown key");
    }
  }

 private:
  const json* take(const std::string& key) {
    if (!j_.contains(key)) return nullptr;
    used_.insert(key);
    return &j_.at(key);
  }

  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

AxisScale parse_scale(const std::string& s, const std::string& path) {
  if (s == "linear") return AxisScale::kLinear;
  if (s == "log") return AxisScale::kLog;
  throw ConfigError(path, "scale must be 'linear' or 'log'");
}

Axis parse_axis(const json& j, const std::string& path, ModelFamily family) {
  ObjectReader r(j, path);
  Axis a;
  const auto name = r.string("name");
  if (!name) throw ConfigError(r.path("name"), "missing");
  if (!has_parameter(family, *name)) {
    throw ConfigError(r.path("name"), "parameter '" + *name + "' does not exist for " + std::string(family_name(family)));
  }
  a.name = *name;
  if (auto s = r.string("scale")) a.scale = parse_scale(*s, r.path("scale"));
  const auto lo = r.number("min");
  const auto hi = r.number("max");
  const auto n = r.integer("count");
  if (!lo || !hi || !n) throw ConfigError(path, "axis needs min, max and count");
  a.min = *lo;
  a.max = *hi;
  a.count = *n;
  if (a.count < 2) throw ConfigError(r.path("count"), "must be >= 2");
  if (!(a.min < a.max)) throw ConfigError(r.path("min"), "must be < max");
  if (a.scale == AxisScale::kLog && !(a.min > 0.0)) throw ConfigError(r.path("min"), "log axis needs min > 0");
  r.finish();
  return a;
}

void parse_parameters(const json& j, RunConfig& c) {
  ObjectReader r(j, "parameters");
  c.params = default_params(c.family);
  for (const auto& name : parameter_names(c.family)) {
    if (name == "fock_cutoff") {
      if (auto v = r.integer(name)) set_fock_cutoff(c.params, *v);
    } else if (auto v = r.number(name)) {
      set_parameter(c.params, name, *v);
    }
  }
  if (const json* th = r.object("thermal")) {
    if (j.contains("n_th")) throw ConfigError("parameters.thermal", "give either n_th or thermal, not both");
    ObjectReader t(*th, "parameters.thermal");
    const auto nu = t.number("frequency_ghz");
    const auto temp = t.number("temperature_k");
    if (!nu || !temp) throw ConfigError("parameters.thermal", "needs frequency_ghz and temperature_k");
    t.finish();
    set_parameter(c.params, "n_th", thermal_occupancy(*nu, *temp));
  }
  if (c.family == ModelFamily::kPolariton) {
    if (auto m = r.string("mapping")) {
      auto& p = std::get<PolaritonParams>(c.params);
      if (*m == "operating_point") p.mapping = PolaritonMapping::kOperatingPoint;
      else if (*m == "raw") p.mapping = PolaritonMapping::kRaw;
      else throw ConfigError("parameters.mapping", "must be 'operating_point' or 'raw'");
    }
  }
  r.finish();
  std::visit([](const auto& p) { validate(p); }, c.params);
}

void parse_solver(const json& j, RunConfig& c) {
  ObjectReader r(j, "solver");
  if (auto v = r.number("tolerance")) c.solver.converge.solver.tolerance = *v;
  if (auto v = r.number("positivity_tolerance")) c.solver.converge.solver.positivity_tolerance = *v;
  if (auto v = r.boolean("use_symmetry")) c.solver.converge.solver.use_symmetry = *v;
  if (auto v = r.boolean("adaptive_cutoff")) c.solver.adaptive_cutoff = *v;
  if (auto v = r.number("converge_tolerance")) c.solver.converge_tolerance = *v;
  if (auto v = r.integer("max_cutoff")) c.solver.converge.max_cutoff = *v;
  if (auto v = r.integer("cutoff_step")) c.solver.converge.step = *v;
  r.finish();
  if (c.solver.converge.step < 1) throw ConfigError("solver.cutoff_step", "must be >= 1");
}

void parse_evolve(const json& j, RunConfig& c) {
  ObjectReader r(j, "evolve");
  EvolveConfig& e = c.evolve;
  if (auto v = r.string("integrator")) {
    if (*v == "radau5") e.options.integrator = Integrator::kRadauIIA5;
    else if (*v == "rk45") e.options.integrator = Integrator::kDormandPrince45;
    else throw ConfigError("evolve.integrator", "must be 'radau5' or 'rk45'");
  }
  if (auto v = r.number("rtol")) e.options.rtol = *v;
  if (auto v = r.number("atol")) e.options.atol = *v;
  if (auto v = r.integer("max_steps")) e.options.max_steps = *v;
  if (auto v = r.number("t_min")) e.t_min = *v;
  if (auto v = r.number("t_max")) e.t_max = *v;
  if (auto v = r.integer("points")) e.points = *v;
  if (auto v = r.string("scale")) e.scale = parse_scale(*v, "evolve.scale");
  if (auto v = r.boolean("fit")) e.fit = *v;
  r.finish();
  if (e.points < 2) throw ConfigError("evolve.points", "must be >= 2");
  if (!(e.t_min > 0.0) || !(e.t_max > e.t_min)) throw ConfigError("evolve.t_max", "need 0 < t_min < t_max");
}

void parse_sweep(const json& j, RunConfig& c) {
  ObjectReader r(j, "sweep");
  if (const json* a = r.object("axis1")) c.axis1 = parse_axis(*a, "sweep.axis1", c.family);
  if (const json* a = r.object("axis2")) c.axis2 = parse_axis(*a, "sweep.axis2", c.family);
  if (const json* o = r.object("overrides")) {
    for (auto it = o->begin(); it != o->end(); ++it) {
      const std::string key = "sweep.overrides." + it.key();
      if (!has_parameter(c.family, it.key())) throw ConfigError(key, "unknown parameter");
      if (!it->is_number()) throw ConfigError(key, "expected a number");
      c.overrides[it.key()] = it->get<double>();
    }
  }
  r.finish();
  if (c.axis2 && !c.axis1) throw ConfigError("sweep.axis1", "missing");
}

void parse_ratemap(const json& j, RunConfig& c) {
  ObjectReader r(j, "ratemap");
  RateMapOptions& o = c.ratemap;
  if (auto v = r.number("omega_m")) c.omega_m = *v;
  if (auto v = r.number("max_time")) o.max_time = *v;
  if (auto v = r.number("pilot_t_min")) o.pilot_t_min = *v;
  if (auto v = r.integer("pilot_points_per_decade")) o.pilot_points_per_decade = *v;
  if (auto v = r.number("settle_fraction")) o.settle_fraction = *v;
  if (auto v = r.integer("samples")) o.samples = *v;
  if (auto v = r.number("window_decades")) o.window_decades = *v;
  if (auto v = r.integer("evolve_cutoff")) o.evolve_cutoff = *v;
  if (auto v = r.integer("max_cutoff")) o.max_cutoff = *v;
  r.finish();
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> v = {"steady", "evolve", "sweep", "ratemap", "optimal", "validate"};
  return v;
}

SweepSpec RunConfig::sweep_spec() const {
  if (!axis1) throw ConfigError("sweep.axis1", "this command needs a sweep block with axis1");
  SweepSpec s;
  s.family = family;
  s.base_params = params;
  s.axis1 = *axis1;
  s.axis2 = axis2;
  s.fixed_overrides = overrides;
  s.solver = solver;
  return s;
}

RunConfig parse_config(const json& doc) {
  RunConfig c;
  c.echo = doc;
  ObjectReader r(doc, "");
  if (auto cmd = r.string("command")) {
    bool ok = false;
    for (const auto& k : commands()) ok = ok || k == *cmd;
    if (!ok) throw ConfigError("command", "unknown command '" + *cmd + "'");
    c.command = *cmd;
  }
  const auto fam = r.string("model_family");
  if (fam) {
    try {
      c.family = family_from_name(*fam);
    } catch (const InvalidParameterError&) {
      throw ConfigError("model_family", "must be three_level, polariton or mn_four_level");
    }
  }
  c.params = default_params(c.family);
  try {
    if (const json* p = r.object("parameters")) parse_parameters(*p, c);
  } catch (const InvalidParameterError& e) {
    throw ConfigError("parameters", e.what());
  }
  if (const json* s = r.object("solver")) parse_solver(*s, c);
  if (const json* e = r.object("evolve")) parse_evolve(*e, c);
  if (const json* s = r.object("sweep")) parse_sweep(*s, c);
  if (const json* s = r.object("ratemap")) parse_ratemap(*s, c);
  if (const json* v = r.object("validate")) ObjectReader(*v, "validate").finish();
  if (const json* v = r.object("optimal")) ObjectReader(*v, "optimal").finish();
  if (const json* v = r.object("steady")) ObjectReader(*v, "steady").finish();
  if (auto v = r.string("output_dir")) c.output_dir = *v;
  if (auto v = r.integer("jobs")) {
    if (*v < 1) throw ConfigError("jobs", "must be >= 1");
    c.jobs = *v;
  }
  r.finish();
  return c;
}

// Desk-scale versions of the figure configurations; grids and cutoffs are
// reduced, physical parameters follow the figure captions.
const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> v = {"fig2", "fig3", "fig6", "figB1a", "figD1", "figF2", "figG2", "figH1"};
  return v;
}

json preset(const std::string& name) {
  const double sqrt2 = std::sqrt(2.0);
  auto log_axis = [](const char* n, double lo, double hi, int count) {
    return json{{"name", n}, {"scale", "log"}, {"min", lo}, {"max", hi}, {"count", count}};
  };
  auto lin_axis = [](const char* n, double lo, double hi, int count) {
    return json{{"name", n}, {"scale", "linear"}, {"min", lo}, {"max", hi}, {"count", count}};
  };

  const double g2 = 5.0;  // detuning maps
  json detuning = {
      {"model_family", "three_level"},
      {"parameters",
       {{"g", g2}, {"omega", g2 / 2}, {"gamma2", g2 / 2}, {"gamma1", 0.1 * g2}, {"gamma", 1e-4 * g2},
        {"thermal", {{"frequency_ghz", 120.9}, {"temperature_k", 50.0}}}, {"fock_cutoff", 20}}},
      {"sweep", {{"axis1", lin_axis("delta1", -3 * g2, 3 * g2, 9)}, {"axis2", lin_axis("delta2", -3 * g2, 3 * g2, 9)}}},
  };

  const double g3 = 20.0;
  json regime1 = {
      {"model_family", "three_level"},
      {"parameters",
       {{"g", g3}, {"omega", g3 / sqrt2}, {"gamma2", 2 * g3}, {"gamma1", 1e-6}, {"gamma", 1e-3},
        {"thermal", {{"frequency_ghz", 241.8}, {"temperature_k", 17.0}}}, {"fock_cutoff", 10}}},
      {"sweep", {{"axis1", log_axis("omega", 0.1 * g3, 3 * g3, 9)}, {"axis2", log_axis("gamma2", 0.3 * g3, 10 * g3, 9)}}},
      {"ratemap", {{"omega_m", 241.8}}},
  };

  const double G = 5.0, g6 = 0.002 * G;
  json polariton = {
      {"model_family", "polariton"},
      {"parameters",
       {{"big_g", G}, {"delta_tc", 0.0}, {"g", g6}, {"omega_m", 2 * G}, {"omega", g6}, {"gamma2", g6},
        {"gamma", 1e-7}, {"n_th", 5.0}, {"fock_cutoff", 20}}},
      {"sweep", {{"axis1", log_axis("omega", 0.1 * g6, 10 * g6, 7)}, {"axis2", log_axis("gamma2", 0.1 * g6, 10 * g6, 7)}}},
      {"ratemap", {{"omega_m", 2 * G}}},
  };

  if (name == "fig2") return detuning;
  if (name == "fig3") return regime1;
  if (name == "fig6") return polariton;
  if (name == "figB1a") {
    json j = detuning;
    j["parameters"]["omega"] = 10 * g2;
    j["sweep"]["axis1"] = lin_axis("delta1", -6 * g2, 6 * g2, 9);
    j["sweep"]["axis2"] = lin_axis("delta2", -15 * g2, 15 * g2, 9);
    return j;
  }
  if (name == "figD1") {
    json j = regime1;
    j["parameters"]["gamma_d"] = g3 / 2;
    j.erase("ratemap");
    return j;
  }
  if (name == "figF2") {
    json j = polariton;
    j["parameters"]["gamma_p"] = 0.01 * g6;
    j["solver"] = {{"max_cutoff", 100}, {"cutoff_step", 10}};
    j.erase("ratemap");
    return j;
  }
  if (name == "figG2") {
    const double g = 0.01;
    return json{
        {"model_family", "mn_four_level"},
        {"parameters",
         {{"omega3", 170.0}, {"omega_m", 35.0}, {"g", g}, {"omega", g}, {"gamma2", g}, {"gamma3", 0.02418},
          {"gamma_d", 0.02418}, {"gamma", 35.0 / 1e7}, {"n_th", 2.52}, {"fock_cutoff", 20}}},
        {"sweep", {{"axis1", log_axis("omega", 0.1 * g, 10 * g, 7)}, {"axis2", log_axis("gamma2", 0.1 * g, 10 * g, 7)}}},
    };
  }
  if (name == "figH1") {
    const double g = 1e-3;
    return json{
        {"model_family", "three_level"},
        {"parameters",
         {{"g", g}, {"omega", 0.0}, {"gamma2", 2 * g}, {"gamma1", 1e-5 * g}, {"gamma_p", 10 * g}, {"gamma", 1e-3 * g},
          {"n_th", 5.0}, {"fock_cutoff", 20}}},
        {"solver", {{"max_cutoff", 80}}},
        {"sweep", {{"axis1", log_axis("gamma2", 0.5 * g, 8 * g, 9)}}},
    };
  }
  throw ConfigError("preset", "unknown preset '" + name + "'");
}

}  // namespace phonocool::cli
