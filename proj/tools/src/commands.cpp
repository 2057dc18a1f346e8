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

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "phonocool_cli/cli.hpp"

namespace phonocool::cli {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

namespace fs = std::filesystem;

const char* kDefaultOutDir = "phonocool_out";

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// Collects outputs, timings and warnings; files land via temp file + rename.
class Run {
 public:
  explicit Run(fs::path dir) : dir_(std::move(dir)) {}

  void write(const std::string& name, const std::string& content) {
    fs::create_directories(dir_);
    const fs::path target = dir_ / name;
    const fs::path tmp = dir_ / (name + ".tmp");
    {
      std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
      if (!os) throw Error("cannot open " + tmp.string() + " for writing");
      os << content;
      if (!os) throw Error("write failed for " + tmp.string());
    }
    fs::rename(tmp, target);
    outputs_.push_back(name);
  }

  void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }

  template <typename Fn>
  auto timed(const std::string& task, Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    auto finish = [&] {
      timings_[task] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      finish();
    } else {
      auto r = fn();
      finish();
      return r;
    }
  }

  void warn(const std::string& w) { warnings_.push_back(w); }
  void warn_all(const std::vector<std::string>& ws, const std::string& prefix = "") {
    for (const auto& w : ws) warn(prefix + w);
  }

  void manifest(const std::string& command, const json& config, int exit_code) {
    json m;
    m["tool"] = "phonocool";
    m["version"] = PHONOCOOL_VERSION;
    m["command"] = command;
    m["config"] = config;
    m["exit_code"] = exit_code;
    m["timings_s"] = timings_;
    m["warnings"] = warnings_;
    m["outputs"] = outputs_;
    write_json("manifest.json", m);
  }

  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  std::map<std::string, double> timings_;
  std::vector<std::string> warnings_;
  std::vector<std::string> outputs_;
};

json params_json(const ModelParams& p) {
  json j;
  const ModelFamily f = family_of(p);
  j["model_family"] = std::string(family_name(f));
  for (const auto& name : parameter_names(f)) {
    if (name == "fock_cutoff") j[name] = fock_cutoff(p);
    else j[name] = get_parameter(p, name);
  }
  if (const auto* pp = std::get_if<PolaritonParams>(&p)) {
    j["mapping"] = pp->mapping == PolaritonMapping::kRaw ? "raw" : "operating_point";
  }
  return j;
}

SteadyStateResult solve(const RunConfig& c, const ModelParams& p) {
  if (c.solver.adaptive_cutoff) return converge_cutoff(p, fock_cutoff(p), c.solver.converge_tolerance, c.solver.converge);
  return steady_state(build_model(p), c.solver.converge.solver);
}

json steady_json(const SteadyStateResult& r, const ModelParams& p) {
  json j;
  j["phonon_number"] = r.phonon_number;
  j["n_th"] = thermal_occupancy_of(p);
  j["figure_of_merit"] = finite_or_null(r.figure_of_merit);
  json pops = json::object();
  for (const auto& [k, v] : r.observables) {
    if (k != "phonon_number") pops[k] = v;
  }
  j["populations"] = pops;
  j["residual_norm"] = r.residual_norm;
  j["identity_residual"] = steady_identity_residual(r, p);
  j["fock_cutoff_used"] = r.fock_cutoff_used;
  j["min_eigenvalue"] = r.min_eigenvalue;
  j["used_symmetry"] = r.used_symmetry;
  j["warnings"] = r.warnings;
  return j;
}

std::vector<double> time_grid(const EvolveConfig& e) {
  std::vector<double> t(e.points);
  for (int k = 0; k < e.points; ++k) {
    const double s = static_cast<double>(k) / (e.points - 1);
    t[k] = e.scale == AxisScale::kLog ? std::exp(std::log(e.t_min) + s * (std::log(e.t_max) - std::log(e.t_min)))
                                      : e.t_min + s * (e.t_max - e.t_min);
  }
  t.front() = e.t_min;
  t.back() = e.t_max;
  return t;
}

std::string cell_header(const SweepResult& r) {
  std::string h = "i,j," + r.spec.axis1.name + ",";
  h += r.spec.axis2 ? r.spec.axis2->name : std::string("axis2");
  return h + ",figure_of_merit,phonon_number,cutoff_used,residual_norm,identity_residual,status,error_kind";
}

std::string cell_row(const SweepResult& r, int i, int j) {
  const CellDiagnostics& d = r.cell(i, j);
  std::string s = std::to_string(i) + "," + std::to_string(j) + "," + format_number(r.axis1_values[i]) + "," +
                  format_number(r.axis2_values[j]) + "," + format_number(r.figure_of_merit(i, j)) + "," +
                  format_number(r.phonon_number(i, j)) + "," + std::to_string(d.cutoff_used) + "," +
                  format_number(d.residual_norm) + "," + format_number(d.identity_residual) + ",";
  s += d.status == CellStatus::kOk ? "ok" : "failed";
  return s + "," + d.error_kind;
}

std::string sweep_csv(const SweepResult& r) {
  std::string out = cell_header(r) + "\n";
  for (int i = 0; i < r.rows(); ++i) {
    for (int j = 0; j < r.cols(); ++j) out += cell_row(r, i, j) + "\n";
  }
  return out;
}

std::string ratemap_csv(const RateMapResult& r) {
  const SweepResult& s = r.sweep;
  std::string out = cell_header(s) + ",gamma_eff,beta,mape,rate,ratio,horizon,evolve_cutoff,fit_status\n";
  for (int i = 0; i < s.rows(); ++i) {
    for (int j = 0; j < s.cols(); ++j) {
      const RateCell& c = r.cell(i, j);
      out += cell_row(s, i, j) + "," + format_number(r.gamma_eff(i, j)) + "," + format_number(r.beta(i, j)) + "," +
             format_number(r.mape(i, j)) + "," + format_number(r.rate(i, j)) + "," + format_number(r.ratio(i, j)) +
             "," + format_number(c.horizon) + "," + std::to_string(c.cutoff_used) + "," + c.status + "\n";
    }
  }
  return out;
}

json optimum_json(const std::optional<Optimum>& o) {
  if (!o) return nullptr;
  return json{{"i", o->i}, {"j", o->j}, {"axis1", o->axis1_value}, {"axis2", finite_or_null(o->axis2_value)},
              {"value", o->value}};
}

void note_failed_cells(Run& run, const SweepResult& r) {
  for (int i = 0; i < r.rows(); ++i) {
    for (int j = 0; j < r.cols(); ++j) {
      const CellDiagnostics& d = r.cell(i, j);
      if (d.status == CellStatus::kFailed) {
        run.warn("cell (" + std::to_string(i) + "," + std::to_string(j) + ") failed: " + d.message);
      }
    }
  }
}

double omega_m_for(const RunConfig& c) {
  if (c.omega_m) return *c.omega_m;
  if (const auto* p = std::get_if<PolaritonParams>(&c.params)) return p->omega_m;
  if (const auto* p = std::get_if<MnFourLevelParams>(&c.params)) return p->omega_m;
  throw ConfigError("ratemap.omega_m", "required for the three_level family");
}

int cmd_steady(const RunConfig& c, Run& run) {
  const SteadyStateResult r = run.timed("steady", [&] { return solve(c, c.params); });
  json j = steady_json(r, c.params);
  j["parameters"] = params_json(c.params);
  run.warn_all(r.warnings);
  run.write_json("steady.json", j);
  return kExitOk;
}

int cmd_evolve(const RunConfig& c, Run& run, json& extra) {
  const ModelInstance m = build_model(c.params);
  const std::vector<double> times = time_grid(c.evolve);
  const EvolutionTrace tr =
      run.timed("evolve", [&] { return evolve(m, ground_thermal_state(m), times, c.evolve.options); });
  std::string csv = "t,phonon_number";
  for (const auto& [k, v] : tr.populations) csv += "," + k;
  csv += "\n";
  for (size_t i = 0; i < tr.times.size(); ++i) {
    csv += format_number(tr.times[i]) + "," + format_number(tr.phonon_number[i]);
    for (const auto& [k, v] : tr.populations) csv += "," + format_number(v[i]);
    csv += "\n";
  }
  run.write("evolve.csv", csv);
  extra["steps"] = tr.steps;
  if (c.evolve.fit) {
    const SteadyStateResult ss = run.timed("steady", [&] { return steady_state(m, c.solver.converge.solver); });
    const FitResult f =
        run.timed("fit", [&] { return fit_stretched_exponential(tr, thermal_occupancy_of(c.params), ss.phonon_number); });
    extra["fit"] = json{{"gamma_eff", finite_or_null(f.gamma_eff)}, {"beta", f.beta}, {"mape", f.mape},
                        {"steady_value", f.steady_value}, {"initial_value", f.initial_value},
                        {"converged", f.converged}, {"beta_at_bound", f.beta_at_bound}};
    run.warn_all(f.warnings, "fit: ");
  }
  return kExitOk;
}

int cmd_sweep(const RunConfig& c, Run& run, int jobs, json& extra) {
  const SweepResult r = run.timed("sweep", [&] { return sweep(c.sweep_spec(), jobs); });
  run.write("sweep.csv", sweep_csv(r));
  extra["optimum"] = optimum_json(r.optimum);
  note_failed_cells(run, r);
  return kExitOk;
}

int cmd_ratemap(const RunConfig& c, Run& run, int jobs, json& extra) {
  const double wm = omega_m_for(c);
  const RateMapResult r = run.timed("ratemap", [&] { return rate_map(c.sweep_spec(), wm, c.ratemap, jobs); });
  run.write("ratemap.csv", ratemap_csv(r));
  extra["optimum"] = optimum_json(r.sweep.optimum);
  extra["best_ratio"] = optimum_json(r.best_ratio);
  note_failed_cells(run, r.sweep);
  for (int i = 0; i < r.sweep.rows(); ++i) {
    for (int j = 0; j < r.sweep.cols(); ++j) {
      run.warn_all(r.cell(i, j).fit.warnings, "cell (" + std::to_string(i) + "," + std::to_string(j) + ") fit: ");
    }
  }
  return kExitOk;
}

int cmd_optimal(const RunConfig& c, Run& run, int jobs) {
  const SweepSpec spec = c.sweep_spec();
  const SweepResult r = run.timed("sweep", [&] { return sweep(spec, jobs); });
  note_failed_cells(run, r);
  const Optimum o = locate_optimum(r);
  const ModelParams p = cell_params(spec, o.i, o.j);
  json j;
  j["numeric"] = optimum_json(o);
  j["numeric"]["parameters"] = params_json(p);
  j["numeric"]["phonon_number"] = r.phonon_number(o.i, o.j);
  try {
    if (const auto* tp = std::get_if<ThreeLevelParams>(&p)) {
      const OptimalPoint e = optimal_regime1(tp->g, tp->omega);
      j["closed_form_optimum"] = {{"omega", e.omega_opt}, {"gamma2", e.gamma2_opt}};
      std::vector<std::string> w;
      j["closed_form_phonon_number"] = phonon_closed_form_regime1(*tp, &w);
      run.warn_all(w, "closed form: ");
    } else if (const auto* pp = std::get_if<PolaritonParams>(&p)) {
      j["closed_form_phonon_number"] = phonon_closed_form_regime2(*pp);
    }
  } catch (const Error& e) {
    run.warn(std::string("closed form unavailable: ") + e.what());
  }
  run.write_json("optimal.json", j);
  return kExitOk;
}

int cmd_validate(Run& run, int jobs) {
  const std::vector<CheckOutcome> checks = run.timed("validate", [&] { return run_validate(kCodata, jobs); });
  json arr = json::array();
  bool all = true;
  for (const auto& k : checks) {
    arr.push_back({{"name", k.name}, {"passed", k.passed}, {"value", finite_or_null(k.value)},
                   {"expected", k.expected}, {"tolerance", k.tolerance}, {"detail", k.detail}});
    all = all && k.passed;
    if (!k.passed) run.warn("check failed: " + k.name);
    std::cout << (k.passed ? "PASS " : "FAIL ") << k.name << "\n";
  }
  run.write_json("validate.json", json{{"all_passed", all}, {"checks", arr}});
  return all ? kExitOk : kExitFailure;
}

json load_document(const Invocation& inv) {
  json doc = json::object();
  if (inv.preset) doc = preset(*inv.preset);
  if (inv.config_file) {
    std::ifstream is(*inv.config_file);
    if (!is) throw ConfigError(inv.config_file->string(), "cannot open config file");
    json user;
    try {
      user = json::parse(is);
    } catch (const json::parse_error& e) {
      throw ConfigError(inv.config_file->string(), e.what());
    }
    if (!user.is_object()) throw ConfigError("<root>", "expected an object");
    doc.merge_patch(user);
  }
  return doc;
}

int resolve_jobs(const Invocation& inv, const RunConfig& c) {
  if (inv.jobs) return *inv.jobs;
  if (c.jobs) return *c.jobs;
  if (const char* env = std::getenv("PHONOCOOL_JOBS")) {
    int v = 0;
    const std::string s(env);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || v < 1) {
      throw ConfigError("PHONOCOOL_JOBS", "must be a positive integer");
    }
    return v;
  }
  return 1;
}

void write_error(Run& run, const std::string& kind, const std::string& message, const std::string& key) {
  json e{{"kind", kind}, {"message", message}};
  if (!key.empty()) e["key"] = key;
  try {
    run.write_json("error.json", e);
  } catch (const std::exception&) {
  }
}

}  // namespace

int execute(const Invocation& inv) {
  Run run(inv.out_dir ? *inv.out_dir : fs::path(kDefaultOutDir));
  json echo = nullptr;
  int code = kExitOk;
  json extra = json::object();
  try {
    if (inv.jobs && *inv.jobs < 1) throw ConfigError("--jobs", "must be >= 1");
    const json doc = load_document(inv);
    echo = doc;
    const RunConfig c = parse_config(doc);
    if (c.command && *c.command != inv.command) {
      throw ConfigError("command", "config is for '" + *c.command + "' but '" + inv.command + "' was requested");
    }
    if (!inv.out_dir && c.output_dir) run = Run(*c.output_dir);
    const int jobs = resolve_jobs(inv, c);
    if (inv.command == "steady") code = cmd_steady(c, run);
    else if (inv.command == "evolve") code = cmd_evolve(c, run, extra);
    else if (inv.command == "sweep") code = cmd_sweep(c, run, jobs, extra);
    else if (inv.command == "ratemap") code = cmd_ratemap(c, run, jobs, extra);
    else if (inv.command == "optimal") code = cmd_optimal(c, run, jobs);
    else if (inv.command == "validate") code = cmd_validate(run, jobs);
    else throw ConfigError("command", "unknown command '" + inv.command + "'");
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    write_error(run, e.kind(), e.what(), e.key());
    code = kExitConfig;
  } catch (const Error& e) {
    std::cerr << e.kind() << ": " << e.what() << "\n";
    write_error(run, e.kind(), e.what(), "");
    code = kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    write_error(run, "internal", e.what(), "");
    code = kExitFailure;
  }
  json cfg{{"document", echo}, {"results", extra}};
  try {
    run.manifest(inv.command, cfg, code);
  } catch (const std::exception& e) {
    std::cerr << "error: manifest not written: " << e.what() << "\n";
    if (code == kExitOk) code = kExitFailure;
  }
  return code;
}

}  // namespace phonocool::cli
