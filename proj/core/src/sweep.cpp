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

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "phonocool/cooling.hpp"
#include "phonocool/errors.hpp"
#include "phonocool/formulas.hpp"

namespace phonocool {

std::vector<double> Axis::values() const {
  std::vector<double> v(count);
  for (int k = 0; k < count; ++k) {
    const double f = count == 1 ? 0.0 : static_cast<double>(k) / (count - 1);
    if (scale == AxisScale::kLog) {
      v[k] = std::exp(std::log(min) + f * (std::log(max) - std::log(min)));
    } else {
      v[k] = min + f * (max - min);
    }
  }
  // Pin the end points exactly.
  v.front() = min;
  v.back() = max;
  return v;
}

double Axis::position(double v) const {
  if (scale == AxisScale::kLog) {
    return (count - 1) * (std::log(v) - std::log(min)) / (std::log(max) - std::log(min));
  }
  return (count - 1) * (v - min) / (max - min);
}

int Axis::nearest_index(double v) const {
  const double p = std::round(position(v));
  return static_cast<int>(std::clamp(p, 0.0, static_cast<double>(count - 1)));
}

namespace {

void validate_axis(const Axis& a, ModelFamily f) {
  if (!has_parameter(f, a.name)) {
    throw InvalidParameterError("axis parameter '" + a.name + "' does not exist for family " +
                                std::string(family_name(f)));
  }
  if (a.count < 2) throw InvalidParameterError("axis '" + a.name + "' needs count >= 2");
  if (!(a.min < a.max)) throw InvalidParameterError("axis '" + a.name + "' needs min < max");
  if (a.scale == AxisScale::kLog && !(a.min > 0.0)) {
    throw InvalidParameterError("log axis '" + a.name + "' needs min > 0");
  }
}

}  // namespace

void validate(const SweepSpec& s) {
  if (family_of(s.base_params) != s.family) throw InvalidParameterError("sweep base_params do not match model_family");
  validate_axis(s.axis1, s.family);
  if (s.axis2) {
    validate_axis(*s.axis2, s.family);
    if (s.axis2->name == s.axis1.name) throw InvalidParameterError("sweep axes must differ");
  }
  for (const auto& [name, v] : s.fixed_overrides) {
    if (!has_parameter(s.family, name)) {
      throw InvalidParameterError("override '" + name + "' does not exist for family " + std::string(family_name(s.family)));
    }
  }
}

Grid::Grid(int r, int c, double fill) : rows(r), cols(c), data(static_cast<size_t>(r) * c, fill) {}

ModelParams cell_params(const SweepSpec& s, int i, int j) {
  ModelParams p = s.base_params;
  for (const auto& [name, v] : s.fixed_overrides) set_parameter(p, name, v);
  set_parameter(p, s.axis1.name, s.axis1.values().at(i));
  if (s.axis2) set_parameter(p, s.axis2->name, s.axis2->values().at(j));
  return p;
}

double figure_of_merit(const ModelInstance& m, double n_th, const SteadyStateOptions& options) {
  if (!(n_th > 0.0)) throw InvalidParameterError("figure_of_merit needs n_th > 0");
  return steady_state(m, options).phonon_number / n_th;
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
  if (workers == 1) {
    for (std::size_t k = 0; k < n; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < n; k = next++) {
        try {
          fn(k);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

SweepResult sweep(const SweepSpec& s, int jobs) {
  validate(s);
  SweepResult r;
  r.spec = s;
  r.axis1_values = s.axis1.values();
  r.axis2_values = s.axis2 ? s.axis2->values() : std::vector<double>{std::numeric_limits<double>::quiet_NaN()};
  const int rows = static_cast<int>(r.axis1_values.size());
  const int cols = static_cast<int>(r.axis2_values.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  r.figure_of_merit = Grid(rows, cols, nan);
  r.phonon_number = Grid(rows, cols, nan);
  r.diagnostics.assign(static_cast<size_t>(rows) * cols, CellDiagnostics{});

  parallel_for(static_cast<size_t>(rows) * cols, jobs, [&](std::size_t k) {
    const int i = static_cast<int>(k) / cols;
    const int j = static_cast<int>(k) % cols;
    CellDiagnostics& d = r.diagnostics[k];
    try {
      const ModelParams p = cell_params(s, i, j);
      const SteadyStateResult ss =
          s.solver.adaptive_cutoff
              ? converge_cutoff(p, std::max(4, fock_cutoff(p)), s.solver.converge_tolerance, s.solver.converge)
              : steady_state(build_model(p), s.solver.converge.solver);
      const double n_th = thermal_occupancy_of(p);
      r.phonon_number(i, j) = ss.phonon_number;
      r.figure_of_merit(i, j) = ss.figure_of_merit;
      d.cutoff_used = ss.fock_cutoff_used;
      d.residual_norm = ss.residual_norm;
      d.identity_residual = steady_identity_residual(ss, p);
      d.warnings = ss.warnings;
      if (!(n_th > 0.0)) d.warnings.push_back("n_th = 0: figure of merit undefined");
    } catch (const Error& e) {
      d.status = CellStatus::kFailed;
      d.error_kind = e.kind();
      d.message = e.what();
    }
  });
  r.optimum = locate_extremum(r.figure_of_merit, r.axis1_values, r.axis2_values, false);
  return r;
}

std::optional<Optimum> locate_extremum(const Grid& g, const std::vector<double>& axis1,
                                       const std::vector<double>& axis2, bool maximize) {
  std::optional<Optimum> best;
  for (int i = 0; i < g.rows; ++i) {
    for (int j = 0; j < g.cols; ++j) {
      const double v = g(i, j);
      if (!std::isfinite(v)) continue;
      if (!best || (maximize ? v > best->value : v < best->value)) {
        best = Optimum{i, j, axis1.at(i), axis2.at(j), v};
      }
    }
  }
  return best;
}

Optimum locate_optimum(const SweepResult& r) {
  auto o = locate_extremum(r.figure_of_merit, r.axis1_values, r.axis2_values, false);
  if (!o) throw InvalidStateError("locate_optimum: every cell of the sweep failed");
  return *o;
}

}  // namespace phonocool
