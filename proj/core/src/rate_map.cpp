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
#include <limits>

#include "phonocool/cooling.hpp"
#include "phonocool/errors.hpp"
#include "phonocool/formulas.hpp"

namespace phonocool {
namespace {

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int k = 0; k < n; ++k) v[k] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * k / (n - 1));
  v.front() = lo;
  v.back() = hi;
  return v;
}

}  // namespace

int evolution_cutoff(double n_th, int base_cutoff, const RateMapOptions& o) {
  if (o.evolve_cutoff > 0) return o.evolve_cutoff;
  int N = std::max(base_cutoff, 4);
  if (n_th > 0.0) {
    const double x = n_th / (n_th + 1.0);
    N = std::max(N, static_cast<int>(std::ceil(std::log(o.tail_weight) / std::log(x))));
  }
  return std::min(N, std::max(o.max_cutoff, base_cutoff));
}

RateMapResult rate_map(const SweepSpec& s, double omega_m, const RateMapOptions& o, int jobs) {
  validate(s);
  if (!(omega_m > 0.0)) throw InvalidParameterError("rate_map needs omega_m > 0");
  if (o.samples < 3 || !(o.window_decades > 0.0) || !(o.max_time > o.pilot_t_min)) {
    throw InvalidParameterError("rate_map: bad sampling options");
  }

  RateMapResult out;
  out.omega_m = omega_m;
  SweepResult& sw = out.sweep;
  sw.spec = s;
  sw.axis1_values = s.axis1.values();
  sw.axis2_values = s.axis2 ? s.axis2->values() : std::vector<double>{std::numeric_limits<double>::quiet_NaN()};
  const int rows = static_cast<int>(sw.axis1_values.size());
  const int cols = static_cast<int>(sw.axis2_values.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  sw.figure_of_merit = Grid(rows, cols, nan);
  sw.phonon_number = Grid(rows, cols, nan);
  sw.diagnostics.assign(static_cast<size_t>(rows) * cols, CellDiagnostics{});
  out.gamma_eff = Grid(rows, cols, nan);
  out.beta = Grid(rows, cols, nan);
  out.mape = Grid(rows, cols, nan);
  out.rate = Grid(rows, cols, nan);
  out.ratio = Grid(rows, cols, nan);
  out.cells.assign(static_cast<size_t>(rows) * cols, RateCell{});

  const int decades = static_cast<int>(std::ceil(std::log10(o.max_time / o.pilot_t_min)));
  const std::vector<double> pilot = log_grid(o.pilot_t_min, o.max_time, decades * o.pilot_points_per_decade + 1);

  parallel_for(static_cast<size_t>(rows) * cols, jobs, [&](std::size_t k) {
    const int i = static_cast<int>(k) / cols;
    const int j = static_cast<int>(k) % cols;
    CellDiagnostics& d = sw.diagnostics[k];
    RateCell& c = out.cells[k];
    try {
      ModelParams p = cell_params(s, i, j);
      const double n_th = thermal_occupancy_of(p);
      const int N = evolution_cutoff(n_th, fock_cutoff(p), o);
      set_fock_cutoff(p, N);
      c.cutoff_used = N;
      const ModelInstance m = build_model(p);
      const SteadyStateResult ss = steady_state(m, s.solver.converge.solver);
      sw.phonon_number(i, j) = ss.phonon_number;
      sw.figure_of_merit(i, j) = ss.figure_of_merit;
      d.cutoff_used = N;
      d.residual_norm = ss.residual_norm;
      d.identity_residual = steady_identity_residual(ss, p);
      d.warnings = ss.warnings;

      const double n_s = ss.phonon_number;
      const DensityMatrix rho0 = ground_thermal_state(m);
      const double n0 = n_th;

      EvolveOptions eo = o.evolve;
      int hits = 0;
      eo.stop = [&](double, double n) {
        hits = std::abs(n - n_s) <= o.settle_fraction * std::abs(n_s) ? hits + 1 : 0;
        return hits >= 2;
      };
      const EvolutionTrace pilot_trace = evolve(m, rho0, pilot, eo);
      c.horizon = pilot_trace.times.back();
      c.horizon_capped = !pilot_trace.stopped_early;

      const std::vector<double> times = log_grid(c.horizon * std::pow(10.0, -o.window_decades), c.horizon, o.samples);
      eo.stop = nullptr;
      const EvolutionTrace trace = evolve(m, rho0, times, eo);
      c.fit = fit_stretched_exponential(trace, n0, n_s, o.fit);
      if (!std::isfinite(c.fit.gamma_eff)) {
        c.status = "no_decay";
      } else {
        out.gamma_eff(i, j) = c.fit.gamma_eff;
        out.beta(i, j) = c.fit.beta;
        out.mape(i, j) = c.fit.mape;
        out.rate(i, j) = c.fit.gamma_eff / omega_m;
        out.ratio(i, j) = out.rate(i, j) / sw.figure_of_merit(i, j);
        if (!c.fit.converged) c.status = "fit_unconverged";
      }
      if (c.horizon_capped) c.fit.warnings.push_back("evolution horizon capped at max_time");
    } catch (const Error& e) {
      d.status = CellStatus::kFailed;
      d.error_kind = e.kind();
      d.message = e.what();
      c.status = "failed";
      c.message = e.what();
    }
  });
  sw.optimum = locate_extremum(sw.figure_of_merit, sw.axis1_values, sw.axis2_values, false);
  out.best_ratio = locate_extremum(out.ratio, sw.axis1_values, sw.axis2_values, true);
  return out;
}

}  // namespace phonocool
