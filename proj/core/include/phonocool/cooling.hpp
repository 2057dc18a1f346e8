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

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "phonocool/dynamics.hpp"
#include "phonocool/models.hpp"

namespace phonocool {

enum class AxisScale { kLinear, kLog };

struct Axis {
  std::string name;
  AxisScale scale = AxisScale::kLinear;
  double min = 0.0;
  double max = 1.0;
  int count = 2;

  std::vector<double> values() const;
  /// Fractional grid index of v in the axis' own scale (0 at min, count-1 at max).
  double position(double v) const;
  /// Nearest grid index to v, clamped to the axis.
  int nearest_index(double v) const;
};

struct SweepSolver {
  /// Raise the Fock cutoff until the phonon number settles; otherwise solve at
  /// the base cutoff only.
  bool adaptive_cutoff = true;
  double converge_tolerance = 1e-6;
  ConvergeOptions converge;
};

struct SweepSpec {
  ModelFamily family = ModelFamily::kThreeLevel;
  ModelParams base_params = ThreeLevelParams{};
  Axis axis1;
  std::optional<Axis> axis2;
  std::map<std::string, double> fixed_overrides;
  SweepSolver solver;
};

void validate(const SweepSpec& s);

/// Row-major rows x cols grid.
struct Grid {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Grid() = default;
  Grid(int r, int c, double fill);
  double& operator()(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }
};

enum class CellStatus { kOk, kFailed };

struct CellDiagnostics {
  CellStatus status = CellStatus::kOk;
  std::string error_kind;
  std::string message;
  int cutoff_used = 0;
  double residual_norm = 0.0;
  double identity_residual = 0.0;
  std::vector<std::string> warnings;
};

struct Optimum {
  int i = 0;
  int j = 0;
  double axis1_value = 0.0;
  double axis2_value = 0.0;
  double value = 0.0;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<double> axis1_values;
  /// Single placeholder entry (NaN) for one-dimensional sweeps.
  std::vector<double> axis2_values;
  Grid figure_of_merit;
  Grid phonon_number;
  std::vector<CellDiagnostics> diagnostics;
  std::optional<Optimum> optimum;

  int rows() const { return figure_of_merit.rows; }
  int cols() const { return figure_of_merit.cols; }
  const CellDiagnostics& cell(int i, int j) const { return diagnostics[static_cast<size_t>(i) * cols() + j]; }
};

/// Parameters of cell (i, j): base, then overrides, then the axis values.
ModelParams cell_params(const SweepSpec& s, int i, int j);

/// F = <b^dag b>_s / n_th from a steady-state solve of m.
double figure_of_merit(const ModelInstance& m, double n_th, const SteadyStateOptions& options = {});

/// Runs every cell on `jobs` worker threads; output does not depend on jobs.
SweepResult sweep(const SweepSpec& s, int jobs = 1);

/// Grid argmin (or argmax) over finite cells; ties go to the lowest i, then j.
std::optional<Optimum> locate_extremum(const Grid& g, const std::vector<double>& axis1,
                                       const std::vector<double>& axis2, bool maximize = false);
Optimum locate_optimum(const SweepResult& r);

struct FitOptions {
  double beta_min = 0.05;
  std::vector<double> beta_starts{0.6, 0.8, 1.0};
  int gamma_starts = 9;
  int max_iterations = 300;
  /// Residuals divided by |y| so the fit targets percentage error.
  bool relative_residuals = true;
};

struct FitResult {
  double gamma_eff = 0.0;
  double beta = 1.0;
  double steady_value = 0.0;
  double initial_value = 0.0;
  /// Mean absolute percentage error, in percent.
  double mape = 0.0;
  double cost = 0.0;
  int iterations = 0;
  bool converged = false;
  bool beta_at_bound = false;
  std::vector<std::string> warnings;
};

/// (n_initial - n_s) exp(-(gamma_eff t)^beta) + n_s
double stretched_exponential(double t, double gamma_eff, double beta, double n_initial, double n_s);

/// Bounded least squares over (gamma_eff, beta) with n_initial and n_s held fixed.
FitResult fit_stretched_exponential(const std::vector<double>& t, const std::vector<double>& y, double n_initial,
                                    double n_s, const FitOptions& options = {});
FitResult fit_stretched_exponential(const EvolutionTrace& trace, double n_initial, double n_s,
                                    const FitOptions& options = {});

inline EvolveOptions spectral_evolve_options() {
  EvolveOptions o;
  o.integrator = Integrator::kSpectral;
  o.rtol = 1e-7;
  o.atol = 1e-10;
  return o;
}

struct RateMapOptions {
  /// Upper bound on the evolution horizon (ns).
  double max_time = 1e10;
  /// First pilot time (ns) and pilot density used to find the horizon.
  double pilot_t_min = 1e-3;
  int pilot_points_per_decade = 8;
  /// Horizon: first pilot time at which |n - n_s| <= settle_fraction * n_s
  /// holds on two consecutive samples.
  double settle_fraction = 0.01;
  int samples = 200;
  double window_decades = 3.0;
  /// Fock cutoff for the evolution; 0 picks the smallest N whose thermal tail
  /// weight (n/(n+1))^N is below tail_weight, clamped to [base cutoff, max_cutoff].
  int evolve_cutoff = 0;
  double tail_weight = 1e-7;
  int max_cutoff = 120;
  EvolveOptions evolve = spectral_evolve_options();
  FitOptions fit;
};

struct RateCell {
  FitResult fit;
  double horizon = 0.0;
  bool horizon_capped = false;
  int cutoff_used = 0;
  std::string status = "ok";
  std::string message;
};

struct RateMapResult {
  SweepResult sweep;
  double omega_m = 0.0;
  Grid gamma_eff;
  Grid beta;
  Grid mape;
  /// gamma_eff / omega_m
  Grid rate;
  /// rate / F
  Grid ratio;
  std::vector<RateCell> cells;
  std::optional<Optimum> best_ratio;

  const RateCell& cell(int i, int j) const { return cells[static_cast<size_t>(i) * sweep.cols() + j]; }
};

/// Per cell: evolve ground (x) thermal state, fit, and divide by F.
RateMapResult rate_map(const SweepSpec& s, double omega_m, const RateMapOptions& options = {}, int jobs = 1);

/// Helper shared with rate_map: the per-cell evolution cutoff.
int evolution_cutoff(double n_th, int base_cutoff, const RateMapOptions& options);

/// Runs fn(k) for k in [0, n) on `jobs` threads, claiming indices in order.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace phonocool
