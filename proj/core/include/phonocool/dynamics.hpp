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

#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "phonocool/models.hpp"
#include "phonocool/operators.hpp"

namespace phonocool {

using SparseMatrix = Eigen::SparseMatrix<complex>;

/// Generator of d vec(rho)/dt = L vec(rho) with column stacking,
/// vec(rho)[a + b*D] = rho(a, b).
struct Superoperator {
  HilbertDims dims;
  SparseMatrix matrix;
};

Superoperator liouvillian(const ModelInstance& m);

CVector vectorize(const CMatrix& rho);
CMatrix unvectorize(const CVector& v, int dim);

struct SteadyStateOptions {
  /// Accept when ||L vec(rho)|| <= tolerance * max(1, max|L_ij|).
  double tolerance = 1e-9;
  double positivity_tolerance = 1e-8;
  /// Below this many unknowns the bordered system is solved densely.
  int dense_threshold = 64;
  /// Bordered systems with a larger condition estimate are treated as singular
  /// and diagnosed (degenerate null space or ill-conditioning).
  double max_condition = 1e14;
  /// Solve in the zero-coherence excitation sector when the model's charge is valid.
  bool use_symmetry = true;
};

struct SteadyStateResult {
  DensityMatrix rho;
  double phonon_number = 0.0;
  double sigma22 = 0.0;
  double sigma00 = 0.0;
  /// phonon_number / n_th; NaN when n_th == 0.
  double figure_of_merit = 0.0;
  double residual_norm = 0.0;
  int fock_cutoff_used = 0;
  double min_eigenvalue = 0.0;
  bool used_symmetry = false;
  /// Expectation of every model observable.
  std::map<std::string, double> observables;
  std::vector<std::string> warnings;
};

SteadyStateResult steady_state(const ModelInstance& m, const SteadyStateOptions& options = {});
SteadyStateResult steady_state(const ModelInstance& m, double tol);

enum class Integrator {
  kDormandPrince45,
  /// Fifth-order L-stable implicit step; the default for stiff cooling runs.
  kRadauIIA5,
  /// Exact propagation through the eigendecomposition of the generator. Falls
  /// back to kRadauIIA5 when the eigen-expansion of rho0 cannot be resolved to
  /// atol or the generator is larger than spectral_max_dim.
  kSpectral,
};

struct EvolveOptions {
  Integrator integrator = Integrator::kRadauIIA5;
  double rtol = 1e-8;
  double atol = 1e-12;
  long max_steps = 200000;
  /// Zero picks a step from the generator norm.
  double initial_step = 0.0;
  bool use_symmetry = true;
  /// Above this the dense decomposition costs more than implicit stepping.
  int spectral_max_dim = 500;
  /// Evaluated at every output time; returning true ends the run there.
  std::function<bool(double t, double phonon_number)> stop;
};

struct EvolutionTrace {
  std::vector<double> times;
  std::vector<double> phonon_number;
  std::map<std::string, std::vector<double>> populations;
  DensityMatrix final_rho;
  long steps = 0;
  bool stopped_early = false;
  Integrator integrator_used = Integrator::kRadauIIA5;
};

/// times must be non-decreasing and start at or after 0 (rho0 is the state at t = 0).
EvolutionTrace evolve(const ModelInstance& m, const DensityMatrix& rho0, const std::vector<double>& times,
                      const EvolveOptions& options = {});

/// System ground state |0><0| (x) thermal phonon state at the model's n_th.
DensityMatrix ground_thermal_state(const ModelInstance& m);

struct ConvergeOptions {
  int max_cutoff = 60;
  int step = 5;
  SteadyStateOptions solver;
};

/// Solves at N = start_N, start_N + step, ... until successive phonon numbers
/// differ by less than tol * max(n, 1e-12).
SteadyStateResult converge_cutoff(const ModelParams& params, int start_N, double tol,
                                  const ConvergeOptions& options = {});

/// Text matrix format:
///   line 1: "phonocool-matrix <rows> <cols>"
///   then one line per row with 2*cols numbers: re im re im ...
void write_matrix(std::ostream& os, const CMatrix& m);
CMatrix read_matrix(std::istream& is);
/// Dense dump of a superoperator; refuses matrices above max_rows rows.
void write_superoperator(std::ostream& os, const Superoperator& L, int max_rows = 4096);

}  // namespace phonocool
