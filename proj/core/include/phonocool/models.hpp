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

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "phonocool/operators.hpp"

namespace phonocool {

// All frequencies and rates are ordinary frequencies in GHz and enter the
// Hamiltonian directly (hbar = 1).

struct ThreeLevelParams {
  double delta1 = 0.0;
  double delta2 = 0.0;
  double omega = 0.0;
  double g = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double gamma = 0.0;
  double n_th = 0.0;
  double gamma_d = 0.0;
  double gamma_p = 0.0;
  int fock_cutoff = 20;
};

enum class PolaritonMapping {
  /// theta = pi/4 and zero detunings regardless of delta_tc.
  kOperatingPoint,
  /// theta, omega_plus and omega_minus from the Jaynes-Cummings diagonalization.
  kRaw,
};

struct PolaritonParams {
  double big_g = 0.0;
  double delta_tc = 0.0;
  double omega_a = 0.0;
  double omega_c = 0.0;
  double g = 0.0;
  double omega_m = 0.0;
  double omega = 0.0;
  double gamma2 = 0.0;
  double gamma = 0.0;
  double n_th = 0.0;
  double gamma_d = 0.0;
  double gamma_p = 0.0;
  int fock_cutoff = 20;
  PolaritonMapping mapping = PolaritonMapping::kOperatingPoint;
};

struct MnFourLevelParams {
  double omega3 = 0.0;
  double omega_m = 0.0;
  double g = 0.0;
  double omega = 0.0;
  double gamma2 = 0.0;
  double gamma3 = 0.0;
  double gamma_d = 0.0;
  double gamma = 0.0;
  double n_th = 0.0;
  int fock_cutoff = 20;
};

using ModelParams = std::variant<ThreeLevelParams, PolaritonParams, MnFourLevelParams>;

enum class ModelFamily { kThreeLevel, kPolariton, kMnFourLevel };

struct CollapseTerm {
  double rate;
  Operator op;
  std::string label;
};

struct ModelInstance {
  ModelFamily family;
  HilbertDims dims;
  Operator hamiltonian;
  std::vector<CollapseTerm> collapse_terms;
  /// Always holds "phonon_number" and "sigmaKK" for every system level K.
  std::map<std::string, Operator> observables;
  /// Conserved excitation number per basis state, b^dag b + sigma22. The
  /// solvers verify it before using it to shrink the Liouvillian.
  std::vector<int> charge;
  double n_th = 0.0;
  int system_dim = 0;
  int fock_cutoff = 0;
};

struct JcSpectrum {
  double omega_minus;
  double omega_plus;
  double theta;
};

void validate(const ThreeLevelParams& p);
void validate(const PolaritonParams& p);
void validate(const MnFourLevelParams& p);

ModelInstance build_three_level(const ThreeLevelParams& p);
JcSpectrum jc_diagonalize(double big_g, double delta_tc, double omega_a, double omega_c);
ModelInstance build_polariton(const PolaritonParams& p);
ModelInstance build_mn_four_level(const MnFourLevelParams& p);
ModelInstance build_model(const ModelParams& p);

/// Three-level parameters that build_polariton maps onto.
ThreeLevelParams polariton_as_three_level(const PolaritonParams& p);

ModelFamily family_of(const ModelParams& p);
std::string_view family_name(ModelFamily f);
ModelFamily family_from_name(std::string_view name);
ModelParams default_params(ModelFamily f);

const std::vector<std::string>& parameter_names(ModelFamily f);
bool has_parameter(ModelFamily f, std::string_view name);
double get_parameter(const ModelParams& p, std::string_view name);
/// fock_cutoff is accepted and rounded to the nearest integer.
void set_parameter(ModelParams& p, std::string_view name, double value);

int fock_cutoff(const ModelParams& p);
void set_fock_cutoff(ModelParams& p, int N);
double thermal_occupancy_of(const ModelParams& p);

}  // namespace phonocool
