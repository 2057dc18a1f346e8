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

#include <string>
#include <utility>
#include <vector>

#include "phonocool/dynamics.hpp"
#include "phonocool/models.hpp"

namespace phonocool {

struct PhysicalConstants {
  double planck_h = 6.62607015e-34;   // J s
  double boltzmann_k = 1.380649e-23;  // J / K
};

inline constexpr PhysicalConstants kCodata{};

/// Bose-Einstein occupancy with nu_ghz read as an ordinary frequency.
double thermal_occupancy(double nu_ghz, double temperature_k, const PhysicalConstants& c = kCodata);

/// n_s - n_th + (k/gamma) <sigma22> - (gamma_p/gamma) <sigma00>, where k is the
/// total decay rate out of |2>: gamma2 for the three-level and polariton
/// models, 2*gamma2 for the four-level model (|2> decays to |0> and |3>).
double steady_identity_residual(const SteadyStateResult& r, const ThreeLevelParams& p);
double steady_identity_residual(const SteadyStateResult& r, const PolaritonParams& p);
double steady_identity_residual(const SteadyStateResult& r, const MnFourLevelParams& p);
double steady_identity_residual(const SteadyStateResult& r, const ModelParams& p);

struct OptimalPoint {
  double omega_opt;
  double gamma2_opt;
};

/// omega_opt = g/sqrt(2); gamma2_opt is evaluated at the supplied omega.
OptimalPoint optimal_regime1(double g, double omega);

/// {plus branch, minus branch}.
std::pair<double, double> detuning_strong_pump(double delta1, double omega);
std::pair<double, double> detuning_strong_coupling(double delta2, double g);

/// Closed-form steady-state phonon number for gamma1 << gamma2 at zero detuning.
/// Appends a warning when gamma1 >= 1e-2 gamma2.
double phonon_closed_form_regime1(const ThreeLevelParams& p, std::vector<std::string>* warnings = nullptr);

/// Closed-form steady-state phonon number for gamma1 == gamma2 at zero detuning.
double phonon_closed_form_regime2(const ThreeLevelParams& p);
double phonon_closed_form_regime2(const PolaritonParams& p);

}  // namespace phonocool
