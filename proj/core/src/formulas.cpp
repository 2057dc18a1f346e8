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

#include "phonocool/formulas.hpp"

#include <cmath>
#include <sstream>

#include "phonocool/errors.hpp"

namespace phonocool {

double thermal_occupancy(double nu_ghz, double temperature_k, const PhysicalConstants& c) {
  if (!(nu_ghz > 0.0) || !(temperature_k > 0.0)) {
    throw InvalidParameterError("thermal_occupancy needs nu > 0 and T > 0");
  }
  const double x = c.planck_h * nu_ghz * 1e9 / (c.boltzmann_k * temperature_k);
  return 1.0 / std::expm1(x);
}

namespace {

double identity_residual(const SteadyStateResult& r, double n_th, double gamma, double k2, double gamma_p) {
  if (!(gamma > 0.0)) throw InvalidParameterError("identity residual needs gamma > 0");
  return r.phonon_number - n_th + (k2 / gamma) * r.sigma22 - (gamma_p / gamma) * r.sigma00;
}

}  // namespace

double steady_identity_residual(const SteadyStateResult& r, const ThreeLevelParams& p) {
  return identity_residual(r, p.n_th, p.gamma, p.gamma2, p.gamma_p);
}

double steady_identity_residual(const SteadyStateResult& r, const PolaritonParams& p) {
  return identity_residual(r, p.n_th, p.gamma, p.gamma2, p.gamma_p);
}

double steady_identity_residual(const SteadyStateResult& r, const MnFourLevelParams& p) {
  return identity_residual(r, p.n_th, p.gamma, 2.0 * p.gamma2, 0.0);
}

double steady_identity_residual(const SteadyStateResult& r, const ModelParams& p) {
  return std::visit([&r](const auto& q) { return steady_identity_residual(r, q); }, p);
}

OptimalPoint optimal_regime1(double g, double omega) {
  if (!(g > 0.0) || !(omega > 0.0)) throw InvalidParameterError("optimal_regime1 needs g > 0 and omega > 0");
  const double g2 = g * g;
  return {g / std::sqrt(2.0), std::sqrt(4.0 * omega * omega + g2 * g2 / (omega * omega))};
}

std::pair<double, double> detuning_strong_pump(double delta1, double omega) {
  if (!(omega > 0.0)) throw InvalidParameterError("detuning_strong_pump needs omega > 0");
  const double r = std::sqrt(0.25 * delta1 * delta1 + omega * omega);
  return {-0.5 * delta1 + r, -0.5 * delta1 - r};
}

std::pair<double, double> detuning_strong_coupling(double delta2, double g) {
  if (!(g > 0.0)) throw InvalidParameterError("detuning_strong_coupling needs g > 0");
  const double r = std::sqrt(0.25 * delta2 * delta2 + g * g);
  return {-0.5 * delta2 + r, -0.5 * delta2 - r};
}

namespace {

void require_resonant(const ThreeLevelParams& p, const char* who) {
  if (p.delta1 != 0.0 || p.delta2 != 0.0) {
    throw InvalidParameterError(std::string(who) + " is only defined at delta1 = delta2 = 0");
  }
}

double checked_ratio(double num, double den, const char* who) {
  if (den == 0.0 || !std::isfinite(den)) {
    throw InvalidParameterError(std::string(who) + ": denominator vanishes for these parameters");
  }
  return num / den;
}

}  // namespace

double phonon_closed_form_regime1(const ThreeLevelParams& p, std::vector<std::string>* warnings) {
  validate(p);
  require_resonant(p, "phonon_closed_form_regime1");
  if (warnings && !(p.gamma1 < 1e-2 * p.gamma2)) {
    std::ostringstream os;
    os << "regime guard: gamma1 = " << p.gamma1 << " is not << gamma2 = " << p.gamma2;
    warnings->push_back(os.str());
  }
  const double gm = p.gamma, g2 = p.gamma2, n = p.n_th;
  const double gg = p.g * p.g, g4 = gg * gg;
  const double o2 = p.omega * p.omega, o4 = o2 * o2;
  const double g22 = g2 * g2;

  const double num =
      gm * n *
      (2.0 * g2 * (g22 * o2 + g4 + 4.0 * o4) +
       gm * (g22 * ((gg + 4.0 * o2) * n + 2.0 * (gg + 2.0 * o2)) + 4.0 * gg * (gg + 2.0 * o2) * (n + 1.0)));
  const double den =
      2.0 * g2 *
      (2.0 * g2 * gg * o2 +
       gm * ((3.0 * g4 + 4.0 * gg * o2 + 8.0 * o4) * n + 2.0 * (g4 + gg * o2 + 2.0 * o4) + g22 * o2 * (2.0 * n + 1.0)));
  return checked_ratio(num, den, "phonon_closed_form_regime1");
}

double phonon_closed_form_regime2(const ThreeLevelParams& p) {
  validate(p);
  require_resonant(p, "phonon_closed_form_regime2");
  if (std::abs(p.gamma1 - p.gamma2) > 1e-12 * std::max(p.gamma1, p.gamma2)) {
    throw InvalidParameterError("phonon_closed_form_regime2 requires gamma1 == gamma2");
  }
  const double gm = p.gamma, g2 = p.gamma2, n = p.n_th;
  const double gg = p.g * p.g, g4 = gg * gg;
  const double o2 = p.omega * p.omega, o4 = o2 * o2, o6 = o4 * o2;
  const double s2 = g2 * g2, s4 = s2 * s2, s6 = s4 * s2;

  const double x =
      gm * (2.0 * g2 * (s6 + 3.0 * g4 * o2 + s4 * (2.0 * gg + 9.0 * o2) + s2 * (g4 + 2.0 * gg * o2 + 24.0 * o4) + 16.0 * o6) +
            gm * (2.0 * s4 * ((11.0 * gg + 42.0 * o2) * n + 5.0 * gg + 27.0 * o2) +
                  4.0 * gg * o2 * (gg + 4.0 * o2) * (n + 1.0) +
                  s2 * (g4 + 30.0 * gg * o2 + (7.0 * g4 + 16.0 * gg * o2 + 96.0 * o4) * n + 72.0 * o4) +
                  3.0 * s6 * (5.0 * n + 3.0)));
  const double y =
      2.0 * g2 *
      (2.0 * g2 * gg * o2 * (s2 + 4.0 * o2) +
       gm * ((s2 + 4.0 * o2) * (s4 + g4 + s2 * (2.0 * gg + 5.0 * o2) + gg * o2 + 4.0 * o4) +
             n * (7.0 * g4 * o2 + 12.0 * gg * o4 + s2 * (2.0 * g4 + 2.0 * s2 * (s2 + 2.0 * gg + 9.0 * o2) + 19.0 * gg * o2 + 48.0 * o4) +
                  32.0 * o6)));
  return checked_ratio(x, y, "phonon_closed_form_regime2");
}

double phonon_closed_form_regime2(const PolaritonParams& p) {
  return phonon_closed_form_regime2(polariton_as_three_level(p));
}

}  // namespace phonocool
