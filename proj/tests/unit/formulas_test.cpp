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

#include <gtest/gtest.h>

#include "support.hpp"

namespace phonocool {
namespace {

ThreeLevelParams unit_params() {
  ThreeLevelParams p;
  p.g = 1.0;
  p.omega = 1.0;
  p.gamma1 = 1.0;
  p.gamma2 = 1.0;
  p.gamma = 1.0;
  p.n_th = 1.0;
  p.fock_cutoff = 4;
  return p;
}

ThreeLevelParams strong_coupling_optimum() {
  ThreeLevelParams p;
  p.g = 20.0;
  p.omega = 20.0 / std::sqrt(2.0);
  p.gamma2 = 40.0;
  p.gamma1 = 1e-6;
  p.gamma = 1e-3;
  p.n_th = thermal_occupancy(241.8, 17.0);
  p.fock_cutoff = 10;
  return p;
}

TEST(ThermalOccupancy, ReferenceTriples) {
  EXPECT_NEAR(thermal_occupancy(10.0, 2.63), 5.0, 0.05);
  EXPECT_NEAR(thermal_occupancy(35.0, 5.0), 2.52, 0.0252);
}

TEST(ThermalOccupancy, EqualsOneAtLogTwo) {
  // h nu / k T = ln 2 gives exactly one quantum.
  const double T = kCodata.planck_h * 1e9 / (kCodata.boltzmann_k * std::log(2.0));
  EXPECT_NEAR(thermal_occupancy(1.0, T), 1.0, 1e-12);
}

TEST(ThermalOccupancy, Monotone) {
  double last = 0.0;
  for (double T = 0.5; T < 50.0; T *= 1.3) {
    const double n = thermal_occupancy(20.0, T);
    EXPECT_GT(n, last);
    last = n;
  }
  last = std::numeric_limits<double>::infinity();
  for (double nu = 1.0; nu < 500.0; nu *= 1.4) {
    const double n = thermal_occupancy(nu, 4.0);
    EXPECT_LT(n, last);
    last = n;
  }
}

TEST(ThermalOccupancy, RejectsNonPositiveInputs) {
  EXPECT_THROW(thermal_occupancy(0.0, 1.0), InvalidParameterError);
  EXPECT_THROW(thermal_occupancy(1.0, -1.0), InvalidParameterError);
  EXPECT_THROW(thermal_occupancy(std::nan(""), 1.0), InvalidParameterError);
}

TEST(IdentityResidual, HoldsOnRandomSteadyStates) {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 10; ++k) {
    ThreeLevelParams p = testing::random_three_level(rng, 8);
    if (k % 2) p.gamma_p = testing::log_uniform(rng, 1e-4, 1.0);
    ConvergeOptions o;
    o.max_cutoff = 160;
    const SteadyStateResult r = converge_cutoff(p, 8, 1e-9, o);
    EXPECT_LT(std::abs(steady_identity_residual(r, p)), 1e-6 * p.n_th) << "draw " << k;
  }
}

TEST(IdentityResidual, UnpumpedReducesToThermal) {
  ThreeLevelParams p = unit_params();
  p.omega = 0.0;
  p.n_th = 0.5;
  p.fock_cutoff = 40;
  const SteadyStateResult r = steady_state(build_three_level(p));
  EXPECT_NEAR(r.sigma22, 0.0, 1e-12);
  EXPECT_LT(std::abs(steady_identity_residual(r, p)), 1e-6 * p.n_th);
}

TEST(IdentityResidual, IncoherentPumpTermMatters) {
  ThreeLevelParams p = strong_coupling_optimum();
  p.gamma_p = 0.2;
  const SteadyStateResult r = converge_cutoff(p, 10, 1e-9);
  EXPECT_LT(std::abs(steady_identity_residual(r, p)), 1e-6 * p.n_th);
  ThreeLevelParams without = p;
  without.gamma_p = 0.0;
  EXPECT_GT(std::abs(steady_identity_residual(r, without)), 1e-3 * p.n_th);
}

TEST(IdentityResidual, DispatchesOverVariant) {
  const ThreeLevelParams p = strong_coupling_optimum();
  const SteadyStateResult r = steady_state(build_three_level(p));
  EXPECT_EQ(steady_identity_residual(r, ModelParams{p}), steady_identity_residual(r, p));
}

TEST(OptimalRegime1, HandValues) {
  const OptimalPoint a = optimal_regime1(20.0, 20.0 / std::sqrt(2.0));
  EXPECT_NEAR(a.omega_opt, 14.142135623730951, 1e-12);
  EXPECT_NEAR(a.gamma2_opt, 40.0, 1e-12);
  EXPECT_NEAR(optimal_regime1(20.0, 10.0).gamma2_opt, std::sqrt(2000.0), 1e-12);
  EXPECT_THROW(optimal_regime1(0.0, 1.0), InvalidParameterError);
}

TEST(OptimalRegime1, PumpAtOptimumMinimizesDecayTarget) {
  // gamma2_opt(omega) is smallest at omega = g / sqrt(2).
  const double g = 3.0, w0 = g / std::sqrt(2.0);
  const double at = optimal_regime1(g, w0).gamma2_opt;
  EXPECT_LT(at, optimal_regime1(g, 0.9 * w0).gamma2_opt);
  EXPECT_LT(at, optimal_regime1(g, 1.1 * w0).gamma2_opt);
}

TEST(DetuningBranches, HandValues) {
  auto [p0, m0] = detuning_strong_pump(0.0, 2.0);
  EXPECT_DOUBLE_EQ(p0, 2.0);
  EXPECT_DOUBLE_EQ(m0, -2.0);
  auto [p1, m1] = detuning_strong_pump(4.0, 2.0);
  EXPECT_NEAR(p1, (std::sqrt(2.0) - 1.0) * 2.0, 1e-12);
  EXPECT_NEAR(m1, (-1.0 - std::sqrt(2.0)) * 2.0, 1e-12);
  auto [p2, m2] = detuning_strong_coupling(0.0, 3.0);
  EXPECT_DOUBLE_EQ(p2, 3.0);
  EXPECT_DOUBLE_EQ(m2, -3.0);
  auto [p3, m3] = detuning_strong_coupling(6.0, 3.0);
  EXPECT_NEAR(p3, (std::sqrt(2.0) - 1.0) * 3.0, 1e-12);
  EXPECT_NEAR(m3, (-1.0 - std::sqrt(2.0)) * 3.0, 1e-12);
  EXPECT_THROW(detuning_strong_pump(1.0, 0.0), InvalidParameterError);
  EXPECT_THROW(detuning_strong_coupling(1.0, -1.0), InvalidParameterError);
}

TEST(DetuningBranches, ProductOfRootsIsMinusCouplingSquared) {
  // Both branches solve x^2 + delta x - c^2 = 0.
  for (double d : {-7.0, -1.0, 0.5, 3.0}) {
    auto [p, m] = detuning_strong_pump(d, 1.7);
    EXPECT_NEAR(p * m, -1.7 * 1.7, 1e-12);
    EXPECT_NEAR(p + m, -d, 1e-12);
  }
}

TEST(ClosedFormRegime1, HandValue) {
  // All-ones evaluation: 47 / 56.
  EXPECT_NEAR(phonon_closed_form_regime1(unit_params()), 47.0 / 56.0, 1e-14);
}

TEST(ClosedFormRegime1, VanishesWithBathCoupling) {
  ThreeLevelParams p = strong_coupling_optimum();
  double last = phonon_closed_form_regime1(p);
  for (int k = 0; k < 4; ++k) {
    p.gamma *= 0.1;
    const double v = phonon_closed_form_regime1(p);
    EXPECT_NEAR(v / last, 0.1, 1e-3);
    last = v;
  }
  EXPECT_LT(last, 1e-6);
}

TEST(ClosedFormRegime1, AgreesWithNumericAtStrongCouplingOptimum) {
  const ThreeLevelParams p = strong_coupling_optimum();
  const double numeric = converge_cutoff(p, 10, 1e-9).phonon_number;
  EXPECT_NEAR(phonon_closed_form_regime1(p) / numeric, 1.0, 0.1);
}

TEST(ClosedFormRegime1, EvenInCoupling) {
  ThreeLevelParams p = strong_coupling_optimum();
  const double a = phonon_closed_form_regime1(p);
  p.g = -p.g;
  EXPECT_EQ(phonon_closed_form_regime1(p), a);
}

TEST(ClosedFormRegime1, RegimeGuardWarns) {
  std::vector<std::string> warnings;
  phonon_closed_form_regime1(strong_coupling_optimum(), &warnings);
  EXPECT_TRUE(warnings.empty());
  phonon_closed_form_regime1(unit_params(), &warnings);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("gamma1"), std::string::npos);
}

TEST(ClosedFormRegime1, RequiresResonance) {
  ThreeLevelParams p = unit_params();
  p.delta1 = 0.1;
  EXPECT_THROW(phonon_closed_form_regime1(p), InvalidParameterError);
}

TEST(ClosedFormRegime2, HandValue) {
  // All-ones evaluation: 572 / 448.
  EXPECT_NEAR(phonon_closed_form_regime2(unit_params()), 143.0 / 112.0, 1e-14);
}

TEST(ClosedFormRegime2, VanishesWithBathCoupling) {
  ThreeLevelParams p = unit_params();
  p.gamma = 1e-5;
  const double a = phonon_closed_form_regime2(p);
  p.gamma = 1e-8;
  const double b = phonon_closed_form_regime2(p);
  EXPECT_NEAR(b / a, 1e-3, 1e-6);
}

TEST(ClosedFormRegime2, ZeroTemperatureBackactionFloor) {
  ThreeLevelParams p = unit_params();
  p.gamma = 1e-3;
  p.n_th = 0.0;
  const double v = phonon_closed_form_regime2(p);
  EXPECT_GT(v, 0.0);
  EXPECT_LT(v, 1e-2);
}

TEST(ClosedFormRegime2, RequiresEqualDecayRates) {
  ThreeLevelParams p = unit_params();
  p.gamma1 = 0.5;
  EXPECT_THROW(phonon_closed_form_regime2(p), InvalidParameterError);
}

TEST(ClosedFormRegime2, PolaritonOverloadUsesMapping) {
  PolaritonParams p;
  p.big_g = 5.0;
  p.g = 0.01;
  p.omega_m = 10.0;
  p.omega = 0.01;
  p.gamma2 = 0.02;
  p.gamma = 1e-7;
  p.n_th = 5.0;
  p.fock_cutoff = 20;
  EXPECT_EQ(phonon_closed_form_regime2(p), phonon_closed_form_regime2(polariton_as_three_level(p)));
}

TEST(ClosedForms, NonnegativeOnRandomDraws) {
  std::mt19937_64 rng(43);
  for (int k = 0; k < 1000; ++k) {
    ThreeLevelParams p = testing::random_three_level(rng);
    p.delta1 = p.delta2 = 0.0;
    p.n_th = testing::uniform(rng, 0.0, 5.0);
    p.gamma1 = 1e-3 * p.gamma2;
    const double a = phonon_closed_form_regime1(p);
    p.gamma1 = p.gamma2;
    const double b = phonon_closed_form_regime2(p);
    ASSERT_GE(a, 0.0) << "draw " << k;
    ASSERT_GE(b, 0.0) << "draw " << k;
  }
}

}  // namespace
}  // namespace phonocool
