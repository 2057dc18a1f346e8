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

#include <atomic>

#include "support.hpp"

namespace phonocool {
namespace {

Axis axis(std::string name, AxisScale scale, double lo, double hi, int n) {
  Axis a;
  a.name = std::move(name);
  a.scale = scale;
  a.min = lo;
  a.max = hi;
  a.count = n;
  return a;
}

ThreeLevelParams strong_coupling(int N = 10) {
  ThreeLevelParams p;
  p.g = 20.0;
  p.omega = 20.0 / std::sqrt(2.0);
  p.gamma2 = 40.0;
  p.gamma1 = 1e-6;
  p.gamma = 1e-3;
  p.n_th = thermal_occupancy(241.8, 17.0);
  p.fock_cutoff = N;
  return p;
}

SweepSpec pump_decay_spec(int n) {
  SweepSpec s;
  s.base_params = strong_coupling();
  s.axis1 = axis("omega", AxisScale::kLog, 2.0, 60.0, n);
  s.axis2 = axis("gamma2", AxisScale::kLog, 6.0, 200.0, n);
  return s;
}

std::vector<double> log_times(double lo, double hi, int n) {
  std::vector<double> t(n);
  for (int k = 0; k < n; ++k) t[k] = lo * std::pow(hi / lo, static_cast<double>(k) / (n - 1));
  return t;
}

TEST(AxisTest, LinearAndLogValues) {
  const Axis lin = axis("delta1", AxisScale::kLinear, -1.0, 1.0, 5);
  EXPECT_EQ(lin.values(), (std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0}));
  const std::vector<double> lg = axis("omega", AxisScale::kLog, 1.0, 100.0, 3).values();
  EXPECT_EQ(lg.front(), 1.0);
  EXPECT_NEAR(lg[1], 10.0, 1e-12);
  EXPECT_EQ(lg.back(), 100.0);
}

TEST(AxisTest, PositionAndNearestIndex) {
  const Axis a = axis("omega", AxisScale::kLog, 1.0, 100.0, 5);
  EXPECT_NEAR(a.position(10.0), 2.0, 1e-12);
  EXPECT_EQ(a.nearest_index(12.0), 2);
  EXPECT_EQ(a.nearest_index(1e-3), 0);
  EXPECT_EQ(a.nearest_index(1e6), 4);
}

TEST(SweepSpecTest, ValidationErrors) {
  SweepSpec s = pump_decay_spec(3);
  EXPECT_NO_THROW(validate(s));
  SweepSpec bad = s;
  bad.axis1.name = "no_such";
  EXPECT_THROW(validate(bad), InvalidParameterError);
  bad = s;
  bad.axis1.count = 1;
  EXPECT_THROW(validate(bad), InvalidParameterError);
  bad = s;
  bad.axis1.min = 100.0;
  EXPECT_THROW(validate(bad), InvalidParameterError);
  bad = s;
  bad.axis1.min = 0.0;
  EXPECT_THROW(validate(bad), InvalidParameterError);
  bad = s;
  bad.axis2->name = "omega";
  EXPECT_THROW(validate(bad), InvalidParameterError);
  bad = s;
  bad.fixed_overrides["bogus"] = 1.0;
  EXPECT_THROW(validate(bad), InvalidParameterError);
  bad = s;
  bad.family = ModelFamily::kPolariton;
  EXPECT_THROW(validate(bad), InvalidParameterError);
}

TEST(SweepSpecTest, CellParamsOrdering) {
  SweepSpec s = pump_decay_spec(3);
  s.fixed_overrides["omega"] = 1.0;
  s.fixed_overrides["gamma"] = 0.5;
  const ModelParams p = cell_params(s, 2, 0);
  EXPECT_EQ(get_parameter(p, "omega"), 60.0);
  EXPECT_EQ(get_parameter(p, "gamma2"), 6.0);
  EXPECT_EQ(get_parameter(p, "gamma"), 0.5);
}

TEST(FigureOfMerit, DecoupledIsOne) {
  ThreeLevelParams p = strong_coupling(60);
  p.g = 0.0;
  EXPECT_NEAR(figure_of_merit(build_three_level(p), p.n_th), 1.0, 1e-6);
  EXPECT_THROW(figure_of_merit(build_three_level(p), 0.0), InvalidParameterError);
}

TEST(FigureOfMerit, LargeDetuningNegligibleCooling) {
  ThreeLevelParams p = strong_coupling(20);
  p.delta1 = 2000.0;
  p.delta2 = 3000.0;
  EXPECT_NEAR(figure_of_merit(build_three_level(p), p.n_th), 1.0, 1e-2);
}

TEST(FigureOfMerit, IncoherentPumpHeats) {
  ThreeLevelParams p;
  p.g = 1.0;
  p.omega = 0.1;
  p.gamma2 = 0.1;
  p.gamma1 = 0.1;
  p.gamma_p = 0.01;
  p.gamma = 1e-5;
  p.n_th = 5.0;
  const SteadyStateResult r = converge_cutoff(p, 20, 1e-3, ConvergeOptions{160, 10, {}});
  EXPECT_GT(r.figure_of_merit, 1.0);
}

TEST(Sweep, IdenticalCornersGiveEqualValues) {
  SweepSpec s = pump_decay_spec(2);
  s.fixed_overrides["delta1"] = 0.0;
  s.axis1 = axis("delta2", AxisScale::kLinear, 0.0, 1e-300, 2);
  s.axis2 = axis("delta1", AxisScale::kLinear, 0.0, 1e-300, 2);
  const SweepResult r = sweep(s);
  const double v = r.figure_of_merit(0, 0);
  for (double x : r.figure_of_merit.data) EXPECT_NEAR(x, v, 1e-12 * v);
}

TEST(Sweep, ShapeDiagnosticsAndIdentity) {
  const SweepResult r = sweep(pump_decay_spec(4), 2);
  ASSERT_EQ(r.rows(), 4);
  ASSERT_EQ(r.cols(), 4);
  const double n_th = strong_coupling().n_th;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const CellDiagnostics& d = r.cell(i, j);
      ASSERT_EQ(d.status, CellStatus::kOk);
      EXPECT_GE(r.figure_of_merit(i, j), 0.0);
      EXPECT_NEAR(r.phonon_number(i, j) / n_th, r.figure_of_merit(i, j), 1e-14);
      EXPECT_LT(std::abs(d.identity_residual), 1e-6 * n_th);
      EXPECT_GE(d.cutoff_used, 10);
    }
  }
}

TEST(Sweep, IndependentOfWorkerCount) {
  const SweepSpec s = pump_decay_spec(4);
  const SweepResult a = sweep(s, 1);
  const SweepResult b = sweep(s, 4);
  EXPECT_EQ(a.figure_of_merit.data, b.figure_of_merit.data);
  EXPECT_EQ(a.phonon_number.data, b.phonon_number.data);
}

TEST(Sweep, FailedCellsAreRecorded) {
  SweepSpec s;
  ThreeLevelParams p = strong_coupling(5);
  p.omega = 0.0;
  s.base_params = p;
  s.axis1 = axis("n_th", AxisScale::kLog, 0.01, 30.0, 2);
  s.solver.converge_tolerance = 1e-9;
  s.solver.converge.max_cutoff = 15;
  const SweepResult r = sweep(s);
  EXPECT_EQ(r.cols(), 1);
  EXPECT_EQ(r.cell(0, 0).status, CellStatus::kOk);
  EXPECT_EQ(r.cell(1, 0).status, CellStatus::kFailed);
  EXPECT_EQ(r.cell(1, 0).error_kind, "truncation");
  EXPECT_TRUE(std::isnan(r.figure_of_merit(1, 0)));
  ASSERT_TRUE(r.optimum.has_value());
  EXPECT_EQ(r.optimum->i, 0);

  s.axis1.min = 20.0;
  const SweepResult all_failed = sweep(s);
  EXPECT_FALSE(all_failed.optimum.has_value());
  EXPECT_THROW(locate_optimum(all_failed), InvalidStateError);
}

TEST(LocateExtremum, MonotoneGridGivesCorner) {
  Grid g(3, 4, 0.0);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 4; ++j) g(i, j) = 10.0 * i + j;
  }
  const std::vector<double> a1{1, 2, 3}, a2{4, 5, 6, 7};
  const auto lo = locate_extremum(g, a1, a2);
  ASSERT_TRUE(lo);
  EXPECT_EQ(lo->i, 0);
  EXPECT_EQ(lo->j, 0);
  EXPECT_EQ(lo->axis2_value, 4.0);
  const auto hi = locate_extremum(g, a1, a2, true);
  EXPECT_EQ(hi->i, 2);
  EXPECT_EQ(hi->j, 3);
  EXPECT_EQ(hi->value, 23.0);
}

TEST(LocateExtremum, TiesGoToLowestIndices) {
  Grid g(3, 3, 1.0);
  g(2, 0) = -1.0;
  g(1, 2) = -1.0;
  g(0, 0) = std::numeric_limits<double>::quiet_NaN();
  const auto o = locate_extremum(g, {0, 1, 2}, {0, 1, 2});
  EXPECT_EQ(o->i, 1);
  EXPECT_EQ(o->j, 2);
  const Grid empty(2, 2, std::numeric_limits<double>::quiet_NaN());
  EXPECT_FALSE(locate_extremum(empty, {0, 1}, {0, 1}).has_value());
}

TEST(Sweep, StrongCouplingOptimumMatchesClosedForm) {
  const SweepSpec s = pump_decay_spec(7);
  const Optimum o = locate_optimum(sweep(s, 4));
  const OptimalPoint target = optimal_regime1(20.0, 20.0 / std::sqrt(2.0));
  EXPECT_LE(std::abs(o.i - s.axis1.position(target.omega_opt)), 1.0);
  EXPECT_LE(std::abs(o.j - s.axis2->position(target.gamma2_opt)), 1.0);
}

TEST(Fit, NoiselessRecovery) {
  const std::vector<double> t = log_times(1e-2, 1e3, 200);
  std::vector<double> y;
  for (double x : t) y.push_back(stretched_exponential(x, 0.3, 0.8, 5.0, 0.05));
  const FitResult f = fit_stretched_exponential(t, y, 5.0, 0.05);
  EXPECT_TRUE(f.converged);
  EXPECT_NEAR(f.gamma_eff / 0.3, 1.0, 1e-6);
  EXPECT_NEAR(f.beta / 0.8, 1.0, 1e-6);
  EXPECT_LT(f.mape, 1e-4);
  EXPECT_FALSE(f.beta_at_bound);
}

TEST(Fit, NoisyRecovery) {
  std::mt19937_64 rng(51);
  std::normal_distribution<double> noise(0.0, 0.01);
  const std::vector<double> t = log_times(1e-2, 1e3, 200);
  std::vector<double> y;
  for (double x : t) y.push_back(stretched_exponential(x, 0.3, 0.8, 5.0, 0.05) * (1.0 + noise(rng)));
  const FitResult f = fit_stretched_exponential(t, y, 5.0, 0.05);
  EXPECT_NEAR(f.gamma_eff / 0.3, 1.0, 0.05);
  EXPECT_NEAR(f.beta / 0.8, 1.0, 0.05);
  EXPECT_NEAR(f.mape, 0.8, 0.4);
}

TEST(Fit, PureExponentialGivesUnitStretch) {
  const std::vector<double> t = log_times(1e-3, 1e2, 150);
  std::vector<double> y;
  for (double x : t) y.push_back(2.0 * std::exp(-0.7 * x) + 0.1);
  const FitResult f = fit_stretched_exponential(t, y, 2.1, 0.1);
  EXPECT_NEAR(f.beta, 1.0, 0.02);
  EXPECT_NEAR(f.gamma_eff, 0.7, 1e-4);
}

TEST(Fit, FlagsBetaAtBound) {
  // A compressed exponential cannot be represented with beta <= 1.
  const std::vector<double> t = log_times(1e-2, 10.0, 100);
  std::vector<double> y;
  for (double x : t) y.push_back(stretched_exponential(x, 1.0, 1.6, 1.0, 0.0) + 1e-3);
  const FitResult f = fit_stretched_exponential(t, y, 1.001, 1e-3);
  EXPECT_TRUE(f.beta_at_bound);
  EXPECT_DOUBLE_EQ(f.beta, 1.0);
}

TEST(Fit, WarnsOnShortCoverage) {
  const std::vector<double> t = log_times(1e-2, 1.0, 50);
  std::vector<double> y;
  for (double x : t) y.push_back(stretched_exponential(x, 0.3, 0.9, 5.0, 0.05));
  const FitResult f = fit_stretched_exponential(t, y, 5.0, 0.05);
  ASSERT_FALSE(f.warnings.empty());
  EXPECT_NE(f.warnings[0].find("decades"), std::string::npos);
}

TEST(Fit, NoDecayAndBadInput) {
  const std::vector<double> t{1.0, 2.0, 3.0};
  const FitResult f = fit_stretched_exponential(t, {1.0, 1.0, 1.0}, 1.0, 1.0);
  EXPECT_TRUE(std::isnan(f.gamma_eff));
  EXPECT_FALSE(f.converged);
  EXPECT_THROW(fit_stretched_exponential(t, {1.0, 1.0}, 2.0, 1.0), InvalidParameterError);
  EXPECT_THROW(fit_stretched_exponential({1.0, 2.0}, {1.0, 1.0}, 2.0, 1.0), InvalidParameterError);
  FitOptions o;
  o.beta_min = 1.5;
  EXPECT_THROW(fit_stretched_exponential(t, {1.5, 1.2, 1.1}, 2.0, 1.0, o), InvalidParameterError);
}

TEST(Fit, BathOnlyThermalizationRate) {
  ThreeLevelParams p;
  p.gamma = 0.05;
  p.n_th = 2.0;
  p.fock_cutoff = 50;
  const ModelInstance m = build_three_level(p);
  const EvolutionTrace tr = evolve(m, pure_state(m.dims, 0), log_times(0.1, 300.0, 120));
  const FitResult f = fit_stretched_exponential(tr, 0.0, testing::truncated_thermal_mean(p.n_th, p.fock_cutoff));
  EXPECT_NEAR(f.gamma_eff / p.gamma, 1.0, 0.2);
  EXPECT_NEAR(f.beta, 1.0, 0.02);
}

TEST(RateMap, RatioIsRateOverFigureOfMerit) {
  SweepSpec s;
  ThreeLevelParams p;
  p.g = 1.0;
  p.gamma1 = 1e-4;
  p.gamma = 1e-2;
  p.n_th = 1.0;
  p.fock_cutoff = 8;
  s.base_params = p;
  s.axis1 = axis("omega", AxisScale::kLog, 0.3, 1.0, 2);
  s.axis2 = axis("gamma2", AxisScale::kLog, 1.0, 3.0, 2);
  RateMapOptions o;
  o.max_cutoff = 20;
  o.max_time = 1e5;
  o.samples = 60;
  const RateMapResult r = rate_map(s, 10.0, o, 2);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      ASSERT_EQ(r.cell(i, j).status, "ok");
      EXPECT_GT(r.gamma_eff(i, j), 0.0);
      EXPECT_EQ(r.rate(i, j), r.gamma_eff(i, j) / 10.0);
      EXPECT_EQ(r.ratio(i, j), r.rate(i, j) / r.sweep.figure_of_merit(i, j));
      EXPECT_LT(r.sweep.figure_of_merit(i, j), 1.0);
      EXPECT_GT(r.beta(i, j), 0.0);
      EXPECT_LE(r.beta(i, j), 1.0);
    }
  }
  ASSERT_TRUE(r.best_ratio.has_value());
  EXPECT_THROW(rate_map(s, 0.0, o), InvalidParameterError);
}

TEST(RateMap, EvolutionCutoffFollowsThermalTail) {
  RateMapOptions o;
  EXPECT_EQ(evolution_cutoff(0.0, 10, o), 10);
  const int N = evolution_cutoff(5.0, 10, o);
  EXPECT_LE(std::pow(5.0 / 6.0, N), o.tail_weight);
  EXPECT_GT(std::pow(5.0 / 6.0, N - 1), o.tail_weight);
  o.max_cutoff = 40;
  EXPECT_EQ(evolution_cutoff(5.0, 10, o), 40);
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
  for (int jobs : {1, 3, 16}) {
    std::vector<std::atomic<int>> hits(101);
    parallel_for(hits.size(), jobs, [&](std::size_t k) { ++hits[k]; });
    for (auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
}

TEST(ParallelFor, PropagatesErrors) {
  EXPECT_THROW(parallel_for(10, 4,
                            [](std::size_t k) {
                              if (k == 7) throw InvalidStateError("boom");
                            }),
               InvalidStateError);
}

}  // namespace
}  // namespace phonocool
