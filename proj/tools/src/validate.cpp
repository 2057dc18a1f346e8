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
#include <random>
#include <sstream>

#include "phonocool_cli/cli.hpp"

namespace phonocool::cli {
namespace {

CheckOutcome relative_check(std::string name, double value, double expected, double tol) {
  CheckOutcome c;
  c.name = std::move(name);
  c.value = value;
  c.expected = expected;
  c.tolerance = tol;
  c.passed = std::isfinite(value) && std::abs(value - expected) <= tol * std::abs(expected);
  return c;
}

CheckOutcome bound_check(std::string name, double value, double bound) {
  CheckOutcome c;
  c.name = std::move(name);
  c.value = value;
  c.expected = 0.0;
  c.tolerance = bound;
  c.passed = std::isfinite(value) && std::abs(value) <= bound;
  return c;
}

// Runs fn and turns a library error into a failed check carrying its message.
template <typename Fn>
CheckOutcome guarded(const std::string& name, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    CheckOutcome c;
    c.name = name;
    c.passed = false;
    c.value = std::numeric_limits<double>::quiet_NaN();
    c.detail = std::string(e.kind()) + ": " + e.what();
    return c;
  }
}

CheckOutcome identity_check(const std::string& name, const ModelParams& p) {
  return guarded(name, [&] {
    ConvergeOptions co;
    co.max_cutoff = 160;
    const SteadyStateResult r = converge_cutoff(p, fock_cutoff(p), 1e-9, co);
    const double n_th = thermal_occupancy_of(p);
    CheckOutcome c = bound_check(name, steady_identity_residual(r, p), 1e-6 * n_th);
    c.detail = "cutoff " + std::to_string(r.fock_cutoff_used);
    return c;
  });
}

bool within_one_cell(const Axis& a, double value, double target) {
  return std::abs(a.nearest_index(value) - a.nearest_index(target)) <= 1;
}

}  // namespace

std::vector<CheckOutcome> run_validate(const PhysicalConstants& constants, int jobs) {
  std::vector<CheckOutcome> out;

  out.push_back(relative_check("thermal_occupancy_10GHz_2.63K", thermal_occupancy(10.0, 2.63, constants), 5.0, 0.01));
  out.push_back(relative_check("thermal_occupancy_35GHz_5K", thermal_occupancy(35.0, 5.0, constants), 2.52, 0.01));

  std::mt19937_64 rng(20250101);
  auto log_uniform = [&](double lo, double hi) {
    return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(rng));
  };
  for (int k = 0; k < 4; ++k) {
    ThreeLevelParams p;
    p.g = 1.0;
    p.omega = log_uniform(1e-2, 3.0);
    p.gamma1 = log_uniform(1e-4, 10.0);
    p.gamma2 = log_uniform(1e-2, 10.0);
    p.gamma = log_uniform(1e-4, 1e-2);
    p.n_th = std::uniform_real_distribution<double>(0.1, 5.0)(rng);
    p.delta1 = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
    p.delta2 = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
    if (k % 2 == 1) p.gamma_p = log_uniform(1e-4, 1.0);
    p.fock_cutoff = 10;
    out.push_back(identity_check("identity_three_level_draw" + std::to_string(k), p));
  }
  {
    RunConfig c = parse_config(preset("fig6"));
    out.push_back(identity_check("identity_polariton", c.params));
    c = parse_config(preset("figG2"));
    out.push_back(identity_check("identity_mn_four_level", c.params));
  }

  out.push_back(guarded("decoupled_g0", [&] {
    ThreeLevelParams p;
    p.omega = 1.0;
    p.gamma1 = 0.1;
    p.gamma2 = 1.0;
    p.gamma = 1e-3;
    p.n_th = 2.0;
    p.fock_cutoff = 70;
    const SteadyStateResult r = steady_state(build_model(p), SteadyStateOptions{});
    return bound_check("decoupled_g0", r.figure_of_merit - 1.0, 1e-6);
  }));

  // Regime-1 optimum: grid argmin against the closed-form optimum, then the
  // closed-form phonon number against the numeric one at that point.
  {
    const RunConfig c = parse_config(preset("fig3"));
    const auto& base = std::get<ThreeLevelParams>(c.params);
    const double g = base.g;
    out.push_back(guarded("regime1_optimum_location", [&] {
      const SweepResult r = sweep(c.sweep_spec(), jobs);
      const Optimum o = locate_optimum(r);
      CheckOutcome chk;
      chk.name = "regime1_optimum_location";
      chk.passed = within_one_cell(*c.axis1, o.axis1_value, g / std::sqrt(2.0)) &&
                   within_one_cell(*c.axis2, o.axis2_value, 2.0 * g);
      chk.value = o.value;
      std::ostringstream os;
      os << "argmin omega=" << o.axis1_value << " gamma2=" << o.axis2_value;
      chk.detail = os.str();
      return chk;
    }));
    out.push_back(guarded("regime1_closed_form", [&] {
      ThreeLevelParams p = base;
      p.omega = g / std::sqrt(2.0);
      p.gamma2 = 2.0 * g;
      const SteadyStateResult r = converge_cutoff(p, p.fock_cutoff, 1e-7);
      return relative_check("regime1_closed_form", phonon_closed_form_regime1(p), r.phonon_number, 0.10);
    }));
  }

  out.push_back(guarded("polariton_equivalence", [&] {
    const RunConfig c = parse_config(preset("fig6"));
    PolaritonParams p = std::get<PolaritonParams>(c.params);
    p.fock_cutoff = 6;
    const ModelInstance a = build_polariton(p);
    const ModelInstance b = build_three_level(polariton_as_three_level(p));
    bool equal = a.hamiltonian == b.hamiltonian && a.collapse_terms.size() == b.collapse_terms.size();
    for (size_t k = 0; equal && k < a.collapse_terms.size(); ++k) {
      equal = a.collapse_terms[k].rate == b.collapse_terms[k].rate && a.collapse_terms[k].op == b.collapse_terms[k].op;
    }
    CheckOutcome chk;
    chk.name = "polariton_equivalence";
    chk.passed = equal;
    chk.value = equal ? 1.0 : 0.0;
    chk.expected = 1.0;
    return chk;
  }));

  out.push_back(guarded("polariton_closed_form", [&] {
    const RunConfig c = parse_config(preset("fig6"));
    const SweepResult r = sweep(c.sweep_spec(), jobs);
    const Optimum o = locate_optimum(r);
    const ModelParams p = cell_params(c.sweep_spec(), o.i, o.j);
    const double n_num = r.phonon_number(o.i, o.j);
    CheckOutcome chk =
        relative_check("polariton_closed_form", phonon_closed_form_regime2(std::get<PolaritonParams>(p)), n_num, 0.10);
    std::ostringstream os;
    os << "at omega=" << o.axis1_value << " gamma2=" << o.axis2_value << " F=" << o.value;
    chk.detail = os.str();
    return chk;
  }));

  return out;
}

}  // namespace phonocool::cli
