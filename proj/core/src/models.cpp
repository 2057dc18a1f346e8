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

#include "phonocool/models.hpp"

#include <cmath>
#include <string>

#include "phonocool/errors.hpp"

namespace phonocool {
namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw InvalidParameterError(std::string(name) + " must be finite");
}

void require_rate(double v, const char* name) {
  require_finite(v, name);
  if (v < 0.0) throw InvalidParameterError(std::string(name) + " must be >= 0, got " + std::to_string(v));
}

void require_cutoff(int N) {
  if (N < 2) throw InvalidParameterError("fock_cutoff must be >= 2, got " + std::to_string(N));
}

// Builds sigma_ij (x) 1 and 1 (x) b on the d (x) N space.
struct Factory {
  int d;
  int N;
  Operator id_sys;
  Operator id_fock;
  Operator b;

  Factory(int d_, int N_) : d(d_), N(N_), id_sys(identity(d_)), id_fock(identity(N_)), b(tensor(identity(d_), annihilation(N_))) {}

  Operator sigma(int i, int j) const { return tensor(transition(d, i, j), id_fock); }
};

std::vector<int> excitation_charge(int d, int N) {
  std::vector<int> q(static_cast<size_t>(d) * N);
  for (int s = 0; s < d; ++s) {
    for (int n = 0; n < N; ++n) q[static_cast<size_t>(s) * N + n] = n + (s == 2 ? 1 : 0);
  }
  return q;
}

void add_observables(ModelInstance& m, const Factory& f) {
  m.observables.emplace("phonon_number", f.b.adjoint() * f.b);
  for (int k = 0; k < f.d; ++k) {
    m.observables.emplace("sigma" + std::to_string(k) + std::to_string(k), f.sigma(k, k));
  }
}

void add_phonon_bath(ModelInstance& m, const Factory& f, double gamma, double n_th) {
  m.collapse_terms.push_back({gamma * (n_th + 1.0), f.b, "phonon_emission"});
  m.collapse_terms.push_back({gamma * n_th, f.b.adjoint(), "phonon_absorption"});
}

}  // namespace

void validate(const ThreeLevelParams& p) {
  require_finite(p.delta1, "delta1");
  require_finite(p.delta2, "delta2");
  require_finite(p.omega, "omega");
  require_finite(p.g, "g");
  require_rate(p.gamma1, "gamma1");
  require_rate(p.gamma2, "gamma2");
  require_rate(p.gamma, "gamma");
  require_rate(p.n_th, "n_th");
  require_rate(p.gamma_d, "gamma_d");
  require_rate(p.gamma_p, "gamma_p");
  require_cutoff(p.fock_cutoff);
}

void validate(const PolaritonParams& p) {
  require_finite(p.big_g, "big_g");
  if (!(p.big_g > 0.0)) throw InvalidParameterError("big_g must be > 0");
  require_finite(p.delta_tc, "delta_tc");
  require_finite(p.omega_a, "omega_a");
  require_finite(p.omega_c, "omega_c");
  require_finite(p.g, "g");
  require_finite(p.omega_m, "omega_m");
  require_finite(p.omega, "omega");
  require_rate(p.gamma2, "gamma2");
  require_rate(p.gamma, "gamma");
  require_rate(p.n_th, "n_th");
  require_rate(p.gamma_d, "gamma_d");
  require_rate(p.gamma_p, "gamma_p");
  require_cutoff(p.fock_cutoff);
}

void validate(const MnFourLevelParams& p) {
  require_finite(p.omega3, "omega3");
  require_finite(p.omega_m, "omega_m");
  require_finite(p.g, "g");
  require_finite(p.omega, "omega");
  require_rate(p.gamma2, "gamma2");
  require_rate(p.gamma3, "gamma3");
  require_rate(p.gamma_d, "gamma_d");
  require_rate(p.gamma, "gamma");
  require_rate(p.n_th, "n_th");
  require_cutoff(p.fock_cutoff);
}

ModelInstance build_three_level(const ThreeLevelParams& p) {
  validate(p);
  const Factory f(3, p.fock_cutoff);
  ModelInstance m{ModelFamily::kThreeLevel, HilbertDims{3, p.fock_cutoff}, Operator(), {}, {}, {}, p.n_th, 3,
                  p.fock_cutoff};

  const Operator bd = f.b.adjoint();
  m.hamiltonian = complex(p.delta1) * f.sigma(1, 1) + complex(p.delta1 + p.delta2) * f.sigma(2, 2) +
                  complex(p.omega) * (f.sigma(0, 1) + f.sigma(1, 0)) +
                  complex(p.g) * (f.sigma(1, 2) * bd + f.sigma(2, 1) * f.b);

  m.collapse_terms.push_back({p.gamma1, f.sigma(0, 1), "gamma1:sigma01"});
  m.collapse_terms.push_back({p.gamma2, f.sigma(0, 2), "gamma2:sigma02"});
  add_phonon_bath(m, f, p.gamma, p.n_th);
  if (p.gamma_d > 0.0) {
    m.collapse_terms.push_back({p.gamma_d, f.sigma(1, 1), "gamma_d:sigma11"});
    m.collapse_terms.push_back({p.gamma_d, f.sigma(2, 2), "gamma_d:sigma22"});
  }
  if (p.gamma_p > 0.0) {
    m.collapse_terms.push_back({p.gamma_p, f.sigma(1, 0), "gamma_p:sigma10"});
    m.collapse_terms.push_back({p.gamma_p, f.sigma(2, 0), "gamma_p:sigma20"});
  }
  add_observables(m, f);
  m.charge = excitation_charge(3, p.fock_cutoff);
  return m;
}

JcSpectrum jc_diagonalize(double big_g, double delta_tc, double omega_a, double omega_c) {
  if (!(big_g > 0.0)) throw InvalidParameterError("jc_diagonalize: G must be > 0");
  const double center = 0.5 * (omega_a + omega_c);
  const double half_split = std::hypot(big_g, 0.5 * delta_tc);
  return {center - half_split, center + half_split, 0.5 * std::atan2(2.0 * big_g, delta_tc)};
}

ThreeLevelParams polariton_as_three_level(const PolaritonParams& p) {
  validate(p);
  ThreeLevelParams t;
  if (p.mapping == PolaritonMapping::kOperatingPoint) {
    t.omega = p.omega / std::sqrt(2.0);
    t.g = p.g / 2.0;
  } else {
    const JcSpectrum jc = jc_diagonalize(p.big_g, p.delta_tc, p.omega_a, p.omega_c);
    const double s = std::sin(jc.theta);
    const double c = std::cos(jc.theta);
    t.omega = p.omega * s;
    t.g = p.g * s * c;
    // Pump locked to the lower polariton.
    t.delta1 = 0.0;
    t.delta2 = (jc.omega_plus - jc.omega_minus) - p.omega_m;
  }
  t.gamma1 = p.gamma2;
  t.gamma2 = p.gamma2;
  t.gamma = p.gamma;
  t.n_th = p.n_th;
  t.gamma_d = p.gamma_d;
  t.gamma_p = p.gamma_p;
  t.fock_cutoff = p.fock_cutoff;
  return t;
}

ModelInstance build_polariton(const PolaritonParams& p) {
  ModelInstance m = build_three_level(polariton_as_three_level(p));
  m.family = ModelFamily::kPolariton;
  return m;
}

ModelInstance build_mn_four_level(const MnFourLevelParams& p) {
  validate(p);
  const Factory f(4, p.fock_cutoff);
  ModelInstance m{ModelFamily::kMnFourLevel, HilbertDims{4, p.fock_cutoff}, Operator(), {}, {}, {}, p.n_th, 4,
                  p.fock_cutoff};

  const Operator bd = f.b.adjoint();
  m.hamiltonian = complex(p.omega3) * f.sigma(3, 3) + complex(p.omega) * (f.sigma(0, 1) + f.sigma(1, 0)) +
                  complex(p.g) * (f.sigma(1, 2) * bd + f.sigma(2, 1) * f.b);

  m.collapse_terms.push_back({p.gamma2, f.sigma(0, 1), "gamma2:sigma01"});
  m.collapse_terms.push_back({p.gamma2, f.sigma(0, 2), "gamma2:sigma02"});
  m.collapse_terms.push_back({p.gamma2, f.sigma(3, 1), "gamma2:sigma31"});
  m.collapse_terms.push_back({p.gamma2, f.sigma(3, 2), "gamma2:sigma32"});
  m.collapse_terms.push_back({p.gamma3, f.sigma(0, 3), "gamma3:sigma03"});
  add_phonon_bath(m, f, p.gamma, p.n_th);
  if (p.gamma_d > 0.0) {
    m.collapse_terms.push_back({p.gamma_d, f.sigma(1, 1), "gamma_d:sigma11"});
    m.collapse_terms.push_back({p.gamma_d, f.sigma(2, 2), "gamma_d:sigma22"});
  }
  add_observables(m, f);
  m.charge = excitation_charge(4, p.fock_cutoff);
  return m;
}

ModelInstance build_model(const ModelParams& p) {
  return std::visit(
      [](const auto& q) -> ModelInstance {
        using T = std::decay_t<decltype(q)>;
        if constexpr (std::is_same_v<T, ThreeLevelParams>) return build_three_level(q);
        else if constexpr (std::is_same_v<T, PolaritonParams>) return build_polariton(q);
        else return build_mn_four_level(q);
      },
      p);
}

ModelFamily family_of(const ModelParams& p) {
  switch (p.index()) {
    case 0: return ModelFamily::kThreeLevel;
    case 1: return ModelFamily::kPolariton;
    default: return ModelFamily::kMnFourLevel;
  }
}

std::string_view family_name(ModelFamily f) {
  switch (f) {
    case ModelFamily::kThreeLevel: return "three_level";
    case ModelFamily::kPolariton: return "polariton";
    case ModelFamily::kMnFourLevel: return "mn_four_level";
  }
  return "unknown";
}

ModelFamily family_from_name(std::string_view name) {
  if (name == "three_level") return ModelFamily::kThreeLevel;
  if (name == "polariton") return ModelFamily::kPolariton;
  if (name == "mn_four_level") return ModelFamily::kMnFourLevel;
  throw InvalidParameterError("unknown model family '" + std::string(name) + "'");
}

ModelParams default_params(ModelFamily f) {
  switch (f) {
    case ModelFamily::kThreeLevel: return ThreeLevelParams{};
    case ModelFamily::kPolariton: return PolaritonParams{};
    case ModelFamily::kMnFourLevel: return MnFourLevelParams{};
  }
  return ThreeLevelParams{};
}

namespace {

template <class P>
struct Field {
  const char* name;
  double P::*member;
};

const std::vector<Field<ThreeLevelParams>>& three_fields() {
  static const std::vector<Field<ThreeLevelParams>> v = {
      {"delta1", &ThreeLevelParams::delta1}, {"delta2", &ThreeLevelParams::delta2},
      {"omega", &ThreeLevelParams::omega},   {"g", &ThreeLevelParams::g},
      {"gamma1", &ThreeLevelParams::gamma1}, {"gamma2", &ThreeLevelParams::gamma2},
      {"gamma", &ThreeLevelParams::gamma},   {"n_th", &ThreeLevelParams::n_th},
      {"gamma_d", &ThreeLevelParams::gamma_d}, {"gamma_p", &ThreeLevelParams::gamma_p},
  };
  return v;
}

const std::vector<Field<PolaritonParams>>& polariton_fields() {
  static const std::vector<Field<PolaritonParams>> v = {
      {"big_g", &PolaritonParams::big_g},     {"delta_tc", &PolaritonParams::delta_tc},
      {"omega_a", &PolaritonParams::omega_a}, {"omega_c", &PolaritonParams::omega_c},
      {"g", &PolaritonParams::g},             {"omega_m", &PolaritonParams::omega_m},
      {"omega", &PolaritonParams::omega},     {"gamma2", &PolaritonParams::gamma2},
      {"gamma", &PolaritonParams::gamma},     {"n_th", &PolaritonParams::n_th},
      {"gamma_d", &PolaritonParams::gamma_d}, {"gamma_p", &PolaritonParams::gamma_p},
  };
  return v;
}

const std::vector<Field<MnFourLevelParams>>& mn_fields() {
  static const std::vector<Field<MnFourLevelParams>> v = {
      {"omega3", &MnFourLevelParams::omega3}, {"omega_m", &MnFourLevelParams::omega_m},
      {"g", &MnFourLevelParams::g},           {"omega", &MnFourLevelParams::omega},
      {"gamma2", &MnFourLevelParams::gamma2}, {"gamma3", &MnFourLevelParams::gamma3},
      {"gamma_d", &MnFourLevelParams::gamma_d}, {"gamma", &MnFourLevelParams::gamma},
      {"n_th", &MnFourLevelParams::n_th},
  };
  return v;
}

template <class P>
std::vector<std::string> names_of(const std::vector<Field<P>>& fields) {
  std::vector<std::string> out;
  for (const auto& f : fields) out.emplace_back(f.name);
  out.emplace_back("fock_cutoff");
  return out;
}

template <class P>
double* find_field(P& p, const std::vector<Field<P>>& fields, std::string_view name) {
  for (const auto& f : fields) {
    if (name == f.name) return &(p.*(f.member));
  }
  return nullptr;
}

template <class P>
const std::vector<Field<P>>& fields_for() {
  if constexpr (std::is_same_v<P, ThreeLevelParams>) return three_fields();
  else if constexpr (std::is_same_v<P, PolaritonParams>) return polariton_fields();
  else return mn_fields();
}

[[noreturn]] void unknown_parameter(ModelFamily f, std::string_view name) {
  throw InvalidParameterError("unknown parameter '" + std::string(name) + "' for family " +
                              std::string(family_name(f)));
}

}  // namespace

const std::vector<std::string>& parameter_names(ModelFamily f) {
  static const std::vector<std::string> three = names_of(three_fields());
  static const std::vector<std::string> pol = names_of(polariton_fields());
  static const std::vector<std::string> mn = names_of(mn_fields());
  switch (f) {
    case ModelFamily::kThreeLevel: return three;
    case ModelFamily::kPolariton: return pol;
    case ModelFamily::kMnFourLevel: return mn;
  }
  return three;
}

bool has_parameter(ModelFamily f, std::string_view name) {
  for (const auto& n : parameter_names(f)) {
    if (n == name) return true;
  }
  return false;
}

double get_parameter(const ModelParams& p, std::string_view name) {
  if (name == "fock_cutoff") return fock_cutoff(p);
  return std::visit(
      [&](const auto& q) -> double {
        using P = std::decay_t<decltype(q)>;
        P copy = q;
        double* slot = find_field(copy, fields_for<P>(), name);
        if (!slot) unknown_parameter(family_of(p), name);
        return *slot;
      },
      p);
}

void set_parameter(ModelParams& p, std::string_view name, double value) {
  if (name == "fock_cutoff") {
    set_fock_cutoff(p, static_cast<int>(std::lround(value)));
    return;
  }
  const ModelFamily fam = family_of(p);
  std::visit(
      [&](auto& q) {
        using P = std::decay_t<decltype(q)>;
        double* slot = find_field(q, fields_for<P>(), name);
        if (!slot) unknown_parameter(fam, name);
        *slot = value;
      },
      p);
}

int fock_cutoff(const ModelParams& p) {
  return std::visit([](const auto& q) { return q.fock_cutoff; }, p);
}

void set_fock_cutoff(ModelParams& p, int N) {
  std::visit([N](auto& q) { q.fock_cutoff = N; }, p);
}

double thermal_occupancy_of(const ModelParams& p) {
  return std::visit([](const auto& q) { return q.n_th; }, p);
}

}  // namespace phonocool
