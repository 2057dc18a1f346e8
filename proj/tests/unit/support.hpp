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

#include <cmath>
#include <random>

#include <unsupported/Eigen/KroneckerProduct>

#include "phonocool/phonocool.hpp"

namespace phonocool::testing {

inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(rng));
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline CMatrix random_matrix(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> d;
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = complex(d(rng), d(rng));
  }
  return m;
}

inline CMatrix random_hermitian(std::mt19937_64& rng, int n) {
  const CMatrix a = random_matrix(rng, n);
  return a + a.adjoint();
}

/// Random valid density matrix A A^dag / tr.
inline CMatrix random_density(std::mt19937_64& rng, int n) {
  const CMatrix a = random_matrix(rng, n);
  CMatrix r = a * a.adjoint();
  return r / r.trace();
}

/// Rates log-uniform in [1e-4 g, 10 g], n_th in [0.1, 5].
inline ThreeLevelParams random_three_level(std::mt19937_64& rng, int N = 8) {
  ThreeLevelParams p;
  p.g = 1.0;
  p.omega = log_uniform(rng, 1e-4, 10.0);
  p.gamma1 = log_uniform(rng, 1e-4, 10.0);
  p.gamma2 = log_uniform(rng, 1e-4, 10.0);
  p.gamma = log_uniform(rng, 1e-4, 10.0);
  p.n_th = uniform(rng, 0.1, 5.0);
  p.delta1 = uniform(rng, -2.0, 2.0);
  p.delta2 = uniform(rng, -2.0, 2.0);
  p.fock_cutoff = N;
  return p;
}

/// Dense column-stacking generator built from Kronecker products:
/// vec(A X B) = (B^T (x) A) vec(X).
inline CMatrix kron_liouvillian(const ModelInstance& m) {
  const int D = m.dims.total();
  const CMatrix I = CMatrix::Identity(D, D);
  const CMatrix& H = m.hamiltonian.matrix();
  const complex i(0.0, 1.0);
  CMatrix L = -i * Eigen::kroneckerProduct(I, H).eval() + i * Eigen::kroneckerProduct(H.transpose(), I).eval();
  for (const auto& c : m.collapse_terms) {
    const CMatrix& O = c.op.matrix();
    const CMatrix OdO = O.adjoint() * O;
    L += c.rate * (Eigen::kroneckerProduct(O.conjugate(), O).eval() - 0.5 * Eigen::kroneckerProduct(I, OdO).eval() -
                   0.5 * Eigen::kroneckerProduct(OdO.transpose(), I).eval());
  }
  return L;
}

/// Mean of the truncated geometric distribution p_n ~ x^n, n < N.
inline double truncated_thermal_mean(double n_th, int N) {
  const double x = n_th / (n_th + 1.0);
  double z = 0.0, s = 0.0;
  for (int n = 0; n < N; ++n) {
    z += std::pow(x, n);
    s += n * std::pow(x, n);
  }
  return s / z;
}

}  // namespace phonocool::testing
