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

#include <complex>
#include <initializer_list>
#include <vector>

#include <Eigen/Dense>

namespace phonocool {

using complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Absolute tolerances applied when validating density matrices.
struct Tolerances {
  double hermiticity = 1e-10;
  double trace = 1e-10;
  double eigenvalue = 1e-10;
};

inline constexpr Tolerances kDefaultTolerances{};

class HilbertDims {
 public:
  HilbertDims() = default;
  HilbertDims(std::initializer_list<int> factors);
  explicit HilbertDims(std::vector<int> factors);

  const std::vector<int>& factors() const noexcept { return factors_; }
  int total() const noexcept;
  HilbertDims concat(const HilbertDims& other) const;

  bool operator==(const HilbertDims& other) const = default;

 private:
  std::vector<int> factors_;
};

class Operator {
 public:
  Operator() = default;
  Operator(HilbertDims dims, CMatrix matrix);

  const HilbertDims& dims() const noexcept { return dims_; }
  const CMatrix& matrix() const noexcept { return matrix_; }
  int size() const noexcept { return static_cast<int>(matrix_.rows()); }

  Operator adjoint() const;
  bool is_hermitian(double tol = kDefaultTolerances.hermiticity) const;

  Operator operator+(const Operator& rhs) const;
  Operator operator-(const Operator& rhs) const;
  Operator operator*(const Operator& rhs) const;
  Operator operator*(complex s) const;
  friend Operator operator*(complex s, const Operator& op) { return op * s; }

  bool operator==(const Operator& rhs) const;

 private:
  HilbertDims dims_;
  CMatrix matrix_;
};

class DensityMatrix {
 public:
  DensityMatrix() = default;
  /// Validates Hermiticity, unit trace and eigenvalues >= -tol.eigenvalue.
  DensityMatrix(HilbertDims dims, CMatrix matrix, const Tolerances& tol = kDefaultTolerances);

  /// Skips the eigenvalue check; used by solvers that already verified positivity
  /// blockwise on large matrices.
  static DensityMatrix trusted(HilbertDims dims, CMatrix matrix);

  const HilbertDims& dims() const noexcept { return dims_; }
  const CMatrix& matrix() const noexcept { return matrix_; }
  int size() const noexcept { return static_cast<int>(matrix_.rows()); }

 private:
  HilbertDims dims_;
  CMatrix matrix_;
};

Operator identity(const HilbertDims& dims);
Operator identity(int d);

/// Truncated bosonic lowering operator on levels 0..N-1.
Operator annihilation(int N);
Operator creation(int N);
Operator number(int N);

/// |i><j| on a d-level system.
Operator transition(int d, int i, int j);

Operator tensor(const Operator& a, const Operator& b);
Operator tensor(std::initializer_list<Operator> ops);

/// tr(op * rho).
complex expectation(const Operator& op, const DensityMatrix& rho);

DensityMatrix thermal_state(int N, double n_th);
DensityMatrix pure_state(const HilbertDims& dims, int index);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace phonocool
