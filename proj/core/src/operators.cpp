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

#include "phonocool/operators.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "phonocool/errors.hpp"

namespace phonocool {

HilbertDims::HilbertDims(std::initializer_list<int> factors) : HilbertDims(std::vector<int>(factors)) {}

HilbertDims::HilbertDims(std::vector<int> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw InvalidDimensionError("HilbertDims needs at least one factor");
  for (int f : factors_) {
    if (f < 1) throw InvalidDimensionError("HilbertDims factor must be >= 1, got " + std::to_string(f));
  }
}

int HilbertDims::total() const noexcept {
  int t = 1;
  for (int f : factors_) t *= f;
  return factors_.empty() ? 0 : t;
}

HilbertDims HilbertDims::concat(const HilbertDims& other) const {
  std::vector<int> f = factors_;
  f.insert(f.end(), other.factors_.begin(), other.factors_.end());
  return HilbertDims(std::move(f));
}

Operator::Operator(HilbertDims dims, CMatrix matrix) : dims_(std::move(dims)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) throw DimensionMismatchError("operator matrix must be square");
  if (matrix_.rows() != dims_.total()) {
    std::ostringstream os;
    os << "operator of size " << matrix_.rows() << " does not match dims total " << dims_.total();
    throw DimensionMismatchError(os.str());
  }
}

Operator Operator::adjoint() const { return Operator(dims_, matrix_.adjoint()); }

bool Operator::is_hermitian(double tol) const {
  return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

namespace {

void require_same_dims(const HilbertDims& a, const HilbertDims& b, const char* what) {
  if (!(a == b)) throw DimensionMismatchError(std::string(what) + ": operand dims differ");
}

}  // namespace

Operator Operator::operator+(const Operator& rhs) const {
  require_same_dims(dims_, rhs.dims_, "operator+");
  return Operator(dims_, matrix_ + rhs.matrix_);
}

Operator Operator::operator-(const Operator& rhs) const {
  require_same_dims(dims_, rhs.dims_, "operator-");
  return Operator(dims_, matrix_ - rhs.matrix_);
}

Operator Operator::operator*(const Operator& rhs) const {
  require_same_dims(dims_, rhs.dims_, "operator*");
  return Operator(dims_, matrix_ * rhs.matrix_);
}

Operator Operator::operator*(complex s) const { return Operator(dims_, matrix_ * s); }

bool Operator::operator==(const Operator& rhs) const {
  return dims_ == rhs.dims_ && matrix_ == rhs.matrix_;
}

DensityMatrix::DensityMatrix(HilbertDims dims, CMatrix matrix, const Tolerances& tol)
    : dims_(std::move(dims)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() != dims_.total()) {
    throw DimensionMismatchError("density matrix shape does not match dims");
  }
  const double herm = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol.hermiticity) {
    throw InvalidStateError("density matrix not Hermitian (deviation " + std::to_string(herm) + ")");
  }
  const complex tr = matrix_.trace();
  if (std::abs(tr - 1.0) > tol.trace) {
    throw InvalidStateError("density matrix trace " + std::to_string(tr.real()) + " != 1");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(matrix_, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  if (lo < -tol.eigenvalue) {
    throw InvalidStateError("density matrix has negative eigenvalue " + std::to_string(lo));
  }
}

DensityMatrix DensityMatrix::trusted(HilbertDims dims, CMatrix matrix) {
  DensityMatrix r;
  r.dims_ = std::move(dims);
  r.matrix_ = std::move(matrix);
  return r;
}

Operator identity(const HilbertDims& dims) {
  const int n = dims.total();
  return Operator(dims, CMatrix::Identity(n, n));
}

Operator identity(int d) { return identity(HilbertDims{d}); }

Operator annihilation(int N) {
  if (N < 2) throw InvalidDimensionError("Fock cutoff must be >= 2, got " + std::to_string(N));
  CMatrix b = CMatrix::Zero(N, N);
  for (int n = 1; n < N; ++n) b(n - 1, n) = std::sqrt(static_cast<double>(n));
  return Operator(HilbertDims{N}, std::move(b));
}

Operator creation(int N) { return annihilation(N).adjoint(); }

Operator number(int N) {
  if (N < 2) throw InvalidDimensionError("Fock cutoff must be >= 2, got " + std::to_string(N));
  CMatrix m = CMatrix::Zero(N, N);
  for (int n = 0; n < N; ++n) m(n, n) = static_cast<double>(n);
  return Operator(HilbertDims{N}, std::move(m));
}

Operator transition(int d, int i, int j) {
  if (d < 1) throw InvalidDimensionError("system dimension must be >= 1");
  if (i < 0 || j < 0 || i >= d || j >= d) {
    std::ostringstream os;
    os << "transition(" << d << ", " << i << ", " << j << "): index out of range";
    throw InvalidIndexError(os.str());
  }
  CMatrix m = CMatrix::Zero(d, d);
  m(i, j) = 1.0;
  return Operator(HilbertDims{d}, std::move(m));
}

Operator tensor(const Operator& a, const Operator& b) {
  CMatrix k = Eigen::kroneckerProduct(a.matrix(), b.matrix()).eval();
  return Operator(a.dims().concat(b.dims()), std::move(k));
}

Operator tensor(std::initializer_list<Operator> ops) {
  if (ops.size() == 0) throw InvalidDimensionError("tensor of empty list");
  auto it = ops.begin();
  Operator acc = *it++;
  for (; it != ops.end(); ++it) acc = tensor(acc, *it);
  return acc;
}

complex expectation(const Operator& op, const DensityMatrix& rho) {
  if (!(op.dims() == rho.dims())) throw DimensionMismatchError("expectation: operator and state dims differ");
  // tr(A B) = sum_ij A_ij B_ji, without forming the product.
  return op.matrix().cwiseProduct(rho.matrix().transpose()).sum();
}

DensityMatrix thermal_state(int N, double n_th) {
  if (N < 2) throw InvalidDimensionError("Fock cutoff must be >= 2, got " + std::to_string(N));
  if (!(n_th >= 0.0)) throw InvalidParameterError("thermal occupancy must be >= 0");
  CMatrix m = CMatrix::Zero(N, N);
  if (n_th == 0.0) {
    m(0, 0) = 1.0;
    return DensityMatrix(HilbertDims{N}, std::move(m));
  }
  const double x = n_th / (n_th + 1.0);
  std::vector<double> p(N);
  double w = 1.0, z = 0.0;
  for (int n = 0; n < N; ++n) {
    p[n] = w;
    z += w;
    w *= x;
  }
  for (int n = 0; n < N; ++n) m(n, n) = p[n] / z;
  return DensityMatrix(HilbertDims{N}, std::move(m));
}

DensityMatrix pure_state(const HilbertDims& dims, int index) {
  const int n = dims.total();
  if (index < 0 || index >= n) throw InvalidIndexError("pure_state index out of range");
  CMatrix m = CMatrix::Zero(n, n);
  m(index, index) = 1.0;
  return DensityMatrix(dims, std::move(m));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  CMatrix k = Eigen::kroneckerProduct(a.matrix(), b.matrix()).eval();
  return DensityMatrix::trusted(a.dims().concat(b.dims()), std::move(k));
}

}  // namespace phonocool
