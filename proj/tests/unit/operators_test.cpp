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

TEST(Annihilation, TwoLevelLadder) {
  const Operator b = annihilation(2);
  CMatrix expected(2, 2);
  expected << 0, 1, 0, 0;
  EXPECT_EQ(b.matrix(), expected);
  EXPECT_EQ(b.dims(), HilbertDims({2}));
}

TEST(Annihilation, MatrixElement) {
  const Operator b = annihilation(3);
  EXPECT_DOUBLE_EQ(b.matrix()(1, 2).real(), std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(b.matrix()(0, 1).real(), 1.0);
  EXPECT_EQ(b.matrix()(2, 1), complex(0.0));
}

TEST(Annihilation, RejectsTooSmallCutoff) {
  EXPECT_THROW(annihilation(1), InvalidDimensionError);
  EXPECT_THROW(annihilation(0), InvalidDimensionError);
}

TEST(Annihilation, CanonicalCommutatorBelowTruncation) {
  const int N = 20;
  const CMatrix b = annihilation(N).matrix();
  const CMatrix c = b * b.adjoint() - b.adjoint() * b;
  for (int n = 0; n < N - 1; ++n) {
    EXPECT_NEAR(std::abs(c(n, n) - 1.0), 0.0, 1e-12) << "n = " << n;
    for (int m = 0; m < N; ++m) {
      if (m != n) EXPECT_EQ(c(n, m), complex(0.0));
    }
  }
  EXPECT_NEAR(c(N - 1, N - 1).real(), -(N - 1.0), 1e-12);
}

TEST(Annihilation, CreationAndNumber) {
  const int N = 7;
  EXPECT_EQ(creation(N).matrix(), annihilation(N).matrix().adjoint());
  const CMatrix n = number(N).matrix();
  for (int k = 0; k < N; ++k) EXPECT_DOUBLE_EQ(n(k, k).real(), k);
}

TEST(Transition, UnitEntry) {
  const CMatrix s = transition(3, 0, 1).matrix();
  EXPECT_EQ(s(0, 1), complex(1.0));
  EXPECT_EQ(s.cwiseAbs().sum(), 1.0);
}

TEST(Transition, PopulationIsProjector) {
  const Operator p = transition(3, 2, 2);
  EXPECT_EQ((p * p).matrix(), p.matrix());
}

TEST(Transition, ProductRule) {
  EXPECT_EQ((transition(3, 0, 1) * transition(3, 1, 0)).matrix(), transition(3, 0, 0).matrix());
}

TEST(Transition, AdjointSwapsIndices) {
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) EXPECT_EQ(transition(4, i, j).adjoint(), transition(4, j, i));
  }
}

TEST(Transition, RejectsOutOfRange) {
  EXPECT_THROW(transition(3, 3, 0), InvalidIndexError);
  EXPECT_THROW(transition(3, 0, -1), InvalidIndexError);
}

TEST(Tensor, IdentityFactors) {
  const Operator t = tensor(identity(3), identity(2));
  EXPECT_EQ(t.matrix(), CMatrix::Identity(6, 6));
  EXPECT_EQ(t.dims(), HilbertDims({3, 2}));
}

TEST(Tensor, SingleNonzeroEntry) {
  const Operator t = tensor(transition(3, 1, 2), creation(2));
  int nonzero = 0;
  for (Eigen::Index i = 0; i < t.matrix().size(); ++i) nonzero += t.matrix().data()[i] != complex(0.0);
  EXPECT_EQ(nonzero, 1);
  // |1,1><2,0| in the row-major product basis (system index * N + fock index).
  EXPECT_EQ(t.matrix()(1 * 2 + 1, 2 * 2 + 0), complex(1.0));
}

TEST(Tensor, MixedProduct) {
  std::mt19937_64 rng(7);
  const Operator a(HilbertDims{3}, testing::random_matrix(rng, 3));
  const Operator b(HilbertDims{4}, testing::random_matrix(rng, 4));
  const CMatrix lhs = (tensor(a, identity(4)) * tensor(identity(3), b)).matrix();
  EXPECT_LT((lhs - tensor(a, b).matrix()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Tensor, AssociativeExactly) {
  // Small-integer entries keep every product exact, so association order cannot matter.
  std::mt19937_64 rng(11);
  auto integer_matrix = [&rng](int n) {
    std::uniform_int_distribution<int> d(-4, 4);
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) m(i, j) = complex(d(rng), d(rng));
    }
    return m;
  };
  const Operator a(HilbertDims{2}, integer_matrix(2));
  const Operator b(HilbertDims{3}, integer_matrix(3));
  const Operator c(HilbertDims{2}, integer_matrix(2));
  EXPECT_EQ(tensor(tensor(a, b), c), tensor(a, tensor(b, c)));
  EXPECT_EQ(tensor({a, b, c}), tensor(a, tensor(b, c)));
  EXPECT_EQ(tensor(a, b).dims(), HilbertDims({2, 3}));
}

TEST(Expectation, IdentityIsOne) {
  std::mt19937_64 rng(3);
  const DensityMatrix rho(HilbertDims{5}, testing::random_density(rng, 5));
  EXPECT_NEAR(expectation(identity(5), rho).real(), 1.0, 1e-12);
}

TEST(Expectation, ThermalPhononNumber) {
  const DensityMatrix rho = thermal_state(60, 5.0);
  const double n = expectation(number(60), rho).real();
  EXPECT_NEAR(n, 5.0, 0.05);
  EXPECT_NEAR(n, testing::truncated_thermal_mean(5.0, 60), 1e-10);
}

TEST(Expectation, OrthogonalPopulation) {
  const DensityMatrix g = pure_state(HilbertDims{3}, 0);
  EXPECT_EQ(expectation(transition(3, 2, 2), g), complex(0.0));
}

TEST(Expectation, HermitianIsReal) {
  std::mt19937_64 rng(5);
  const DensityMatrix rho(HilbertDims{4}, testing::random_density(rng, 4));
  const Operator h(HilbertDims{4}, testing::random_hermitian(rng, 4));
  const complex v = expectation(h, rho);
  EXPECT_LT(std::abs(v.imag()), 1e-10);
  EXPECT_NEAR(v.real(), (h.matrix() * rho.matrix()).trace().real(), 1e-12);
}

TEST(Expectation, DimensionMismatch) {
  EXPECT_THROW(expectation(identity(3), thermal_state(4, 1.0)), DimensionMismatchError);
}

TEST(ThermalState, ZeroTemperatureIsGround) {
  const DensityMatrix rho = thermal_state(6, 0.0);
  EXPECT_EQ(rho.matrix(), pure_state(HilbertDims{6}, 0).matrix());
}

TEST(ThermalState, GroundWeight) {
  const double x = 5.0 / 6.0;
  const double p0 = (1.0 / 6.0) / (1.0 - std::pow(x, 60));
  const DensityMatrix rho = thermal_state(60, 5.0);
  EXPECT_NEAR(rho.matrix()(0, 0).real(), p0, 1e-14);
  EXPECT_NEAR(p0, 0.16668, 5e-5);
}

TEST(ThermalState, PositiveDecreasingValidState) {
  const DensityMatrix rho = thermal_state(30, 2.0);
  for (int n = 0; n < 30; ++n) {
    EXPECT_GT(rho.matrix()(n, n).real(), 0.0);
    if (n > 0) EXPECT_LT(rho.matrix()(n, n).real(), rho.matrix()(n - 1, n - 1).real());
  }
  EXPECT_NO_THROW(DensityMatrix(rho.dims(), rho.matrix()));
}

TEST(ThermalState, RejectsNegativeOccupancy) { EXPECT_THROW(thermal_state(5, -0.1), InvalidParameterError); }

TEST(DensityMatrixTest, ValidatesInvariants) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  EXPECT_NO_THROW(DensityMatrix(HilbertDims{2}, m));
  CMatrix nonherm = m;
  nonherm(0, 1) = 0.1;
  EXPECT_THROW(DensityMatrix(HilbertDims{2}, nonherm), InvalidStateError);
  EXPECT_THROW(DensityMatrix(HilbertDims{2}, 2.0 * m), InvalidStateError);
  CMatrix negative = CMatrix::Zero(2, 2);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  EXPECT_THROW(DensityMatrix(HilbertDims{2}, negative), InvalidStateError);
  EXPECT_THROW(DensityMatrix(HilbertDims{3}, m), DimensionMismatchError);
}

TEST(HilbertDimsTest, TotalAndConcat) {
  const HilbertDims d{3, 4};
  EXPECT_EQ(d.total(), 12);
  EXPECT_EQ(d.concat(HilbertDims{2}), HilbertDims({3, 4, 2}));
  EXPECT_THROW(HilbertDims({3, 0}), InvalidDimensionError);
}

}  // namespace
}  // namespace phonocool
