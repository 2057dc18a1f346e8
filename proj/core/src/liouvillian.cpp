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
#include <complex>
#include <vector>

#include "generator.hpp"
#include "phonocool/errors.hpp"

namespace phonocool {
namespace detail {
namespace {

// One contribution A X B to the generator, stored as A and B^T so both
// factors are walked column by column.
struct Sandwich {
  SparseMatrix a;
  SparseMatrix bt;
};

using Triplet = Eigen::Triplet<complex>;

SparseMatrix sparse_of(const CMatrix& m) { return m.sparseView(0.0, 0.0); }

std::vector<Sandwich> sandwiches(const ModelInstance& m) {
  const int D = m.dims.total();
  SparseMatrix id(D, D);
  id.setIdentity();
  const complex I(0.0, 1.0);

  const SparseMatrix h = sparse_of(m.hamiltonian.matrix());
  std::vector<Sandwich> terms;
  // i[rho, H] = (-iH) rho + rho (iH)
  terms.push_back({(-I * h).eval(), id});
  terms.push_back({id, SparseMatrix((I * h).transpose())});

  for (const auto& c : m.collapse_terms) {
    if (c.rate == 0.0) continue;
    const SparseMatrix o = sparse_of(c.op.matrix());
    const SparseMatrix od = o.adjoint();
    const SparseMatrix odo = (od * o).pruned();
    terms.push_back({(c.rate * o).eval(), SparseMatrix(od.transpose())});
    terms.push_back({(-0.5 * c.rate * odo).eval(), id});
    terms.push_back({id, SparseMatrix((-0.5 * c.rate * odo).transpose())});
  }
  return terms;
}

bool conserves(const CMatrix& m, const std::vector<int>& q, int* shift) {
  bool seen = false;
  for (Eigen::Index b = 0; b < m.cols(); ++b) {
    for (Eigen::Index a = 0; a < m.rows(); ++a) {
      if (m(a, b) == 0.0) continue;
      const int s = q[a] - q[b];
      if (!seen) {
        *shift = s;
        seen = true;
      } else if (s != *shift) {
        return false;
      }
    }
  }
  if (!seen) *shift = 0;
  return true;
}

}  // namespace

Sector full_sector(int dim) {
  Sector s;
  s.dim = dim;
  s.full = true;
  s.entries.reserve(static_cast<size_t>(dim) * dim);
  s.lookup.resize(static_cast<size_t>(dim) * dim);
  for (int b = 0; b < dim; ++b) {
    for (int a = 0; a < dim; ++a) {
      s.lookup[a + static_cast<size_t>(b) * dim] = static_cast<int>(s.entries.size());
      s.entries.emplace_back(a, b);
    }
  }
  return s;
}

std::optional<Sector> charge_sector(const ModelInstance& m) {
  const int D = m.dims.total();
  if (static_cast<int>(m.charge.size()) != D) return std::nullopt;
  int shift = 0;
  if (!conserves(m.hamiltonian.matrix(), m.charge, &shift) || shift != 0) return std::nullopt;
  for (const auto& c : m.collapse_terms) {
    if (c.rate == 0.0) continue;
    if (!conserves(c.op.matrix(), m.charge, &shift)) return std::nullopt;
  }
  Sector s;
  s.dim = D;
  s.full = false;
  s.lookup.assign(static_cast<size_t>(D) * D, -1);
  for (int b = 0; b < D; ++b) {
    for (int a = 0; a < D; ++a) {
      if (m.charge[a] != m.charge[b]) continue;
      s.lookup[a + static_cast<size_t>(b) * D] = static_cast<int>(s.entries.size());
      s.entries.emplace_back(a, b);
    }
  }
  return s;
}

bool state_in_sector(const CMatrix& rho, const Sector& s, double tol) {
  if (s.full) return true;
  for (int b = 0; b < s.dim; ++b) {
    for (int a = 0; a < s.dim; ++a) {
      if (s.lookup[a + static_cast<size_t>(b) * s.dim] < 0 && std::abs(rho(a, b)) > tol) return false;
    }
  }
  return true;
}

SparseMatrix assemble_generator(const ModelInstance& m, const Sector& s) {
  const auto terms = sandwiches(m);
  const int n = s.size();
  const size_t D = static_cast<size_t>(s.dim);
  std::vector<Triplet> trips;
  trips.reserve(static_cast<size_t>(n) * 12);
  for (int col = 0; col < n; ++col) {
    const auto [c, d] = s.entries[col];
    // (A E_cd B)(a, b) = A(a, c) * B(d, b)
    for (const auto& t : terms) {
      for (SparseMatrix::InnerIterator ia(t.a, c); ia; ++ia) {
        for (SparseMatrix::InnerIterator ib(t.bt, d); ib; ++ib) {
          const int row = s.lookup[static_cast<size_t>(ia.row()) + static_cast<size_t>(ib.row()) * D];
          if (row < 0) {
            throw InvalidStateError("generator maps the symmetry sector outside itself");
          }
          trips.emplace_back(row, col, ia.value() * ib.value());
        }
      }
    }
  }
  SparseMatrix L(n, n);
  L.setFromTriplets(trips.begin(), trips.end());
  L.prune(complex(0.0, 0.0));
  L.makeCompressed();
  return L;
}

CVector restrict_to(const CMatrix& rho, const Sector& s) {
  CVector x(s.size());
  for (int k = 0; k < s.size(); ++k) x[k] = rho(s.entries[k].first, s.entries[k].second);
  return x;
}

CMatrix expand_from(const CVector& x, const Sector& s) {
  CMatrix rho = CMatrix::Zero(s.dim, s.dim);
  for (int k = 0; k < s.size(); ++k) rho(s.entries[k].first, s.entries[k].second) = x[k];
  return rho;
}

CVector trace_weights(const Operator& op, const Sector& s) {
  CVector w(s.size());
  // tr(O rho) = sum_ab O(b, a) rho(a, b)
  for (int k = 0; k < s.size(); ++k) w[k] = op.matrix()(s.entries[k].second, s.entries[k].first);
  return w;
}

double max_abs(const SparseMatrix& a) {
  double m = 0.0;
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) m = std::max(m, std::abs(it.value()));
  }
  return m;
}

}  // namespace detail

Superoperator liouvillian(const ModelInstance& m) {
  return {m.dims, detail::assemble_generator(m, detail::full_sector(m.dims.total()))};
}

CVector vectorize(const CMatrix& rho) { return Eigen::Map<const CVector>(rho.data(), rho.size()); }

CMatrix unvectorize(const CVector& v, int dim) {
  if (v.size() != static_cast<Eigen::Index>(dim) * dim) throw DimensionMismatchError("unvectorize: size mismatch");
  return Eigen::Map<const CMatrix>(v.data(), dim, dim);
}

}  // namespace phonocool
