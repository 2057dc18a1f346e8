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

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "phonocool/dynamics.hpp"

namespace phonocool::detail {

/// Subset of density-matrix entries (a, b) on which the generator is assembled.
struct Sector {
  int dim = 0;
  bool full = true;
  std::vector<std::pair<int, int>> entries;
  /// a + b*dim -> position in entries, or -1.
  std::vector<int> lookup;

  int size() const { return static_cast<int>(entries.size()); }
};

Sector full_sector(int dim);

/// Entries with charge[a] == charge[b], provided H conserves the charge and every
/// collapse operator shifts it by a fixed amount. Otherwise nullopt.
std::optional<Sector> charge_sector(const ModelInstance& m);

/// True when rho has no weight outside the sector.
bool state_in_sector(const CMatrix& rho, const Sector& s, double tol = 1e-14);

SparseMatrix assemble_generator(const ModelInstance& m, const Sector& s);

CVector restrict_to(const CMatrix& rho, const Sector& s);
CMatrix expand_from(const CVector& x, const Sector& s);

/// w such that tr(O rho) = w . x for x = restrict_to(rho).
CVector trace_weights(const Operator& op, const Sector& s);

double max_abs(const SparseMatrix& a);

}  // namespace phonocool::detail
