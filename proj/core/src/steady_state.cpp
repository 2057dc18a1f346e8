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
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SparseLU>

#include "generator.hpp"
#include "phonocool/errors.hpp"

namespace phonocool {
namespace {

using detail::Sector;

struct BorderedSystem {
  SparseMatrix matrix;
  int border_row;
};

BorderedSystem border(const SparseMatrix& L, const Sector& s) {
  // The (0,0) population row is a combination of the other population rows
  // (trace preservation), so it can carry the normalization instead.
  const int r0 = s.lookup[0];
  SparseMatrix A = L;
  A.prune([r0](const Eigen::Index& row, const Eigen::Index&, const complex&) { return row != r0; });
  std::vector<Eigen::Triplet<complex>> trips;
  for (int k = 0; k < s.size(); ++k) {
    if (s.entries[k].first == s.entries[k].second) trips.emplace_back(r0, k, 1.0);
  }
  SparseMatrix T(L.rows(), L.cols());
  T.setFromTriplets(trips.begin(), trips.end());
  A += T;
  A.makeCompressed();
  return {A, r0};
}

[[noreturn]] void diagnose_failure(const SparseMatrix& L, const SparseMatrix& A, const std::string& why) {
  const CMatrix dense_l = CMatrix(L);
  Eigen::ColPivHouseholderQR<CMatrix> qr_l(dense_l);
  qr_l.setThreshold(1e-10);
  const int nullity = static_cast<int>(dense_l.cols() - qr_l.rank());
  if (nullity > 1) {
    std::ostringstream os;
    os << "steady state is not unique: generator null space has dimension " << nullity;
    throw DegenerateSteadyStateError(os.str(), nullity);
  }
  Eigen::ColPivHouseholderQR<CMatrix> qr_a{CMatrix(A)};
  const auto diag = qr_a.matrixQR().diagonal().cwiseAbs();
  const double lo = diag.minCoeff();
  const double cond = lo > 0.0 ? diag.maxCoeff() / lo : std::numeric_limits<double>::infinity();
  std::ostringstream os;
  os << "bordered steady-state system could not be solved (" << why << "); condition estimate " << cond;
  throw SingularSystemError(os.str(), cond);
}

// Lowest eigenvalue of the Hermitian part, blockwise when the state is
// block diagonal in the charge.
double min_eigenvalue(const CMatrix& rho, const ModelInstance& m, bool blockwise) {
  if (!blockwise) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }
  std::map<int, std::vector<int>> blocks;
  for (int a = 0; a < static_cast<int>(m.charge.size()); ++a) blocks[m.charge[a]].push_back(a);
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& [q, idx] : blocks) {
    const int n = static_cast<int>(idx.size());
    CMatrix blk(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) blk(i, j) = rho(idx[i], idx[j]);
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(blk, Eigen::EigenvaluesOnly);
    lo = std::min(lo, es.eigenvalues().minCoeff());
  }
  return lo;
}

// ||A||_1 times a probe of ||A^-1|| from a few solves with fixed
// pseudo-random right-hand sides. A near-singular bordered matrix (a
// degenerate null space) shows up as a huge value.
template <class Solver>
double condition_estimate(const SparseMatrix& A, const Solver& lu) {
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double inv = 0.0;
  for (int probe = 0; probe < 2; ++probe) {
    CVector v(A.rows());
    for (Eigen::Index k = 0; k < v.size(); ++k) v[k] = complex(u(rng), u(rng));
    const CVector w = lu.solve(v);
    inv = std::max(inv, w.norm() / v.norm());
  }
  double norm1 = 0.0;
  for (int k = 0; k < A.outerSize(); ++k) {
    double col = 0.0;
    for (SparseMatrix::InnerIterator it(A, k); it; ++it) col += std::abs(it.value());
    norm1 = std::max(norm1, col);
  }
  return norm1 * inv;
}

}  // namespace

SteadyStateResult steady_state(const ModelInstance& m, const SteadyStateOptions& options) {
  bool has_dissipation = false;
  for (const auto& c : m.collapse_terms) has_dissipation = has_dissipation || c.rate > 0.0;
  if (!has_dissipation) throw InvalidParameterError("steady_state needs at least one collapse term with rate > 0");

  std::optional<Sector> sector;
  if (options.use_symmetry) sector = detail::charge_sector(m);
  const bool reduced = sector.has_value();
  if (!reduced) sector = detail::full_sector(m.dims.total());
  const Sector& s = *sector;

  const SparseMatrix L = detail::assemble_generator(m, s);
  const BorderedSystem sys = border(L, s);
  CVector e = CVector::Zero(s.size());
  e[sys.border_row] = 1.0;

  CVector x;
  bool solved = false;
  std::string why;
  if (s.size() < options.dense_threshold) {
    Eigen::FullPivLU<CMatrix> lu{CMatrix(sys.matrix)};
    if (lu.isInvertible() && lu.rcond() > 1.0 / options.max_condition) {
      x = lu.solve(e);
      solved = true;
    } else {
      why = "dense LU reports a singular matrix";
    }
  } else {
    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(sys.matrix);
    lu.factorize(sys.matrix);
    if (lu.info() == Eigen::Success) {
      x = lu.solve(e);
      solved = lu.info() == Eigen::Success;
      if (!solved) why = "sparse LU solve failed";
      if (solved) {
        const double cond = condition_estimate(sys.matrix, lu);
        if (!(cond <= options.max_condition)) {
          solved = false;
          std::ostringstream os;
          os << "condition estimate " << cond << " above " << options.max_condition;
          why = os.str();
        }
      }
    } else {
      why = "sparse LU factorization failed: " + lu.lastErrorMessage();
    }
  }
  if (solved && !x.allFinite()) {
    solved = false;
    why = "non-finite solution";
  }

  const double scale = std::max(1.0, detail::max_abs(L));
  double residual = 0.0;
  if (solved) {
    residual = (L * x).norm();
    if (!(residual <= options.tolerance * scale)) {
      solved = false;
      std::ostringstream os;
      os << "residual " << residual << " above tolerance";
      why = os.str();
    }
  }
  if (!solved) diagnose_failure(L, sys.matrix, why);

  CMatrix rho = detail::expand_from(x, s);
  rho = (0.5 * (rho + rho.adjoint())).eval();

  SteadyStateResult r;
  r.used_symmetry = reduced;
  r.residual_norm = residual;
  r.fock_cutoff_used = m.fock_cutoff;
  r.min_eigenvalue = min_eigenvalue(rho, m, reduced);
  if (r.min_eigenvalue < -options.positivity_tolerance) {
    std::ostringstream os;
    os << "steady state has eigenvalue " << r.min_eigenvalue << " below -" << options.positivity_tolerance;
    throw PositivityError(os.str(), r.min_eigenvalue);
  }
  for (const auto& [name, op] : m.observables) {
    r.observables[name] = detail::trace_weights(op, s).cwiseProduct(x).sum().real();
  }
  r.phonon_number = r.observables.at("phonon_number");
  r.sigma00 = r.observables.at("sigma00");
  r.sigma22 = r.observables.at("sigma22");
  r.figure_of_merit = m.n_th > 0.0 ? r.phonon_number / m.n_th : std::numeric_limits<double>::quiet_NaN();
  if (m.fock_cutoff > 0) {
    double top = 0.0;
    for (int k = 0; k < m.system_dim; ++k) {
      const int a = k * m.fock_cutoff + m.fock_cutoff - 1;
      top += rho(a, a).real();
    }
    if (top > 1e-6) {
      std::ostringstream os;
      os << "population " << top << " in the highest Fock level; raise fock_cutoff";
      r.warnings.push_back(os.str());
    }
  }
  r.rho = DensityMatrix::trusted(m.dims, std::move(rho));
  return r;
}

SteadyStateResult steady_state(const ModelInstance& m, double tol) {
  SteadyStateOptions o;
  o.tolerance = tol;
  return steady_state(m, o);
}

SteadyStateResult converge_cutoff(const ModelParams& params, int start_N, double tol, const ConvergeOptions& options) {
  if (start_N < 4) throw InvalidParameterError("converge_cutoff: start_N must be >= 4");
  if (options.step < 1) throw InvalidParameterError("converge_cutoff: step must be >= 1");
  std::vector<std::pair<int, double>> seq;
  ModelParams p = params;
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (int N = start_N; N <= options.max_cutoff; N += options.step) {
    set_fock_cutoff(p, N);
    SteadyStateResult r = steady_state(build_model(p), options.solver);
    seq.emplace_back(N, r.phonon_number);
    if (std::isfinite(prev) && std::abs(r.phonon_number - prev) < tol * std::max(r.phonon_number, 1e-12)) {
      return r;
    }
    prev = r.phonon_number;
  }
  std::ostringstream os;
  os << "steady-state phonon number not converged by Fock cutoff " << options.max_cutoff << ":";
  for (const auto& [N, v] : seq) os << " N=" << N << "->" << v;
  throw TruncationError(os.str(), std::move(seq));
}

}  // namespace phonocool
