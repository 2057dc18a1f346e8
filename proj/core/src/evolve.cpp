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

#include <array>
#include <limits>
#include <cmath>
#include <map>
#include <memory>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/Polynomials>

#include "generator.hpp"
#include "phonocool/errors.hpp"

namespace phonocool {
namespace {

using detail::Sector;
using SparseLU = Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>;

double error_norm(const CVector& err, const CVector& y0, const CVector& y1, double rtol, double atol) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double e = std::abs(err[i]) / sc;
    acc += e * e;
  }
  return std::sqrt(acc / static_cast<double>(std::max<Eigen::Index>(err.size(), 1)));
}

[[noreturn]] void stiff(const std::string& what, double t) {
  std::ostringstream os;
  os << what << " at t = " << t
     << " ns; shorten the time span or switch to the implicit integrator (sparse exponential path)";
  throw StiffnessError(os.str(), t);
}

// Output times are reached exactly; stepping between them is adaptive.
class Stepper {
 public:
  virtual ~Stepper() = default;
  /// Advances x from t toward t_out; returns the time reached.
  virtual double advance(CVector& x, double t, double t_out) = 0;
  long steps() const { return steps_; }

 protected:
  long steps_ = 0;
};

class DormandPrince final : public Stepper {
 public:
  DormandPrince(const SparseMatrix& L, const EvolveOptions& o, double h0) : L_(L), o_(o), h_(h0) {}

  double advance(CVector& x, double t, double t_out) override {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
    (void)c2, (void)c3, (void)c4, (void)c5;

    while (t < t_out) {
      if (steps_ >= o_.max_steps) stiff("explicit integrator exceeded max_steps", t);
      const double h = std::min(h_, t_out - t);
      if (h <= 1e-14 * std::max(1.0, std::abs(t))) stiff("step size underflow", t);
      const CVector k1 = L_ * x;
      const CVector k2 = L_ * (x + h * a21 * k1);
      const CVector k3 = L_ * (x + h * (a31 * k1 + a32 * k2));
      const CVector k4 = L_ * (x + h * (a41 * k1 + a42 * k2 + a43 * k3));
      const CVector k5 = L_ * (x + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      const CVector k6 = L_ * (x + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      const CVector y = x + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      const CVector k7 = L_ * y;
      const CVector err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      const double en = error_norm(err, x, y, o_.rtol, o_.atol);
      ++steps_;
      const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
      if (en <= 1.0) {
        x = y;
        t += h;
        if (h == h_ || fac < 1.0) h_ = h * fac;
      } else {
        h_ = h * std::min(fac, 0.9);
      }
    }
    return t;
  }

 private:
  const SparseMatrix& L_;
  const EvolveOptions& o_;
  double h_;
};

// For a linear autonomous generator the three-stage Radau IIA collocation step
// reduces to its stability function, the (2,3) Pade approximant of exp:
//   R(z) = (1 + 2z/5 + z^2/20) / (1 - 3z/5 + 3z^2/20 - z^3/60).
// The denominator factors as prod_i (1 - z/r_i) over the roots of
// z^3 - 9z^2 + 36z - 60, giving three shifted sparse solves per step.
class RadauLinear final : public Stepper {
 public:
  RadauLinear(const SparseMatrix& L, const EvolveOptions& o, double h0) : L_(L), o_(o) {
    Eigen::Vector4d coeffs(-60.0, 36.0, -9.0, 1.0);
    Eigen::PolynomialSolver<double, 3> solver(coeffs);
    for (int i = 0; i < 3; ++i) roots_[i] = solver.roots()[i];
    id_.resize(L.rows(), L.cols());
    id_.setIdentity();
    k_ = static_cast<int>(std::floor(4.0 * std::log2(h0)));
  }

  double advance(CVector& x, double t, double t_out) override {
    while (t < t_out) {
      if (steps_ >= o_.max_steps) stiff("implicit integrator exceeded max_steps", t);
      const double hk = step_of(k_);
      if (hk >= t_out - t) {
        // Final partial step onto the output time: no estimate, uncached factors.
        const double h = t_out - t;
        if (h > 1e-15 * std::max(1.0, std::abs(t))) {
          Factors f = factorize(h);
          x = apply(f, h, x);
          ++steps_;
        }
        return t_out;
      }
      const CVector full = apply(cached(k_), hk, x);
      const CVector half = apply(cached(k_ - 4), 0.5 * hk, x);
      const CVector two = apply(cached(k_ - 4), 0.5 * hk, half);
      const CVector err = (two - full) / 31.0;
      const double en = error_norm(err, x, two, o_.rtol, o_.atol);
      ++steps_;
      if (en <= 1.0) {
        x = two;
        t += hk;
        const double fac = en == 0.0 ? 2.0 : std::min(2.0, 0.9 * std::pow(en, -1.0 / 6.0));
        k_ += std::max(0, static_cast<int>(std::floor(4.0 * std::log2(fac))));
      } else {
        const double fac = std::max(0.1, 0.9 * std::pow(en, -1.0 / 6.0));
        k_ += std::min(-1, static_cast<int>(std::floor(4.0 * std::log2(fac))));
        if (step_of(k_) <= 1e-14 * std::max(1.0, std::abs(t))) stiff("step size underflow", t);
      }
    }
    return t;
  }

 private:
  using Factors = std::array<std::shared_ptr<SparseLU>, 3>;

  static double step_of(int k) { return std::exp2(0.25 * k); }

  Factors factorize(double h) const {
    Factors f;
    for (int i = 0; i < 3; ++i) {
      SparseMatrix A = id_ - (h / roots_[i]) * L_;
      A.makeCompressed();
      f[i] = std::make_shared<SparseLU>();
      f[i]->analyzePattern(A);
      f[i]->factorize(A);
      if (f[i]->info() != Eigen::Success) stiff("implicit stage matrix is singular", 0.0);
    }
    return f;
  }

  const Factors& cached(int k) {
    auto it = cache_.find(k);
    if (it != cache_.end()) return it->second;
    if (cache_.size() > 24) cache_.clear();
    return cache_.emplace(k, factorize(step_of(k))).first->second;
  }

  CVector apply(const Factors& f, double h, const CVector& x) const {
    const CVector lx = L_ * x;
    CVector y = x + (0.4 * h) * lx + (h * h / 20.0) * (L_ * lx);
    for (int i = 0; i < 3; ++i) y = f[i]->solve(y);
    return y;
  }

  const SparseMatrix& L_;
  const EvolveOptions& o_;
  std::array<complex, 3> roots_;
  SparseMatrix id_;
  int k_ = 0;
  std::map<int, Factors> cache_;
};

class Spectral final : public Stepper {
 public:
  /// Leaves valid() false when the eigenbasis cannot represent x0 to atol:
  /// the expansion is rejected when its coefficients cancel beyond that.
  Spectral(const SparseMatrix& L, const CVector& x0, const EvolveOptions& o) {
    if (L.rows() > o.spectral_max_dim) return;
    const CMatrix A = CMatrix(L);
    Eigen::ComplexEigenSolver<CMatrix> es(A);
    if (es.info() != Eigen::Success) return;
    V_ = es.eigenvectors();
    lambda_ = es.eigenvalues();
    lu_.compute(V_);
    if (!lu_.isInvertible()) return;
    const double backward = (A * V_ - V_ * lambda_.asDiagonal()).norm() / std::max(A.norm() * V_.norm(), 1e-300);
    const CVector c0 = lu_.solve(x0);
    const double eps = std::numeric_limits<double>::epsilon();
    const double cancellation = eps * std::sqrt(static_cast<double>(x0.size())) * c0.cwiseAbs().sum();
    const double recon = (V_ * c0 - x0).cwiseAbs().maxCoeff();
    valid_ = backward <= 1e-10 && std::isfinite(cancellation) && cancellation <= o.atol && recon <= o.atol;
  }

  bool valid() const { return valid_; }

  double advance(CVector& x, double t, double t_out) override {
    if (t_out > t) {
      const CVector c = lu_.solve(x);
      x = V_ * (c.array() * (lambda_.array() * (t_out - t)).exp()).matrix();
      ++steps_;
    }
    return t_out;
  }

 private:
  CMatrix V_;
  CVector lambda_;
  Eigen::FullPivLU<CMatrix> lu_;
  bool valid_ = false;
};

}  // namespace

DensityMatrix ground_thermal_state(const ModelInstance& m) {
  const DensityMatrix sys = pure_state(HilbertDims{m.system_dim}, 0);
  return tensor(sys, thermal_state(m.fock_cutoff, m.n_th));
}

EvolutionTrace evolve(const ModelInstance& m, const DensityMatrix& rho0, const std::vector<double>& times,
                      const EvolveOptions& options) {
  if (!(rho0.dims() == m.dims)) throw DimensionMismatchError("evolve: initial state dims do not match the model");
  for (size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || times[i] < 0.0 || (i > 0 && times[i] < times[i - 1])) {
      throw InvalidParameterError("evolve: times must be finite, >= 0 and non-decreasing");
    }
  }
  if (!(options.rtol > 0.0) || !(options.atol > 0.0)) throw InvalidParameterError("evolve: tolerances must be > 0");

  std::optional<Sector> sector;
  if (options.use_symmetry) {
    sector = detail::charge_sector(m);
    if (sector && !detail::state_in_sector(rho0.matrix(), *sector)) sector.reset();
  }
  if (!sector) sector = detail::full_sector(m.dims.total());
  const Sector& s = *sector;

  const SparseMatrix L = detail::assemble_generator(m, s);
  CVector x = detail::restrict_to(rho0.matrix(), s);

  std::map<std::string, CVector> weights;
  for (const auto& [name, op] : m.observables) weights.emplace(name, detail::trace_weights(op, s));

  const double lnorm = std::max(detail::max_abs(L), 1e-300);
  double h0 = options.initial_step > 0.0 ? options.initial_step : 0.01 / lnorm;
  if (!times.empty() && times.back() > 0.0) h0 = std::min(h0, times.back());
  EvolutionTrace tr;
  std::unique_ptr<Stepper> stepper;
  if (options.integrator == Integrator::kSpectral) {
    auto sp = std::make_unique<Spectral>(L, x, options);
    if (sp->valid()) {
      stepper = std::move(sp);
      tr.integrator_used = Integrator::kSpectral;
    }
  } else if (options.integrator == Integrator::kDormandPrince45) {
    stepper = std::make_unique<DormandPrince>(L, options, h0);
    tr.integrator_used = Integrator::kDormandPrince45;
  }
  if (!stepper) stepper = std::make_unique<RadauLinear>(L, options, h0);

  for (const auto& [name, w] : weights) {
    if (name != "phonon_number") tr.populations[name].reserve(times.size());
  }
  double t = 0.0;
  for (double t_out : times) {
    t = stepper->advance(x, t, t_out);
    tr.times.push_back(t_out);
    for (const auto& [name, w] : weights) {
      const double v = w.cwiseProduct(x).sum().real();
      if (name == "phonon_number") tr.phonon_number.push_back(v);
      else tr.populations[name].push_back(v);
    }
    if (options.stop && options.stop(t_out, tr.phonon_number.back())) {
      tr.stopped_early = true;
      break;
    }
  }
  tr.steps = stepper->steps();
  CMatrix rho = detail::expand_from(x, s);
  tr.final_rho = DensityMatrix::trusted(m.dims, (0.5 * (rho + rho.adjoint())).eval());
  return tr;
}

}  // namespace phonocool
