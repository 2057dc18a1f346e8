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

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "phonocool/cooling.hpp"
#include "phonocool/errors.hpp"

namespace phonocool {

double stretched_exponential(double t, double gamma_eff, double beta, double n_initial, double n_s) {
  const double s = t > 0.0 ? std::pow(gamma_eff * t, beta) : 0.0;
  return (n_initial - n_s) * std::exp(-s) + n_s;
}

namespace {

// Parameters are (u, beta) with gamma_eff = exp(u); beta lives in [beta_min, 1].
struct Problem {
  const std::vector<double>& t;
  const std::vector<double>& y;
  std::vector<double> w;  // 1 / residual scale
  double amp;
  double n_s;

  double residuals(const Eigen::Vector2d& p, Eigen::VectorXd* r, Eigen::MatrixXd* J) const {
    const double gamma = std::exp(p[0]);
    const double beta = p[1];
    const size_t n = t.size();
    if (r) r->resize(static_cast<Eigen::Index>(n));
    if (J) J->resize(static_cast<Eigen::Index>(n), 2);
    double cost = 0.0;
    for (size_t i = 0; i < n; ++i) {
      double f = amp + n_s, du = 0.0, db = 0.0;
      if (t[i] > 0.0) {
        const double lg = std::log(gamma * t[i]);
        const double s = std::exp(beta * lg);
        const double e = amp * std::exp(-s);
        f = e + n_s;
        du = -e * s * beta;
        db = -e * s * lg;
      }
      const double ri = (f - y[i]) * w[i];
      cost += ri * ri;
      if (r) (*r)[static_cast<Eigen::Index>(i)] = ri;
      if (J) {
        (*J)(static_cast<Eigen::Index>(i), 0) = du * w[i];
        (*J)(static_cast<Eigen::Index>(i), 1) = db * w[i];
      }
    }
    return 0.5 * cost;
  }
};

struct LmOutcome {
  Eigen::Vector2d p;
  double cost;
  int iterations;
  bool converged;
};

LmOutcome levenberg_marquardt(const Problem& pr, Eigen::Vector2d p, double beta_min, int max_iter) {
  Eigen::VectorXd r;
  Eigen::MatrixXd J;
  double cost = pr.residuals(p, &r, &J);
  double lambda = 1e-3;
  bool converged = false;
  int it = 0;
  for (; it < max_iter && std::isfinite(cost); ++it) {
    const Eigen::Matrix2d A = J.transpose() * J;
    const Eigen::Vector2d grad = J.transpose() * r;
    // Freeze beta while it sits on a bound and the gradient pushes it outward.
    const bool at_hi = p[1] >= 1.0 && grad[1] < 0.0;
    const bool at_lo = p[1] <= beta_min && grad[1] > 0.0;
    const bool frozen = at_hi || at_lo;

    bool improved = false;
    for (int tries = 0; tries < 40 && !improved; ++tries) {
      Eigen::Vector2d step = Eigen::Vector2d::Zero();
      if (frozen) {
        const double a = A(0, 0) * (1.0 + lambda);
        if (a > 0.0) step[0] = -grad[0] / a;
      } else {
        Eigen::Matrix2d M = A;
        M(0, 0) *= 1.0 + lambda;
        M(1, 1) *= 1.0 + lambda;
        M(0, 0) += 1e-300;
        M(1, 1) += 1e-300;
        step = M.ldlt().solve(-grad);
      }
      Eigen::Vector2d q = p + step;
      q[1] = std::clamp(q[1], beta_min, 1.0);
      if (!q.allFinite()) {
        lambda *= 10.0;
        continue;
      }
      Eigen::VectorXd rq;
      Eigen::MatrixXd Jq;
      const double cq = pr.residuals(q, &rq, &Jq);
      if (std::isfinite(cq) && cq <= cost) {
        const double rel_change = (cost - cq) / std::max(cost, 1e-300);
        const double step_size = (q - p).cwiseAbs().maxCoeff();
        p = q;
        r = std::move(rq);
        J = std::move(Jq);
        cost = cq;
        lambda = std::max(lambda / 3.0, 1e-12);
        improved = true;
        if (step_size < 1e-12 || rel_change < 1e-14 || cost == 0.0) converged = true;
      } else {
        lambda *= 4.0;
      }
    }
    if (!improved) {
      // No descent direction left at this damping: a stationary point.
      converged = true;
      break;
    }
    if (converged) break;
  }
  return {p, cost, it, converged};
}

}  // namespace

FitResult fit_stretched_exponential(const std::vector<double>& t, const std::vector<double>& y, double n_initial,
                                    double n_s, const FitOptions& options) {
  if (t.size() != y.size()) throw InvalidParameterError("fit: time and value lengths differ");
  if (t.size() < 3) throw InvalidParameterError("fit: need at least 3 samples");
  if (!(options.beta_min > 0.0 && options.beta_min < 1.0)) throw InvalidParameterError("fit: beta_min must be in (0, 1)");

  FitResult out;
  out.steady_value = n_s;
  out.initial_value = n_initial;
  const double amp = n_initial - n_s;
  if (amp == 0.0 || !std::isfinite(amp)) {
    out.warnings.push_back("no decay: initial value equals the steady value");
    out.gamma_eff = std::numeric_limits<double>::quiet_NaN();
    return out;
  }

  Problem pr{t, y, {}, amp, n_s};
  pr.w.resize(t.size());
  for (size_t i = 0; i < t.size(); ++i) {
    pr.w[i] = (options.relative_residuals && y[i] != 0.0) ? 1.0 / std::abs(y[i]) : 1.0;
  }

  double t_lo = std::numeric_limits<double>::infinity(), t_hi = 0.0;
  for (double ti : t) {
    if (ti > 0.0) {
      t_lo = std::min(t_lo, ti);
      t_hi = std::max(t_hi, ti);
    }
  }
  if (!(t_hi > 0.0)) throw InvalidParameterError("fit: need positive sample times");

  // Decay coverage: the distance to the floor should shrink by 100x.
  double first = std::abs(y.front() - n_s), last = std::abs(y.back() - n_s);
  if (!(last <= 1e-2 * first)) out.warnings.push_back("trace covers less than two decades of decay");

  LmOutcome best{Eigen::Vector2d::Zero(), std::numeric_limits<double>::infinity(), 0, false};
  const int ng = std::max(2, options.gamma_starts);
  const double lg_lo = std::log(0.1 / t_hi), lg_hi = std::log(10.0 / t_lo);
  for (int k = 0; k < ng; ++k) {
    const double u = lg_lo + (lg_hi - lg_lo) * k / (ng - 1);
    for (double b0 : options.beta_starts) {
      Eigen::Vector2d p0(u, std::clamp(b0, options.beta_min, 1.0));
      const LmOutcome o = levenberg_marquardt(pr, p0, options.beta_min, options.max_iterations);
      if (o.cost < best.cost) best = o;
    }
  }

  out.gamma_eff = std::exp(best.p[0]);
  out.beta = best.p[1];
  out.cost = best.cost;
  out.iterations = best.iterations;
  out.converged = best.converged && std::isfinite(best.cost);
  out.beta_at_bound = out.beta >= 1.0 || out.beta <= options.beta_min;
  if (out.beta_at_bound) {
    std::ostringstream os;
    os << "beta pinned at bound " << out.beta;
    out.warnings.push_back(os.str());
  }
  double acc = 0.0;
  int used = 0;
  for (size_t i = 0; i < t.size(); ++i) {
    if (y[i] == 0.0) continue;
    acc += std::abs((stretched_exponential(t[i], out.gamma_eff, out.beta, n_initial, n_s) - y[i]) / y[i]);
    ++used;
  }
  out.mape = used ? 100.0 * acc / used : 0.0;
  return out;
}

FitResult fit_stretched_exponential(const EvolutionTrace& trace, double n_initial, double n_s,
                                    const FitOptions& options) {
  return fit_stretched_exponential(trace.times, trace.phonon_number, n_initial, n_s, options);
}

}  // namespace phonocool
