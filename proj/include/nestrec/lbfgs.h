// Copyright 2026 The Nestrec Authors.
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

// Limited-memory BFGS maximizer with a backtracking (Armijo) line search.
// Only steps that increase the objective are accepted, so the reported
// objective sequence is non-decreasing.

#ifndef NESTREC_LBFGS_H_
#define NESTREC_LBFGS_H_

#include <cmath>
#include <deque>
#include <functional>
#include <numeric>
#include <vector>

namespace nestrec {

struct LbfgsOptions {
  int max_iters = 200;
  // Stop when |f_k - f_{k-1}| / max(1, |f_k|) falls below this.
  double tol = 1e-5;
  int history = 10;
  int max_line_search = 40;
};

struct LbfgsResult {
  std::vector<double> objective;  // one entry per accepted iterate, f_0 first
  int iterations = 0;
  bool converged = false;
};

// `evaluate(x, grad)` returns f(x) and fills grad with df/dx.
template <typename Evaluate>
LbfgsResult MaximizeLbfgs(std::vector<double> &x, Evaluate &&evaluate,
                          const LbfgsOptions &options = {}) {
  const size_t n = x.size();
  auto dot = [n](const std::vector<double> &a, const std::vector<double> &b) {
    double sum = 0;
    for (size_t i = 0; i < n; ++i) sum += a[i] * b[i];
    return sum;
  };

  LbfgsResult result;
  std::vector<double> grad(n), next_x(n), next_grad(n), dir(n);
  double f = evaluate(x, grad);
  result.objective.push_back(f);

  std::deque<std::vector<double>> s_hist, y_hist;
  std::deque<double> rho_hist;

  for (int iter = 0; iter < options.max_iters; ++iter) {
    // Two-loop recursion on the ascent direction.
    dir = grad;
    std::vector<double> alpha(s_hist.size());
    for (int k = static_cast<int>(s_hist.size()) - 1; k >= 0; --k) {
      alpha[k] = rho_hist[k] * dot(s_hist[k], dir);
      for (size_t i = 0; i < n; ++i) dir[i] -= alpha[k] * y_hist[k][i];
    }
    double gamma = 1.0;
    if (!s_hist.empty()) {
      double yy = dot(y_hist.back(), y_hist.back());
      if (yy > 0) gamma = dot(s_hist.back(), y_hist.back()) / yy;
      if (!(gamma > 0)) gamma = 1.0;
    } else {
      double gnorm = std::sqrt(dot(grad, grad));
      if (gnorm > 0) gamma = 1.0 / gnorm;
    }
    for (size_t i = 0; i < n; ++i) dir[i] *= gamma;
    for (size_t k = 0; k < s_hist.size(); ++k) {
      double beta = rho_hist[k] * dot(y_hist[k], dir);
      for (size_t i = 0; i < n; ++i) {
        dir[i] += s_hist[k][i] * (alpha[k] - beta);
      }
    }
    double slope = dot(grad, dir);
    if (!(slope > 0)) {
      // Not an ascent direction; restart from steepest ascent.
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      double gnorm = std::sqrt(dot(grad, grad));
      if (gnorm == 0) {
        result.converged = true;
        break;
      }
      for (size_t i = 0; i < n; ++i) dir[i] = grad[i] / gnorm;
      slope = gnorm;
    }

    double step = 1.0;
    double next_f = f;
    bool accepted = false;
    for (int ls = 0; ls < options.max_line_search; ++ls) {
      for (size_t i = 0; i < n; ++i) next_x[i] = x[i] + step * dir[i];
      next_f = evaluate(next_x, next_grad);
      if (std::isfinite(next_f) && next_f >= f + 1e-4 * step * slope &&
          next_f > f) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      result.converged = true;
      break;
    }

    std::vector<double> s(n), y(n);
    for (size_t i = 0; i < n; ++i) {
      s[i] = next_x[i] - x[i];
      // Gradient of the negated objective.
      y[i] = grad[i] - next_grad[i];
    }
    double sy = dot(s, y);
    if (sy > 1e-12) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > options.history) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }

    double change = std::abs(next_f - f) / std::max(1.0, std::abs(next_f));
    x.swap(next_x);
    grad.swap(next_grad);
    f = next_f;
    result.objective.push_back(f);
    result.iterations = iter + 1;
    if (change < options.tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace nestrec

#endif  // NESTREC_LBFGS_H_
