#pragma once

#include <functional>
#include <string>
#include <vector>

#include "entseq/types.hpp"

namespace entseq {

using ScalarFn = std::function<double(const Vector&)>;
using GradFn = std::function<Vector(const Vector&)>;

struct LbfgsOptions {
  int history_size = 10;
  // Converged when the gradient sup-norm falls to or below this.
  double grad_tol = 1e-5;
  // Converged when an accepted step decreases f by no more than
  // rel_f_tol * max(|f_old|, |f_new|, 1).
  double rel_f_tol = 2.2e-9;
  int max_iterations = 15000;
};

struct LbfgsResult {
  Vector x;
  double f = 0.0;
  Vector grad;
  int iterations = 0;
  bool converged = false;
  std::string status;
  // f at x0 followed by each accepted iterate; monotone non-increasing.
  std::vector<double> f_history;
};

// Limited-memory BFGS with a strong-Wolfe line search (c1 = 1e-4, c2 = 0.9,
// bracket-and-zoom).  Every accepted step satisfies sufficient decrease, so
// result.f <= f(x0).  Line-search failure or hitting max_iterations returns
// the best point found with converged = false.
LbfgsResult lbfgs_minimize(const ScalarFn& f, const GradFn& grad, Vector x0,
                           const LbfgsOptions& opts = {});

}  // namespace entseq
