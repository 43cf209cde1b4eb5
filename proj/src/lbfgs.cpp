#include "entseq/lbfgs.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace entseq {

namespace {

constexpr double kArmijo = 1e-4;     // sufficient-decrease constant c1
constexpr double kCurvature = 0.9;   // curvature constant c2
constexpr int kMaxBracket = 30;
constexpr int kMaxZoom = 40;

struct SearchPoint {
  double step = 0.0;
  double f = 0.0;
  Vector g;
  bool ok = false;
};

// Strong-Wolfe line search (bracket then zoom).  On failure, returns the
// lowest-f trial point seen (ok = false) so the caller can still move
// downhill before giving up.
SearchPoint wolfe_search(const ScalarFn& f, const GradFn& grad, const Vector& x,
                         const Vector& direction, double f0, double dphi0,
                         double first_step) {
  // Lowest-f trial seen; its gradient is only computed if the search fails
  // and the caller falls back to it.
  double best_step = 0.0;
  double best_f = f0;

  const auto probe = [&](double step, double& f_out) {
    f_out = f(x + step * direction);
    if (std::isfinite(f_out) && f_out < best_f) {
      best_step = step;
      best_f = f_out;
    }
  };

  const auto fallback = [&]() -> SearchPoint {
    if (best_step > 0.0 && best_f < f0) {
      return {best_step, best_f, grad(x + best_step * direction), false};
    }
    return {};
  };

  const auto zoom = [&](double lo, double f_lo, double dphi_lo, double hi,
                        double f_hi) -> SearchPoint {
    for (int k = 0; k < kMaxZoom; ++k) {
      const double span = hi - lo;
      // Quadratic interpolation through (lo, f_lo, dphi_lo) and (hi, f_hi),
      // safeguarded toward bisection.
      double trial = lo - 0.5 * dphi_lo * span * span /
                              (f_hi - f_lo - dphi_lo * span);
      const double lo_end = std::min(lo, hi);
      const double hi_end = std::max(lo, hi);
      const double margin = 0.1 * (hi_end - lo_end);
      if (!std::isfinite(trial) || trial < lo_end + margin ||
          trial > hi_end - margin) {
        trial = 0.5 * (lo + hi);
      }
      double f_trial = 0.0;
      probe(trial, f_trial);
      if (f_trial > f0 + kArmijo * trial * dphi0 || f_trial >= f_lo) {
        hi = trial;
        f_hi = f_trial;
      } else {
        const Vector g_trial = grad(x + trial * direction);
        const double dphi_trial = g_trial.dot(direction);
        if (std::abs(dphi_trial) <= -kCurvature * dphi0) {
          return {trial, f_trial, g_trial, true};
        }
        if (dphi_trial * (hi - lo) >= 0.0) {
          hi = lo;
          f_hi = f_lo;
        }
        lo = trial;
        f_lo = f_trial;
        dphi_lo = dphi_trial;
      }
      if (std::abs(hi - lo) <= 1e-14 * std::max(1.0, std::abs(lo))) {
        break;
      }
    }
    return fallback();
  };

  double prev_step = 0.0;
  double prev_f = f0;
  double prev_dphi = dphi0;
  double step = first_step;
  for (int i = 0; i < kMaxBracket; ++i) {
    double f_step = 0.0;
    probe(step, f_step);
    if (f_step > f0 + kArmijo * step * dphi0 || (i > 0 && f_step >= prev_f)) {
      return zoom(prev_step, prev_f, prev_dphi, step, f_step);
    }
    const Vector g_step = grad(x + step * direction);
    const double dphi_step = g_step.dot(direction);
    if (std::abs(dphi_step) <= -kCurvature * dphi0) {
      return {step, f_step, g_step, true};
    }
    if (dphi_step >= 0.0) {
      return zoom(step, f_step, dphi_step, prev_step, prev_f);
    }
    prev_step = step;
    prev_f = f_step;
    prev_dphi = dphi_step;
    step *= 2.0;
    if (step > 1e10) {
      break;
    }
  }
  return fallback();
}

double sup_norm(const Vector& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

}  // namespace

LbfgsResult lbfgs_minimize(const ScalarFn& f, const GradFn& grad, Vector x0,
                           const LbfgsOptions& opts) {
  if (opts.history_size < 1) {
    throw std::invalid_argument("lbfgs_minimize: history_size must be positive");
  }
  if (opts.max_iterations < 0) {
    throw std::invalid_argument("lbfgs_minimize: max_iterations must be non-negative");
  }

  LbfgsResult res;
  res.x = std::move(x0);
  res.f = f(res.x);
  if (!std::isfinite(res.f)) {
    throw std::runtime_error("lbfgs_minimize: objective is not finite at the start");
  }
  res.grad = grad(res.x);
  res.f_history.push_back(res.f);

  if (sup_norm(res.grad) <= opts.grad_tol) {
    res.converged = true;
    res.status = "gradient tolerance satisfied at start";
    return res;
  }

  std::deque<Vector> s_hist;
  std::deque<Vector> y_hist;
  std::deque<double> rho_hist;

  while (res.iterations < opts.max_iterations) {
    // Two-loop recursion with gamma-scaled initial Hessian.
    Vector q = res.grad;
    std::vector<double> alpha(s_hist.size());
    for (int i = static_cast<int>(s_hist.size()) - 1; i >= 0; --i) {
      const auto ui = static_cast<std::size_t>(i);
      alpha[ui] = rho_hist[ui] * s_hist[ui].dot(q);
      q -= alpha[ui] * y_hist[ui];
    }
    if (!s_hist.empty()) {
      q *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    }
    for (std::size_t i = 0; i < s_hist.size(); ++i) {
      const double beta = rho_hist[i] * y_hist[i].dot(q);
      q += (alpha[i] - beta) * s_hist[i];
    }
    Vector direction = -q;
    double dphi0 = res.grad.dot(direction);
    if (dphi0 >= 0.0) {
      // Curvature information went stale; restart from steepest descent.
      direction = -res.grad;
      dphi0 = -res.grad.squaredNorm();
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
    }

    const double first_step =
        s_hist.empty() ? std::min(1.0, 1.0 / std::max(1e-12, direction.norm()))
                       : 1.0;
    const SearchPoint point =
        wolfe_search(f, grad, res.x, direction, res.f, dphi0, first_step);
    if (point.step <= 0.0 || point.f >= res.f) {
      res.status = "line search failed";
      return res;
    }

    const Vector s = point.step * direction;
    const Vector y = point.g - res.grad;
    const double f_old = res.f;
    res.x += s;
    res.f = point.f;
    res.grad = point.g;
    res.f_history.push_back(res.f);
    ++res.iterations;

    if (!point.ok) {
      // Moved to the best trial of a failed search; stop here.
      res.status = "line search failed";
      return res;
    }

    const double ys = y.dot(s);
    if (ys > 1e-10 * s.norm() * y.norm()) {
      s_hist.push_back(s);
      y_hist.push_back(y);
      rho_hist.push_back(1.0 / ys);
      if (s_hist.size() > static_cast<std::size_t>(opts.history_size)) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }

    if (sup_norm(res.grad) <= opts.grad_tol) {
      res.converged = true;
      res.status = "gradient tolerance satisfied";
      return res;
    }
    if (f_old - res.f <=
        opts.rel_f_tol * std::max({std::abs(f_old), std::abs(res.f), 1.0})) {
      res.converged = true;
      res.status = "relative decrease below tolerance";
      return res;
    }
  }
  res.status = "iteration limit reached";
  return res;
}

}  // namespace entseq
