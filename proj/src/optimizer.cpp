#include "entseq/optimizer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "entseq/metrics.hpp"
#include "entseq/rng.hpp"

namespace entseq {

namespace {

double& rotation_field(RotationParams& p, int c) {
  switch (c) {
    case 0: return p.alpha1;
    case 1: return p.beta1;
    case 2: return p.gamma1;
    case 3: return p.alpha2;
    case 4: return p.beta2;
    case 5: return p.gamma2;
    default: throw std::invalid_argument("rotation_field: index out of range");
  }
}

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

int greatest_proper_divisor(int n) {
  for (int d = 2; d * d <= n; ++d) {
    if (n % d == 0) return n / d;
  }
  return 1;
}

}  // namespace

SequenceObjective::SequenceObjective(const NoiseEnsemble& ensemble,
                                     InteractionKind kind)
    : ensemble_(ensemble), kind_(kind), n_steps_(ensemble.n_steps) {
  if (ensemble.n_steps < 1 || ensemble.realizations.empty()) {
    throw std::invalid_argument("SequenceObjective: ensemble is empty");
  }
  if (ensemble.config.local_enabled) {
    for (const NoiseRealization& r : ensemble.realizations) {
      if (r.local.size() != static_cast<std::size_t>(ensemble.n_steps)) {
        throw std::invalid_argument(
            "SequenceObjective: local draws do not match n_steps");
      }
    }
  }
  drift_ = drift_step(kind, n_steps_);
  drift_factor_.reserve(ensemble.realizations.size());
  for (const NoiseRealization& r : ensemble.realizations) {
    drift_factor_.push_back(drift_ * r.factor);
  }
}

double SequenceObjective::value(const Vector& x) const {
  if (x.size() != dim()) {
    throw std::invalid_argument("SequenceObjective::value: wrong dimension");
  }
  const SequenceParams seq = unflatten(kind_, n_steps_, x);
  const bool local = ensemble_.config.local_enabled;
  const bool gamma_mag = ensemble_.config.gamma_in_leakage_magnitude;
  const std::size_t n = static_cast<std::size_t>(n_steps_);

  std::vector<Matrix9> rot(n);
  for (std::size_t i = 0; i < n; ++i) {
    rot[i] = rotation_operator(seq.steps[i]);
  }
  Matrix9 target = Matrix9::Identity();
  for (std::size_t i = 0; i < n; ++i) {
    target = drift_ * (rot[i] * target);
  }

  double total = 0.0;
  for (std::size_t m = 0; m < drift_factor_.size(); ++m) {
    Matrix9 u = Matrix9::Identity();
    for (std::size_t i = 0; i < n; ++i) {
      if (local) {
        u = drift_factor_[m] *
            (apply_local_noise(seq.steps[i], ensemble_.realizations[m].local[i],
                               gamma_mag) *
             u);
      } else {
        u = drift_factor_[m] * (rot[i] * u);
      }
    }
    total += gate_error(u, target) + pe_distance(u);
  }
  return total / static_cast<double>(drift_factor_.size());
}

Vector SequenceObjective::gradient(const Vector& x, double fd_step_scale) const {
  if (x.size() != dim()) {
    throw std::invalid_argument("SequenceObjective::gradient: wrong dimension");
  }
  if (!(fd_step_scale > 0.0)) {
    throw std::invalid_argument("SequenceObjective::gradient: step scale must be positive");
  }
  const SequenceParams seq = unflatten(kind_, n_steps_, x);
  const bool local = ensemble_.config.local_enabled;
  const bool gamma_mag = ensemble_.config.gamma_in_leakage_magnitude;
  const std::size_t n = static_cast<std::size_t>(n_steps_);
  const std::size_t m_count = drift_factor_.size();

  // Ideal-target per-step factors and their prefix/suffix products.
  std::vector<Matrix9> rot(n), tgt_step(n), tgt_prefix(n + 1), tgt_suffix(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    rot[i] = rotation_operator(seq.steps[i]);
    tgt_step[i] = drift_ * rot[i];
  }
  tgt_prefix[0] = Matrix9::Identity();
  for (std::size_t i = 0; i < n; ++i) tgt_prefix[i + 1] = tgt_step[i] * tgt_prefix[i];
  tgt_suffix[n] = Matrix9::Identity();
  for (std::size_t i = n; i-- > 0;) tgt_suffix[i] = tgt_suffix[i + 1] * tgt_step[i];

  // Noisy per-step factors T, prefixes P and suffixes S per realization,
  // flattened as [m * (n + 1) + i].
  std::vector<Matrix9> t_step(m_count * n);
  std::vector<Matrix9> prefix(m_count * (n + 1));
  std::vector<Matrix9> suffix(m_count * (n + 1));
  for (std::size_t m = 0; m < m_count; ++m) {
    Matrix9* t = &t_step[m * n];
    Matrix9* p = &prefix[m * (n + 1)];
    Matrix9* s = &suffix[m * (n + 1)];
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = drift_factor_[m] *
             (local ? apply_local_noise(seq.steps[i],
                                        ensemble_.realizations[m].local[i],
                                        gamma_mag)
                    : rot[i]);
    }
    p[0] = Matrix9::Identity();
    for (std::size_t i = 0; i < n; ++i) p[i + 1] = t[i] * p[i];
    s[n] = Matrix9::Identity();
    for (std::size_t i = n; i-- > 0;) s[i] = s[i + 1] * t[i];
  }

  Vector g(dim());
  for (std::size_t i = 0; i < n; ++i) {
    // Base value rebuilt through the same factored expression the perturbed
    // values use, so the forward quotient is free of association noise.
    const Matrix9 tgt_base =
        tgt_suffix[i + 1] * (tgt_step[i] * tgt_prefix[i]);
    double f_base = 0.0;
    for (std::size_t m = 0; m < m_count; ++m) {
      const Matrix9* t = &t_step[m * n];
      const Matrix9* p = &prefix[m * (n + 1)];
      const Matrix9* s = &suffix[m * (n + 1)];
      const Matrix9 u = s[i + 1] * (t[i] * p[i]);
      f_base += gate_error(u, tgt_base) + pe_distance(u);
    }
    f_base /= static_cast<double>(m_count);

    for (int c = 0; c < 6; ++c) {
      const int idx = 6 * static_cast<int>(i) + c;
      const double h = fd_step_scale * std::max(1.0, std::abs(x[idx]));
      RotationParams bumped = seq.steps[i];
      rotation_field(bumped, c) += h;
      const Matrix9 rot_bumped = rotation_operator(bumped);
      const Matrix9 tgt_bumped =
          tgt_suffix[i + 1] * ((drift_ * rot_bumped) * tgt_prefix[i]);
      double f_bumped = 0.0;
      for (std::size_t m = 0; m < m_count; ++m) {
        const Matrix9* p = &prefix[m * (n + 1)];
        const Matrix9* s = &suffix[m * (n + 1)];
        const Matrix9 step_bumped =
            drift_factor_[m] *
            (local ? apply_local_noise(bumped, ensemble_.realizations[m].local[i],
                                       gamma_mag)
                   : rot_bumped);
        const Matrix9 u = s[i + 1] * (step_bumped * p[i]);
        f_bumped += gate_error(u, tgt_bumped) + pe_distance(u);
      }
      f_bumped /= static_cast<double>(m_count);
      g[idx] = (f_bumped - f_base) / h;
    }
  }
  return g;
}

double functional_j(const SequenceParams& seq, const NoiseEnsemble& ensemble) {
  if (seq.n_steps != ensemble.n_steps) {
    throw std::invalid_argument("functional_j: sequence has " +
                                std::to_string(seq.n_steps) +
                                " steps but ensemble was drawn for " +
                                std::to_string(ensemble.n_steps));
  }
  const SequenceObjective objective(ensemble, seq.interaction);
  return objective.value(flatten(seq));
}

Vector numerical_gradient(const ScalarFn& f, const Vector& x,
                          double fd_step_scale) {
  if (!(fd_step_scale > 0.0)) {
    throw std::invalid_argument("numerical_gradient: step scale must be positive");
  }
  const double f0 = f(x);
  if (!std::isfinite(f0)) {
    throw std::runtime_error("numerical_gradient: non-finite value at the base point");
  }
  Vector g(x.size());
  Vector xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = fd_step_scale * std::max(1.0, std::abs(x[i]));
    xp[i] = x[i] + h;
    const double fi = f(xp);
    if (!std::isfinite(fi)) {
      throw std::runtime_error("numerical_gradient: non-finite value at coordinate " +
                               std::to_string(i));
    }
    g[i] = (fi - f0) / h;
    xp[i] = x[i];
  }
  return g;
}

SequenceParams bootstrap_guess(InteractionKind kind, int n,
                               const std::map<int, SequenceParams>& solved) {
  if (n < 1) {
    throw std::invalid_argument("bootstrap_guess: n must be positive");
  }
  if (n == 1 || is_prime(n)) {
    return SequenceParams::zeros(kind, n);
  }
  const int d = greatest_proper_divisor(n);
  const auto it = solved.find(d);
  if (it == solved.end()) {
    throw std::invalid_argument("bootstrap_guess: no solved sequence for divisor " +
                                std::to_string(d));
  }
  const SequenceParams& source = it->second;
  if (source.interaction != kind || source.n_steps != d ||
      source.steps.size() != static_cast<std::size_t>(d)) {
    throw std::invalid_argument("bootstrap_guess: solved sequence for divisor " +
                                std::to_string(d) + " has mismatched shape");
  }
  SequenceParams guess = SequenceParams::zeros(kind, n);
  for (int i = 0; i < n; ++i) {
    guess.steps[static_cast<std::size_t>(i)] =
        source.steps[static_cast<std::size_t>(i % d)];
  }
  return guess;
}

ErrorPair mean_errors(const SequenceParams& seq, const NoiseEnsemble& ensemble) {
  if (seq.n_steps != ensemble.n_steps) {
    throw std::invalid_argument("mean_errors: sequence/ensemble shape mismatch");
  }
  const Matrix9 target = target_operator(seq);
  const bool gamma_mag = ensemble.config.gamma_in_leakage_magnitude;
  ErrorPair acc;
  for (std::size_t m = 0; m < ensemble.realizations.size(); ++m) {
    const Matrix9 u = evolution_operator(seq, ensemble.realizations[m], gamma_mag);
    acc.gate_error += gate_error(u, target);
    try {
      acc.pe_error += 1.0 - pe_fidelity(weyl_coordinates(project_logical(u)));
    } catch (const std::domain_error& e) {
      throw std::domain_error("realization " + std::to_string(m) + ": " + e.what());
    }
  }
  const double m_count = static_cast<double>(ensemble.realizations.size());
  acc.gate_error /= m_count;
  acc.pe_error /= m_count;
  return acc;
}

OptimizationResult optimize_sequence(InteractionKind kind, int n,
                                     const NoiseConfig& config,
                                     const OptimizerOptions& opts,
                                     const std::map<int, SequenceParams>& solved) {
  if (opts.eval_realizations < 1) {
    throw std::invalid_argument("optimize_sequence: eval_realizations must be positive");
  }
  const NoiseEnsemble train = sample_ensemble(config, n);
  NoiseConfig eval_config = config;
  eval_config.seed = config.seed + 1;
  eval_config.realizations = opts.eval_realizations;
  const NoiseEnsemble eval = sample_ensemble(eval_config, n);

  const SequenceObjective objective(train, kind);
  const ScalarFn fn = [&](const Vector& v) { return objective.value(v); };
  const GradFn gn = [&](const Vector& v) {
    return objective.gradient(v, opts.fd_step_scale);
  };
  LbfgsOptions lbfgs_opts;
  lbfgs_opts.history_size = opts.history_size;
  lbfgs_opts.grad_tol = opts.grad_tol;
  lbfgs_opts.rel_f_tol = opts.rel_f_tol;
  lbfgs_opts.max_iterations = opts.max_iterations;

  const Vector x0 = flatten(bootstrap_guess(kind, n, solved));
  LbfgsResult best = lbfgs_minimize(fn, gn, x0, lbfgs_opts);
  if (opts.restarts > 0) {
    Pcg64 rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
    for (int attempt = 0; attempt < opts.restarts; ++attempt) {
      Vector xr = x0;
      for (Eigen::Index i = 0; i < xr.size(); ++i) {
        xr[i] += rng.uniform(-0.5, 0.5);
      }
      LbfgsResult run = lbfgs_minimize(fn, gn, std::move(xr), lbfgs_opts);
      if (run.f < best.f) {
        best = std::move(run);
      }
    }
  }

  OptimizationResult result;
  result.params = unflatten(kind, n, best.x);
  result.j_value = best.f;
  result.iterations = best.iterations;
  result.converged = best.converged;
  result.status = best.status;
  const ErrorPair in_sample = mean_errors(result.params, train);
  const ErrorPair out_of_sample = mean_errors(result.params, eval);
  result.in_sample_gate_error = in_sample.gate_error;
  result.in_sample_pe_error = in_sample.pe_error;
  result.out_of_sample_gate_error = out_of_sample.gate_error;
  result.out_of_sample_pe_error = out_of_sample.pe_error;
  return result;
}

}  // namespace entseq
