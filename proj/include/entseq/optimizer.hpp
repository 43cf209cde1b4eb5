#pragma once

#include <map>
#include <string>

#include "entseq/lbfgs.hpp"
#include "entseq/noise.hpp"
#include "entseq/sequence.hpp"
#include "entseq/types.hpp"

namespace entseq {

// sqrt of machine epsilon: the forward-difference step scale.
inline const double kDefaultFdStep = 1.4901161193847656e-08;

struct OptimizerOptions {
  int history_size = 10;
  double grad_tol = 1e-5;
  double rel_f_tol = 2.2e-9;
  int max_iterations = 15000;
  double fd_step_scale = kDefaultFdStep;
  // Extra randomized restarts around the warm start; the best run wins.
  // Useful for prime lengths, which start from all-zero angles.
  int restarts = 0;
  // Out-of-sample ensemble size (drawn at seed + 1).
  int eval_realizations = 1000;
};

// Ensemble-averaged objective: mean over realizations of coherent gate error
// plus perfect-entangler distance of the noisy evolution.  The ensemble is
// borrowed and must outlive the objective.  Precomputes the per-realization
// product of drift and noise factor once, so repeated evaluations only
// rebuild the rotations.
class SequenceObjective {
 public:
  SequenceObjective(const NoiseEnsemble& ensemble, InteractionKind kind);

  int n_steps() const { return n_steps_; }
  int dim() const { return 6 * n_steps_; }
  InteractionKind interaction() const { return kind_; }

  double value(const Vector& x) const;

  // Forward-difference gradient with h_i = fd_step_scale * max(1, |x_i|).
  // Uses cached prefix/suffix partial products so each coordinate costs a
  // handful of matrix products instead of a full re-evaluation; the base
  // value of each quotient is recomputed through the same factored path to
  // keep the difference numerically clean.
  Vector gradient(const Vector& x, double fd_step_scale = kDefaultFdStep) const;

 private:
  const NoiseEnsemble& ensemble_;
  InteractionKind kind_;
  int n_steps_;
  Matrix9 drift_;
  std::vector<Matrix9> drift_factor_;  // drift * noise factor, per realization
};

// J(seq) = mean over the ensemble of [gate error + PE distance].  Throws
// std::invalid_argument when seq and ensemble shapes disagree.
double functional_j(const SequenceParams& seq, const NoiseEnsemble& ensemble);

// Generic forward-difference gradient of f at x, h_i = fd_step_scale *
// max(1, |x_i|).  Throws std::runtime_error naming the coordinate if f
// returns a non-finite value.
Vector numerical_gradient(const ScalarFn& f, const Vector& x,
                          double fd_step_scale = kDefaultFdStep);

// Warm start for length n: all-zero angles when n is 1 or prime, otherwise
// the solved sequence for the greatest proper divisor d tiled n/d times.
// Throws std::invalid_argument naming d when the divisor solution is absent
// or has mismatched interaction.
SequenceParams bootstrap_guess(InteractionKind kind, int n,
                               const std::map<int, SequenceParams>& solved);

struct ErrorPair {
  double gate_error = 0.0;
  double pe_error = 0.0;
};

// Mean coherent gate error and mean PE error (coordinate-based fidelity,
// raw logical projection) of a fixed sequence over an ensemble.
ErrorPair mean_errors(const SequenceParams& seq, const NoiseEnsemble& ensemble);

struct OptimizationResult {
  SequenceParams params;
  double j_value = 0.0;
  double in_sample_gate_error = 0.0;
  double in_sample_pe_error = 0.0;
  double out_of_sample_gate_error = 0.0;
  double out_of_sample_pe_error = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string status;
};

// Full optimization of one sequence length: draws the training ensemble from
// config, minimizes J from the warm start (plus optional restarts), then
// scores the result on the training ensemble and on a fresh ensemble drawn
// at seed + 1 with opts.eval_realizations members.
OptimizationResult optimize_sequence(InteractionKind kind, int n,
                                     const NoiseConfig& config,
                                     const OptimizerOptions& opts,
                                     const std::map<int, SequenceParams>& solved);

}  // namespace entseq
