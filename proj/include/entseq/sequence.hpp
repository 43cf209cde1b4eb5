#pragma once

#include <vector>

#include "entseq/noise.hpp"
#include "entseq/types.hpp"

namespace entseq {

// Which two-qutrit coupling generates the entangling slices.
enum class InteractionKind { ZZ, XXplusYY };

// Angles of one interleaved local rotation: per qutrit, the coefficients of
// lambda_1, lambda_2, lambda_3 in the exponent of an upper-block SU(2)
// rotation.
struct RotationParams {
  double alpha1 = 0.0;
  double beta1 = 0.0;
  double gamma1 = 0.0;
  double alpha2 = 0.0;
  double beta2 = 0.0;
  double gamma2 = 0.0;
};

// A composite sequence: n_steps entangling slices, each preceded by a local
// rotation (step 1 acts first).
struct SequenceParams {
  InteractionKind interaction = InteractionKind::ZZ;
  int n_steps = 0;
  std::vector<RotationParams> steps;

  static SequenceParams zeros(InteractionKind kind, int n);
};

// Step-major flattening: x[6i .. 6i+5] = (alpha1, beta1, gamma1, alpha2,
// beta2, gamma2) of step i.  unflatten validates the vector length.
Vector flatten(const SequenceParams& seq);
SequenceParams unflatten(InteractionKind kind, int n_steps, const Vector& x);

// Coupling generator: lambda_3 (x) lambda_3, or lambda_1 (x) lambda_1 +
// lambda_2 (x) lambda_2.
Matrix9 interaction_generator(InteractionKind kind);

// One ideal entangling slice exp(-i pi G / n_steps); cached per
// (kind, n_steps).  Throws std::invalid_argument for n_steps < 1.
const Matrix9& drift_step(InteractionKind kind, int n_steps);

// Interleaved rotation R = exp(i(a1 l1 + b1 l2 + g1 l3)) (x) exp(i(a2 l1 + ...)).
Matrix9 rotation_operator(const RotationParams& p);

// The rotation perturbed by one local noise draw: amplitude errors multiply
// each angle, then the leakage factor (product over lambda_4..lambda_8 in
// ascending order, scaled by the unperturbed rotation magnitude of that
// qutrit) is applied from the left on each qutrit.  gamma_in_magnitude
// selects whether the z angle counts toward the leakage magnitude.
Matrix9 apply_local_noise(const RotationParams& p, const LocalNoiseDraw& draw,
                          bool gamma_in_magnitude = true);

// Ideal target: the sequence evolution with zero noise.
Matrix9 target_operator(const SequenceParams& seq);

// Noisy evolution: product over steps of drift * noise factor * rotation,
// step 1 rightmost.  The rotation of each step is perturbed by the
// realization's local draws when present.  Throws std::invalid_argument if
// the sequence shape is invalid or the realization's local draws do not
// match n_steps.
Matrix9 evolution_operator(const SequenceParams& seq,
                           const NoiseRealization& realization,
                           bool gamma_in_magnitude = true);

}  // namespace entseq
