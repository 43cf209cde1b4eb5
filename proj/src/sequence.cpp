#include "entseq/sequence.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "entseq/su_algebra.hpp"

namespace entseq {

SequenceParams SequenceParams::zeros(InteractionKind kind, int n) {
  if (n < 1) {
    throw std::invalid_argument("SequenceParams::zeros: n must be positive");
  }
  SequenceParams seq;
  seq.interaction = kind;
  seq.n_steps = n;
  seq.steps.assign(static_cast<std::size_t>(n), RotationParams{});
  return seq;
}

namespace {

void validate_shape(const SequenceParams& seq) {
  if (seq.n_steps < 1 ||
      seq.steps.size() != static_cast<std::size_t>(seq.n_steps)) {
    throw std::invalid_argument("sequence shape invalid: n_steps=" +
                                std::to_string(seq.n_steps) + " with " +
                                std::to_string(seq.steps.size()) + " steps");
  }
}

}  // namespace

Vector flatten(const SequenceParams& seq) {
  validate_shape(seq);
  Vector x(6 * seq.n_steps);
  for (int i = 0; i < seq.n_steps; ++i) {
    const RotationParams& p = seq.steps[static_cast<std::size_t>(i)];
    x[6 * i + 0] = p.alpha1;
    x[6 * i + 1] = p.beta1;
    x[6 * i + 2] = p.gamma1;
    x[6 * i + 3] = p.alpha2;
    x[6 * i + 4] = p.beta2;
    x[6 * i + 5] = p.gamma2;
  }
  return x;
}

SequenceParams unflatten(InteractionKind kind, int n_steps, const Vector& x) {
  if (n_steps < 1 || x.size() != 6 * n_steps) {
    throw std::invalid_argument("unflatten: expected a vector of length 6*n_steps");
  }
  SequenceParams seq = SequenceParams::zeros(kind, n_steps);
  for (int i = 0; i < n_steps; ++i) {
    RotationParams& p = seq.steps[static_cast<std::size_t>(i)];
    p.alpha1 = x[6 * i + 0];
    p.beta1 = x[6 * i + 1];
    p.gamma1 = x[6 * i + 2];
    p.alpha2 = x[6 * i + 3];
    p.beta2 = x[6 * i + 4];
    p.gamma2 = x[6 * i + 5];
  }
  return seq;
}

Matrix9 interaction_generator(InteractionKind kind) {
  if (kind == InteractionKind::ZZ) {
    return kron(gell_mann(3), gell_mann(3));
  }
  return kron(gell_mann(1), gell_mann(1)) + kron(gell_mann(2), gell_mann(2));
}

const Matrix9& drift_step(InteractionKind kind, int n_steps) {
  if (n_steps < 1) {
    throw std::invalid_argument("drift_step: n_steps must be positive");
  }
  static std::map<std::pair<int, int>, Matrix9> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  const auto key = std::make_pair(static_cast<int>(kind), n_steps);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache
             .emplace(key, expi_hermitian(interaction_generator(kind),
                                          -std::numbers::pi / n_steps))
             .first;
  }
  return it->second;
}

Matrix9 rotation_operator(const RotationParams& p) {
  return kron(su2_block_exp(p.alpha1, p.beta1, p.gamma1),
              su2_block_exp(p.alpha2, p.beta2, p.gamma2));
}

namespace {

// 3x3 leakage factor: product of exp(i * magnitude * c_k * lambda_k) for
// k = 4..8, ascending k applied left to right.
Matrix3 leakage_factor(double magnitude, const std::array<double, 5>& coeffs) {
  Matrix3 f = expi_single_gell_mann(4, magnitude * coeffs[0]);
  for (int k = 1; k < 5; ++k) {
    f = f * expi_single_gell_mann(4 + k, magnitude * coeffs[static_cast<std::size_t>(k)]);
  }
  return f;
}

}  // namespace

Matrix9 apply_local_noise(const RotationParams& p, const LocalNoiseDraw& draw,
                          bool gamma_in_magnitude) {
  const Matrix3 r1 = su2_block_exp(p.alpha1 * (1.0 + draw.amplitude[0]),
                                   p.beta1 * (1.0 + draw.amplitude[1]),
                                   p.gamma1 * (1.0 + draw.amplitude[2]));
  const Matrix3 r2 = su2_block_exp(p.alpha2 * (1.0 + draw.amplitude[3]),
                                   p.beta2 * (1.0 + draw.amplitude[4]),
                                   p.gamma2 * (1.0 + draw.amplitude[5]));
  const double g1 = gamma_in_magnitude ? p.gamma1 : 0.0;
  const double g2 = gamma_in_magnitude ? p.gamma2 : 0.0;
  const double m1 =
      std::sqrt(p.alpha1 * p.alpha1 + p.beta1 * p.beta1 + g1 * g1);
  const double m2 =
      std::sqrt(p.alpha2 * p.alpha2 + p.beta2 * p.beta2 + g2 * g2);
  return kron(leakage_factor(m1, draw.leakage1) * r1,
              leakage_factor(m2, draw.leakage2) * r2);
}

Matrix9 target_operator(const SequenceParams& seq) {
  validate_shape(seq);
  const Matrix9& drift = drift_step(seq.interaction, seq.n_steps);
  Matrix9 u = Matrix9::Identity();
  for (int i = 0; i < seq.n_steps; ++i) {
    u = drift * (rotation_operator(seq.steps[static_cast<std::size_t>(i)]) * u);
  }
  return u;
}

Matrix9 evolution_operator(const SequenceParams& seq,
                           const NoiseRealization& realization,
                           bool gamma_in_magnitude) {
  validate_shape(seq);
  const bool local = !realization.local.empty();
  if (local && realization.local.size() != static_cast<std::size_t>(seq.n_steps)) {
    throw std::invalid_argument(
        "evolution_operator: realization has " +
        std::to_string(realization.local.size()) + " local draws for " +
        std::to_string(seq.n_steps) + " steps");
  }
  const Matrix9& drift = drift_step(seq.interaction, seq.n_steps);
  const Matrix9 slice = drift * realization.factor;
  Matrix9 u = Matrix9::Identity();
  for (int i = 0; i < seq.n_steps; ++i) {
    const RotationParams& p = seq.steps[static_cast<std::size_t>(i)];
    const Matrix9 rot =
        local ? apply_local_noise(p, realization.local[static_cast<std::size_t>(i)],
                                  gamma_in_magnitude)
              : rotation_operator(p);
    u = slice * (rot * u);
  }
  return u;
}

}  // namespace entseq
