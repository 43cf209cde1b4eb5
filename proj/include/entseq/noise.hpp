#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "entseq/types.hpp"

namespace entseq {

// Parameters of the coherent-error model.  Nonlocal errors perturb the
// entangling gate through an 80-channel Hermitian drift; local errors
// perturb each interleaved rotation (relative amplitude errors plus leakage
// generators scaled by the rotation magnitude).
struct NoiseConfig {
  double sigma_logical = 0.065;  // std dev of the 15 logical channels
  double sigma_leakage = 0.065;  // std dev of the 65 leakage channels
  double sigma_local = 0.002;    // std dev of per-rotation error coefficients
  bool local_enabled = false;    // sample per-step rotation errors
  bool virtual_z = false;        // z angles are software updates: no amplitude error
  bool shared_amplitude_error = false;  // one amplitude error per step, not six
  bool gamma_in_leakage_magnitude = true;  // z angle counts toward leakage magnitude
  int realizations = 100;
  std::uint64_t seed = 0;
};

// Per-step local error coefficients for one noise realization.
struct LocalNoiseDraw {
  // Relative amplitude errors on (alpha1, beta1, gamma1, alpha2, beta2, gamma2).
  std::array<double, 6> amplitude{};
  // Coefficients of lambda_4..lambda_8 in the leakage factor, one set per qutrit.
  std::array<double, 5> leakage1{};
  std::array<double, 5> leakage2{};
};

// One frozen noise realization: the 80 nonlocal channel coefficients, the
// per-step local draws (empty when local noise is disabled), and the
// entangling-slice noise factor exp(-i Delta / n_steps) precomputed so
// optimizer iterations never rebuild it.
struct NoiseRealization {
  Eigen::Matrix<double, 80, 1> nonlocal;
  std::vector<LocalNoiseDraw> local;
  Matrix9 factor;
};

struct NoiseEnsemble {
  NoiseConfig config;
  int n_steps = 0;
  std::vector<NoiseRealization> realizations;
};

// Flat index of channel (i, j) in the 80-coefficient vector: lexicographic
// over i-major, j-minor with (0, 0) excluded.  Throws std::invalid_argument
// for indices outside [0, 8] or for (0, 0).
int channel_index(int i, int j);

// A channel is logical when both generator indices are in [0, 3]; exactly 15
// channels are logical and 65 involve leakage.
bool is_logical_channel(int i, int j);

// Hermitian drift Delta = sum_(i,j) coeffs[channel_index(i,j)] lambda_i (x) lambda_j.
Matrix9 build_delta(const Eigen::Matrix<double, 80, 1>& coeffs);

// Draws a frozen ensemble for a sequence of n_steps slices.  Per
// realization, the stream order is: the 80 nonlocal coefficients in channel
// order, then (when local noise is enabled) per step six amplitude errors
// followed by five leakage coefficients per qutrit.  Under virtual_z the
// gamma amplitude errors are drawn and then zeroed so the stream stays
// aligned across configurations.  Throws std::invalid_argument for negative
// sigmas, realizations < 1, or n_steps < 1.
NoiseEnsemble sample_ensemble(const NoiseConfig& config, int n_steps);

// Mean fidelity of a single noisy rotation against its ideal: averages
// |tr(R† R~)|^2 / 81 over n_coefficient_sets local-error draws crossed with
// n_angle_sets uniform angle draws in [-2pi, 2pi]^6.  All coefficient sets
// are drawn before the angle sets.
double local_rotation_fidelity(double sigma_local, int n_coefficient_sets,
                               int n_angle_sets, std::uint64_t seed);

}  // namespace entseq
