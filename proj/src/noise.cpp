#include "entseq/noise.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "entseq/rng.hpp"
#include "entseq/su_algebra.hpp"

namespace entseq {

int channel_index(int i, int j) {
  if (i < 0 || i > 8 || j < 0 || j > 8) {
    throw std::invalid_argument("channel_index: generator indices must be in [0, 8]");
  }
  if (i == 0 && j == 0) {
    throw std::invalid_argument("channel_index: (0, 0) is not a noise channel");
  }
  return i * 9 + j - 1;
}

bool is_logical_channel(int i, int j) {
  if (i == 0 && j == 0) {
    return false;
  }
  return i <= 3 && j <= 3;
}

Matrix9 build_delta(const Eigen::Matrix<double, 80, 1>& coeffs) {
  Matrix9 delta = Matrix9::Zero();
  for (int i = 0; i <= 8; ++i) {
    for (int j = 0; j <= 8; ++j) {
      if (i == 0 && j == 0) continue;
      const double c = coeffs[channel_index(i, j)];
      if (c != 0.0) {
        delta += c * kron(gell_mann(i), gell_mann(j));
      }
    }
  }
  return delta;
}

namespace {

LocalNoiseDraw draw_local(GaussianSampler& gauss, const NoiseConfig& config) {
  LocalNoiseDraw draw;
  if (config.shared_amplitude_error) {
    const double shared = gauss.normal(config.sigma_local);
    draw.amplitude.fill(shared);
  } else {
    for (double& a : draw.amplitude) a = gauss.normal(config.sigma_local);
  }
  if (config.virtual_z) {
    // Drawn before zeroing so the stream stays aligned with virtual_z off.
    draw.amplitude[2] = 0.0;
    draw.amplitude[5] = 0.0;
  }
  for (double& c : draw.leakage1) c = gauss.normal(config.sigma_local);
  for (double& c : draw.leakage2) c = gauss.normal(config.sigma_local);
  return draw;
}

void validate(const NoiseConfig& config, int n_steps) {
  if (config.sigma_logical < 0.0 || config.sigma_leakage < 0.0 ||
      config.sigma_local < 0.0) {
    throw std::invalid_argument("sample_ensemble: sigmas must be non-negative");
  }
  if (config.realizations < 1) {
    throw std::invalid_argument("sample_ensemble: need at least one realization");
  }
  if (n_steps < 1) {
    throw std::invalid_argument("sample_ensemble: n_steps must be positive");
  }
}

}  // namespace

NoiseEnsemble sample_ensemble(const NoiseConfig& config, int n_steps) {
  validate(config, n_steps);
  NoiseEnsemble ensemble;
  ensemble.config = config;
  ensemble.n_steps = n_steps;
  ensemble.realizations.reserve(static_cast<std::size_t>(config.realizations));
  GaussianSampler gauss(config.seed);
  for (int m = 0; m < config.realizations; ++m) {
    NoiseRealization real;
    for (int i = 0; i <= 8; ++i) {
      for (int j = 0; j <= 8; ++j) {
        if (i == 0 && j == 0) continue;
        const double sigma =
            is_logical_channel(i, j) ? config.sigma_logical : config.sigma_leakage;
        real.nonlocal[channel_index(i, j)] = gauss.normal(sigma);
      }
    }
    if (config.local_enabled) {
      real.local.reserve(static_cast<std::size_t>(n_steps));
      for (int step = 0; step < n_steps; ++step) {
        real.local.push_back(draw_local(gauss, config));
      }
    }
    real.factor = expi_hermitian(build_delta(real.nonlocal), -1.0 / n_steps);
    ensemble.realizations.push_back(std::move(real));
  }
  return ensemble;
}

double local_rotation_fidelity(double sigma_local, int n_coefficient_sets,
                               int n_angle_sets, std::uint64_t seed) {
  if (sigma_local < 0.0) {
    throw std::invalid_argument("local_rotation_fidelity: sigma must be non-negative");
  }
  if (n_coefficient_sets < 1 || n_angle_sets < 1) {
    throw std::invalid_argument("local_rotation_fidelity: need at least one set of each");
  }
  NoiseConfig config;
  config.sigma_local = sigma_local;
  GaussianSampler gauss(seed);
  std::vector<LocalNoiseDraw> draws;
  draws.reserve(static_cast<std::size_t>(n_coefficient_sets));
  for (int i = 0; i < n_coefficient_sets; ++i) {
    draws.push_back(draw_local(gauss, config));
  }
  constexpr double kTwoPi = 6.283185307179586;
  std::vector<std::array<double, 6>> angles(
      static_cast<std::size_t>(n_angle_sets));
  for (auto& set : angles) {
    for (double& a : set) a = gauss.engine().uniform(-kTwoPi, kTwoPi);
  }

  // tr(R† R~) factorizes per qutrit, so work with 3x3 blocks throughout.
  double total = 0.0;
  for (const LocalNoiseDraw& draw : draws) {
    for (const auto& set : angles) {
      const Matrix3 r1 = su2_block_exp(set[0], set[1], set[2]);
      const Matrix3 r2 = su2_block_exp(set[3], set[4], set[5]);
      const Matrix3 p1 = su2_block_exp(set[0] * (1.0 + draw.amplitude[0]),
                                       set[1] * (1.0 + draw.amplitude[1]),
                                       set[2] * (1.0 + draw.amplitude[2]));
      const Matrix3 p2 = su2_block_exp(set[3] * (1.0 + draw.amplitude[3]),
                                       set[4] * (1.0 + draw.amplitude[4]),
                                       set[5] * (1.0 + draw.amplitude[5]));
      const double m1 =
          std::sqrt(set[0] * set[0] + set[1] * set[1] + set[2] * set[2]);
      const double m2 =
          std::sqrt(set[3] * set[3] + set[4] * set[4] + set[5] * set[5]);
      Matrix3 t1 = p1;
      Matrix3 t2 = p2;
      for (int k = 4; k >= 0; --k) {
        t1 = expi_single_gell_mann(4 + k, m1 * draw.leakage1[k]) * t1;
        t2 = expi_single_gell_mann(4 + k, m2 * draw.leakage2[k]) * t2;
      }
      const Complex tr1 = (r1.conjugate().cwiseProduct(t1)).sum();
      const Complex tr2 = (r2.conjugate().cwiseProduct(t2)).sum();
      total += std::norm(tr1 * tr2) / 81.0;
    }
  }
  return total / (static_cast<double>(n_coefficient_sets) *
                  static_cast<double>(n_angle_sets));
}

}  // namespace entseq
