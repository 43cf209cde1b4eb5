#include "entseq/rng.hpp"

#include <cmath>
#include <numbers>

namespace entseq {

namespace {
// 128-bit LCG multiplier from the PCG reference implementation.
constexpr unsigned __int128 kPcgMult =
    (static_cast<unsigned __int128>(0x2360ed051fc65da4ULL) << 64) |
    0x4385df649fccf645ULL;

std::uint64_t rotr64(std::uint64_t v, unsigned rot) {
  return (v >> rot) | (v << ((-rot) & 63));
}
}  // namespace

Pcg64::Pcg64(std::uint64_t seed, std::uint64_t stream) {
  inc_ = (static_cast<u128>(stream) << 1u) | 1u;
  state_ = 0u;
  step();
  state_ += static_cast<u128>(seed);
  step();
}

void Pcg64::step() { state_ = state_ * kPcgMult + inc_; }

std::uint64_t Pcg64::next() {
  step();
  const std::uint64_t xored =
      static_cast<std::uint64_t>(state_ >> 64) ^ static_cast<std::uint64_t>(state_);
  const unsigned rot = static_cast<unsigned>(state_ >> 122);
  return rotr64(xored, rot);
}

double Pcg64::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Pcg64::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

GaussianSampler::GaussianSampler(std::uint64_t seed) : rng_(seed) {}

double GaussianSampler::standard() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] so the log is finite; u2 in [0, 1).
  const double u1 = (static_cast<double>(rng_.next() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = rng_.uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

}  // namespace entseq
