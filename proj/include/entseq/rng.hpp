#pragma once

#include <cstdint>

namespace entseq {

// Identifier recorded in run manifests so archived results can be checked
// against the generator that produced them.
inline constexpr const char* kRngAlgorithm = "pcg64-xsl-rr/box-muller";

// PCG XSL-RR 128/64 generator (O'Neill's pcg64): 128-bit LCG state with a
// 64-bit xorshift-rotate output.  Small, fast, and reproducible across
// platforms, unlike std::normal_distribution whose output is
// implementation-defined.
class Pcg64 {
 public:
  explicit Pcg64(std::uint64_t seed, std::uint64_t stream = 0xda3e39cb94b95bdbULL);

  std::uint64_t next();

  // Uniform double in [0, 1) with 53 random bits.
  double uniform();
  // Uniform double in [lo, hi).
  double uniform(double lo, double hi);

 private:
  using u128 = unsigned __int128;
  void step();

  u128 state_;
  u128 inc_;
};

// Standard-normal sampler: Box-Muller transform over Pcg64, caching the
// second variate of each pair so consecutive calls consume the stream in a
// fixed, documented order.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed);

  // One N(0, 1) draw.
  double standard();
  // One N(0, sigma^2) draw.
  double normal(double sigma) { return sigma * standard(); }

  Pcg64& engine() { return rng_; }

 private:
  Pcg64 rng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace entseq
