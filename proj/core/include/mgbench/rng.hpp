#pragma once

#include <cstdint>
#include <random>

namespace mgbench {

// Deterministic random source.  std::mt19937_64 supplies the bit stream; the
// uniform/normal/integer transforms are implemented here because the
// standard <random> distributions are implementation-defined and would break
// byte-identical artifacts across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform();

  // Standard normal via Box-Muller; draws are cached in pairs.
  double normal();

  // Uniform integer in [0, bound) by rejection; bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  // Fair coin.
  bool coin();

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Stable stream splitting: mixes a master seed with up to three stream
// labels, so per-task generators are independent of evaluation order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                          std::uint64_t b = 0, std::uint64_t c = 0);

}  // namespace mgbench
