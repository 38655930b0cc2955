#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace eeclass {

// Seed derivation and variate generation are pinned so that every number in
// a run is reproducible from one user seed:
//   * child seeds come from one SplitMix64 step over (seed XOR tag*PHI64),
//   * raw bits come from std::mt19937_64 (bit-exact per the C++ standard),
//   * uniforms take the top 53 bits of a raw draw, scaled to [0, 1),
//   * normals use the Box-Muller transform with a cached spare.

uint64_t splitmix64(uint64_t& state);

// Independent child stream seed for a (seed, tag) pair.
uint64_t derive_seed(uint64_t seed, uint64_t tag);

class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  // Uniform double in [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; the second variate of each pair is
  // cached, so draw order within one stream matters and is fixed.
  double normal();

  // Uniform integer in [0, bound), bound >= 1. Plain modulo reduction; the
  // bias is below 2^-50 for every bound used here and keeping the reduction
  // trivial makes the stream easy to re-derive in tests.
  std::size_t below(std::size_t bound) {
    return static_cast<std::size_t>(next_u64() % static_cast<uint64_t>(bound));
  }

  // In-place Fisher-Yates shuffle, traversed from the back.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t j = v.size(); j > 1; --j) {
      std::size_t i = below(j);
      std::swap(v[j - 1], v[i]);
    }
  }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace eeclass
