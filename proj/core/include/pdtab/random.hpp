#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace pdtab {

// Seeded random stream with fully specified output.
//
// The engine is std::mt19937_64, whose sequence is fixed by the C++ standard.
// The standard distributions are implementation-defined, so every derived
// quantity (uniform doubles, bounded integers, shuffles) is computed here
// with explicit formulas. Two builds on different standard libraries produce
// the same draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, bound) by rejection sampling; bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  // Standard normal via Box-Muller (one value per call, no caching).
  double normal();

  // Fisher-Yates, iterating from the back.
  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    shuffle(std::span<T>(items));
  }

 private:
  std::mt19937_64 engine_;
};

// Per-purpose seed derived from the root seed and a stream name such as
// "split" or "init.saint": FNV-1a over the name, mixed with the root through
// splitmix64. Streams with different names are independent, so adding a new
// consumer does not perturb existing ones.
std::uint64_t derive_seed(std::uint64_t root, std::string_view stream);

}  // namespace pdtab
