#pragma once

#include <cstdint>

namespace snw {

struct RngSeed {
  std::uint64_t value = 0;

  constexpr RngSeed() = default;
  constexpr explicit RngSeed(std::uint64_t v) : value(v) {}
  friend constexpr bool operator==(RngSeed, RngSeed) = default;
};

/// Deterministic child seed for sub-stream `index` of `parent`.
RngSeed derive_seed(RngSeed parent, std::uint64_t index);

// Counter-based generator "snw-ctr64 v1": output n is a SplitMix64 finalizer
// of (key + n * golden). Draws depend only on (seed, n), so any two builds
// with the same libm produce bit-identical sequences.
class CounterRng {
 public:
  static constexpr const char* kName = "snw-ctr64";
  static constexpr int kVersion = 1;

  explicit CounterRng(RngSeed seed);

  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform in (0, 1].
  double uniform_open_low();
  /// Standard normal via Box-Muller; caches the second variate.
  double normal();
  /// Exp(1) variate.
  double exponential();

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace snw
