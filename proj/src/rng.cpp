#include "snw/rng.hpp"

#include <cmath>
#include <numbers>

namespace snw {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

RngSeed derive_seed(RngSeed parent, std::uint64_t index) {
  return RngSeed{mix64(mix64(parent.value + kGolden) ^ mix64(index * 0xD1B54A32D192ED03ULL + 1))};
}

CounterRng::CounterRng(RngSeed seed) : key_(mix64(seed.value ^ 0x5EED5EED5EED5EEDULL)) {}

std::uint64_t CounterRng::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double CounterRng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::uniform_open_low() {
  return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double CounterRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform_open_low();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

double CounterRng::exponential() {
  return -std::log(uniform_open_low());
}

}  // namespace snw
