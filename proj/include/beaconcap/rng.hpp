#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace beaconcap {

// Counter-based generator: the n-th output of a stream is a pure function of
// (key, n), so streams can be split by key without sharing state. The mixing
// function is the SplitMix64 finalizer.
class CounterRng {
 public:
  static constexpr std::string_view kAlgorithm = "splitmix64-counter";

  explicit CounterRng(std::uint64_t key) : key_(key) {}

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Key for the substream identified by `ids`, derived from a parent key.
  template <class... Ids>
  static constexpr std::uint64_t derive(std::uint64_t parent, Ids... ids) {
    std::uint64_t k = mix(parent ^ 0x6a09e667f3bcc909ULL);
    ((k = mix(k ^ (static_cast<std::uint64_t>(ids) + 0x9e3779b97f4a7c15ULL))), ...);
    return k;
  }

  std::uint64_t next_u64() { return mix(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  // Uniform in [0, 1) with 53 bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Box-Muller; always consumes two outputs so stream positions stay aligned.
  double normal(double mean, double stddev) {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return mean + stddev * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace beaconcap
