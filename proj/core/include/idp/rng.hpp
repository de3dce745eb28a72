#pragma once

#include <cstdint>

namespace idp {

// splitmix64 finalizer. All randomness in this project goes through this
// mixer so that any two builds produce bit-identical streams.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ull;

// Counter-based generator: draw n is a pure function of (seed, n), so draws
// can be taken out of order or in parallel without changing the stream.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t at(std::uint64_t n) const {
    return mix64(seed_ + (n + 1) * kGoldenGamma);
  }

  std::uint64_t next() { return at(counter_++); }

  // Uniform in [0, 1) with 53-bit resolution.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Independent stream keyed off this one, e.g. one per dataset record.
  CounterRng substream(std::uint64_t key) const {
    return CounterRng(mix64(seed_ ^ mix64(key + kGoldenGamma)));
  }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace idp
