#pragma once
// Counter-based generator: value k of stream s is a SplitMix64 hash of
// (seed, s, k), so streams can be split and replayed independently.

#include <cstdint>
#include <limits>

namespace margulis {

class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return hash(seed_ ^ mix(stream_ + 0x9e3779b97f4a7c15ULL) ^ (counter_++ * 0xbf58476d1ce4e5b9ULL)); }

  CounterRng split(std::uint64_t child) const { return CounterRng(seed_, mix(stream_ * 31 + child + 1)); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  static std::uint64_t hash(std::uint64_t x) { return mix(x + 0x9e3779b97f4a7c15ULL); }

  std::uint64_t seed_, stream_, counter_ = 0;
};

}  // namespace margulis
