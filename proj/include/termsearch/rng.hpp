#pragma once

#include <cstdint>

namespace termsearch {

// Counter-based RNG helpers. Deriving a stream from (seed, counter) keeps
// parallel loops deterministic regardless of scheduling.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t counter) {
  return splitmix64(seed ^ (counter * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL));
}

// Small sequential generator seeded from a mixed state.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t state) : state_(state) {}
  CounterRng(std::uint64_t seed, std::uint64_t counter) : state_(mix_seed(seed, counter)) {}

  std::uint64_t next_u64() {
    state_ = splitmix64(state_);
    return state_;
  }

  // uniform in [0, 1)
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool next_bernoulli(double p) { return next_double() < p; }

  // uniform integer in [0, n)
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

 private:
  std::uint64_t state_;
};

}  // namespace termsearch
