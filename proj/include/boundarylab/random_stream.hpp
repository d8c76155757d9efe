#pragma once

#include <cstdint>
#include <random>

namespace boundarylab {

// A seeded pseudo-random stream. Every replicate of every study owns one,
// derived from the master seed by a stable hash, so results never depend on
// which thread ran the replicate or in what order.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return uniform_(engine_); }
  double normal() { return normal_(engine_); }
  bool bernoulli(double p) { return uniform() < p; }

  // Number of failures before the first success in Bernoulli(p) trials.
  std::uint64_t geometric(double p) {
    std::geometric_distribution<std::uint64_t> dist(p);
    return dist(engine_);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// splitmix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t study,
                                    std::uint64_t setting,
                                    std::uint64_t replicate) {
  std::uint64_t h = mix64(master);
  h = mix64(h ^ study);
  h = mix64(h ^ setting);
  h = mix64(h ^ replicate);
  return h;
}

inline RandomStream rng_stream(std::uint64_t master, std::uint64_t study,
                               std::uint64_t setting,
                               std::uint64_t replicate) {
  return RandomStream(derive_seed(master, study, setting, replicate));
}

}  // namespace boundarylab
