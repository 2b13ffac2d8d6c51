#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace opineq {

// Seeded stream: std::mt19937_64 (bit-exact across conforming standard
// libraries) with hand-rolled 53-bit uniforms and Box-Muller normals, so no
// implementation-defined distribution object is involved.
class Rng {
 public:
  static constexpr std::string_view kAlgorithm =
      "mt19937_64; uniform=53-bit mantissa; normal=Box-Muller (pairs cached); "
      "split=splitmix64(seed, fnv1a64(spec), dim, trial)";

  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t next_u64() { return engine_(); }
  double uniform();                       // [0, 1)
  double uniform(double lo, double hi);   // [lo, hi)
  double normal();                        // N(0, 1)

  // Independent child seed for (seed, label, dim, index). Changing any part of
  // the key changes the stream; no two keys share state.
  static std::uint64_t split(std::uint64_t seed, std::string_view label, std::uint64_t dim, std::uint64_t index);

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace opineq
