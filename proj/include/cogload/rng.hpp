#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace cogload {

// SplitMix64 finalizer (Steele, Lea & Flood). Used to derive independent
// stream seeds from (seed, stream id).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// FNV-1a over a tag, so stream ids can be named ("noise", "phase", ...).
constexpr std::uint64_t stream_id(std::string_view tag, std::uint64_t index = 0) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ull;
  }
  return splitmix64(h ^ splitmix64(index));
}

// Deterministic random source: std::mt19937_64 seeded with
// splitmix64(seed ^ stream). Uniform and Gaussian variates are derived here
// rather than through <random> distributions, whose algorithms are
// implementation-defined, so a given (seed, stream) yields the same numbers on
// every standard library.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream) : engine_(splitmix64(seed ^ stream)) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n), rejection-sampled to avoid modulo bias.
  std::uint64_t below(std::uint64_t n);

  // Standard normal via Box-Muller; the second variate of each pair is kept.
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_{0.0};
  bool has_spare_{false};
};

}  // namespace cogload
