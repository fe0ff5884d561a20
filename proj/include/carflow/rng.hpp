#pragma once

#include <cstdint>
#include <string>

#include "carflow/types.hpp"

namespace carflow {

// Deterministic generator behind every randomized check.  The mixing
// function (SplitMix64) and the sampling maps below are part of the report
// contract: the same seed reproduces the same random elements bit for bit,
// independent of thread count.  See README for the exact definition.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // uniform in [0,1), 53 bits
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // real part drawn first, then imaginary; both uniform in [-1,1)
  cplx uniform_cplx() {
    const double re = 2.0 * uniform01() - 1.0;
    const double im = 2.0 * uniform01() - 1.0;
    return {re, im};
  }

  // small n only; modulo bias is irrelevant at desk scale
  std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }

 private:
  std::uint64_t state_;
};

// FNV-1a over bytes; used to derive per-check streams and input digests.
inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Independent stream for a named check.
inline SplitMix64 check_stream(std::uint64_t seed, const std::string& name) {
  return SplitMix64(seed ^ fnv1a64(name));
}

}  // namespace carflow
