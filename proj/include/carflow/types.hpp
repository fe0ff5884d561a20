#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace carflow {

using cplx = std::complex<double>;

// Basis state of the antisymmetric Fock space: bit i set = mode i occupied.
using Mask = std::uint32_t;

// Lattice point in Z^d; std::vector comparison gives the lexicographic order
// used for every basis enumeration in this project.
using Point = std::vector<int>;

// Hard ceiling on single-particle modes (Fock dimension 2^14 = 16384).
inline constexpr int kMaxFockModes = 14;

struct CapExceeded : std::runtime_error {
  explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct WindowTooSmall : std::runtime_error {
  explicit WindowTooSmall(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

inline void check_mode_cap(int modes, const std::string& who) {
  if (modes < 0 || modes > kMaxFockModes)
    throw CapExceeded(who + ": " + std::to_string(modes) +
                      " modes exceeds the cap of " + std::to_string(kMaxFockModes));
}

}  // namespace carflow
