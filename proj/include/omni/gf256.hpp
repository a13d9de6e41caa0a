#pragma once

#include <array>
#include <cstdint>

namespace omni::gf256 {

/// x^8 + x^4 + x^3 + x^2 + 1
inline constexpr unsigned kPolynomial = 0x11D;

struct Tables {
  std::array<std::uint8_t, 512> exp{};
  std::array<std::uint8_t, 256> log{};
};

inline constexpr Tables make_tables() {
  Tables t;
  unsigned x = 1;
  for (unsigned i = 0; i < 255; ++i) {
    t.exp[i] = static_cast<std::uint8_t>(x);
    t.log[x] = static_cast<std::uint8_t>(i);
    x <<= 1;
    if (x & 0x100) x ^= kPolynomial;
  }
  // Doubled so exp[log a + log b] needs no reduction mod 255.
  for (unsigned i = 255; i < 512; ++i) t.exp[i] = t.exp[i - 255];
  return t;
}

inline constexpr Tables kTables = make_tables();

inline constexpr std::uint8_t add(std::uint8_t a, std::uint8_t b) { return a ^ b; }

inline constexpr std::uint8_t mul(std::uint8_t a, std::uint8_t b) {
  if (a == 0 || b == 0) return 0;
  return kTables.exp[kTables.log[a] + kTables.log[b]];
}

/// Multiplicative inverse; a must be nonzero.
inline constexpr std::uint8_t inv(std::uint8_t a) { return kTables.exp[255 - kTables.log[a]]; }

inline constexpr std::uint8_t div(std::uint8_t a, std::uint8_t b) { return mul(a, inv(b)); }

}  // namespace omni::gf256
