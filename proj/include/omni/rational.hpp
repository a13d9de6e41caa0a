#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "omni/error.hpp"

namespace omni {

/// Exact rational number; always kept in canonical form (gcd(num, den) = 1, den > 0).
using Rational = mpq_class;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  Rational r(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
  r.canonicalize();
  return r;
}

/// "num/den", with den printed even when it is 1.
inline std::string to_fraction_string(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline Rational parse_rational(std::string_view text) {
  Rational r;
  try {
    std::string s(text);
    if (s.find('/') == std::string::npos) s += "/1";
    r.set_str(s, 10);
  } catch (const std::invalid_argument&) {
    throw Error(ErrorCode::InvalidArgument, "not a rational: '" + std::string(text) + "'");
  }
  if (r.get_den() == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator");
  r.canonicalize();
  return r;
}

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

inline Rational sum(const std::vector<Rational>& values) {
  Rational total = 0;
  for (const auto& v : values) total += v;
  return total;
}

}  // namespace omni
