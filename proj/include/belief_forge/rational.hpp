#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace belief_forge {

/// Exact rational number. All belief and mass values live here.
using Rational = mpq_class;

/// Canonicalized p/q. mpq_class(p, q) alone does not reduce.
inline Rational ratio(long p, long q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

/// Parses "p/q", an integer, or a plain decimal such as "0.3" exactly.
/// Throws InvalidArgument on malformed text.
Rational parse_rational(std::string_view text);

/// Canonical exact rendering: "0", "1", "3/10".
std::string to_exact_string(const Rational& value);

/// Decimal rendering with at most `digits` fractional digits, rounded half
/// away from zero, trailing zeros trimmed.
std::string to_decimal_string(const Rational& value, int digits = 12);

}  // namespace belief_forge
