#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace dippl {

/// Arbitrary-precision exact rational. All probabilities and weights are
/// carried in this type unless a caller explicitly asks for doubles.
using Rational = mpq_class;

/// Parses `"3/5"`, `"0.6"`, `"1"`. Returns false on malformed text or a zero
/// denominator; `out` is untouched in that case.
bool parse_rational(std::string_view text, Rational& out);

/// Canonical `p/q` rendering (`p` alone when q = 1).
std::string to_string(const Rational& r);

/// Decimal rendering with a fixed number of fractional digits, rounded to
/// nearest.
std::string to_decimal(const Rational& r, int digits = 6);

}  // namespace dippl
