#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace covtau {

/// Arbitrary-precision exact rational. Breakpoints, cover values and areas
/// are held in this type; doubles appear only at export and in Pass@k.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational make_rational(std::int64_t num, std::int64_t den) {
  return Rational(BigInt(num), BigInt(den));
}

double to_double(const Rational& r);

/// Parses "1/3", "0.25", ".5", "2e-3", "-1" into an exact rational.
/// Decimal notation is converted exactly (0.2 is 1/5, not the nearest double).
Rational parse_rational(std::string_view text);

/// "num/den", or "num" when the denominator is one.
std::string to_string(const Rational& r);

/// Short label for thresholds: "0.2" when the value is a terminating decimal
/// with at most six places, otherwise "num/den".
std::string decimal_label(const Rational& r);

}  // namespace covtau
