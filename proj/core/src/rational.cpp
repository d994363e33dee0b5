#include "covtau/rational.hpp"

#include <cctype>
#include <cstdlib>

#include "covtau/error.hpp"

namespace covtau {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  }
  return true;
}

// cpp_int's string constructor reads a leading 0 as octal; parse by hand.
BigInt from_digits(std::string_view digits) {
  BigInt r = 0;
  for (char ch : digits) r = r * 10 + (ch - '0');
  return r;
}

BigInt ten_to(unsigned e) {
  BigInt r = 1;
  for (unsigned i = 0; i < e; ++i) r *= 10;
  return r;
}

[[noreturn]] void reject(std::string_view text) {
  throw Error("not a rational number: '" + std::string(text) + "'");
}

}  // namespace

double to_double(const Rational& r) {
  const BigInt& num = numerator(r);
  const BigInt& den = denominator(r);
  // Both operands exact in a double: the quotient is correctly rounded.
  static const BigInt kExact = BigInt(1) << 53;
  if (abs(num) <= kExact && den <= kExact) {
    return num.convert_to<double>() / den.convert_to<double>();
  }
  return r.convert_to<double>();
}

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) reject(text);

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }

  Rational value;
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const auto num = s.substr(0, slash);
    const auto den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) reject(text);
    const BigInt d = from_digits(den);
    if (d == 0) throw Error("zero denominator in '" + std::string(text) + "'");
    value = Rational(from_digits(num), d);
  } else {
    std::string_view mantissa = s;
    long exponent = 0;
    if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
      mantissa = s.substr(0, e);
      std::string_view exp = s.substr(e + 1);
      bool exp_negative = false;
      if (!exp.empty() && (exp.front() == '+' || exp.front() == '-')) {
        exp_negative = exp.front() == '-';
        exp.remove_prefix(1);
      }
      if (!all_digits(exp) || exp.size() > 6) reject(text);
      exponent = std::strtol(std::string(exp).c_str(), nullptr, 10);
      if (exp_negative) exponent = -exponent;
    }
    std::string_view whole = mantissa;
    std::string_view frac;
    if (const auto dot = mantissa.find('.'); dot != std::string_view::npos) {
      whole = mantissa.substr(0, dot);
      frac = mantissa.substr(dot + 1);
    }
    if (whole.empty() && frac.empty()) reject(text);
    if (!whole.empty() && !all_digits(whole)) reject(text);
    if (!frac.empty() && !all_digits(frac)) reject(text);
    const std::string digits = std::string(whole) + std::string(frac);
    exponent -= static_cast<long>(frac.size());
    const BigInt significand = from_digits(digits);
    if (exponent >= 0) {
      value = Rational(significand * ten_to(static_cast<unsigned>(exponent)));
    } else {
      value = Rational(significand, ten_to(static_cast<unsigned>(-exponent)));
    }
  }
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

std::string decimal_label(const Rational& r) {
  BigInt scale = 1;
  for (int places = 0; places <= 6; ++places, scale *= 10) {
    const Rational scaled = r * scale;
    if (denominator(scaled) != 1) continue;
    const BigInt whole = abs(numerator(scaled));
    std::string digits = whole.str();
    if (places > 0) {
      if (digits.size() <= static_cast<std::size_t>(places)) {
        digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(), '0');
      }
      digits.insert(digits.size() - static_cast<std::size_t>(places), ".");
    }
    return (r < 0 ? "-" : "") + digits;
  }
  return to_string(r);
}

}  // namespace covtau
