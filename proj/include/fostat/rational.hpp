#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace fostat {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parse "a/b" or a plain integer literal. Throws std::invalid_argument on
/// malformed input or zero denominator.
Rational parse_rational(const std::string& text);

/// "num/den" with the fraction reduced.
std::string to_fraction_string(const Rational& q);

/// Decimal rendering truncated to `digits` fractional digits.
std::string to_decimal_string(const Rational& q, int digits = 12);

/// Exact integer power.
Integer ipow(Integer base, unsigned exp);

}  // namespace fostat
