#include "fostat/rational.hpp"

#include <cctype>

namespace fostat {

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(Integer(text));
    Integer num(text.substr(0, slash));
    Integer den(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("malformed rational '" + text + "'");
  }
}

std::string to_fraction_string(const Rational& q) {
  return numerator(q).str() + "/" + denominator(q).str();
}

std::string to_decimal_string(const Rational& q, int digits) {
  Integer num = numerator(q);
  Integer den = denominator(q);
  bool neg = num < 0;
  if (neg) num = -num;
  Integer whole = num / den;
  Integer rem = num % den;
  std::string out = (neg ? "-" : "") + whole.str();
  if (digits > 0) {
    out += '.';
    for (int i = 0; i < digits; ++i) {
      rem *= 10;
      out += char('0' + static_cast<int>(rem / den));
      rem %= den;
    }
  }
  return out;
}

Integer ipow(Integer base, unsigned exp) {
  Integer result = 1;
  while (exp) {
    if (exp & 1u) result *= base;
    base *= base;
    exp >>= 1u;
  }
  return result;
}

}  // namespace fostat
