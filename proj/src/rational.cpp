#include "debate/rational.hpp"

#include "debate/error.hpp"

#include <cctype>

namespace debate {

std::string to_string(const Rational& value) {
  return numerator(value).str() + "/" + denominator(value).str();
}

namespace {

BigInt parse_integer(std::string_view text, std::string_view whole) {
  if (text.empty()) fail(ErrorCode::parse, "malformed rational '" + std::string(whole) + "'");
  std::size_t i = 0;
  bool negative = false;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    i = 1;
  }
  if (i == text.size()) fail(ErrorCode::parse, "malformed rational '" + std::string(whole) + "'");
  BigInt result = 0;
  for (; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i])))
      fail(ErrorCode::parse, "malformed rational '" + std::string(whole) + "'");
    result = result * 10 + (text[i] - '0');
  }
  return negative ? BigInt(-result) : result;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(text.substr(0, slash), text);
    BigInt den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) fail(ErrorCode::parse, "zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string digits(text.substr(0, dot));
    std::string_view frac = text.substr(dot + 1);
    digits += frac;
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    return Rational(parse_integer(digits, text), scale);
  }
  return Rational(parse_integer(text, text));
}

BigInt pow2_int(unsigned exponent) {
  BigInt one = 1;
  return one << exponent;
}

Rational pow2(unsigned exponent) { return Rational(pow2_int(exponent)); }

Rational power(const Rational& base, unsigned exponent) {
  Rational out = 1;
  for (unsigned i = 0; i < exponent; ++i) out *= base;
  return out;
}

unsigned ceil_log2(std::uint64_t n) {
  unsigned r = 0;
  while ((std::uint64_t{1} << r) < n) ++r;
  return r;
}

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::usage: return "E-USAGE";
    case ErrorCode::parse: return "E-PARSE";
    case ErrorCode::validation: return "E-VALIDATION";
    case ErrorCode::precondition: return "E-PRECONDITION";
    case ErrorCode::strategy: return "E-STRATEGY";
    case ErrorCode::limit: return "E-LIMIT";
    case ErrorCode::io: return "E-IO";
  }
  return "E-UNKNOWN";
}

}  // namespace debate
