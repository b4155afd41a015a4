#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace debate {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Renders as "p/q" with q >= 1; integers keep the "/1" suffix.
std::string to_string(const Rational& value);

/// Accepts "p/q", "p" or a terminating decimal such as "0.125".
Rational parse_rational(std::string_view text);

Rational pow2(unsigned exponent);
BigInt pow2_int(unsigned exponent);
Rational power(const Rational& base, unsigned exponent);

/// Smallest r with 2^r >= n (n >= 1).
unsigned ceil_log2(std::uint64_t n);

}  // namespace debate
