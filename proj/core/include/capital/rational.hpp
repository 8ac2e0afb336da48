#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace capital {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Accepts "3", "-2", "1/3", "0.25", "1e-2" is rejected (no exponents).
Rational parse_rational(std::string_view text);

// Canonical text: "p/q" in lowest terms, or "p" when the denominator is 1.
std::string to_string(const Rational& r);

// Nearest double; the only place exact values are rounded.
double to_double(const Rational& r);

// r^n for n >= 0.
Rational pow(const Rational& base, std::uint64_t exponent);

}  // namespace capital
