#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace melogeo {

using BigInt = boost::multiprecision::cpp_int;

/** Exact rational scalar; always lowest terms, denominator > 0. */
using Rational = boost::multiprecision::cpp_rational;

/** Parses "num" or "num/den" with optional sign; throws SchemaViolation on anything else. */
Rational parse_rational(const std::string& text);

/** "num" when the denominator is 1, "num/den" otherwise. */
std::string to_string(const Rational& value);

/** Decimal approximation, truncated toward zero, trailing zeros stripped. */
std::string to_decimal_string(const Rational& value, unsigned digits = 12);

Rational abs(const Rational& value);

}  // namespace melogeo
