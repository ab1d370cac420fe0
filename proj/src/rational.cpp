#include "melogeo/rational.hpp"

#include <cctype>
#include <cstddef>

#include "melogeo/errors.hpp"

namespace melogeo {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// Accepts an optionally signed decimal integer literal.
BigInt parse_integer(const std::string& text, const std::string& original) {
  std::string body = text;
  bool negative = false;
  if (!body.empty() && (body[0] == '+' || body[0] == '-')) {
    negative = body[0] == '-';
    body.erase(body.begin());
  }
  if (!all_digits(body)) {
    fail(ErrorCode::SchemaViolation, "invalid rational literal: \"" + original + "\"");
  }
  BigInt value(body);
  return negative ? -value : value;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::size_t begin = text.find_first_not_of(" \t");
  std::size_t end = text.find_last_not_of(" \t");
  if (begin == std::string::npos) {
    fail(ErrorCode::SchemaViolation, "invalid rational literal: \"" + text + "\"");
  }
  std::string body = text.substr(begin, end - begin + 1);
  std::size_t slash = body.find('/');
  if (slash == std::string::npos) {
    return Rational(parse_integer(body, text));
  }
  BigInt num = parse_integer(body.substr(0, slash), text);
  std::string den_text = body.substr(slash + 1);
  if (!all_digits(den_text)) {
    fail(ErrorCode::SchemaViolation, "invalid rational literal: \"" + text + "\"");
  }
  BigInt den(den_text);
  if (den == 0) {
    fail(ErrorCode::SchemaViolation, "zero denominator: \"" + text + "\"");
  }
  return Rational(num, den);
}

std::string to_string(const Rational& value) {
  std::string out = numerator(value).str();
  if (denominator(value) != 1) {
    out += "/" + denominator(value).str();
  }
  return out;
}

std::string to_decimal_string(const Rational& value, unsigned digits) {
  BigInt num = numerator(value);
  BigInt den = denominator(value);
  bool negative = num < 0;
  if (negative) num = -num;
  BigInt whole = num / den;
  BigInt rem = num % den;
  std::string out = whole.str();
  if (rem != 0 && digits > 0) {
    BigInt scale = boost::multiprecision::pow(BigInt(10), digits);
    std::string frac = BigInt(rem * scale / den).str();
    frac.insert(0, digits - frac.size(), '0');
    while (!frac.empty() && frac.back() == '0') frac.pop_back();
    if (!frac.empty()) out += "." + frac;
  }
  if (negative && out != "0") out.insert(out.begin(), '-');
  return out;
}

Rational abs(const Rational& value) {
  return value < 0 ? Rational(-value) : value;
}

}  // namespace melogeo
