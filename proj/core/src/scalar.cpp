#include "gptwb/scalar.hpp"

#include <charconv>
#include <cstdio>
#include <string>

#include "gptwb/errors.hpp"

namespace gptwb {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Parses an optionally signed decimal with optional exponent into an exact rational.
Rational parse_decimal(std::string_view s) {
  if (s.empty()) throw SchemaError("empty numeric literal");
  bool negative = false;
  std::size_t pos = 0;
  if (s[pos] == '+' || s[pos] == '-') {
    negative = s[pos] == '-';
    ++pos;
  }
  std::string digits;
  long exponent = 0;
  bool seen_point = false;
  bool any_digit = false;
  for (; pos < s.size(); ++pos) {
    char c = s[pos];
    if (c >= '0' && c <= '9') {
      digits.push_back(c);
      any_digit = true;
      if (seen_point) --exponent;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (c == 'e' || c == 'E') {
      ++pos;
      long e = 0;
      auto tail = s.substr(pos);
      if (!tail.empty() && tail.front() == '+') tail.remove_prefix(1);
      auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), e);
      if (ec != std::errc() || ptr != tail.data() + tail.size())
        throw SchemaError("bad exponent in numeric literal '" + std::string(s) + "'");
      exponent += e;
      pos = s.size();
      break;
    } else {
      throw SchemaError("bad numeric literal '" + std::string(s) + "'");
    }
  }
  if (!any_digit) throw SchemaError("bad numeric literal '" + std::string(s) + "'");
  // A leading zero would make the integer parser read the digits as octal.
  const auto first = digits.find_first_not_of('0');
  digits = first == std::string::npos ? "0" : digits.substr(first);
  boost::multiprecision::mpz_int mantissa(digits);
  boost::multiprecision::mpz_int scale = boost::multiprecision::pow(
      boost::multiprecision::mpz_int(10), static_cast<unsigned>(exponent < 0 ? -exponent : exponent));
  Rational r = exponent >= 0 ? Rational(mantissa * scale) : Rational(mantissa, scale);
  return negative ? Rational(-r) : r;
}

}  // namespace

namespace {

double parse_double(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw SchemaError("bad numeric literal '" + std::string(s) + "'");
  return v;
}

}  // namespace

template <>
double parse_scalar<double>(std::string_view text) {
  auto s = trim(text);
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return parse_double(s);
  double den = parse_double(trim(s.substr(slash + 1)));
  if (den == 0) throw SchemaError("zero denominator in '" + std::string(s) + "'");
  return parse_double(trim(s.substr(0, slash))) / den;
}

template <>
Rational parse_scalar<Rational>(std::string_view text) {
  auto s = trim(text);
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return parse_decimal(s);
  Rational num = parse_decimal(trim(s.substr(0, slash)));
  Rational den = parse_decimal(trim(s.substr(slash + 1)));
  if (den == 0) throw SchemaError("zero denominator in '" + std::string(s) + "'");
  return num / den;
}

std::string format_scalar(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) return std::to_string(x);
  return std::string(buf, ptr);
}

std::string format_scalar(const Rational& x) { return x.str(); }

}  // namespace gptwb
