#pragma once

#include <cmath>
#include <concepts>
#include <string>
#include <string_view>
#include <type_traits>

#include <boost/multiprecision/gmp.hpp>

namespace gptwb {

/// Exact arbitrary-precision rational. Expression templates are disabled so
/// that generic code can use `auto` freely.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

/// The two scalar realizations the library is instantiated for.
template <class T>
concept Field = std::same_as<T, double> || std::same_as<T, Rational>;

template <class T>
inline constexpr bool is_exact_v = std::is_same_v<T, Rational>;

/// Comparison tolerance for the float realization. Ignored by exact arithmetic.
struct Tolerance {
  double eps = 1e-9;
};

template <Field T>
bool is_zero(const T& x, const Tolerance& tol = {}) {
  if constexpr (is_exact_v<T>) {
    return x == 0;
  } else {
    return std::abs(x) <= tol.eps;
  }
}

/// a == b (within eps for floats).
template <Field T>
bool approx_eq(const T& a, const T& b, const Tolerance& tol = {}) {
  return is_zero<T>(a - b, tol);
}

/// a <= b (with eps slack for floats).
template <Field T>
bool leq(const T& a, const T& b, const Tolerance& tol = {}) {
  if constexpr (is_exact_v<T>) {
    return a <= b;
  } else {
    return a <= b + tol.eps;
  }
}

/// a > b by more than eps (strict for exact).
template <Field T>
bool gt(const T& a, const T& b, const Tolerance& tol = {}) {
  return !leq(a, b, tol);
}

template <Field T>
T abs_value(const T& x) {
  if constexpr (is_exact_v<T>) {
    return x < 0 ? T(-x) : x;
  } else {
    return std::abs(x);
  }
}

template <Field T>
double to_double(const T& x) {
  if constexpr (is_exact_v<T>) {
    return x.template convert_to<double>();
  } else {
    return x;
  }
}

/// Converts a double into T. For rationals the binary value is taken exactly.
template <Field T>
T from_double(double x) {
  return T(x);
}

/// Parses a decimal ("0.25", "-1e-3") or fraction ("1/3") literal.
/// Decimals are converted exactly for the rational realization.
template <Field T>
T parse_scalar(std::string_view text);

template <>
double parse_scalar<double>(std::string_view text);
template <>
Rational parse_scalar<Rational>(std::string_view text);

/// Canonical text form: shortest round-trip decimal for doubles, p/q for rationals.
std::string format_scalar(double x);
std::string format_scalar(const Rational& x);

}  // namespace gptwb
