#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace pmarket {

using BigInt = boost::multiprecision::cpp_int;

/// Exact arbitrary-precision rational. All amounts, prices and analytics
/// results are carried in this form; decimal rendering happens only at the
/// output boundary.
using Rational = boost::multiprecision::cpp_rational;

/// Parses "3", "-4.5", "7/3", "0.1". Throws DomainError on anything else.
Rational parse_rational(std::string_view text);

/// Exact rendering: "n" when the denominator is 1, otherwise "n/d".
std::string format_exact(const Rational& value);

/// Fixed-point decimal rendering with round-half-even ties, e.g.
/// format_decimal(1/3, 6) == "0.333333". places == 0 yields a bare integer.
std::string format_decimal(const Rational& value, int places = 6);

/// |a - b| <= tol, exactly.
bool within(const Rational& a, const Rational& b, const Rational& tol);

double to_double(const Rational& value);

} // namespace pmarket
