#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace somos {

/// Exact arbitrary-precision fraction. GMP keeps every result in lowest
/// terms with a positive denominator; values built from strings go through
/// parse_rational, which canonicalizes.
using Rational = mpq_class;
using BigInt = mpz_class;

/// Accepts "p/q", "p", and an optional leading sign. Throws
/// Error(InvalidArgument) on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

/// "p/q", or just "p" when the denominator is 1.
std::string to_string(const Rational& value);

bool is_integer(const Rational& value);

/// Correctly rounded to within a couple of ulps of long double, with no
/// intermediate overflow for huge numerators/denominators.
long double to_real(const Rational& value);

/// log|value| for nonzero value, safe for values far outside the long double range.
long double log_abs(const Rational& value);

/// Best rational approximation of x with denominator <= max_denominator
/// (continued-fraction convergents and semiconvergents). With a positive
/// tolerance the first convergent within it is returned instead, so that
/// rounding noise is not fitted.
Rational nearest_rational(long double x, std::int64_t max_denominator, long double tolerance = 0);

Rational pow(const Rational& base, std::int64_t exponent);

}  // namespace somos
