#include "somos/rational.hpp"

#include <cmath>
#include <limits>

#include "somos/errors.hpp"

namespace somos {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

long double big_to_real(const BigInt& value, long& exponent) {
  // value = mantissa * 2^exponent with mantissa carrying 64 significant bits.
  const auto bits = static_cast<long>(mpz_sizeinbase(value.get_mpz_t(), 2));
  BigInt m = abs(value);
  exponent = 0;
  if (bits > 64) {
    exponent = bits - 64;
    m >>= static_cast<mp_bitcnt_t>(exponent);
  }
  BigInt hi = m >> 32;
  BigInt lo = m - (hi << 32);
  long double r = std::ldexp(static_cast<long double>(hi.get_ui()), 32) + static_cast<long double>(lo.get_ui());
  return value < 0 ? -r : r;
}

// Exact conversion of a nonnegative integral long double.
BigInt big_from_integral(long double v) {
  int exponent = 0;
  const long double mantissa = std::frexp(v, &exponent);
  BigInt out(static_cast<unsigned long>(std::ldexp(mantissa, 64)));
  exponent -= 64;
  if (exponent >= 0) {
    mpz_mul_2exp(out.get_mpz_t(), out.get_mpz_t(), static_cast<mp_bitcnt_t>(exponent));
  } else {
    mpz_fdiv_q_2exp(out.get_mpz_t(), out.get_mpz_t(), static_cast<mp_bitcnt_t>(-exponent));
  }
  return out;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  std::string_view num = s;
  std::string_view den = "1";
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    num = trim(s.substr(0, slash));
    den = trim(s.substr(slash + 1));
  }
  if (!all_digits(num) || !all_digits(den)) {
    throw Error(ErrorKind::InvalidArgument, "malformed rational '" + std::string(text) + "'");
  }
  BigInt n(std::string(num), 10);
  BigInt d(std::string(den), 10);
  if (d == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator in '" + std::string(text) + "'");
  Rational r(negative ? BigInt(-n) : n, d);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& value) { return value.get_str(10); }

bool is_integer(const Rational& value) { return value.get_den() == 1; }

long double to_real(const Rational& value) {
  if (value == 0) return 0.0L;
  BigInt a = abs(value.get_num());
  BigInt b = value.get_den();
  const long shift = 70 - (static_cast<long>(mpz_sizeinbase(a.get_mpz_t(), 2)) -
                           static_cast<long>(mpz_sizeinbase(b.get_mpz_t(), 2)));
  if (shift > 0) {
    a <<= static_cast<mp_bitcnt_t>(shift);
  } else {
    b <<= static_cast<mp_bitcnt_t>(-shift);
  }
  BigInt quotient = a / b;
  long exponent = 0;
  long double r = big_to_real(quotient, exponent);
  r = std::ldexp(r, static_cast<int>(exponent - shift));
  return value < 0 ? -r : r;
}

long double log_abs(const Rational& value) {
  if (value == 0) return -std::numeric_limits<long double>::infinity();
  auto log_big = [](const BigInt& v) {
    long exponent = 0;
    long double m = std::fabs(big_to_real(v, exponent));
    return std::log(m) + static_cast<long double>(exponent) * std::log(2.0L);
  };
  return log_big(value.get_num()) - log_big(value.get_den());
}

Rational nearest_rational(long double x, std::int64_t max_denominator, long double tolerance) {
  if (!std::isfinite(x)) throw Error(ErrorKind::InvalidArgument, "cannot round a non-finite value");
  const bool negative = x < 0;
  long double y = std::fabs(x);
  // Convergents p/q of the continued fraction of y.
  BigInt p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  long double frac = y;
  for (int iter = 0; iter < 64; ++iter) {
    const long double a_real = std::floor(frac);
    const BigInt a = big_from_integral(a_real);
    BigInt p2 = a * p1 + p0;
    BigInt q2 = a * q1 + q0;
    if (q2 > max_denominator) {
      // Best semiconvergent still inside the bound.
      BigInt k = (BigInt(max_denominator) - q0) / q1;
      BigInt ps = k * p1 + p0;
      BigInt qs = k * q1 + q0;
      Rational semi(ps, qs);
      Rational conv(p1, q1);
      semi.canonicalize();
      conv.canonicalize();
      const long double es = std::fabs(to_real(semi) - y);
      const long double ec = std::fabs(to_real(conv) - y);
      Rational target = (es < ec) ? semi : conv;
      return negative ? Rational(-target) : target;
    }
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    if (tolerance > 0) {
      Rational conv(p1, q1);
      conv.canonicalize();
      if (std::fabs(to_real(conv) - y) <= tolerance) return negative ? Rational(-conv) : conv;
    }
    const long double rem = frac - a_real;
    if (rem < 1e-30L) break;
    frac = 1.0L / rem;
  }
  Rational r(p1, q1);
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

Rational pow(const Rational& base, std::int64_t exponent) {
  if (exponent < 0) {
    if (base == 0) throw Error(ErrorKind::ZeroDenominator, "negative power of zero");
    Rational inv = 1 / base;
    return pow(inv, -exponent);
  }
  BigInt num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exponent));
  Rational r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace somos
