#pragma once

#include <cmath>
#include <concepts>
#include <string>
#include <vector>

#include "somos/errors.hpp"
#include "somos/numeric.hpp"
#include "somos/rational.hpp"
#include "somos/sequence.hpp"

// Reduced maps of the Somos recurrences and their first integrals.
//
//   f(n) = tau(n+1) tau(n-1) / tau(n)^2      f(n-1) f(n)^2 f(n+1) = alpha f(n) + beta
//   h(n) = f(n+1) f(n)                        h(n-1) h(n) h(n+1)  = alpha~ h(n) + beta~
//
// Every map and invariant is a template over the scalar so orbits can be
// run exactly (Rational) or in complex floating point.
namespace somos::qrt {

using exact::Index;
using exact::Somos4Params;
using exact::Somos5Params;

template <typename T>
concept Scalar = std::same_as<T, Rational> || std::same_as<T, Complex>;

template <Scalar T>
T from_rational(const Rational& r) {
  if constexpr (std::same_as<T, Rational>) {
    return r;
  } else {
    return Complex(to_real(r), 0);
  }
}

template <Scalar T>
bool is_zero(const T& x) {
  if constexpr (std::same_as<T, Rational>) {
    return x == 0;
  } else {
    return std::abs(x) == 0;
  }
}

template <Scalar T>
bool nearly_equal(const T& a, const T& b) {
  if constexpr (std::same_as<T, Rational>) {
    return a == b;
  } else {
    return std::abs(a - b) <= 64 * std::numeric_limits<Real>::epsilon() * std::max(std::abs(a), std::abs(b));
  }
}

namespace detail {
template <Scalar T>
void require_nonzero(const T& x, const char* what) {
  if (is_zero(x)) throw Error(ErrorKind::ZeroDenominator, what);
}
template <Scalar T>
T checked_result(T x, const char* map) {
  if (is_zero(x)) throw Error(ErrorKind::MapSingular, std::string(map) + " produced a zero iterate");
  return x;
}
}  // namespace detail

/// Two consecutive iterates of a second-order map; `index` is that of `curr`.
template <Scalar T>
struct PairState {
  T prev;
  T curr;
  Index index = 0;
  // Set by step_h when h(n+1) == h(n-1): J~ is still conserved but no longer
  // pins down the map.
  bool periodic_degeneracy = false;
};

template <Scalar T>
using FState = PairState<T>;
template <Scalar T>
using HState = PairState<T>;

// --- f-map ------------------------------------------------------------------

template <Scalar T>
FState<T> step_f(const FState<T>& s, const Somos4Params& p) {
  detail::require_nonzero(T(s.prev * s.curr), "f-map needs f(n-1) f(n) != 0");
  const T alpha = from_rational<T>(p.alpha);
  const T beta = from_rational<T>(p.beta);
  T next = (alpha * s.curr + beta) / (s.prev * s.curr * s.curr);
  return {s.curr, detail::checked_result(std::move(next), "f-map"), s.index + 1};
}

template <Scalar T>
FState<T> step_f_back(const FState<T>& s, const Somos4Params& p) {
  detail::require_nonzero(T(s.prev * s.curr), "f-map needs f(n-1) f(n) != 0");
  const T alpha = from_rational<T>(p.alpha);
  const T beta = from_rational<T>(p.beta);
  T before = (alpha * s.prev + beta) / (s.prev * s.prev * s.curr);
  return {detail::checked_result(std::move(before), "f-map"), s.prev, s.index - 1};
}

/// J = f(n-1) f(n) + alpha (1/f(n-1) + 1/f(n)) + beta / (f(n-1) f(n))
template <Scalar T>
T invariant_J(const T& f_prev, const T& f_curr, const Somos4Params& p) {
  const T prod = f_prev * f_curr;
  detail::require_nonzero(prod, "J needs nonzero f values");
  const T alpha = from_rational<T>(p.alpha);
  const T beta = from_rational<T>(p.beta);
  return prod + alpha * (T(1) / f_prev + T(1) / f_curr) + beta / prod;
}

// --- h-map ------------------------------------------------------------------

template <Scalar T>
HState<T> step_h(const HState<T>& s, const Somos5Params& p) {
  detail::require_nonzero(T(s.prev * s.curr), "h-map needs h(n-1) h(n) != 0");
  const T alpha = from_rational<T>(p.alpha);
  const T beta = from_rational<T>(p.beta);
  T next = (alpha * s.curr + beta) / (s.prev * s.curr);
  HState<T> out{s.curr, detail::checked_result(std::move(next), "h-map"), s.index + 1};
  out.periodic_degeneracy = nearly_equal(out.curr, s.prev);
  return out;
}

template <Scalar T>
HState<T> step_h_back(const HState<T>& s, const Somos5Params& p) {
  detail::require_nonzero(T(s.prev * s.curr), "h-map needs h(n-1) h(n) != 0");
  const T alpha = from_rational<T>(p.alpha);
  const T beta = from_rational<T>(p.beta);
  T before = (alpha * s.prev + beta) / (s.prev * s.curr);
  HState<T> out{detail::checked_result(std::move(before), "h-map"), s.prev, s.index - 1};
  out.periodic_degeneracy = nearly_equal(out.prev, s.curr);
  return out;
}

/// J~ = h(n-1) + h(n) + alpha~ (1/h(n-1) + 1/h(n)) + beta~ / (h(n-1) h(n))
template <Scalar T>
T invariant_Jt(const T& h_prev, const T& h_curr, const Somos5Params& p) {
  const T prod = h_prev * h_curr;
  detail::require_nonzero(prod, "J~ needs nonzero h values");
  const T alpha = from_rational<T>(p.alpha);
  const T beta = from_rational<T>(p.beta);
  return h_prev + h_curr + alpha * (T(1) / h_prev + T(1) / h_curr) + beta / prod;
}

/// (X + Y - J~)(XY + alpha~) + beta~ + alpha~ J~ at (X, Y) = (h(n-1), h(n)).
template <Scalar T>
T h_curve_residual(const T& h_prev, const T& h_curr, const Somos5Params& p, const T& jt) {
  const T alpha = from_rational<T>(p.alpha);
  const T beta = from_rational<T>(p.beta);
  return (h_prev + h_curr - jt) * (h_prev * h_curr + alpha) + beta + alpha * jt;
}

/// J~(n+1) - J~(n) minus its factored form
/// (h(n+1) - h(n-1)) / (h(n-1) h(n) h(n+1)) * (h(n-1) h(n) h(n+1) - alpha~ h(n) - beta~).
template <Scalar T>
T jt_difference_residual(const T& h_prev, const T& h_curr, const T& h_next, const Somos5Params& p) {
  const T alpha = from_rational<T>(p.alpha);
  const T beta = from_rational<T>(p.beta);
  const T triple = h_prev * h_curr * h_next;
  detail::require_nonzero(triple, "h values must be nonzero");
  const T factored = (h_next - h_prev) / triple * (triple - alpha * h_curr - beta);
  return invariant_Jt(h_curr, h_next, p) - invariant_Jt(h_prev, h_curr, p) - factored;
}

// --- third-order f-map of Somos 5 --------------------------------------------

/// f(n+2) = (alpha~ f(n) f(n+1) + beta~) / (f(n-1) f(n)^2 f(n+1)^2)
template <Scalar T>
T step_f3(const T& f_prev, const T& f_curr, const T& f_next, const Somos5Params& p) {
  const T den = f_prev * f_curr * f_curr * f_next * f_next;
  detail::require_nonzero(den, "third-order map needs nonzero f values");
  const T alpha = from_rational<T>(p.alpha);
  const T beta = from_rational<T>(p.beta);
  return detail::checked_result(T((alpha * f_curr * f_next + beta) / den), "third-order map");
}

/// f(n-2) from f(n-1), f(n), f(n+1): the same relation read backwards.
template <Scalar T>
T step_f3_back(const T& f_prev, const T& f_curr, const T& f_next, const Somos5Params& p) {
  const T den = f_prev * f_prev * f_curr * f_curr * f_next;
  detail::require_nonzero(den, "third-order map needs nonzero f values");
  const T alpha = from_rational<T>(p.alpha);
  const T beta = from_rational<T>(p.beta);
  return detail::checked_result(T((alpha * f_prev * f_curr + beta) / den), "third-order map");
}

/// I~ = f(n-1) f(n) f(n+1) + alpha~ (1/f(n-1) + 1/f(n) + 1/f(n+1)) + beta~ / (f(n-1) f(n) f(n+1))
template <Scalar T>
T invariant_It(const T& f_prev, const T& f_curr, const T& f_next, const Somos5Params& p) {
  const T prod = f_prev * f_curr * f_next;
  detail::require_nonzero(prod, "I~ needs nonzero f values");
  const T alpha = from_rational<T>(p.alpha);
  const T beta = from_rational<T>(p.beta);
  return prod + alpha * (T(1) / f_prev + T(1) / f_curr + T(1) / f_next) + beta / prod;
}

/// The second integral of the third-order map written in f; equals
/// invariant_Jt(h(n-1), h(n)) with h(k) = f(k+1) f(k).
template <Scalar T>
T invariant_Jt_from_f(const T& f_prev, const T& f_curr, const T& f_next, const Somos5Params& p) {
  const T a = f_prev * f_curr;
  const T b = f_curr * f_next;
  detail::require_nonzero(T(a * b), "J~ needs nonzero f values");
  const T alpha = from_rational<T>(p.alpha);
  const T beta = from_rational<T>(p.beta);
  return a + b + alpha * (T(1) / a + T(1) / b) + beta / (a * b);
}

// --- parameter transfers ----------------------------------------------------

/// A Somos 4 sequence also satisfies Somos 5 with (-beta, alpha^2 + beta J).
Somos5Params somos4_to_somos5_params(const Somos4Params& p, const Rational& j);

/// Both parity subsequences of a Somos 5 sequence satisfy Somos 4 with
/// (beta~^2, alpha~ (2 beta~^2 + alpha~ beta~ J~ + alpha~^3)).
Somos4Params subsequence_somos4_params(const Somos5Params& p, const Rational& jt);

// --- symmetric biquadratic (QRT) map ------------------------------------------

template <Scalar T>
struct BiquadraticCurve {
  T a, b, c, d, e;
  T K = T(0);
};

/// e u v + d (u + v) + c (u/v + v/u) + b (1/u + 1/v) + a / (u v)
template <Scalar T>
T biquadratic_invariant(const T& u_prev, const T& u_curr, const BiquadraticCurve<T>& k) {
  const T prod = u_prev * u_curr;
  detail::require_nonzero(prod, "biquadratic invariant needs nonzero iterates");
  return k.e * prod + k.d * (u_prev + u_curr) + k.c * (u_prev / u_curr + u_curr / u_prev) +
         k.b * (T(1) / u_prev + T(1) / u_curr) + k.a / prod;
}

/// u(n+1) = (a + b u + c u^2) / ((c + d u + e u^2) u(n-1)), u = u(n)
template <Scalar T>
T biquadratic_step(const T& u_prev, const T& u_curr, const BiquadraticCurve<T>& k) {
  const T den = (k.c + k.d * u_curr + k.e * u_curr * u_curr) * u_prev;
  detail::require_nonzero(den, "biquadratic map denominator vanishes");
  return detail::checked_result(T((k.a + k.b * u_curr + k.c * u_curr * u_curr) / den), "biquadratic map");
}

/// B(X, Y) = e X^2 Y^2 + d XY(X+Y) + c (X^2 + Y^2) + b (X+Y) + a - K XY
template <Scalar T>
T biquadratic_curve_value(const T& x, const T& y, const BiquadraticCurve<T>& k) {
  return k.e * x * x * y * y + k.d * x * y * (x + y) + k.c * (x * x + y * y) + k.b * (x + y) + k.a - k.K * x * y;
}

// --- values from an exact tau window ------------------------------------------

/// tau(n+1) tau(n-1) / tau(n)^2
Rational f_from_tau(const exact::SequenceWindow& tau, Index n);

/// tau(n+2) tau(n-1) / (tau(n+1) tau(n))
Rational h_from_tau(const exact::SequenceWindow& tau, Index n);

// --- orbits -------------------------------------------------------------------

/// f(start.index - 1) ... f(start.index + steps)
template <Scalar T>
std::vector<T> f_orbit(FState<T> s, const Somos4Params& p, int steps) {
  std::vector<T> out{s.prev, s.curr};
  for (int i = 0; i < steps; ++i) {
    s = step_f(s, p);
    out.push_back(s.curr);
  }
  return out;
}

template <Scalar T>
std::vector<T> h_orbit(HState<T> s, const Somos5Params& p, int steps, bool* degenerate = nullptr) {
  std::vector<T> out{s.prev, s.curr};
  for (int i = 0; i < steps; ++i) {
    s = step_h(s, p);
    if (degenerate && s.periodic_degeneracy) *degenerate = true;
    out.push_back(s.curr);
  }
  return out;
}

template <Scalar T>
std::vector<T> biquadratic_orbit(T u_prev, T u_curr, const BiquadraticCurve<T>& k, int steps) {
  std::vector<T> out{u_prev, u_curr};
  for (int i = 0; i < steps; ++i) {
    T next = biquadratic_step(u_prev, u_curr, k);
    u_prev = std::move(u_curr);
    u_curr = std::move(next);
    out.push_back(u_curr);
  }
  return out;
}

/// Orbit of the third-order map from f(n-1), f(n), f(n+1).
template <Scalar T>
std::vector<T> f3_orbit(T f0, T f1, T f2, const Somos5Params& p, int steps) {
  std::vector<T> out{f0, f1, f2};
  for (int i = 0; i < steps; ++i) {
    const std::size_t k = out.size();
    out.push_back(step_f3(out[k - 3], out[k - 2], out[k - 1], p));
  }
  return out;
}

}  // namespace somos::qrt
