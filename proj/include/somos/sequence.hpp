#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "somos/rational.hpp"

namespace somos::exact {

using Index = std::int64_t;

/// Coefficients of tau(n+2) tau(n-2) = alpha tau(n+1) tau(n-1) + beta tau(n)^2.
struct Somos4Params {
  Rational alpha;
  Rational beta;

  Somos4Params(Rational a, Rational b);
};

/// Coefficients of tau(n+3) tau(n-2) = alpha tau(n+2) tau(n-1) + beta tau(n+1) tau(n).
struct Somos5Params {
  Rational alpha;
  Rational beta;

  Somos5Params(Rational a, Rational b);
};

/// A contiguous run of exact terms tau(base), tau(base+1), ...
class SequenceWindow {
 public:
  SequenceWindow() = default;
  SequenceWindow(Index base_index, std::vector<Rational> values);

  Index base_index() const noexcept { return base_; }
  /// One past the last stored index.
  Index end_index() const noexcept { return base_ + static_cast<Index>(values_.size()); }
  std::size_t size() const noexcept { return values_.size(); }
  bool contains(Index n) const noexcept { return n >= base_ && n < end_index(); }
  bool has_zero() const noexcept { return has_zero_; }

  /// Throws Error(IndexOutOfWindow).
  const Rational& at(Index n) const;
  std::span<const Rational> values() const noexcept { return values_; }

  /// Sub-window [lo, hi]; throws IndexOutOfWindow if not contained.
  SequenceWindow slice(Index lo, Index hi) const;

  bool operator==(const SequenceWindow& other) const = default;

 private:
  Index base_ = 0;
  std::vector<Rational> values_;
  bool has_zero_ = false;
};

/// Extends a length-4 seed window to cover [n_lo, n_hi].
SequenceWindow iterate_somos4(const Somos4Params& params, const SequenceWindow& seeds, Index n_lo, Index n_hi);

/// Extends a length-5 seed window to cover [n_lo, n_hi].
SequenceWindow iterate_somos5(const Somos5Params& params, const SequenceWindow& seeds, Index n_lo, Index n_hi);

/// Elliptic divisibility sequence with a0 = 0 and seeds a1..a4, covering
/// [-n_hi, n_hi]; negative indices come from a(-n) = -a(n).
SequenceWindow iterate_eds(const Rational& a1, const Rational& a2, const Rational& a3, const Rational& a4, Index n_hi);

/// Same shape as iterate_eds, but the coefficient multiplying
/// a(n+1)a(n-1) depends on the parity of n. This is the form an EDS takes
/// once its even-index terms are divided by a common irrational factor
/// (e.g. a fourth root), leaving an all-rational sequence.
SequenceWindow iterate_eds_twisted(const Rational& a1, const Rational& a2, const Rational& a3, const Rational& a4,
                                   const Rational& coeff_even_n, const Rational& coeff_odd_n,
                                   const Rational& coeff_square, Index n_hi);

/// a(n) | a(m) for integral terms; requires n | m and a(n) != 0.
bool check_divisibility(const SequenceWindow& window, Index n, Index m);

/// tau(n+m)tau(n-m) - [a(m)^2 tau(n+1)tau(n-1) - a(m+1)a(m-1) tau(n)^2].
Rational check_hankel_somos4(const SequenceWindow& tau, const SequenceWindow& a, Index m, Index n);

/// a1 a2 tau(n+m+1)tau(n-m) - [a(m+1)a(m) tau(n+2)tau(n-1) - a(m-1)a(m+2) tau(n+1)tau(n)].
/// Invariant under m -> -m-1 when a is antisymmetric.
Rational check_hankel_somos5(const SequenceWindow& tau, const SequenceWindow& a, Index m, Index n);

/// tau(2k) -> a_even B^(2k) tau(2k), tau(2k+1) -> a_odd B^(2k+1) tau(2k+1).
SequenceWindow gauge_transform(const SequenceWindow& window, const Rational& a_even, const Rational& a_odd,
                               const Rational& b);

/// Recurrence residuals at every index where the full stencil is inside the window.
std::vector<Rational> somos4_residuals(const Somos4Params& params, const SequenceWindow& tau);
std::vector<Rational> somos5_residuals(const Somos5Params& params, const SequenceWindow& tau);

/// Terms tau(start), tau(start+2), ... re-indexed from 0.
SequenceWindow parity_subsequence(const SequenceWindow& tau, Index start);

}  // namespace somos::exact
