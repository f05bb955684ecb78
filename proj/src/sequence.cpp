#include "somos/sequence.hpp"

#include <deque>
#include <string>

#include "somos/errors.hpp"

namespace somos::exact {

namespace {

// Deque keyed by index, growing at either end.
class Growing {
 public:
  explicit Growing(const SequenceWindow& seeds) : base_(seeds.base_index()), terms_(seeds.values().begin(), seeds.values().end()) {}

  Index lo() const { return base_; }
  Index hi() const { return base_ + static_cast<Index>(terms_.size()) - 1; }
  const Rational& operator()(Index n) const { return terms_[static_cast<std::size_t>(n - base_)]; }
  void push_back(Rational v) { terms_.push_back(std::move(v)); }
  void push_front(Rational v) {
    terms_.push_front(std::move(v));
    --base_;
  }
  SequenceWindow window(Index n_lo, Index n_hi) const {
    std::vector<Rational> out;
    out.reserve(static_cast<std::size_t>(n_hi - n_lo + 1));
    for (Index n = n_lo; n <= n_hi; ++n) out.push_back((*this)(n));
    return {n_lo, std::move(out)};
  }

 private:
  Index base_;
  std::deque<Rational> terms_;
};

void check_range(const SequenceWindow& seeds, std::size_t order, Index n_lo, Index n_hi) {
  if (seeds.size() != order) {
    throw Error(ErrorKind::InvalidSeed, "expected " + std::to_string(order) + " seeds, got " + std::to_string(seeds.size()));
  }
  if (n_lo > seeds.base_index() || n_hi < seeds.end_index() - 1) {
    throw Error(ErrorKind::InvalidArgument, "requested range must contain the seed window");
  }
}

Rational divide_pivot(const Rational& numerator, const Rational& pivot, Index pivot_index) {
  if (pivot == 0) throw DivisionByZeroTerm(pivot_index);
  return Rational(numerator / pivot);
}

}  // namespace

Somos4Params::Somos4Params(Rational a, Rational b) : alpha(std::move(a)), beta(std::move(b)) {
  if (alpha == 0 && beta == 0) throw Error(ErrorKind::InvalidParams, "alpha and beta are both zero");
}

Somos5Params::Somos5Params(Rational a, Rational b) : alpha(std::move(a)), beta(std::move(b)) {
  if (alpha == 0 && beta == 0) throw Error(ErrorKind::InvalidParams, "alpha and beta are both zero");
}

SequenceWindow::SequenceWindow(Index base_index, std::vector<Rational> values) : base_(base_index), values_(std::move(values)) {
  for (const auto& v : values_) {
    if (v == 0) {
      has_zero_ = true;
      break;
    }
  }
}

const Rational& SequenceWindow::at(Index n) const {
  if (!contains(n)) {
    throw Error(ErrorKind::IndexOutOfWindow, "index " + std::to_string(n) + " outside [" + std::to_string(base_) + ", " +
                                                 std::to_string(end_index() - 1) + "]");
  }
  return values_[static_cast<std::size_t>(n - base_)];
}

SequenceWindow SequenceWindow::slice(Index lo, Index hi) const {
  if (lo > hi || !contains(lo) || !contains(hi)) {
    throw Error(ErrorKind::IndexOutOfWindow, "slice [" + std::to_string(lo) + ", " + std::to_string(hi) + "] not contained");
  }
  auto first = values_.begin() + (lo - base_);
  return {lo, std::vector<Rational>(first, first + (hi - lo + 1))};
}

SequenceWindow iterate_somos4(const Somos4Params& params, const SequenceWindow& seeds, Index n_lo, Index n_hi) {
  check_range(seeds, 4, n_lo, n_hi);
  Growing t(seeds);
  const auto& a = params.alpha;
  const auto& b = params.beta;
  while (t.hi() < n_hi) {
    const Index n = t.hi() - 1;  // produce tau(n+2)
    Rational rhs = a * t(n + 1) * t(n - 1) + b * t(n) * t(n);
    t.push_back(divide_pivot(rhs, t(n - 2), n - 2));
  }
  while (t.lo() > n_lo) {
    const Index n = t.lo() + 1;  // produce tau(n-2)
    Rational rhs = a * t(n + 1) * t(n - 1) + b * t(n) * t(n);
    t.push_front(divide_pivot(rhs, t(n + 2), n + 2));
  }
  return t.window(n_lo, n_hi);
}

SequenceWindow iterate_somos5(const Somos5Params& params, const SequenceWindow& seeds, Index n_lo, Index n_hi) {
  check_range(seeds, 5, n_lo, n_hi);
  Growing t(seeds);
  const auto& a = params.alpha;
  const auto& b = params.beta;
  while (t.hi() < n_hi) {
    const Index n = t.hi() - 2;  // produce tau(n+3)
    Rational rhs = a * t(n + 2) * t(n - 1) + b * t(n + 1) * t(n);
    t.push_back(divide_pivot(rhs, t(n - 2), n - 2));
  }
  while (t.lo() > n_lo) {
    const Index n = t.lo() + 1;  // produce tau(n-2)
    Rational rhs = a * t(n + 2) * t(n - 1) + b * t(n + 1) * t(n);
    t.push_front(divide_pivot(rhs, t(n + 3), n + 3));
  }
  return t.window(n_lo, n_hi);
}

SequenceWindow iterate_eds_twisted(const Rational& a1, const Rational& a2, const Rational& a3, const Rational& a4,
                                   const Rational& coeff_even_n, const Rational& coeff_odd_n,
                                   const Rational& coeff_square, Index n_hi) {
  if (a1 == 0) throw Error(ErrorKind::InvalidSeed, "a1 must be nonzero");
  if (n_hi < 5) throw Error(ErrorKind::InvalidArgument, "n_hi must be at least 5");
  std::vector<Rational> pos{Rational(0), a1, a2, a3, a4};
  for (Index k = 5; k <= n_hi; ++k) {
    const Index n = k - 2;
    const auto at = [&](Index i) -> const Rational& { return pos[static_cast<std::size_t>(i)]; };
    const Rational& c = (n % 2 == 0) ? coeff_even_n : coeff_odd_n;
    Rational rhs = c * at(n + 1) * at(n - 1) + coeff_square * at(n) * at(n);
    pos.push_back(divide_pivot(rhs, at(n - 2), n - 2));
  }
  std::vector<Rational> all;
  all.reserve(static_cast<std::size_t>(2 * n_hi + 1));
  for (Index k = n_hi; k >= 1; --k) all.emplace_back(-pos[static_cast<std::size_t>(k)]);
  all.insert(all.end(), pos.begin(), pos.end());
  return {-n_hi, std::move(all)};
}

SequenceWindow iterate_eds(const Rational& a1, const Rational& a2, const Rational& a3, const Rational& a4, Index n_hi) {
  const Rational square = a2 * a2;
  return iterate_eds_twisted(a1, a2, a3, a4, square, square, Rational(-a1 * a3), n_hi);
}

bool check_divisibility(const SequenceWindow& window, Index n, Index m) {
  const Rational& an = window.at(n);
  const Rational& am = window.at(m);
  if (n == 0 || m % n != 0) throw Error(ErrorKind::InvalidArgument, "n must divide m");
  if (!is_integer(an) || !is_integer(am)) throw Error(ErrorKind::NonInteger, "divisibility needs integral terms");
  if (an == 0) throw Error(ErrorKind::ZeroDenominator, "a(n) is zero");
  return mpz_divisible_p(am.get_num_mpz_t(), an.get_num_mpz_t()) != 0;
}

Rational check_hankel_somos4(const SequenceWindow& tau, const SequenceWindow& a, Index m, Index n) {
  Rational lhs = tau.at(n + m) * tau.at(n - m);
  Rational rhs = a.at(m) * a.at(m) * tau.at(n + 1) * tau.at(n - 1) - a.at(m + 1) * a.at(m - 1) * tau.at(n) * tau.at(n);
  return Rational(lhs - rhs);
}

Rational check_hankel_somos5(const SequenceWindow& tau, const SequenceWindow& a, Index m, Index n) {
  Rational lhs = a.at(1) * a.at(2) * tau.at(n + m + 1) * tau.at(n - m);
  Rational rhs = a.at(m + 1) * a.at(m) * tau.at(n + 2) * tau.at(n - 1) -
                 a.at(m - 1) * a.at(m + 2) * tau.at(n + 1) * tau.at(n);
  return Rational(lhs - rhs);
}

SequenceWindow gauge_transform(const SequenceWindow& window, const Rational& a_even, const Rational& a_odd,
                               const Rational& b) {
  if (a_even == 0 || a_odd == 0 || b == 0) throw Error(ErrorKind::ZeroGaugeFactor, "gauge factors must be nonzero");
  std::vector<Rational> out;
  out.reserve(window.size());
  for (Index n = window.base_index(); n < window.end_index(); ++n) {
    const Rational& prefactor = (n % 2 == 0) ? a_even : a_odd;
    out.emplace_back(prefactor * pow(b, n) * window.at(n));
  }
  return {window.base_index(), std::move(out)};
}

std::vector<Rational> somos4_residuals(const Somos4Params& params, const SequenceWindow& tau) {
  std::vector<Rational> out;
  for (Index n = tau.base_index() + 2; n + 2 < tau.end_index(); ++n) {
    out.emplace_back(tau.at(n + 2) * tau.at(n - 2) - params.alpha * tau.at(n + 1) * tau.at(n - 1) -
                     params.beta * tau.at(n) * tau.at(n));
  }
  return out;
}

std::vector<Rational> somos5_residuals(const Somos5Params& params, const SequenceWindow& tau) {
  std::vector<Rational> out;
  for (Index n = tau.base_index() + 2; n + 3 < tau.end_index(); ++n) {
    out.emplace_back(tau.at(n + 3) * tau.at(n - 2) - params.alpha * tau.at(n + 2) * tau.at(n - 1) -
                     params.beta * tau.at(n + 1) * tau.at(n));
  }
  return out;
}

SequenceWindow parity_subsequence(const SequenceWindow& tau, Index start) {
  std::vector<Rational> out;
  for (Index n = start; n < tau.end_index(); n += 2) out.push_back(tau.at(n));
  return {0, std::move(out)};
}

}  // namespace somos::exact
