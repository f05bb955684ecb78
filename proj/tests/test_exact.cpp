#include "doctest.h"
#include "support.hpp"

#include "somos/errors.hpp"
#include "somos/qrt.hpp"
#include "somos/sequence.hpp"

using namespace somos;
using namespace somos::exact;
using somos::test::q;
using somos::test::strings;
using somos::test::window;

namespace {

using Strings = std::vector<std::string>;

bool all_zero(const std::vector<Rational>& v) {
  for (const auto& r : v) {
    if (r != 0) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("rational parsing and printing") {
  CHECK(to_string(q("6/4")) == "3/2");
  CHECK(to_string(q("-10/5")) == "-2");
  CHECK(to_string(q(" +7 ")) == "7");
  CHECK(q("0/9") == 0);
  CHECK_THROWS_AS(q("1/0"), Error);
  CHECK_THROWS_AS(q("abc"), Error);
  CHECK_THROWS_AS(q("1.5"), Error);
  CHECK(is_integer(q("8/4")));
  CHECK_FALSE(is_integer(q("8/3")));
}

TEST_CASE("rational conversions survive huge values") {
  const Rational big = pow(q("10"), 4000) / 3;
  CHECK(log_abs(big) == doctest::Approx(4000 * std::log(10.0) - std::log(3.0)).epsilon(1e-15));
  CHECK(to_real(q("1/3")) == doctest::Approx(1.0 / 3.0));
  CHECK(nearest_rational(0.333333333333333333L, 1000) == q("1/3"));
  CHECK(nearest_rational(-2.5L, 10) == q("-5/2"));
  CHECK(nearest_rational(1e19L, 10) == Rational(BigInt("10000000000000000000")));
  CHECK(nearest_rational(3.14159265358979L, 1000000, 1e-4L) == q("333/106"));
}

TEST_CASE("Somos 4 forward iteration") {
  const auto tau = iterate_somos4({q("1"), q("1")}, window(0, {"1", "1", "1", "1"}), 0, 10);
  CHECK(strings(tau.slice(4, 10)) == Strings{"2", "3", "7", "23", "59", "314", "1529"});
  CHECK(all_zero(somos4_residuals({q("1"), q("1")}, tau)));
}

TEST_CASE("Somos 4 backward iteration and fixed point") {
  const auto tau = iterate_somos4({q("1"), q("1")}, window(0, {"1", "1", "1", "1"}), -1, 3);
  CHECK(tau.at(-1) == 2);
  const auto flat = iterate_somos4({q("1"), q("0")}, window(0, {"1", "1", "1", "1"}), -6, 12);
  for (const auto& v : flat.values()) CHECK(v == 1);
}

TEST_CASE("Somos 5 forward iteration") {
  const auto tau = iterate_somos5({q("1"), q("1")}, window(0, {"1", "1", "1", "1", "1"}), 0, 14);
  CHECK(strings(tau.slice(5, 14)) == Strings{"2", "3", "5", "11", "37", "83", "274", "1217", "6161", "22833"});
  CHECK(all_zero(somos5_residuals({q("1"), q("1")}, tau)));
}

TEST_CASE("Somos 5 backward iteration and fixed point") {
  const auto tau = iterate_somos5({q("1"), q("1")}, window(0, {"1", "1", "1", "1", "1"}), -1, 4);
  CHECK(tau.at(-1) == 2);
  const auto flat = iterate_somos5({q("1"), q("0")}, window(0, {"1", "1", "1", "1", "1"}), -6, 12);
  for (const auto& v : flat.values()) CHECK(v == 1);
}

TEST_CASE("forward then backward returns the seeds") {
  const Somos5Params p5{q("2/3"), q("-5")};
  const auto seeds5 = window(0, {"3", "1/2", "-4", "7", "2"});
  const auto fwd5 = iterate_somos5(p5, seeds5, 0, 12);
  const auto back5 = iterate_somos5(p5, fwd5.slice(8, 12), 0, 12);
  CHECK(back5.slice(0, 4) == seeds5.slice(0, 4));
  CHECK(all_zero(somos5_residuals(p5, back5)));

  const Somos4Params p4{q("-3"), q("7/2")};
  const auto seeds4 = window(0, {"1", "2", "-3", "5/7"});
  const auto fwd4 = iterate_somos4(p4, seeds4, 0, 12);
  const auto back4 = iterate_somos4(p4, fwd4.slice(9, 12), 0, 12);
  CHECK(back4 == fwd4);
}

TEST_CASE("zero pivots stop the iteration") {
  // tau(4) divides by tau(0).
  CHECK_THROWS_AS(iterate_somos4({q("1"), q("1")}, window(0, {"0", "1", "1", "1"}), 0, 6), DivisionByZeroTerm);
  try {
    iterate_somos5({q("1"), q("1")}, window(0, {"1", "1", "1", "1", "0"}), -3, 4);
    FAIL("expected a zero pivot");
  } catch (const DivisionByZeroTerm& e) {
    CHECK(e.index() == 4);
  }
}

TEST_CASE("EDS recurrence and antisymmetry") {
  const auto a = iterate_eds(q("1"), q("1"), q("-1"), q("1"), 12);
  CHECK(a.at(0) == 0);
  CHECK(a.at(5) == 2);
  CHECK(a.at(6) == -1);
  CHECK(a.at(7) == -3);
  for (Index n = 1; n <= 12; ++n) CHECK(a.at(-n) == -a.at(n));
  CHECK_THROWS_AS(iterate_eds(q("0"), q("1"), q("1"), q("1"), 8), Error);
}

TEST_CASE("EDS divisibility for integer seeds") {
  const auto a = iterate_eds(q("1"), q("1"), q("-1"), q("1"), 12);
  CHECK(check_divisibility(a, 2, 6));
  CHECK(check_divisibility(a, 5, 5));
  for (Index n = 1; n <= 12; ++n) {
    CHECK(check_divisibility(a, 1, n));
    for (Index m = n; m <= 12; m += n) {
      if (a.at(n) != 0) CHECK(check_divisibility(a, n, m));
    }
  }
  // a2 | a4 with a2 = 2: all terms up to 20 are integral and divisibility holds.
  const auto b = iterate_eds(q("1"), q("2"), q("3"), q("-2"), 20);
  for (Index n = 1; n <= 20; ++n) {
    CHECK(is_integer(b.at(n)));
    for (Index m = n; m <= 20; m += n) CHECK(check_divisibility(b, n, m));
  }
  CHECK_THROWS_AS(check_divisibility(a, 5, 40), Error);
  CHECK_THROWS_AS(check_divisibility(iterate_eds(q("1"), q("1/2"), q("1"), q("1"), 8), 2, 4), Error);
}

TEST_CASE("Hankel relations reduce to identities at small m") {
  const auto tau = iterate_somos5({q("1"), q("1")}, window(0, {"1", "1", "1", "1", "1"}), -4, 16);
  const auto a = iterate_eds(q("1"), q("1"), q("-1"), q("1"), 12);
  for (Index n = 2; n <= 10; ++n) {
    CHECK(check_hankel_somos4(tau, a, 1, n) == 0);
    CHECK(check_hankel_somos4(tau, a, 0, n) == 0);
    CHECK(check_hankel_somos5(tau, a, 0, n) == 0);
    CHECK(check_hankel_somos5(tau, a, -1, n) == check_hankel_somos5(tau, a, 0, n));
    for (Index m = 1; m <= 4; ++m) {
      CHECK(check_hankel_somos5(tau, a, m, n) == check_hankel_somos5(tau, a, -m - 1, n));
    }
  }
  CHECK_THROWS_AS(check_hankel_somos4(tau, a, 2, 40), Error);
}

TEST_CASE("gauge transformations") {
  const Somos5Params p{q("1"), q("1")};
  const auto tau = iterate_somos5(p, window(0, {"1", "1", "1", "1", "1"}), 0, 16);
  CHECK(gauge_transform(tau, q("1"), q("1"), q("1")) == tau);
  const auto g = gauge_transform(tau, q("7"), q("1"), q("1"));
  CHECK(all_zero(somos5_residuals(p, g)));
  const auto g2 = gauge_transform(tau, q("3/2"), q("-5"), q("2/7"));
  CHECK(all_zero(somos5_residuals(p, g2)));
  for (Index n = 1; n <= 12; ++n) {
    CHECK(qrt::h_from_tau(g2, n) == qrt::h_from_tau(tau, n));
  }
  CHECK_THROWS_AS(gauge_transform(tau, q("0"), q("1"), q("1")), Error);

  const Somos4Params p4{q("1"), q("1")};
  const auto t4 = iterate_somos4(p4, window(0, {"1", "1", "1", "1"}), 0, 14);
  const auto g4 = gauge_transform(t4, q("5"), q("5"), q("-3/4"));
  CHECK(all_zero(somos4_residuals(p4, g4)));
  for (Index n = 1; n <= 12; ++n) CHECK(qrt::f_from_tau(g4, n) == qrt::f_from_tau(t4, n));
}

TEST_CASE("window slicing and parity subsequences") {
  const auto w = window(-2, {"1", "2", "3", "4", "5", "6"});
  CHECK(w.end_index() == 4);
  CHECK(strings(w.slice(0, 2)) == Strings{"3", "4", "5"});
  CHECK_THROWS_AS(w.slice(0, 9), Error);
  CHECK_THROWS_AS(w.at(4), Error);
  const auto even = parity_subsequence(w, -2);
  CHECK(even.base_index() == 0);
  CHECK(strings(even) == Strings{"1", "3", "5"});
  CHECK(window(0, {"1", "0"}).has_zero());
}
