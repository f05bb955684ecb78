#include "somos/qrt.hpp"

namespace somos::qrt {

Somos5Params somos4_to_somos5_params(const Somos4Params& p, const Rational& j) {
  return {Rational(-p.beta), Rational(p.alpha * p.alpha + p.beta * j)};
}

Somos4Params subsequence_somos4_params(const Somos5Params& p, const Rational& jt) {
  const Rational& a = p.alpha;
  const Rational& b = p.beta;
  return {Rational(b * b), Rational(a * (2 * b * b + a * b * jt + a * a * a))};
}

Rational f_from_tau(const exact::SequenceWindow& tau, Index n) {
  const Rational& mid = tau.at(n);
  const Rational& next = tau.at(n + 1);
  const Rational& before = tau.at(n - 1);
  if (mid == 0) throw Error(ErrorKind::ZeroDenominator, "tau(n) is zero");
  return Rational(next * before / (mid * mid));
}

Rational h_from_tau(const exact::SequenceWindow& tau, Index n) {
  const Rational& t0 = tau.at(n);
  const Rational& t1 = tau.at(n + 1);
  if (t0 == 0 || t1 == 0) throw Error(ErrorKind::ZeroDenominator, "tau(n) tau(n+1) is zero");
  return Rational(tau.at(n + 2) * tau.at(n - 1) / (t1 * t0));
}

}  // namespace somos::qrt
