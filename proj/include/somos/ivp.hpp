#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "somos/numeric.hpp"
#include "somos/rational.hpp"
#include "somos/sequence.hpp"
#include "somos/weierstrass.hpp"

// Closed-form solution of the Somos 4 and Somos 5 initial value problems.
//
// Somos 4:  tau(n) = A B^n sigma(z0 + n kappa) / sigma(kappa)^(n^2)
// Somos 5:  tau(2k)   = A+ B+^k sigma*(u0 + 2k v)     / sigma*(2v)^(k^2)
//           tau(2k+1) = A- B-^k sigma*(u0 + (2k+1) v) / sigma*(2v)^(k^2)
//
// sigma* belongs to the rescaled curve g2* = mu^4 g2, g3* = mu^6 g3, whose
// invariants and Jacobian points are rational whenever the data are, so the
// Somos 5 pipeline locates u0 and v there and derives kappa = mu v,
// z0 = mu u0 for the unscaled curve.
namespace somos::ivp {

using exact::Index;
using exact::SequenceWindow;
using exact::Somos4Params;
using exact::Somos5Params;
using weierstrass::CurveInvariants;
using weierstrass::Lattice;

/// Branch and sign choices, recorded so output is reproducible.
using Convention = std::map<std::string, std::string>;

struct Tolerances {
  Real consistency = 1e-6L;     // sign-selection equations
  Real reconstruction = 1e-9L;  // seeds reproduced by the closed form
  Real real_output = 1e-6L;     // |Im tau| / max(1, |Re tau|) for real data
  Real applicability = 1e-8L;   // v / omega1 real for the growth constant
};

struct Somos4Solution {
  Somos4Params params;
  SequenceWindow seeds;  // tau0..tau3
  // Exact data of the f-map.
  Rational f_minus1, f0, f1, J, lambda;
  CurveInvariants inv;
  Lattice lat;
  Complex wp_prime_kappa{};  // principal square root of alpha
  Complex kappa{}, z0{};
  Complex log_A{}, log_B{};
  Convention convention{};
  bool real_data = true;

  Complex A() const { return std::exp(log_A); }
  Complex B() const { return std::exp(log_B); }
};

struct Somos5Solution {
  Somos5Params params;
  SequenceWindow seeds;  // tau0..tau4
  // Exact data of the h-map.
  Rational h_minus1, h0, h1, h2, Jt;
  Rational f0, f1;
  Rational mu4;          // beta~ + alpha~ J~
  Rational lambda_star;  // mu^2 lambda~
  Rational x0_star;      // mu^2 x0
  Rational y0_star;      // wp*'(u0)
  CurveInvariants inv;       // unscaled (g2, g3)
  CurveInvariants inv_star;  // (g2*, g3*)
  Lattice lat;
  Lattice lat_star;
  Complex mu_t{};  // principal fourth root of mu4
  Complex lambda_t{}, x0{};
  Complex kappa{}, z0{};  // on the unscaled curve
  Complex u0{}, v{};      // on the rescaled curve
  Complex log_A_plus{}, log_A_minus{}, log_B_plus{}, log_B_minus{};
  Convention convention{};
  bool real_data = true;
  bool periodic_degeneracy = false;

  Complex A_plus() const { return std::exp(log_A_plus); }
  Complex A_minus() const { return std::exp(log_A_minus); }
  Complex B_plus() const { return std::exp(log_B_plus); }
  Complex B_minus() const { return std::exp(log_B_minus); }
  /// mu^3 wp'(kappa) = mu^4: the rescaled image of (lambda~, mu~).
  Rational mu_star() const { return mu4; }
};

Somos4Solution solve_somos4(const Somos4Params& params, const SequenceWindow& seeds, const Precision& prec = {},
                            const Tolerances& tol = {});

Somos5Solution solve_somos5(const Somos5Params& params, const SequenceWindow& seeds, const Precision& prec = {},
                            const Tolerances& tol = {});

struct TauValue {
  Index n = 0;
  Complex log_value;              // some logarithm of tau(n)
  Real log_abs = 0;               // log |tau(n)|
  std::optional<Complex> value;   // when representable
  std::optional<Real> real_value; // real data only
};

TauValue eval_tau(const Somos4Solution& sol, Index n, const Tolerances& tol = {});
TauValue eval_tau(const Somos5Solution& sol, Index n, const Tolerances& tol = {});

/// Same terms from the unscaled sigma function:
/// tau(2k) = A+ B+^k mu^(k^2-1) sigma(z0 + 2k kappa) / sigma(2 kappa)^(k^2), etc.
TauValue eval_tau_unscaled(const Somos5Solution& sol, Index n, const Tolerances& tol = {});

/// h(n) from the sigma quotient on the unscaled curve.
Complex eval_h_closed(const Somos5Solution& sol, Index n);
/// h(n) from -wp'(k)/2 (wp'(z) - wp'(k)) / (wp(z) - wp(k)) + wp''(k)/2, z = z0 + n k.
Complex eval_h_closed_wp(const Somos5Solution& sol, Index n);

/// f(n) in the alternating form built on wp*(v) - wp*(u0 + n v).
Complex eval_f_closed(const Somos5Solution& sol, Index n);

struct SubsequenceCheck {
  Somos4Params star;
  std::vector<Rational> even_residuals;
  std::vector<Rational> odd_residuals;
  // max relative error of tau(n+2)tau(n-2)/tau(n)^2 = wp*(2v) - wp*(u0 + n v)
  Real canonical_form_error = 0;
};

/// Both parity subsequences checked exactly against the starred Somos 4
/// recurrence up to tau(n_hi).
SubsequenceCheck somos4_from_even_odd(const Somos5Solution& sol, Index n_hi = 20);

/// Re{eta1 v^2 / (2 omega1)} - log|sigma*(2v)| / 4: the coefficient of n^2
/// in log|tau(n)|. Needs v on the real line of omega1 (NotApplicable otherwise).
Real growth_constant(const Somos5Solution& sol, const Tolerances& tol = {});
/// Somos 4 analogue: Re{eta1 kappa^2 / (2 omega1)} - log|sigma(kappa)|.
Real growth_constant(const Somos4Solution& sol, const Tolerances& tol = {});

struct GrowthEstimate {
  Index n = 0;
  Real raw = 0;        // log|tau(n)| / n^2
  Real corrected = 0;  // (log|tau(2m)| - 2 log|tau(m)| + log|tau(0)|) / (2 m^2), 2m = n
};

/// Empirical growth constants from an exact window containing 0..n. The
/// corrected form cancels the O(n) and O(1) parts of log|tau(n)|, which
/// shift the raw quotient by about 1e-2 at n = 30.
GrowthEstimate empirical_growth(const SequenceWindow& tau, Index n);

/// Representatives of v and u0 used for reporting: v in the centred cell
/// with the sign that makes Re(v) <= 0 (u0 flipped alongside), and u0
/// reduced to [0,1) x [0,1) cell coordinates.
std::pair<Complex, Complex> reporting_pair(const Somos5Solution& sol);

// --- matched elliptic divisibility sequences ------------------------------------

/// a(m) = sigma(m kappa) / sigma(kappa)^(m^2) on the solution's curve.
Complex eds_term_numeric(const Somos4Solution& sol, Index m);
Complex eds_term_numeric(const Somos5Solution& sol, Index m);

/// Exact EDS of a Somos 4 solution, available when alpha is a rational
/// square (a2 = -wp'(kappa) = -sqrt(alpha) is then rational).
std::optional<SequenceWindow> matched_eds(const Somos4Solution& sol, Index n_hi);

/// Rational EDS of a Somos 5 solution: a(m) for odd m and a(m)/mu for even m.
/// All its terms are rational and the Somos 5 Hankel identity holds for it
/// verbatim (every term of that identity carries exactly one factor mu).
SequenceWindow matched_eds_normalized(const Somos5Solution& sol, Index n_hi);

}  // namespace somos::ivp
