#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "somos/ivp.hpp"

// Verification suites. Each check reports a residual against a tolerance;
// exact checks use tolerance 0 and the absolute value of the rational residual.
namespace somos::verify {

enum class Recurrence { Somos4, Somos5, Eds };

struct Problem {
  Recurrence recurrence = Recurrence::Somos5;
  std::vector<Rational> params;  // (alpha, beta); empty for EDS
  std::vector<Rational> seeds;   // tau0.. or a1..a4
  Precision precision{};
  ivp::Tolerances tolerances{};
  Real identity_tolerance = 1e-9L;
  Real asymptotic_tolerance = 5e-3L;
  exact::Index n_lo = -5;
  exact::Index n_hi = 30;
  exact::Index asymptotic_n = 60;  // index of the growth estimate
  int samples = 20;
  std::uint64_t rng_seed = 20240607;
};

struct Check {
  std::string suite;
  std::string name;
  Real residual = 0;
  Real tolerance = 0;
  bool passed = true;
  bool skipped = false;
  std::string note;
};

struct Report {
  std::vector<Check> checks;
  bool passed() const;
};

const std::vector<std::string>& suite_names();

/// Runs the named suites ("all" expands to every suite) in order.
Report run(const Problem& problem, const std::vector<std::string>& suites);

}  // namespace somos::verify
