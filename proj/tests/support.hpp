#pragma once

#include <initializer_list>
#include <random>
#include <string>
#include <vector>

#include "somos/numeric.hpp"
#include "somos/rational.hpp"
#include "somos/sequence.hpp"

namespace somos::test {

inline Rational q(const char* text) { return parse_rational(text); }

inline exact::SequenceWindow window(exact::Index base, std::initializer_list<const char*> values) {
  std::vector<Rational> v;
  for (const char* s : values) v.push_back(parse_rational(s));
  return exact::SequenceWindow(base, std::move(v));
}

inline std::vector<std::string> strings(const exact::SequenceWindow& w) {
  std::vector<std::string> out;
  for (const auto& r : w.values()) out.push_back(to_string(r));
  return out;
}

// Seeded so failures reproduce.
inline std::mt19937_64& rng() {
  static std::mt19937_64 engine(20240607);
  return engine;
}

inline Real uniform(Real lo, Real hi) { return std::uniform_real_distribution<Real>(lo, hi)(rng()); }

inline int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }

}  // namespace somos::test
