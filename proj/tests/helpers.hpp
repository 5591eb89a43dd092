#pragma once

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "inasup/constraint_vector.hpp"
#include "inasup/rational.hpp"

namespace testing {

inline inasup::Rational q(const char* text) { return inasup::parse_rational(text); }

// Bounds given in flat order (1,1), (1,2), (2,2), (1,3), ...
inline inasup::ConstraintVector cv(int dim,
                                   std::initializer_list<std::pair<const char*, const char*>> b) {
  std::vector<inasup::Rational> lo, hi;
  for (const auto& [l, u] : b) {
    lo.push_back(q(l));
    hi.push_back(q(u));
  }
  return inasup::ConstraintVector(dim, std::move(lo), std::move(hi));
}

inline std::vector<inasup::Rational> pt(std::initializer_list<const char*> xs) {
  std::vector<inasup::Rational> v;
  for (const char* x : xs) v.push_back(q(x));
  return v;
}

}  // namespace testing
