#include "inasup/chopper.hpp"

#include <stdexcept>

#include "inasup/polytope.hpp"

namespace inasup {

ChopResult try_chop(const ConstraintVector& m, const ConstraintVector& other,
                    const MultiplierFamily& family) {
  auto inner = intersect(m, other, family);
  if (!inner) throw std::invalid_argument("try_chop: polytopes do not intersect");
  return try_chop(m, other, *inner, family);
}

ChopResult try_chop(const ConstraintVector& m, const ConstraintVector& other,
                    const ConstraintVector& inner, const MultiplierFamily& family) {
  if (includes(other, m)) throw std::invalid_argument("try_chop: m is already inside m'");
  if (includes(m, other)) throw std::invalid_argument("try_chop: m' is inside m");

  ChopResult result;
  result.inner = inner;
  std::optional<std::size_t> lower_index, upper_index;
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (m.lower(k) < other.lower(k) && inner.lower(k) == other.lower(k)) {
      if (lower_index) return result;  // not unique
      lower_index = k;
    }
    if (other.upper(k) < m.upper(k) && inner.upper(k) == other.upper(k)) {
      if (upper_index) return result;
      upper_index = k;
    }
  }
  if (!lower_index && !upper_index) return result;
  if (lower_index && !facet_is_active(other, *lower_index, Side::Lower, family)) return result;
  if (upper_index && !facet_is_active(other, *upper_index, Side::Upper, family)) return result;

  result.lower_index = lower_index;
  result.upper_index = upper_index;
  result.kind = lower_index && upper_index ? ChopKind::ThreePiece : ChopKind::TwoPiece;

  std::vector<Rational> lo(m.lowers().begin(), m.lowers().end());
  std::vector<Rational> hi(m.uppers().begin(), m.uppers().end());
  if (lower_index) {
    // m-: the slab below m'_{i-}
    auto below_hi = hi;
    below_hi[*lower_index] = other.lower(*lower_index);
    if (auto piece = canonicalize(m.dim(), lo, below_hi, family)) result.outers.push_back(std::move(*piece));
    lo[*lower_index] = other.lower(*lower_index);
  }
  if (upper_index) {
    // m+: above m'_{i+}, restricted to the part not already in m- so that the
    // pieces stay disjoint when i- != i+.
    auto above_lo = lo;
    above_lo[*upper_index] = other.upper(*upper_index);
    if (auto piece = canonicalize(m.dim(), above_lo, hi, family)) result.outers.push_back(std::move(*piece));
  }
  return result;
}

std::vector<ConstraintVector> subtract(const ConstraintVector& m, const ConstraintVector& other,
                                       const MultiplierFamily& family) {
  std::vector<ConstraintVector> pieces;
  if (!bounds_overlap(m, other)) {
    pieces.push_back(m);
    return pieces;
  }
  std::vector<Rational> lo(m.lowers().begin(), m.lowers().end());
  std::vector<Rational> hi(m.uppers().begin(), m.uppers().end());
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (lo[k] < other.lower(k)) {
      auto cut = hi;
      cut[k] = other.lower(k);
      if (auto piece = canonicalize(m.dim(), lo, cut, family)) pieces.push_back(std::move(*piece));
      lo[k] = other.lower(k);
    }
    if (other.upper(k) < hi[k]) {
      auto cut = lo;
      cut[k] = other.upper(k);
      if (auto piece = canonicalize(m.dim(), cut, hi, family)) pieces.push_back(std::move(*piece));
      hi[k] = other.upper(k);
    }
  }
  return pieces;
}

}  // namespace inasup
