#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "inasup/constraint_vector.hpp"
#include "inasup/optimizer.hpp"

namespace inasup {

enum class ChopKind { NoChop, TwoPiece, ThreePiece };

/// P_m split along at most two constraints of the overlapping polytope m':
///   P_m = P_{outer...} ∪ P_inner  (mod 0), pieces pairwise disjoint.
/// `outers` lists only pieces that survived the emptiness test.
struct ChopResult {
  ChopKind kind = ChopKind::NoChop;
  std::optional<ConstraintVector> inner;
  std::vector<ConstraintVector> outers;
  std::optional<std::size_t> lower_index;  // i-: lower bound tightened by m'
  std::optional<std::size_t> upper_index;  // i+: upper bound tightened by m'
};

/// Tries to write P_m \ P_{m'} as one or two constraint-vector pieces.
///
/// Both inputs must be optimized with `family`. Throws std::invalid_argument
/// when the intersection is empty or when either polytope includes the other.
/// Returns NoChop when the tightened-and-binding lower (or upper) index is not
/// unique, or when it does not support a facet of P_{m'}.
ChopResult try_chop(const ConstraintVector& m, const ConstraintVector& other,
                    const MultiplierFamily& family);

/// Variant reusing an already optimized intersection (must equal
/// intersect(m, other, family)).
ChopResult try_chop(const ConstraintVector& m, const ConstraintVector& other,
                    const ConstraintVector& inner, const MultiplierFamily& family);

/// Exact mod-0 set difference P_m \ P_{m'} as disjoint optimized pieces,
/// peeling one violated half-space of m' at a time (up to 2E pieces).
std::vector<ConstraintVector> subtract(const ConstraintVector& m, const ConstraintVector& other,
                                       const MultiplierFamily& family);

}  // namespace inasup
