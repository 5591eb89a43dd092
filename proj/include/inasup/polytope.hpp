#pragma once

#include <optional>
#include <span>

#include "inasup/constraint_vector.hpp"
#include "inasup/optimizer.hpp"

namespace inasup {

/// Strict membership: every lower < sum < upper.
bool contains_point(const ConstraintVector& m, std::span<const Rational> x);

/// Componentwise inclusion P_inner ⊂ P_outer. Exact when both vectors are
/// optimized, merely sufficient otherwise.
bool includes(const ConstraintVector& outer, const ConstraintVector& inner);

/// Optimized intersection, nullopt when empty.
std::optional<ConstraintVector> intersect(const ConstraintVector& a, const ConstraintVector& b,
                                          const MultiplierFamily& family);

/// Cheap necessary condition for a nonempty intersection: the componentwise
/// max/min bounds are still ordered. Does not run the optimizer.
bool bounds_overlap(const ConstraintVector& a, const ConstraintVector& b);

ConstraintVector dilate(const ConstraintVector& m, const Rational& factor);
ConstraintVector translate(const ConstraintVector& m, std::span<const Rational> shift);
ConstraintVector sign_flip(const ConstraintVector& m);

/// Affine image x -> factor * x + offset, where offset is given per
/// constraint index (factor > 0).
ConstraintVector affine_image(const ConstraintVector& m, const Rational& factor,
                              std::span<const Rational> offset);

}  // namespace inasup
