#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "inasup/rational.hpp"

namespace inasup {

/// Contiguous coordinate sum x_i + ... + x_j, 1 <= i <= j <= dim.
struct ConstraintIndex {
  int i = 1;
  int j = 1;
  friend bool operator==(const ConstraintIndex&, const ConstraintIndex&) = default;
};

/// Number of contiguous sums in dimension `dim`: dim(dim+1)/2.
constexpr std::size_t constraint_count(int dim) {
  return static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim + 1) / 2;
}

/// Flat storage order: j outer, i inner, i.e. (1,1), (1,2), (2,2), (1,3), ...
constexpr std::size_t flat_index(ConstraintIndex c) {
  return static_cast<std::size_t>(c.j) * static_cast<std::size_t>(c.j - 1) / 2 +
         static_cast<std::size_t>(c.i - 1);
}

ConstraintIndex index_at(std::size_t k);

/// Sum of x_i..x_j for the 1-based pair.
Rational partial_sum(std::span<const Rational> x, ConstraintIndex c);

/// Paired strict bounds on every contiguous coordinate sum:
///   P_m = { x : lower_k < sum_{i..j} x < upper_k  for all k }.
/// The constructor rejects lower_k >= upper_k; an empty polytope is not a
/// ConstraintVector, callers use std::optional for that.
class ConstraintVector {
 public:
  ConstraintVector(int dim, std::vector<Rational> lower, std::vector<Rational> upper);

  /// Every bound pair set to (lo, hi).
  static ConstraintVector uniform(int dim, const Rational& lo, const Rational& hi);

  int dim() const { return dim_; }
  std::size_t size() const { return lower_.size(); }

  const Rational& lower(std::size_t k) const { return lower_[k]; }
  const Rational& upper(std::size_t k) const { return upper_[k]; }
  const Rational& lower(ConstraintIndex c) const { return lower_[flat_index(c)]; }
  const Rational& upper(ConstraintIndex c) const { return upper_[flat_index(c)]; }

  std::span<const Rational> lowers() const { return lower_; }
  std::span<const Rational> uppers() const { return upper_; }

  friend bool operator==(const ConstraintVector&, const ConstraintVector&) = default;

 private:
  int dim_;
  std::vector<Rational> lower_;
  std::vector<Rational> upper_;
};

/// One line per index pair: "i j lo_num/lo_den up_num/up_den".
void write_constraint_vector(std::ostream& out, const ConstraintVector& m);

/// Reads exactly constraint_count(dim) lines written by write_constraint_vector.
/// Throws std::runtime_error on malformed or out-of-order input.
ConstraintVector read_constraint_vector(std::istream& in, int dim);

}  // namespace inasup
