#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "inasup/constraint_vector.hpp"
#include "inasup/rational.hpp"

namespace inasup {

/// Rows alpha_1..alpha_E of non-negative coefficients over `dim` coordinates:
///   P = { x : lower_r < alpha_r . x < upper_r }.
class ConstraintSystem {
 public:
  ConstraintSystem(int dim, std::vector<std::vector<Rational>> rows);

  /// The rows used by ConstraintVector: indicator vectors of [i, j], in flat order.
  static ConstraintSystem contiguous_sums(int dim);

  int dim() const { return dim_; }
  std::size_t row_count() const { return rows_.size(); }
  const std::vector<Rational>& row(std::size_t r) const { return rows_[r]; }

 private:
  int dim_;
  std::vector<std::vector<Rational>> rows_;
};

struct MultiplierTerm {
  std::size_t index;
  Rational coeff;
  long long small;  // coeff as machine integer when `integral`
  bool integral;
};

/// A sparse solution lambda of  sum_k lambda_k alpha_k = alpha_row.
class Multiplier {
 public:
  Multiplier(std::vector<MultiplierTerm> terms, bool canonical)
      : terms_(std::move(terms)), canonical_(canonical) {}

  std::span<const MultiplierTerm> terms() const { return terms_; }
  std::size_t support() const { return terms_.size(); }
  /// True for the Kronecker vector delta_{k,row}.
  bool canonical() const { return canonical_; }
  std::vector<Rational> dense(std::size_t row_count) const;

 private:
  std::vector<MultiplierTerm> terms_;
  bool canonical_;
};

/// Per-row sets Lambda_r of multiplier vectors with at most `dim` nonzero
/// entries that uniquely solve the restricted Lagrange system.
///
/// Enumeration visits supports by increasing size, lexicographically within a
/// size, keeps the first occurrence of every distinct solution and skips
/// rank-deficient or inconsistent subsystems.
class MultiplierFamily {
 public:
  static MultiplierFamily enumerate(const ConstraintSystem& system);

  int dim() const { return dim_; }
  std::size_t row_count() const { return rows_.size(); }
  std::span<const Multiplier> candidates(std::size_t row) const { return rows_[row]; }

  /// Subfamily of multipliers with support <= max_support.
  MultiplierFamily restricted(std::size_t max_support) const;

  /// The support <= 2 subfamily used by the fast semi-optimization.
  const MultiplierFamily& semi() const { return semi_ ? *semi_ : *this; }

  bool all_integral() const { return all_integral_; }

  /// Cardinality of Lambda_r if it is the same for every r.
  std::optional<std::size_t> uniform_cardinality() const;

 private:
  MultiplierFamily() = default;

  int dim_ = 0;
  std::vector<std::vector<Multiplier>> rows_;
  bool all_integral_ = true;
  std::shared_ptr<const MultiplierFamily> semi_;
};

/// Enumerated once per dimension and cached for the process lifetime.
const MultiplierFamily& standard_family(int dim);

struct OptimizedBounds {
  std::vector<Rational> lower;
  std::vector<Rational> upper;
  bool empty = false;
};

/// Tightest bounds implied by the system (operator O when `family` is the full
/// family, O' when it is family.semi()). `empty` is set when lower >= upper
/// at some row, i.e. the open polytope has no points.
OptimizedBounds optimize_bounds(std::span<const Rational> lower, std::span<const Rational> upper,
                                const MultiplierFamily& family);

OptimizedBounds optimize(const ConstraintVector& m, const MultiplierFamily& family);

/// Same as optimize() over the support <= 2 subfamily.
OptimizedBounds semi_optimize(const ConstraintVector& m, const MultiplierFamily& family);

/// nullopt when the polytope is empty.
std::optional<ConstraintVector> canonicalize(int dim, std::span<const Rational> lower,
                                             std::span<const Rational> upper,
                                             const MultiplierFamily& family);
std::optional<ConstraintVector> canonicalize(const ConstraintVector& m,
                                             const MultiplierFamily& family);

enum class Side { Lower, Upper };

/// Whether the bound at `row` on `side` supports a facet of P_m. `m` must
/// already be optimized with the same family; otherwise the answer is
/// meaningless.
bool facet_is_active(const ConstraintVector& m, std::size_t row, Side side,
                     const MultiplierFamily& family);

namespace detail {

inline void accumulate(Rational& acc, const MultiplierTerm& t, const Rational& v) {
  if (t.integral && t.small == 1)
    acc += v;
  else if (t.integral && t.small == -1)
    acc -= v;
  else
    acc += t.coeff * v;
}

template <typename T>
void accumulate(T& acc, const MultiplierTerm& t, const T& v) {
  acc += static_cast<T>(t.small) * v;
}

/// Lower bound candidate: sum lambda_k e_k with e_k = lower_k if lambda_k >= 0,
/// upper_k otherwise.
template <typename T>
T lower_candidate(const Multiplier& lambda, std::span<const T> lower, std::span<const T> upper) {
  T acc = 0;
  for (const auto& t : lambda.terms()) accumulate(acc, t, sgn(t.coeff) >= 0 ? lower[t.index] : upper[t.index]);
  return acc;
}

template <typename T>
T upper_candidate(const Multiplier& lambda, std::span<const T> lower, std::span<const T> upper) {
  T acc = 0;
  for (const auto& t : lambda.terms()) accumulate(acc, t, sgn(t.coeff) >= 0 ? upper[t.index] : lower[t.index]);
  return acc;
}

}  // namespace detail

/// Optimization over any exact ordered ring type T (e.g. integers scaled by a
/// common denominator). Requires family.all_integral() unless T is Rational.
/// Returns false when the polytope is empty.
template <typename T>
bool optimize_into(std::span<const T> lower, std::span<const T> upper, const MultiplierFamily& family,
                   std::span<T> out_lower, std::span<T> out_upper) {
  bool nonempty = true;
  for (std::size_t r = 0; r < family.row_count(); ++r) {
    const auto cands = family.candidates(r);
    T lo = detail::lower_candidate<T>(cands.front(), lower, upper);
    T hi = detail::upper_candidate<T>(cands.front(), lower, upper);
    for (std::size_t c = 1; c < cands.size(); ++c) {
      T l = detail::lower_candidate<T>(cands[c], lower, upper);
      if (l > lo) lo = l;
      T u = detail::upper_candidate<T>(cands[c], lower, upper);
      if (u < hi) hi = u;
    }
    if (!(lo < hi)) nonempty = false;
    out_lower[r] = lo;
    out_upper[r] = hi;
  }
  return nonempty;
}

}  // namespace inasup
