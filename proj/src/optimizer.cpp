#include "inasup/optimizer.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <stdexcept>

namespace inasup {

ConstraintSystem::ConstraintSystem(int dim, std::vector<std::vector<Rational>> rows)
    : dim_(dim), rows_(std::move(rows)) {
  if (dim < 1) throw std::invalid_argument("constraint system dimension must be >= 1");
  if (rows_.size() < static_cast<std::size_t>(dim))
    throw std::invalid_argument("constraint system needs at least dim rows");
  for (const auto& row : rows_) {
    if (row.size() != static_cast<std::size_t>(dim))
      throw std::invalid_argument("constraint row has wrong length");
    for (const auto& a : row)
      if (sgn(a) < 0) throw std::invalid_argument("constraint coefficients must be non-negative");
  }
  std::set<std::vector<Rational>> seen(rows_.begin(), rows_.end());
  if (seen.size() != rows_.size()) throw std::invalid_argument("constraint rows must be distinct");
}

ConstraintSystem ConstraintSystem::contiguous_sums(int dim) {
  std::vector<std::vector<Rational>> rows;
  for (std::size_t k = 0; k < constraint_count(dim); ++k) {
    const auto c = index_at(k);
    std::vector<Rational> row(static_cast<std::size_t>(dim), 0);
    for (int q = c.i; q <= c.j; ++q) row[static_cast<std::size_t>(q - 1)] = 1;
    rows.push_back(std::move(row));
  }
  return ConstraintSystem(dim, std::move(rows));
}

std::vector<Rational> Multiplier::dense(std::size_t row_count) const {
  std::vector<Rational> v(row_count, 0);
  for (const auto& t : terms_) v[t.index] = t.coeff;
  return v;
}

namespace {

MultiplierTerm make_term(std::size_t index, const Rational& coeff) {
  MultiplierTerm t{index, coeff, 0, false};
  if (coeff.get_den() == 1 && coeff.get_num().fits_slong_p()) {
    t.integral = true;
    t.small = coeff.get_num().get_si();
  }
  return t;
}

// Gauss-Jordan on the dim x (s + E) matrix [alpha_S^T | alpha^T]. Returns
// false when the columns of alpha_S are dependent. On success the first s
// rows hold the unique coordinates of every consistent right-hand side.
bool reduce(std::vector<std::vector<Rational>>& mat, std::size_t s) {
  const std::size_t rows = mat.size();
  for (std::size_t col = 0; col < s; ++col) {
    std::size_t pivot = col;
    while (pivot < rows && sgn(mat[pivot][col]) == 0) ++pivot;
    if (pivot == rows) return false;
    std::swap(mat[col], mat[pivot]);
    const Rational inv = 1 / mat[col][col];
    for (auto& v : mat[col]) v *= inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == col || sgn(mat[r][col]) == 0) continue;
      const Rational f = mat[r][col];
      for (std::size_t c = col; c < mat[r].size(); ++c) mat[r][c] -= f * mat[col][c];
    }
  }
  return true;
}

}  // namespace

MultiplierFamily MultiplierFamily::enumerate(const ConstraintSystem& system) {
  const std::size_t E = system.row_count();
  const auto D = static_cast<std::size_t>(system.dim());
  MultiplierFamily family;
  family.dim_ = system.dim();
  family.rows_.resize(E);
  std::vector<std::set<std::vector<Rational>>> seen(E);

  for (std::size_t s = 1; s <= std::min(D, E); ++s) {
    std::vector<std::size_t> subset(s);
    std::iota(subset.begin(), subset.end(), std::size_t{0});
    while (true) {
      std::vector<std::vector<Rational>> mat(D, std::vector<Rational>(s + E));
      for (std::size_t j = 0; j < D; ++j) {
        for (std::size_t c = 0; c < s; ++c) mat[j][c] = system.row(subset[c])[j];
        for (std::size_t t = 0; t < E; ++t) mat[j][s + t] = system.row(t)[j];
      }
      if (reduce(mat, s)) {
        for (std::size_t t = 0; t < E; ++t) {
          bool consistent = true;
          for (std::size_t r = s; r < D && consistent; ++r) consistent = sgn(mat[r][s + t]) == 0;
          if (!consistent) continue;
          std::vector<Rational> dense(E, 0);
          for (std::size_t c = 0; c < s; ++c) dense[subset[c]] = mat[c][s + t];
          if (!seen[t].insert(dense).second) continue;
          std::vector<MultiplierTerm> terms;
          for (std::size_t k = 0; k < E; ++k)
            if (sgn(dense[k]) != 0) terms.push_back(make_term(k, dense[k]));
          const bool canonical = terms.size() == 1 && terms[0].index == t && terms[0].coeff == 1;
          for (const auto& term : terms) family.all_integral_ = family.all_integral_ && term.integral;
          family.rows_[t].emplace_back(std::move(terms), canonical);
        }
      }
      // next combination in lexicographic order
      std::size_t pos = s;
      while (pos > 0 && subset[pos - 1] == E - s + pos - 1) --pos;
      if (pos == 0) break;
      ++subset[pos - 1];
      for (std::size_t q = pos; q < s; ++q) subset[q] = subset[q - 1] + 1;
    }
  }
  family.semi_ = std::make_shared<const MultiplierFamily>(family.restricted(2));
  return family;
}

MultiplierFamily MultiplierFamily::restricted(std::size_t max_support) const {
  MultiplierFamily out;
  out.dim_ = dim_;
  out.rows_.resize(rows_.size());
  for (std::size_t r = 0; r < rows_.size(); ++r)
    for (const auto& lambda : rows_[r])
      if (lambda.support() <= max_support) out.rows_[r].push_back(lambda);
  for (const auto& row : out.rows_)
    for (const auto& lambda : row)
      for (const auto& t : lambda.terms()) out.all_integral_ = out.all_integral_ && t.integral;
  return out;
}

std::optional<std::size_t> MultiplierFamily::uniform_cardinality() const {
  if (rows_.empty()) return std::nullopt;
  const std::size_t n = rows_.front().size();
  for (const auto& row : rows_)
    if (row.size() != n) return std::nullopt;
  return n;
}

const MultiplierFamily& standard_family(int dim) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<const MultiplierFamily>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[dim];
  if (!slot)
    slot = std::make_unique<const MultiplierFamily>(
        MultiplierFamily::enumerate(ConstraintSystem::contiguous_sums(dim)));
  return *slot;
}

OptimizedBounds optimize_bounds(std::span<const Rational> lower, std::span<const Rational> upper,
                                const MultiplierFamily& family) {
  if (lower.size() != family.row_count() || upper.size() != family.row_count())
    throw std::invalid_argument("bounds do not match multiplier family");
  OptimizedBounds out;
  out.lower.resize(lower.size());
  out.upper.resize(upper.size());
  out.empty = !optimize_into<Rational>(lower, upper, family, out.lower, out.upper);
  return out;
}

OptimizedBounds optimize(const ConstraintVector& m, const MultiplierFamily& family) {
  return optimize_bounds(m.lowers(), m.uppers(), family);
}

OptimizedBounds semi_optimize(const ConstraintVector& m, const MultiplierFamily& family) {
  return optimize_bounds(m.lowers(), m.uppers(), family.semi());
}

std::optional<ConstraintVector> canonicalize(int dim, std::span<const Rational> lower,
                                             std::span<const Rational> upper,
                                             const MultiplierFamily& family) {
  for (std::size_t k = 0; k < lower.size(); ++k)
    if (!(lower[k] < upper[k])) return std::nullopt;
  auto opt = optimize_bounds(lower, upper, family);
  if (opt.empty) return std::nullopt;
  return ConstraintVector(dim, std::move(opt.lower), std::move(opt.upper));
}

std::optional<ConstraintVector> canonicalize(const ConstraintVector& m,
                                             const MultiplierFamily& family) {
  return canonicalize(m.dim(), m.lowers(), m.uppers(), family);
}

bool facet_is_active(const ConstraintVector& m, std::size_t row, Side side,
                     const MultiplierFamily& family) {
  const auto lo = m.lowers();
  const auto hi = m.uppers();
  for (const auto& lambda : family.candidates(row)) {
    if (lambda.canonical()) continue;
    if (side == Side::Lower) {
      if (detail::lower_candidate<Rational>(lambda, lo, hi) >= m.lower(row)) return false;
    } else {
      if (detail::upper_candidate<Rational>(lambda, lo, hi) <= m.upper(row)) return false;
    }
  }
  return true;
}

}  // namespace inasup
