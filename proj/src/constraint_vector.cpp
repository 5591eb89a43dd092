#include "inasup/constraint_vector.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace inasup {

ConstraintIndex index_at(std::size_t k) {
  int j = 1;
  while (constraint_count(j) <= k) ++j;
  return {static_cast<int>(k - constraint_count(j - 1)) + 1, j};
}

Rational partial_sum(std::span<const Rational> x, ConstraintIndex c) {
  Rational s = 0;
  for (int k = c.i; k <= c.j; ++k) s += x[static_cast<std::size_t>(k - 1)];
  return s;
}

ConstraintVector::ConstraintVector(int dim, std::vector<Rational> lower,
                                   std::vector<Rational> upper)
    : dim_(dim), lower_(std::move(lower)), upper_(std::move(upper)) {
  if (dim < 1) throw std::invalid_argument("constraint vector dimension must be >= 1");
  if (lower_.size() != constraint_count(dim) || upper_.size() != constraint_count(dim))
    throw std::invalid_argument("constraint vector has wrong number of bounds");
  for (std::size_t k = 0; k < lower_.size(); ++k) {
    if (!(lower_[k] < upper_[k])) {
      const auto c = index_at(k);
      throw std::invalid_argument("empty constraint at (" + std::to_string(c.i) + "," +
                                  std::to_string(c.j) + "): lower >= upper");
    }
  }
}

ConstraintVector ConstraintVector::uniform(int dim, const Rational& lo, const Rational& hi) {
  return ConstraintVector(dim, std::vector<Rational>(constraint_count(dim), lo),
                          std::vector<Rational>(constraint_count(dim), hi));
}

void write_constraint_vector(std::ostream& out, const ConstraintVector& m) {
  for (std::size_t k = 0; k < m.size(); ++k) {
    const auto c = index_at(k);
    out << c.i << ' ' << c.j << ' ' << to_string(m.lower(k)) << ' ' << to_string(m.upper(k))
        << '\n';
  }
}

ConstraintVector read_constraint_vector(std::istream& in, int dim) {
  const std::size_t n = constraint_count(dim);
  std::vector<Rational> lower, upper;
  lower.reserve(n);
  upper.reserve(n);
  std::string line;
  for (std::size_t k = 0; k < n; ++k) {
    if (!std::getline(in, line)) throw std::runtime_error("truncated constraint vector");
    std::istringstream fields(line);
    int i = 0, j = 0;
    std::string lo, hi, extra;
    if (!(fields >> i >> j >> lo >> hi) || (fields >> extra))
      throw std::runtime_error("malformed constraint line: '" + line + "'");
    if (!(ConstraintIndex{i, j} == index_at(k)))
      throw std::runtime_error("constraint line out of order: '" + line + "'");
    // Only canonical "p/q" text is accepted so that files round-trip bit-exactly.
    Rational l = parse_rational(lo), u = parse_rational(hi);
    if (to_string(l) != lo || to_string(u) != hi)
      throw std::runtime_error("non-canonical fraction in line: '" + line + "'");
    lower.push_back(std::move(l));
    upper.push_back(std::move(u));
  }
  return ConstraintVector(dim, std::move(lower), std::move(upper));
}

}  // namespace inasup
