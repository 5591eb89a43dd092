#include "inasup/polytope.hpp"

#include <stdexcept>
#include <vector>

namespace inasup {

namespace {

void require_same_dim(const ConstraintVector& a, const ConstraintVector& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("constraint vector dimension mismatch");
}

}  // namespace

bool contains_point(const ConstraintVector& m, std::span<const Rational> x) {
  if (x.size() != static_cast<std::size_t>(m.dim()))
    throw std::invalid_argument("point dimension does not match constraint vector");
  for (std::size_t k = 0; k < m.size(); ++k) {
    const Rational s = partial_sum(x, index_at(k));
    if (!(m.lower(k) < s && s < m.upper(k))) return false;
  }
  return true;
}

bool includes(const ConstraintVector& outer, const ConstraintVector& inner) {
  require_same_dim(outer, inner);
  for (std::size_t k = 0; k < outer.size(); ++k)
    if (inner.lower(k) < outer.lower(k) || outer.upper(k) < inner.upper(k)) return false;
  return true;
}

bool bounds_overlap(const ConstraintVector& a, const ConstraintVector& b) {
  require_same_dim(a, b);
  for (std::size_t k = 0; k < a.size(); ++k) {
    const Rational& lo = a.lower(k) < b.lower(k) ? b.lower(k) : a.lower(k);
    const Rational& hi = a.upper(k) < b.upper(k) ? a.upper(k) : b.upper(k);
    if (!(lo < hi)) return false;
  }
  return true;
}

std::optional<ConstraintVector> intersect(const ConstraintVector& a, const ConstraintVector& b,
                                          const MultiplierFamily& family) {
  if (!bounds_overlap(a, b)) return std::nullopt;
  std::vector<Rational> lo(a.size()), hi(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    lo[k] = a.lower(k) < b.lower(k) ? b.lower(k) : a.lower(k);
    hi[k] = a.upper(k) < b.upper(k) ? a.upper(k) : b.upper(k);
  }
  return canonicalize(a.dim(), lo, hi, family);
}

ConstraintVector dilate(const ConstraintVector& m, const Rational& factor) {
  if (sgn(factor) <= 0) throw std::invalid_argument("dilation factor must be positive");
  std::vector<Rational> lo(m.size()), hi(m.size());
  for (std::size_t k = 0; k < m.size(); ++k) {
    lo[k] = m.lower(k) * factor;
    hi[k] = m.upper(k) * factor;
  }
  return ConstraintVector(m.dim(), std::move(lo), std::move(hi));
}

ConstraintVector translate(const ConstraintVector& m, std::span<const Rational> shift) {
  if (shift.size() != static_cast<std::size_t>(m.dim()))
    throw std::invalid_argument("translation dimension does not match constraint vector");
  std::vector<Rational> lo(m.size()), hi(m.size());
  for (std::size_t k = 0; k < m.size(); ++k) {
    const Rational s = partial_sum(shift, index_at(k));
    lo[k] = m.lower(k) + s;
    hi[k] = m.upper(k) + s;
  }
  return ConstraintVector(m.dim(), std::move(lo), std::move(hi));
}

ConstraintVector sign_flip(const ConstraintVector& m) {
  std::vector<Rational> lo(m.size()), hi(m.size());
  for (std::size_t k = 0; k < m.size(); ++k) {
    lo[k] = -m.upper(k);
    hi[k] = -m.lower(k);
  }
  return ConstraintVector(m.dim(), std::move(lo), std::move(hi));
}

ConstraintVector affine_image(const ConstraintVector& m, const Rational& factor,
                              std::span<const Rational> offset) {
  if (sgn(factor) <= 0) throw std::invalid_argument("affine factor must be positive");
  if (offset.size() != m.size()) throw std::invalid_argument("offset size mismatch");
  std::vector<Rational> lo(m.size()), hi(m.size());
  for (std::size_t k = 0; k < m.size(); ++k) {
    lo[k] = m.lower(k) * factor + offset[k];
    hi[k] = m.upper(k) * factor + offset[k];
  }
  return ConstraintVector(m.dim(), std::move(lo), std::move(hi));
}

}  // namespace inasup
