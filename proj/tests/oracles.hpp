#pragma once

#include <optional>
#include <random>
#include <vector>

#include "inasup/constraint_vector.hpp"
#include "inasup/rational.hpp"

namespace oracle {

using inasup::ConstraintIndex;
using inasup::ConstraintVector;
using inasup::Rational;

// Solves A y = b exactly; nullopt when A is singular.
inline std::optional<std::vector<Rational>> solve(std::vector<std::vector<Rational>> a,
                                                  std::vector<Rational> b) {
  const std::size_t n = a.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return std::nullopt;
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      const Rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t r = 0; r < n; ++r) b[r] /= a[r][r];
  return b;
}

inline std::vector<Rational> row_of(int dim, std::size_t k) {
  const auto [i, j] = inasup::index_at(k);
  std::vector<Rational> row(static_cast<std::size_t>(dim), 0);
  for (int c = i; c <= j; ++c) row[static_cast<std::size_t>(c - 1)] = 1;
  return row;
}

inline Rational sum_over(std::span<const Rational> x, std::size_t k) {
  return inasup::partial_sum(x, inasup::index_at(k));
}

// Vertices of the closed polytope {lower <= sums <= upper}, found by solving
// every choice of D tight half-spaces.
inline std::vector<std::vector<Rational>> vertices(int dim, std::span<const Rational> lower,
                                                   std::span<const Rational> upper) {
  const std::size_t e = lower.size();
  const std::size_t planes = 2 * e;
  std::vector<std::vector<Rational>> out;
  std::vector<std::size_t> pick(static_cast<std::size_t>(dim));
  auto feasible = [&](const std::vector<Rational>& x) {
    for (std::size_t k = 0; k < e; ++k) {
      const Rational s = sum_over(x, k);
      if (s < lower[k] || s > upper[k]) return false;
    }
    return true;
  };
  auto rec = [&](auto& self, std::size_t depth, std::size_t from) -> void {
    if (depth == pick.size()) {
      std::vector<std::vector<Rational>> a;
      std::vector<Rational> b;
      for (std::size_t p : pick) {
        a.push_back(row_of(dim, p % e));
        b.push_back(p < e ? lower[p] : upper[p - e]);
      }
      auto x = solve(a, b);
      if (x && feasible(*x)) out.push_back(*x);
      return;
    }
    for (std::size_t p = from; p < planes; ++p) {
      pick[depth] = p;
      self(self, depth + 1, p + 1);
    }
  };
  rec(rec, 0, 0);
  return out;
}

// The open polytope is nonempty iff the centroid of the closed polytope's
// vertices satisfies every constraint strictly.
inline bool open_polytope_empty(int dim, std::span<const Rational> lower,
                                std::span<const Rational> upper) {
  const auto verts = vertices(dim, lower, upper);
  if (verts.empty()) return true;
  std::vector<Rational> c(static_cast<std::size_t>(dim), 0);
  for (const auto& v : verts)
    for (std::size_t d = 0; d < c.size(); ++d) c[d] += v[d];
  for (auto& v : c) v /= static_cast<long>(verts.size());
  for (std::size_t k = 0; k < lower.size(); ++k) {
    const Rational s = sum_over(c, k);
    if (!(lower[k] < s && s < upper[k])) return true;
  }
  return false;
}

// Exact extremes of one contiguous sum over the closed polytope.
inline std::pair<Rational, Rational> sum_range(int dim, std::span<const Rational> lower,
                                               std::span<const Rational> upper, std::size_t k) {
  const auto verts = vertices(dim, lower, upper);
  Rational lo = sum_over(verts.front(), k), hi = lo;
  for (const auto& v : verts) {
    const Rational s = sum_over(v, k);
    if (s < lo) lo = s;
    if (s > hi) hi = s;
  }
  return {lo, hi};
}

inline Rational random_rational(std::mt19937_64& rng, long lo_num, long hi_num, long den) {
  std::uniform_int_distribution<long> pick(lo_num, hi_num);
  return inasup::make_rational(pick(rng), den);
}

// Random bounds with small denominators: a mix of empty and nonempty cases.
inline std::pair<std::vector<Rational>, std::vector<Rational>> random_bounds(std::mt19937_64& rng,
                                                                             int dim, long den) {
  const std::size_t e = inasup::constraint_count(dim);
  std::vector<Rational> lo(e), hi(e);
  std::uniform_int_distribution<long> width(1, 2 * den);
  for (std::size_t k = 0; k < e; ++k) {
    const auto [i, j] = inasup::index_at(k);
    const long len = j - i + 1;
    lo[k] = random_rational(rng, -len * den, len * den, 2 * den);
    hi[k] = lo[k] + inasup::make_rational(width(rng), 2 * den);
  }
  return {lo, hi};
}

// Bounds moved by independent offsets in [-spread, spread]/den, keeping lo < hi.
inline std::pair<std::vector<Rational>, std::vector<Rational>> perturb_bounds(
    std::mt19937_64& rng, std::vector<Rational> lo, std::vector<Rational> hi, long spread, long den) {
  for (std::size_t k = 0; k < lo.size(); ++k) {
    lo[k] += random_rational(rng, -spread, spread, den);
    hi[k] += random_rational(rng, -spread, spread, den);
    if (!(lo[k] < hi[k])) hi[k] = lo[k] + inasup::make_rational(1, den);
  }
  return {lo, hi};
}

// Random rational point in the box (-r, r)^D with denominator den.
inline std::vector<Rational> random_point(std::mt19937_64& rng, int dim, long r_num, long den) {
  std::vector<Rational> x(static_cast<std::size_t>(dim));
  for (auto& v : x) v = random_rational(rng, -r_num, r_num, den);
  return x;
}

}  // namespace oracle
