#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "helpers.hpp"
#include "inasup/dynamics.hpp"
#include "inasup/polytope.hpp"
#include "oracles.hpp"

using namespace inasup;
using testing::cv;
using testing::pt;
using testing::q;

namespace {

// Point of S_D with odd denominator: never on a discontinuity plane.
std::vector<Rational> interior_point(std::mt19937_64& rng, int dim, long den = 1001) {
  return oracle::random_point(rng, dim, (den - 1) / 2, den);
}

std::vector<long> b2_expanded(std::span<const Rational> x) {
  return {2 * h(x[0]) - h(x[1]) + h(x[0] + x[1]), 2 * h(x[1]) - h(x[0]) + h(x[0] + x[1])};
}

std::vector<long> b3_expanded(std::span<const Rational> x) {
  const Rational s12 = x[0] + x[1], s23 = x[1] + x[2], s123 = s12 + x[2];
  return {2 * h(x[0]) - h(x[1]) + h(s12) - h(s23) + h(s123),
          2 * h(x[1]) - h(x[0]) - h(x[2]) + h(s12) + h(s23),
          2 * h(x[2]) - h(x[1]) - h(s12) + h(s23) + h(s123)};
}

std::vector<Rational> reduce(std::vector<Rational> x) {
  for (auto& v : x) v = reduce_mod1(v);
  return x;
}

}  // namespace

TEST_CASE("h") {
  CHECK(h(q("3/10")) == 0);
  CHECK(h(q("1/2")) == 0);
  CHECK(h(q("-1/2")) == 0);
  CHECK(h(q("3/2")) == 0);
  CHECK(h(q("7/10")) == 1);
  CHECK(h(q("-7/10")) == -1);
  CHECK(h(q("-3/10")) == 0);
  CHECK(is_half_integer(q("-5/2")));
  CHECK_FALSE(is_half_integer(q("1/4")));
  CHECK(reduce_mod1(q("1/2")) == q("-1/2"));
  CHECK(reduce_mod1(q("7/5")) == q("2/5"));
}

TEST_CASE("B_D matches the expanded D=2 and D=3 formulas") {
  CHECK(b_vector(pt({"1/10", "-1/5"})) == std::vector<long>{0, 0});
  CHECK(b_vector(pt({"2/5", "2/5"})) == std::vector<long>{1, 1});
  std::mt19937_64 rng(1);
  for (int s = 0; s < 500; ++s) {
    const auto x2 = interior_point(rng, 2);
    CHECK(b_vector(x2) == b2_expanded(x2));
    const auto x3 = interior_point(rng, 3);
    CHECK(b_vector(x3) == b3_expanded(x3));
  }
}

TEST_CASE("apply_G") {
  const MapParams p(2, q("11/25"));
  CHECK(apply_G(p, pt({"0", "0"})) == pt({"0", "0"}));
  CHECK(apply_G(p, pt({"2/5", "2/5"})) == pt({"-97/375", "-97/375"}));
  CHECK_THROWS_AS(apply_G(p, pt({"1/4", "1/4"})), DiscontinuityError);
  CHECK_THROWS(apply_G(p, pt({"3/4", "0"})));

  const MapParams p0(3, 0);
  std::mt19937_64 rng(2);
  for (int s = 0; s < 100; ++s) {
    const auto x = interior_point(rng, 3);
    std::vector<Rational> twice(x);
    for (auto& v : twice) v = reduce_mod1(2 * v);
    CHECK(apply_G(p0, x) == twice);
  }
  CHECK_THROWS(MapParams(2, q("1/2")));
  CHECK_THROWS(MapParams(2, q("-1/5")));
}

TEST_CASE("apply_F: uncoupled limit and permutation equivariance") {
  std::mt19937_64 rng(3);
  for (int s = 0; s < 200; ++s) {
    const auto u = interior_point(rng, 4);
    std::vector<Rational> twice(u);
    for (auto& v : twice) v = reduce_mod1(2 * v);
    CHECK(apply_F(4, 0, u) == twice);

    std::vector<std::size_t> perm(4);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Rational> su(4);
    for (std::size_t i = 0; i < 4; ++i) su[i] = u[perm[i]];
    const auto fu = apply_F(4, q("2/5"), u);
    const auto fsu = apply_F(4, q("2/5"), su);
    for (std::size_t i = 0; i < 4; ++i) CHECK(fsu[i] == fu[perm[i]]);
  }
}

TEST_CASE("pi_N semi-conjugates F to G x doubling exactly") {
  std::mt19937_64 rng(4);
  for (int n : {3, 4}) {
    for (const char* eps : {"11/25", "2/5", "1/7"}) {
      const MapParams p(n - 1, q(eps));
      int tested = 0;
      for (int s = 0; s < 1000; ++s) {
        const auto u = oracle::random_point(rng, n, 1000, 2003);
        const auto lhs = project_pi(apply_F(n, q(eps), u));
        const auto x = project_pi(u);
        std::vector<Rational> rhs = apply_G(p, std::span<const Rational>(x).first(n - 1));
        rhs.push_back(reduce_mod1(2 * x.back()));
        CHECK(lhs == rhs);
        ++tested;
      }
      CHECK(tested == 1000);
    }
  }
}

TEST_CASE("atom enumeration") {
  const AtomTable t2(MapParams(2, q("11/25")));
  REQUIRE(t2.size() == 3);
  std::vector<int> sums;
  for (const auto& a : t2.atoms()) {
    CHECK(a.signature[0] == 0);
    CHECK(a.signature[2] == 0);
    sums.push_back(a.signature[1]);
    CHECK(t2.flip_label(t2.flip_label(a.label)) == a.label);
  }
  std::sort(sums.begin(), sums.end());
  CHECK(sums == std::vector<int>{-1, 0, 1});

  const std::size_t expected[] = {0, 1, 3, 13, 75, 541};
  for (int dim = 1; dim <= 5; ++dim) CHECK(enumerate_signatures(dim).size() == expected[dim]);
  CHECK(enumerate_signatures(5) == enumerate_signatures_serial(5));

  std::ostringstream out;
  t2.dump(out);
  CHECK(out.str().find("(1,1):0 (1,2):1 (2,2):0 | 1 1") != std::string::npos);
}

TEST_CASE("atom signatures brute force for D=2,3") {
  for (int dim : {2, 3}) {
    std::set<std::vector<int>> found;
    const auto sigs = enumerate_signatures(dim);
    // singleton sums stay in (-1/2, 1/2) on S_D
    const std::size_t e = constraint_count(dim);
    std::vector<int> sig(e, -1);
    auto rec = [&](auto& self, std::size_t k) -> void {
      if (k == e) {
        std::vector<Rational> lo(e), hi(e);
        for (std::size_t r = 0; r < e; ++r) {
          lo[r] = Rational(2 * sig[r] - 1, 2);
          hi[r] = Rational(2 * sig[r] + 1, 2);
        }
        if (!oracle::open_polytope_empty(dim, lo, hi)) found.insert(sig);
        return;
      }
      const auto [i, j] = index_at(k);
      const int span = i == j ? 0 : 2;
      for (int v = -span; v <= span; ++v) {
        sig[k] = v;
        self(self, k + 1);
      }
    };
    rec(rec, 0);
    CHECK(found == std::set<std::vector<int>>(sigs.begin(), sigs.end()));
  }
}

TEST_CASE("atoms tile S_D") {
  for (int dim : {2, 3, 4}) {
    const AtomTable table(MapParams(dim, q("2/5")));
    std::mt19937_64 rng(static_cast<unsigned>(dim));
    for (int s = 0; s < 500; ++s) {
      const auto x = interior_point(rng, dim);
      int hits = 0;
      for (const auto& a : table.atoms()) hits += contains_point(a.bounds, x) ? 1 : 0;
      CHECK(hits == 1);
      const auto label = table.locate(x);
      REQUIRE(label);
      CHECK(contains_point(table.atom(*label).bounds, x));
      CHECK(table.atom(*label).b == b_vector(x));
    }
  }
}

TEST_CASE("gamma and its inverse") {
  const MapParams p(2, q("11/25"));
  const AtomTable table(p);
  const Atom* central = nullptr;
  for (const auto& a : table.atoms())
    if (a.b == std::vector<long>{0, 0}) central = &a;
  REQUIRE(central);
  CHECK(gamma(p, *central, central->bounds) == dilate(central->bounds, q("28/25")));
  for (const auto& a : table.atoms()) {
    CHECK(gamma_inverse(p, a, gamma(p, a, a.bounds)) == a.bounds);
    const auto img = gamma(p, a, a.bounds);
    for (std::size_t k = 0; k < img.size(); ++k)
      CHECK(img.upper(k) - img.lower(k) == p.expansion() * (a.bounds.upper(k) - a.bounds.lower(k)));
  }
}

TEST_CASE("gamma commutes with O and with G on points") {
  std::mt19937_64 rng(8);
  for (int dim : {2, 3}) {
    const MapParams p(dim, dim == 2 ? q("11/25") : q("2/5"));
    const AtomTable table(p);
    const auto& fam = standard_family(dim);
    int tested = 0;
    while (tested < 1000) {
      const Atom& a = table.atom(1 + static_cast<int>(rng() % table.size()));
      const auto [lo, hi] = oracle::random_bounds(rng, dim, 6);
      std::vector<Rational> l(lo), u(hi);
      for (std::size_t k = 0; k < l.size(); ++k) {
        if (l[k] < a.bounds.lower(k)) l[k] = a.bounds.lower(k);
        if (u[k] > a.bounds.upper(k)) u[k] = a.bounds.upper(k);
        if (!(l[k] < u[k])) goto next;
      }
      {
        const ConstraintVector m(dim, l, u);
        const auto om = optimize(m, fam);
        if (om.empty) continue;
        const ConstraintVector omv(dim, om.lower, om.upper);
        const auto go = gamma(p, a, omv);
        const auto og = optimize(gamma(p, a, m), fam);
        CHECK(og.lower == std::vector<Rational>(go.lowers().begin(), go.lowers().end()));
        CHECK(og.upper == std::vector<Rational>(go.uppers().begin(), go.uppers().end()));
        ++tested;
        for (int s = 0; s < 5; ++s) {
          const auto x = interior_point(rng, dim);
          if (!contains_point(omv, x)) continue;
          const auto gx = apply_G(p, x);
          bool hit = false;
          for (const auto& piece : project_to_fundamental(go, fam)) hit = hit || contains_point(piece, gx);
          CHECK(hit);
        }
      }
    next:;
    }
  }
}

TEST_CASE("project_to_fundamental") {
  const auto& fam = standard_family(2);
  const auto inside = cv(2, {{"-1/5", "1/5"}, {"-2/5", "2/5"}, {"-1/5", "1/5"}});
  const auto same = project_to_fundamental(inside, fam);
  REQUIRE(same.size() == 1);
  CHECK(same[0] == inside);

  const auto slab = *canonicalize(cv(2, {{"2/5", "4/5"}, {"-5", "5"}, {"-1/4", "1/4"}}), fam);
  const auto pieces = project_to_fundamental(slab, fam);
  REQUIRE(pieces.size() == 2);
  std::vector<std::pair<Rational, Rational>> x1;
  for (const auto& pc : pieces) x1.emplace_back(pc.lower({1, 1}), pc.upper({1, 1}));
  std::sort(x1.begin(), x1.end());
  CHECK(x1[0] == std::pair<Rational, Rational>(q("-1/2"), q("-1/5")));
  CHECK(x1[1] == std::pair<Rational, Rational>(q("2/5"), q("1/2")));

  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const auto [lo, hi] = oracle::random_bounds(rng, 3, 3);
    const auto m = canonicalize(3, lo, hi, standard_family(3));
    if (!m) continue;
    const auto out = project_to_fundamental(*m, standard_family(3));
    for (const auto& pc : out)
      for (std::size_t i = 1; i <= 3; ++i) {
        CHECK(pc.lower(ConstraintIndex{static_cast<int>(i), static_cast<int>(i)}) >= q("-1/2"));
        CHECK(pc.upper(ConstraintIndex{static_cast<int>(i), static_cast<int>(i)}) <= q("1/2"));
      }
    for (int s = 0; s < 50; ++s) {
      const auto x = oracle::random_point(rng, 3, 3000, 1001);
      if (!contains_point(*m, x)) continue;
      const auto r = reduce(x);
      int hits = 0;
      for (const auto& pc : out) hits += contains_point(pc, r) ? 1 : 0;
      CHECK(hits == 1);
    }
    for (int s = 0; s < 50; ++s) {
      const auto r = interior_point(rng, 3);
      bool in_piece = false;
      for (const auto& pc : out) in_piece = in_piece || contains_point(pc, r);
      if (!in_piece) continue;
      // some integer translate of r lies in m
      bool found = false;
      for (const auto& lift : integer_lifts(*m)) {
        std::vector<Rational> y(r);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += lift[i];
        found = found || contains_point(*m, y);
      }
      CHECK(found);
    }
  }
}

TEST_CASE("cylinders") {
  const MapParams p(2, q("11/25"));
  const AtomTable table(p);
  const auto& fam = standard_family(2);
  for (const auto& a : table.atoms()) {
    const std::vector<int> w{a.label};
    const auto c = cylinder(table, w, fam);
    REQUIRE(c.size() == 1);
    CHECK(c[0] == a.bounds);
  }
  CHECK_THROWS(cylinder(table, std::vector<int>{4}, fam));
  CHECK_THROWS(cylinder(table, std::vector<int>{}, fam));

  // exact orbit of a rational point: its itinerary and lifts select a piece
  // containing it, and the piece lies in the full cylinder
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 50; ++trial) {
    auto x = interior_point(rng, 2);
    const auto x0 = x;
    std::vector<int> word;
    std::vector<std::vector<int>> lifts;
    for (int t = 0; t < 5; ++t) {
      const auto label = table.locate(x);
      REQUIRE(label);
      word.push_back(*label);
      if (t == 4) break;
      const Atom& a = table.atom(*label);
      std::vector<int> n(2);
      std::vector<Rational> y(2);
      for (int i = 0; i < 2; ++i) {
        const Rational raw = p.expansion() * x[i] + p.coupling() * a.b[i];
        n[i] = static_cast<int>(floor(raw + q("1/2")).get_si());
        y[i] = raw - n[i];
      }
      lifts.push_back(n);
      CHECK(y == apply_G(p, x));
      x = y;
    }
    const auto piece = cylinder(table, word, lifts, fam);
    REQUIRE(piece);
    CHECK(contains_point(*piece, x0));
    bool inside = false;
    for (const auto& c : cylinder(table, word, fam)) inside = inside || includes(c, *piece);
    CHECK(inside);
  }
}

TEST_CASE("named symmetries") {
  CHECK(apply_named_symmetry("s321", pt({"1/5", "1/10"})) == pt({"-1/10", "-1/5"}));
  CHECK(apply_named_symmetry("s213", pt({"1/5", "2/5"})) == pt({"-1/5", "-2/5"}));
  CHECK(apply_named_symmetry("s4231", pt({"1/10", "1/5", "1/10"})) == pt({"-3/10", "1/5", "-3/10"}));
  CHECK_THROWS(apply_named_symmetry("s999", pt({"0", "0"})));
  std::mt19937_64 rng(12);
  for (int dim : {2, 3}) {
    const MapParams p(dim, q("2/5"));
    auto names = symmetry_names(dim);
    names.push_back(dim == 2 ? "s213*s321" : "-s1243*s2134");
    for (const auto& name : names) {
      for (int s = 0; s < 200; ++s) {
        const auto x = interior_point(rng, dim);
        const auto sx = apply_named_symmetry(name, x);
        try {
          CHECK(apply_G(p, sx) == apply_named_symmetry(name, apply_G(p, x)));
        } catch (const DiscontinuityError&) {
        }
      }
    }
    for (int s = 0; s < 20; ++s) {
      const auto x = interior_point(rng, dim);
      CHECK(apply_named_symmetry("-Id", apply_named_symmetry("-Id", x)) == x);
    }
  }
}
