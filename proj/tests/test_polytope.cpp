#include <doctest.h>

#include <random>
#include <sstream>

#include "helpers.hpp"
#include "inasup/optimizer.hpp"
#include "inasup/polytope.hpp"
#include "oracles.hpp"

using namespace inasup;
using testing::cv;
using testing::pt;
using testing::q;

TEST_CASE("rational parsing and printing") {
  CHECK(parse_rational("11/25") == Rational(11, 25));
  CHECK(parse_rational("-6/4") == Rational(-3, 2));
  CHECK(parse_rational("3") == Rational(3));
  CHECK(parse_rational("011/025") == Rational(11, 25));
  CHECK(to_string(Rational(3)) == "3/1");
  CHECK(to_string(Rational(-3, 2)) == "-3/2");
  CHECK_THROWS(parse_rational("0.44"));
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational(""));
  CHECK_THROWS(parse_rational("1/2x"));
  CHECK(floor(q("-1/2")) == -1);
  CHECK(ceil(q("-1/2")) == 0);
  CHECK(is_reduced(parse_rational("6/4")));
}

TEST_CASE("constraint indices use j-outer flat order") {
  CHECK(constraint_count(3) == 6);
  CHECK(flat_index({1, 1}) == 0);
  CHECK(flat_index({1, 2}) == 1);
  CHECK(flat_index({2, 2}) == 2);
  CHECK(flat_index({1, 3}) == 3);
  CHECK(flat_index({3, 3}) == 5);
  for (std::size_t k = 0; k < constraint_count(6); ++k) CHECK(flat_index(index_at(k)) == k);
  CHECK(partial_sum(pt({"1/3", "1/4", "1/5"}), {2, 3}) == q("9/20"));
}

TEST_CASE("constraint vector rejects empty bound pairs") {
  CHECK_THROWS_AS(cv(1, {{"1/2", "1/2"}}), std::invalid_argument);
  CHECK_THROWS_AS(cv(2, {{"0", "1"}, {"0", "1"}}), std::invalid_argument);
}

TEST_CASE("contains_point uses strict inequalities") {
  const auto m = ConstraintVector::uniform(2, q("-1/2"), q("1/2"));
  CHECK(contains_point(m, pt({"0", "0"})));
  CHECK_FALSE(contains_point(m, pt({"1/2", "0"})));
  CHECK_FALSE(contains_point(m, pt({"1/4", "1/4"})));
  CHECK_THROWS(contains_point(m, pt({"0"})));
}

TEST_CASE("includes is the componentwise rule") {
  const auto big = cv(2, {{"0", "1/2"}, {"0", "1"}, {"0", "1/2"}});
  const auto small = cv(2, {{"0", "1/4"}, {"0", "1/2"}, {"0", "1/4"}});
  CHECK(includes(big, big));
  CHECK(includes(big, small));
  CHECK_FALSE(includes(small, big));
  CHECK(includes(big, dilate(big, q("1/2"))));
}

TEST_CASE("intersect") {
  const auto& fam = standard_family(2);
  const auto square = cv(2, {{"0", "1/2"}, {"0", "1"}, {"0", "1/2"}});
  const auto slab = cv(2, {{"1/4", "3/4"}, {"1/4", "5/4"}, {"0", "1/2"}});
  CHECK(intersect(square, square, fam) == square);
  const auto both = intersect(square, slab, fam);
  REQUIRE(both);
  CHECK(*both == cv(2, {{"1/4", "1/2"}, {"1/4", "1"}, {"0", "1/2"}}));
  const auto left = cv(2, {{"0", "1/4"}, {"0", "3/4"}, {"0", "1/2"}});
  const auto right = cv(2, {{"1/2", "3/4"}, {"1/2", "5/4"}, {"0", "1/2"}});
  CHECK_FALSE(intersect(left, right, fam));
}

TEST_CASE("dilate, translate, sign_flip") {
  const auto unit = ConstraintVector::uniform(2, q("-1/2"), q("1/2"));
  CHECK(dilate(unit, 1) == unit);
  CHECK(dilate(unit, q("28/25")) == ConstraintVector::uniform(2, q("-14/25"), q("14/25")));
  CHECK(dilate(dilate(unit, 2), q("1/2")) == unit);
  CHECK_THROWS(dilate(unit, 0));

  const auto moved = translate(unit, pt({"1", "0"}));
  CHECK(moved.lower({1, 1}) == q("1/2"));
  CHECK(moved.upper({1, 2}) == q("3/2"));
  CHECK(moved.lower({2, 2}) == q("-1/2"));
  CHECK(translate(moved, pt({"-1", "0"})) == unit);
  CHECK(translate(unit, pt({"0", "0"})) == unit);

  CHECK(sign_flip(unit) == unit);
  const auto m = cv(1, {{"-1/4", "1/2"}});
  CHECK(sign_flip(m) == cv(1, {{"-1/2", "1/4"}}));
  CHECK(sign_flip(sign_flip(m)) == m);
}

TEST_CASE("membership commutes with intersect and the vector maps") {
  std::mt19937_64 rng(7);
  for (int dim : {2, 3}) {
    const auto& fam = standard_family(dim);
    int nonempty = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const auto [lo1, hi1] = oracle::random_bounds(rng, dim, 4);
      const auto [lo2, hi2] = oracle::perturb_bounds(rng, lo1, hi1, 2, 8);
      const ConstraintVector a(dim, lo1, hi1), b(dim, lo2, hi2);
      const auto ab = intersect(a, b, fam);
      if (ab) ++nonempty;
      const Rational factor = oracle::random_rational(rng, 1, 9, 4);
      const auto shift = oracle::random_point(rng, dim, 6, 3);
      for (int s = 0; s < 50; ++s) {
        const auto x = oracle::random_point(rng, dim, 24, 13);
        const bool in_a = contains_point(a, x), in_b = contains_point(b, x);
        CHECK((ab ? contains_point(*ab, x) : false) == (in_a && in_b));
        std::vector<Rational> ax(x), tx(x), nx(x);
        for (std::size_t d = 0; d < x.size(); ++d) {
          ax[d] *= factor;
          tx[d] += shift[d];
          nx[d] = -nx[d];
        }
        CHECK(contains_point(dilate(a, factor), ax) == in_a);
        CHECK(contains_point(translate(a, shift), tx) == in_a);
        CHECK(contains_point(sign_flip(a), nx) == in_a);
      }
      if (ab)
        for (std::size_t k = 0; k < ab->size(); ++k)
          CHECK((is_reduced(ab->lower(k)) && is_reduced(ab->upper(k))));
    }
    CHECK(nonempty >= 5);
  }
}

TEST_CASE("includes agrees with sampled membership on optimized vectors") {
  std::mt19937_64 rng(11);
  const auto& fam = standard_family(2);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto [lo1, hi1] = oracle::random_bounds(rng, 2, 4);
    const auto [lo2, hi2] = oracle::perturb_bounds(rng, lo1, hi1, 2, 8);
    const auto a = canonicalize(2, lo1, hi1, fam);
    const auto b = canonicalize(2, lo2, hi2, fam);
    if (!a || !b || !includes(*a, *b)) continue;
    ++checked;
    for (int s = 0; s < 200; ++s) {
      const auto x = oracle::random_point(rng, 2, 48, 25);
      if (contains_point(*b, x)) CHECK(contains_point(*a, x));
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("constraint vector text round trip") {
  const auto m = cv(2, {{"-1/2", "1/3"}, {"-7/5", "2"}, {"0", "1/2"}});
  std::ostringstream out;
  write_constraint_vector(out, m);
  CHECK(out.str() == "1 1 -1/2 1/3\n1 2 -7/5 2/1\n2 2 0/1 1/2\n");
  std::istringstream in(out.str());
  CHECK(read_constraint_vector(in, 2) == m);

  std::istringstream unreduced("1 1 -2/4 1/3\n1 2 -7/5 2/1\n2 2 0/1 1/2\n");
  CHECK_THROWS(read_constraint_vector(unreduced, 2));
  std::istringstream swapped("1 2 -7/5 2/1\n1 1 -1/2 1/3\n2 2 0/1 1/2\n");
  CHECK_THROWS(read_constraint_vector(swapped, 2));
  std::istringstream truncated("1 1 -1/2 1/3\n");
  CHECK_THROWS(read_constraint_vector(truncated, 2));
}
