#include <doctest.h>

#include <cstdint>
#include <vector>

#include "dualvik/duality.hpp"
#include "dualvik/errors.hpp"
#include "dualvik/rel.hpp"
#include "dualvik/rng.hpp"
#include "dualvik/subord.hpp"

using namespace dualvik;

namespace {

Relation relation_from_mask(const Algebra& x, const Algebra& y,
                            std::uint64_t cells) {
  Relation r(x, y);
  int bit = 0;
  for (int i = 0; i < x.atom_count(); ++i)
    for (int j = 0; j < y.atom_count(); ++j, ++bit)
      if (cells >> bit & 1) r.add(i, j);
  return r;
}

}  // namespace

TEST_CASE("the two functor directions invert each other") {
  Algebra x = Algebra::with_size(2, "x");
  for (std::uint64_t m = 0; m < 16; ++m) {
    Relation r = relation_from_mask(x, x, m);
    CHECK(uf_mor(clop_mor(r)) == r);
    CHECK(clop_mor(uf_mor(clop_mor(r))) == clop_mor(r));
  }
  Algebra z = Algebra::with_size(3, "z");
  RandomSource rng(51);
  for (int t = 0; t < 25; ++t) {
    Relation r = relation_from_mask(z, z, rng.subset(9));
    CHECK(uf_mor(clop_mor(r)) == r);
  }
}

TEST_CASE("clop transport preserves composition and identities") {
  Algebra x = Algebra::with_size(2, "x");
  CHECK(clop_mor(identity_relation(x)) == identity_subordination(x));
  for (std::uint64_t m1 = 0; m1 < 16; ++m1)
    for (std::uint64_t m2 = 0; m2 < 16; ++m2) {
      Relation r1 = relation_from_mask(x, x, m1);
      Relation r2 = relation_from_mask(x, x, m2);
      CHECK(clop_mor(compose(r2, r1)) ==
            compose(clop_mor(r2), clop_mor(r1)));
    }
}

TEST_CASE("quotient transport projects a saturated relation") {
  Algebra x({"a", "b", "c"});
  Relation e = identity_relation(x);
  e.add(0, 1);
  e.add(1, 0);

  // Quotienting the equivalence by itself gives the identity on classes.
  Relation qe = q_mor(e, e, e);
  CHECK(qe == identity_relation(quotient(e).classes));

  // Trivial equivalences leave the matrix untouched.
  Relation r = from_pairs(x, x, {{0, 2}, {1, 2}, {2, 2}});
  Relation qr = q_mor(r, identity_relation(x), identity_relation(x));
  CHECK(qr.matrix() == r.matrix());

  // A saturated relation descends: both merged points map to c.
  Relation sat = compose(identity_relation(x), compose(r, e));
  Relation qs = q_mor(sat, e, identity_relation(x));
  CHECK(qs.source().atom_count() == 2);
  CHECK(qs.holds(0, 2));
  CHECK(qs.holds(1, 2));

  CHECK_THROWS_AS(q_mor(r, empty_relation(x, x), identity_relation(x)),
                  ValidationError);
  // Unsaturated input: a relates through e but b does not.
  Relation partial = from_pairs(x, x, {{0, 2}});
  CHECK_THROWS_AS(q_mor(partial, e, identity_relation(x)), ValidationError);
}

TEST_CASE("finite covers are discrete and transport is the identity") {
  Algebra x = Algebra::with_size(3, "x");
  CoveredSpace c = gleason_finite(x);
  CHECK(c.points == x);
  CHECK(c.cover == identity_relation(x));
  Relation r = from_pairs(x, x, {{0, 1}});
  CHECK(gleason_mor(r) == r);
  CHECK(d_mor(r) == clop_mor(r));
}

TEST_CASE("square names round-trip") {
  for (Square s : all_squares()) {
    CHECK(square_from_name(square_name(s)) == s);
  }
  CHECK(all_squares().size() == 9);
  CHECK(square_name(Square::vr_box) == "VR-box");
  CHECK(square_name(Square::frame) == "Frame");
  CHECK_THROWS_AS(square_from_name("VR-boxx"), ValidationError);
}

TEST_CASE("every square verifies exhaustively at its default size") {
  RunConfig cfg;
  std::vector<std::size_t> expected = {16, 16, 16, 16, 16, 26, 26, 26, 26};
  auto squares = all_squares();
  for (std::size_t i = 0; i < squares.size(); ++i) {
    auto reports = verify_square(squares[i], cfg);
    CHECK(reports.size() == expected[i]);
    for (const SquareReport& r : reports) {
      CHECK(r.pass);
      CHECK(r.witness.empty());
      CHECK(!r.instance.empty());
      CHECK(!r.left.empty());
      CHECK(!r.right.empty());
    }
  }
}

TEST_CASE("randomized instances verify and replay deterministically") {
  RunConfig cfg;
  cfg.seed = 99;
  cfg.samples = 10;
  for (Square s : all_squares()) {
    auto first = verify_square(s, cfg);
    auto second = verify_square(s, cfg);
    REQUIRE(first.size() == second.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
      CHECK(first[i].pass);
      CHECK(first[i].instance == second[i].instance);
      CHECK(first[i].left == second[i].left);
      CHECK(first[i].right == second[i].right);
    }
  }
}
