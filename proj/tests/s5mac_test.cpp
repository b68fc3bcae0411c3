#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <vector>

#include "dualvik/errors.hpp"
#include "dualvik/rel.hpp"
#include "dualvik/rng.hpp"
#include "dualvik/s5mac.hpp"
#include "dualvik/subord.hpp"

using namespace dualvik;

namespace {

std::vector<Relation> equivalences_on(const Algebra& x) {
  std::vector<Relation> out;
  int n = x.atom_count();
  int cells = n * n;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << cells); ++m) {
    Relation r(x, x);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (m >> (i * n + j) & 1) r.add(i, j);
    if (is_equivalence(r)) out.push_back(r);
  }
  return out;
}

// The class-closure of an element mask, computed pairwise.
std::uint64_t saturate(const Relation& e, std::uint64_t mask) {
  std::uint64_t out = 0;
  for (int i = 0; i < e.source().atom_count(); ++i)
    if (mask >> i & 1)
      for (int j = 0; j < e.source().atom_count(); ++j)
        if (e.holds(i, j)) out |= std::uint64_t{1} << j;
  return out;
}

Relation pair_equivalence(const Algebra& x, int a, int b) {
  Relation e = identity_relation(x);
  e.add(a, b);
  e.add(b, a);
  return e;
}

}  // namespace

TEST_CASE("s5_from_relation requires an endo equivalence") {
  Algebra x = Algebra::with_size(2, "x");
  CHECK_NOTHROW(s5_from_relation(identity_relation(x)));
  CHECK_THROWS_AS(s5_from_relation(empty_relation(x, x)), ValidationError);
  CHECK_THROWS_AS(
      s5_from_relation(empty_relation(x, Algebra::with_size(1, "y"))),
      ValidationError);
}

TEST_CASE("axiom profiles of the order and the coarsest equivalence") {
  Algebra x = Algebra::with_size(2, "x");
  S5Algebra fine = s5_from_relation(identity_relation(x));
  CHECK(is_s5(fine));
  CHECK(is_devries(fine));
  S5Algebra coarse = s5_from_relation(full_relation(x, x));
  CHECK(is_s5(coarse));
  CHECK(!is_devries(coarse));  // nothing nonzero sits inside half a class
}

TEST_CASE("compatibility pins the morphism to the endo structure") {
  Algebra x = Algebra::with_size(2, "x");
  S5Algebra coarse = s5_from_relation(full_relation(x, x));
  CHECK(!is_compatible(identity_subordination(coarse.algebra), coarse, coarse));
  CHECK(is_compatible(coarse.s, coarse, coarse));
  S5Algebra fine = s5_from_relation(identity_relation(x));
  CHECK(is_compatible(fine.s, fine, fine));
}

TEST_CASE("ideals of the order are the principal downsets") {
  for (int n = 0; n <= 3; ++n) {
    Algebra a = Algebra::with_size(n, "p");
    S5Algebra s5 = s5_from_relation(identity_relation(a));
    auto ideals = s_ideals(s5);
    CHECK(ideals.size() == (std::size_t{1} << n));
  }
  Algebra big = Algebra::with_size(5, "p");
  CHECK_THROWS_AS(s_ideals(s5_from_relation(identity_relation(big))),
                  CapExceeded);
}

TEST_CASE("ideal lattice of a three-point carrier with one merged pair") {
  Algebra x({"a", "b", "c"});
  S5Algebra s5 = s5_from_relation(pair_equivalence(x, 0, 1));
  auto ideals = s_ideals(s5);
  REQUIRE(ideals.size() == 4);
  CHECK(ideals == std::vector<IdealMask>{1, 17, 15, 255});

  FiniteFrame l = si_frame(s5);
  CHECK(l.size() == 4);
  CHECK(l.bottom() == 0);
  CHECK(l.top() == 3);
  CHECK(l.generator(0) == 0);
  CHECK(l.generator(1) == 4);
  CHECK(l.generator(2) == 3);
  CHECK(l.generator(3) == 7);
  CHECK(l.index_of(17) == 1);
  CHECK(l.index_of(5) == -1);
  CHECK(l.meet(1, 2) == 0);
  CHECK(l.join(1, 2) == 3);
  CHECK(l.leq(0, 1));
  CHECK(!l.leq(1, 2));
  CHECK(l.star(1) == 2);
  CHECK(l.star(2) == 1);
  CHECK(l.star(0) == 3);
  // The least ideal holding the bare element a saturates to its class.
  CHECK(l.least_containing(IdealMask{1} << 1) == 2);
}

TEST_CASE("every ideal is principal over a saturated element and normal") {
  for (int n = 1; n <= 3; ++n) {
    Algebra x = Algebra::with_size(n, "x");
    for (const Relation& e : equivalences_on(x)) {
      S5Algebra s5 = s5_from_relation(e);
      auto ideals = s_ideals(s5);
      int classes = quotient(e).classes.atom_count();
      CHECK(ideals.size() == (std::size_t{1} << classes));
      for (IdealMask ideal : ideals) {
        CHECK(is_s_ideal(ideal, s5));
        CHECK(is_normal_ideal(ideal, s5));
        // Principal: the member join is saturated and generates the ideal.
        std::uint64_t gen = 0;
        for (int m = 0; m < (1 << n); ++m)
          if (ideal >> m & 1) gen |= static_cast<std::uint64_t>(m);
        CHECK(saturate(e, gen) == gen);
        IdealMask down = 0;
        for (std::uint64_t m = 0; m <= gen; ++m)
          if ((m & ~gen) == 0) down |= IdealMask{1} << m;
        CHECK(ideal == down);
      }
    }
  }
}

TEST_CASE("non-ideals are rejected") {
  Algebra x = Algebra::with_size(2, "x");
  S5Algebra s5 = s5_from_relation(identity_relation(x));
  CHECK(!is_s_ideal(0, s5));                        // misses the bottom element
  CHECK(is_s_ideal((1 << 1) | 1, s5));              // the downset of an atom
  CHECK(!is_s_ideal((IdealMask{1} << 3) | 1, s5));  // not downward closed
  S5Algebra coarse = s5_from_relation(full_relation(x, x));
  // The downset of an atom is no longer an ideal once classes merge.
  CHECK(!is_s_ideal((1 << 1) | 1, coarse));
}

TEST_CASE("ideal lattices are distributive") {
  for (int n = 1; n <= 3; ++n) {
    Algebra x = Algebra::with_size(n, "x");
    for (const Relation& e : equivalences_on(x)) {
      FiniteFrame l = si_frame(s5_from_relation(e));
      for (int i = 0; i < l.size(); ++i)
        for (int j = 0; j < l.size(); ++j)
          for (int k = 0; k < l.size(); ++k)
            CHECK(l.meet(i, l.join(j, k)) ==
                  l.join(l.meet(i, j), l.meet(i, k)));
    }
  }
}

TEST_CASE("completion of the merged-pair example") {
  Algebra x({"a", "b", "c"});
  MacneilleResult m = macneille(s5_from_relation(pair_equivalence(x, 0, 1)));
  CHECK(m.completion.algebra.atom_count() == 2);
  CHECK(m.completion.algebra.atom_name(0) == "[a]");
  CHECK(m.completion.algebra.atom_name(1) == "[c]");
  CHECK(m.completion.s == identity_subordination(m.completion.algebra));
  CHECK(m.atom_generators == std::vector<std::uint64_t>{3, 4});
  CHECK(m.embed ==
        std::vector<std::uint64_t>{0, 1, 1, 1, 2, 3, 3, 3});
  CHECK(m.normal_ideals.size() == 4);
  CHECK(is_devries(m.completion));
}

TEST_CASE("completion collapses each class to one atom") {
  for (int n = 1; n <= 3; ++n) {
    Algebra x = Algebra::with_size(n, "x");
    for (const Relation& e : equivalences_on(x)) {
      MacneilleResult m = macneille(s5_from_relation(e));
      int classes = quotient(e).classes.atom_count();
      CHECK(m.completion.algebra.atom_count() == classes);
      CHECK(is_devries(m.completion));
      CHECK(m.completion.s == identity_subordination(m.completion.algebra));
      // Embedding is monotone and hits every completion element.
      std::vector<bool> hit(std::size_t{1} << classes, false);
      for (std::uint64_t a = 0; a < (std::uint64_t{1} << n); ++a) {
        hit[m.embed[a]] = true;
        for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b)
          if ((a & ~b) == 0) CHECK((m.embed[a] & ~m.embed[b]) == 0);
      }
      for (bool h : hit) CHECK(h);
    }
  }
}

TEST_CASE("completion is the identity on an already-complete input") {
  for (int n = 0; n <= 3; ++n) {
    Algebra a = Algebra::with_size(n, "p");
    MacneilleResult m = macneille(s5_from_relation(identity_relation(a)));
    CHECK(m.completion.algebra.atom_count() == n);
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v)
      CHECK(m.embed[v] == v);
    // Completing twice changes nothing further, up to atom renaming.
    MacneilleResult again = macneille(m.completion);
    CHECK(again.completion.algebra.atom_count() ==
          m.completion.algebra.atom_count());
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v)
      CHECK(again.embed[v] == v);
  }
}

TEST_CASE("completion transport respects composition and identities") {
  Algebra x = Algebra::with_size(2, "x");
  Algebra y = Algebra::with_size(3, "y");
  RandomSource rng(41);
  auto ex = equivalences_on(x);
  auto ey = equivalences_on(y);
  for (int t = 0; t < 20; ++t) {
    const Relation& e1 = ex[rng.below(ex.size())];
    const Relation& e2 = ey[rng.below(ey.size())];
    const Relation& e3 = ex[rng.below(ex.size())];
    S5Algebra a1 = s5_from_relation(e1);
    S5Algebra a2 = s5_from_relation(e2);
    S5Algebra a3 = s5_from_relation(e3);

    Relation r1(x, y), r2(y, x);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 3; ++j)
        if (rng.coin()) r1.add(i, j);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 2; ++j)
        if (rng.coin()) r2.add(i, j);
    Subordination t1 =
        Subordination::from_relation(compose(e2, compose(r1, e1)));
    Subordination t2 =
        Subordination::from_relation(compose(e3, compose(r2, e2)));
    REQUIRE(is_compatible(t1, a1, a2));
    REQUIRE(is_compatible(t2, a2, a3));

    Subordination lhs = macneille_morphism(compose(t2, t1), a1, a3);
    Subordination rhs = compose(macneille_morphism(t2, a2, a3),
                                macneille_morphism(t1, a1, a2));
    CHECK(lhs == rhs);
    CHECK(macneille_morphism(a1.s, a1, a1) ==
          identity_subordination(macneille(a1).completion.algebra));
  }
}

TEST_CASE("booleanizing the ideal frame recovers the completion") {
  for (int n = 1; n <= 3; ++n) {
    Algebra x = Algebra::with_size(n, "x");
    for (const Relation& e : equivalences_on(x)) {
      S5Algebra s5 = s5_from_relation(e);
      FiniteFrame l = si_frame(s5);
      BooleanizeResult b = booleanize(l);
      MacneilleResult m = macneille(s5);
      // The frame is already boolean, so nothing is cut away.
      CHECK(b.algebra.algebra.atom_count() ==
            m.completion.algebra.atom_count());
      CHECK(b.algebra.s == identity_subordination(b.algebra.algebra));
      std::vector<std::uint64_t> gens;
      for (int atom = 0; atom < b.algebra.algebra.atom_count(); ++atom)
        gens.push_back(
            l.generator(b.element_to_frame[std::uint64_t{1} << atom]));
      std::sort(gens.begin(), gens.end());
      std::vector<std::uint64_t> expect = m.atom_generators;
      std::sort(expect.begin(), expect.end());
      CHECK(gens == expect);
    }
  }
}

TEST_CASE("two-stage completion of a one-atom carrier") {
  Algebra a = Algebra::with_size(1, "u");
  MacneilleResult m = l_s(s5_from_relation(identity_relation(a)));
  CHECK(m.completion.algebra.atom_count() == 2);
  CHECK(m.completion.algebra.atom_name(0) == "[{}]");
  CHECK(m.completion.algebra.atom_name(1) == "[{u0}]");
  CHECK(is_devries(m.completion));
  CHECK(m.completion.s == identity_subordination(m.completion.algebra));
  for (std::uint64_t v = 0; v < 4; ++v) CHECK(m.embed[v] == v);

  Subordination id2 = l_s_morphism(
      identity_subordination(a), s5_from_relation(identity_relation(a)),
      s5_from_relation(identity_relation(a)));
  CHECK(id2 == identity_subordination(m.completion.algebra));

  Algebra big = Algebra::with_size(3, "p");
  CHECK_THROWS_AS(l_s(s5_from_relation(identity_relation(big))), CapExceeded);
}

TEST_CASE("ideal frame of the lifted construction counts every element") {
  Algebra a = Algebra::with_size(1, "u");
  S5Algebra dv = s5_from_relation(identity_relation(a));
  FiniteFrame two = si_frame(dv);
  REQUIRE(two.size() == 2);
  FiniteFrame viaframe = j_p(two);
  FiniteFrame direct = j_p(dv);
  CHECK(viaframe.size() == 4);
  CHECK(viaframe.ideals() == direct.ideals());

  Algebra b = Algebra::with_size(2, "p");
  CHECK(j_p(s5_from_relation(identity_relation(b))).size() == 16);
}
