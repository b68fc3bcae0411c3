#include "dualvik/duality.hpp"

#include <algorithm>
#include <bit>
#include <utility>

#include "dualvik/errors.hpp"
#include "dualvik/kalg.hpp"
#include "dualvik/klift.hpp"
#include "dualvik/rng.hpp"

namespace dualvik {

Subordination clop_mor(const Relation& r) {
  return Subordination::from_relation(r);
}

Relation uf_mor(const Subordination& s) { return to_relation(s); }

Relation q_mor(const Relation& r, const Relation& e1, const Relation& e2) {
  if (!(e1.source() == r.source()) || !(e2.source() == r.target())) {
    throw ValidationError("equivalences do not live on the relation's endpoints");
  }
  if (!is_equivalence(e1) || !is_equivalence(e2)) {
    throw ValidationError("quotient needs equivalence relations");
  }
  if (compose(r, e1) != r || compose(e2, r) != r) {
    throw ValidationError("relation is not compatible with the equivalences");
  }
  const QuotientResult q1 = quotient(e1);
  const QuotientResult q2 = quotient(e2);
  return compose(q2.projection, compose(r, dagger(q1.projection)));
}

CoveredSpace gleason_finite(const Algebra& x) {
  return CoveredSpace{x, identity_relation(x)};
}

Relation gleason_mor(const Relation& r) { return r; }

Subordination d_mor(const Relation& r) {
  return Subordination::from_relation(r);
}

std::string square_name(Square s) {
  switch (s) {
    case Square::vr_box: return "VR-box";
    case Square::vr_diamond: return "VR-diamond";
    case Square::vr_em: return "VR-em";
    case Square::ks_dagger: return "KS-dagger";
    case Square::vr_dagger: return "VR-dagger";
    case Square::stone_e: return "StoneE";
    case Square::macneille: return "MacNeille";
    case Square::dev: return "DeV";
    case Square::frame: return "Frame";
  }
  throw ValidationError("unknown square");
}

Square square_from_name(std::string_view name) {
  for (Square s : all_squares()) {
    if (square_name(s) == name) return s;
  }
  throw ValidationError("unknown square name: " + std::string(name));
}

std::vector<Square> all_squares() {
  return {Square::vr_box,    Square::vr_diamond, Square::vr_em,
          Square::ks_dagger, Square::vr_dagger,  Square::stone_e,
          Square::macneille, Square::dev,        Square::frame};
}

namespace {

std::uint64_t full_of(int bits) {
  return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

Relation random_relation(const Algebra& x, const Algebra& y,
                         RandomSource& rng) {
  Relation r(x, y);
  for (int i = 0; i < x.atom_count(); ++i) {
    for (int j = 0; j < y.atom_count(); ++j) {
      if (rng.coin()) r.add(i, j);
    }
  }
  return r;
}

Relation random_equivalence(const Algebra& x, RandomSource& rng) {
  const int n = x.atom_count();
  std::vector<int> label(static_cast<std::size_t>(n));
  for (auto& l : label) l = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
  Relation e(x, x);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (label[static_cast<std::size_t>(i)] == label[static_cast<std::size_t>(j)]) e.add(i, j);
    }
  }
  return e;
}

std::vector<Relation> all_relations(const Algebra& x, const Algebra& y) {
  const int cells = x.atom_count() * y.atom_count();
  if (cells > 16) {
    throw CapExceeded("exhaustive relation family supports at most 16 matrix "
                      "cells, got " + std::to_string(cells));
  }
  std::vector<Relation> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << cells); ++m) {
    Relation r(x, y);
    int bit = 0;
    for (int i = 0; i < x.atom_count(); ++i) {
      for (int j = 0; j < y.atom_count(); ++j, ++bit) {
        if (m >> bit & 1) r.add(i, j);
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<Relation> equivalences_on(const Algebra& x) {
  std::vector<Relation> out;
  for (const Relation& r : all_relations(x, x)) {
    if (is_equivalence(r)) out.push_back(r);
  }
  return out;
}

// Membership matrix of a subordination over its full element spaces. Row and
// column indices are element masks.
BitMatrix element_matrix(const Subordination& s) {
  const int m = s.source().atom_count();
  const int n = s.target().atom_count();
  if (m > 10 || n > 10) {
    throw CapExceeded("membership matrices supported up to 10 atoms per side");
  }
  BitMatrix out(std::size_t{1} << m, std::size_t{1} << n);
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << m); ++x) {
    for (std::uint64_t y = 0; y < (std::uint64_t{1} << n); ++y) {
      if (s.holds_masks(x, y)) out.set(x, y);
    }
  }
  return out;
}

// Modal-side converse on membership matrices: (y, x) holds iff the original
// relates the complements (¬x, ¬y).
BitMatrix dagger_matrix(const BitMatrix& m) {
  BitMatrix out(m.cols(), m.rows());
  const std::size_t rfull = m.rows() - 1, cfull = m.cols() - 1;
  for (std::size_t y = 0; y < m.cols(); ++y) {
    for (std::size_t x = 0; x < m.rows(); ++x) {
      if (m.get(rfull ^ x, cfull ^ y)) out.set(y, x);
    }
  }
  return out;
}

std::string first_mismatch(const BitMatrix& a, const BitMatrix& b) {
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      if (a.get(r, c) != b.get(r, c)) {
        return "differs at row " + std::to_string(r) + " col " +
               std::to_string(c);
      }
    }
  }
  return "";
}

DnfClause random_clause(int n, RandomSource& rng) {
  DnfClause c{rng.subset(n), {}};
  const int want = static_cast<int>(rng.below(3));
  for (int i = 0; i < want; ++i) {
    const std::uint64_t d = rng.subset(n) & c.box;
    if (d) c.diamonds.push_back(d);
  }
  std::sort(c.diamonds.begin(), c.diamonds.end());
  c.diamonds.erase(std::unique(c.diamonds.begin(), c.diamonds.end()),
                   c.diamonds.end());
  std::vector<std::uint64_t> kept;
  for (std::uint64_t d : c.diamonds) {
    bool dominated = false;
    for (std::uint64_t o : c.diamonds) {
      if (o != d && (o & ~d) == 0) dominated = true;
    }
    if (!dominated) kept.push_back(d);
  }
  c.diamonds = std::move(kept);
  return c;
}

CnfConjunct random_conjunct(int n, RandomSource& rng) {
  const std::uint64_t full = full_of(n);
  CnfConjunct c{rng.subset(n), {}};
  const int want = static_cast<int>(rng.below(3));
  for (int i = 0; i < want; ++i) {
    const std::uint64_t z = rng.subset(n) | c.diamond;
    if (z != full) c.boxes.push_back(z);
  }
  std::sort(c.boxes.begin(), c.boxes.end());
  c.boxes.erase(std::unique(c.boxes.begin(), c.boxes.end()), c.boxes.end());
  std::vector<std::uint64_t> kept;
  for (std::uint64_t z : c.boxes) {
    bool dominated = false;
    for (std::uint64_t o : c.boxes) {
      if (o != z && (z & ~o) == 0) dominated = true;
    }
    if (!dominated) kept.push_back(z);
  }
  c.boxes = std::move(kept);
  return c;
}

// The single-clause/single-conjunct membership criteria, verified pairwise
// against the direct Vietoris-side computation: for normalized data the pair
// belongs to the lifted subordination iff some conjunct box dominates the
// clause box (box side), some clause diamond sits below the conjunct diamond
// (diamond side), or either (both-sided lift).
std::string criterion_pairs_check(const Subordination& direct,
                                  const LiftedSubordination& ls,
                                  const Algebra& x1, const Algebra& x2,
                                  RandomSource& rng) {
  std::vector<std::pair<DnfClause, CnfConjunct>> pairs;
  const NfTables& t1 = nf_tables(x1.atom_count());
  const NfTables& t2 = nf_tables(x2.atom_count());
  for (const DnfClause& c : t1.clause_pool) {
    for (const CnfConjunct& j : t2.conjunct_pool) {
      pairs.emplace_back(c, j);
    }
  }
  for (int i = 0; i < 16; ++i) {
    pairs.emplace_back(random_clause(x1.atom_count(), rng),
                       random_conjunct(x2.atom_count(), rng));
  }
  for (const auto& [c, j] : pairs) {
    const std::uint64_t cs = eval_semantic(Dnf{x1, {c}}).low64();
    const std::uint64_t js = eval_semantic(Cnf{x2, {j}}).low64();
    const bool want = direct.holds_masks(cs, js);
    const bool got = ls.pair_holds(c, j);
    if (want != got) {
      std::string d;
      for (std::uint64_t b : c.diamonds) d += " " + std::to_string(b);
      std::string z;
      for (std::uint64_t b : j.boxes) z += " " + std::to_string(b);
      return "clause/conjunct criterion disagrees with the point-level lift "
             "at box=" + std::to_string(c.box) + " diamonds=[" + d +
             " ] vs diamond=" + std::to_string(j.diamond) + " boxes=[" + z +
             " ]: direct=" + (want ? "1" : "0");
    }
  }
  return "";
}

Relation lift_rel(const Relation& r, Flavor f, int cap) {
  switch (f) {
    case Flavor::box: return lift_box(r, cap);
    case Flavor::diamond: return lift_diamond(r, cap);
    case Flavor::em: return lift_em(r, cap);
  }
  throw ValidationError("unknown flavor");
}

SquareReport vr_instance(Square sq, const Relation& r, const RunConfig& config,
                         RandomSource& rng) {
  const Flavor f = sq == Square::vr_box     ? Flavor::box
                   : sq == Square::vr_diamond ? Flavor::diamond
                                              : Flavor::em;
  const Algebra& x = r.source();
  const Algebra& y = r.target();
  SquareReport rep{sq,
                   "|X1|=" + std::to_string(x.atom_count()) +
                       " |X2|=" + std::to_string(y.atom_count()) +
                       " R=" + r.matrix().to_hex(),
                   "", "", true, ""};
  const Subordination base = clop_mor(r);
  const Subordination left = clop_mor(lift_rel(r, f, config.caps.vietoris));
  const LiftedSubordination ls = lift_subord(base, f);
  const BitMatrix lm = element_matrix(left);
  const BitMatrix rm = materialize_matrix(ls, config.caps.k_matrix);
  rep.left = lm.to_hex();
  rep.right = rm.to_hex();
  if (lm != rm) {
    rep.pass = false;
    rep.witness = first_mismatch(lm, rm);
    return rep;
  }
  const std::string w = criterion_pairs_check(left, ls, x, y, rng);
  if (!w.empty()) {
    rep.pass = false;
    rep.witness = w;
    return rep;
  }
  if (sq == Square::vr_em && x == y && x.atom_count() == 2 && r.holds(0, 1) &&
      r.holds(1, 0) && !r.holds(0, 0) && !r.holds(1, 1)) {
    // The semi-functoriality counterexample: with the identity alongside this
    // relation, the both-sided lift of the meet must lack the pair of full
    // subsets that the meet of the lifts contains.
    const Relation id = identity_relation(x);
    const bool lifted_meet =
        lift_em(rel_intersect(id, r), config.caps.vietoris).holds(3, 3);
    const bool met_lifts =
        rel_intersect(lift_em(id, config.caps.vietoris),
                      lift_em(r, config.caps.vietoris))
            .holds(3, 3);
    if (lifted_meet || !met_lifts) {
      rep.pass = false;
      rep.witness = "meet counterexample did not reproduce: lift of meet " +
                    std::string(lifted_meet ? "contains" : "lacks") +
                    " (X,X), meet of lifts " +
                    std::string(met_lifts ? "contains" : "lacks") + " (X,X)";
    }
  }
  return rep;
}

SquareReport ks_dagger_instance(const Relation& dual, const RunConfig& config) {
  const Subordination s = Subordination::from_relation(dual);
  SquareReport rep{Square::ks_dagger,
                   "|A1|=" + std::to_string(dual.source().atom_count()) +
                       " |A2|=" + std::to_string(dual.target().atom_count()) +
                       " dual=" + dual.matrix().to_hex(),
                   "", "", true, ""};
  const Subordination sd = dagger(s);
  const auto mat = [&](const Subordination& t, Flavor f) {
    return materialize_matrix(lift_subord(t, f), config.caps.k_matrix);
  };
  const struct {
    const char* name;
    BitMatrix a, b;
  } checks[] = {
      {"box lift of converse vs converse of diamond lift",
       mat(sd, Flavor::box), dagger_matrix(mat(s, Flavor::diamond))},
      {"diamond lift of converse vs converse of box lift",
       mat(sd, Flavor::diamond), dagger_matrix(mat(s, Flavor::box))},
      {"both-sided lift of converse vs converse of both-sided lift",
       mat(sd, Flavor::em), dagger_matrix(mat(s, Flavor::em))},
  };
  rep.left = checks[0].a.to_hex();
  rep.right = checks[0].b.to_hex();
  for (const auto& c : checks) {
    if (c.a != c.b) {
      rep.pass = false;
      rep.left = c.a.to_hex();
      rep.right = c.b.to_hex();
      rep.witness = std::string(c.name) + ": " + first_mismatch(c.a, c.b);
      return rep;
    }
  }
  return rep;
}

SquareReport vr_dagger_instance(const Relation& r, const RunConfig& config) {
  SquareReport rep{Square::vr_dagger,
                   "|X1|=" + std::to_string(r.source().atom_count()) +
                       " |X2|=" + std::to_string(r.target().atom_count()) +
                       " R=" + r.matrix().to_hex(),
                   "", "", true, ""};
  const int cap = config.caps.vietoris;
  const Relation rd = dagger(r);
  const struct {
    const char* name;
    Relation a, b;
  } checks[] = {
      {"box lift of converse vs converse of diamond lift", lift_box(rd, cap),
       dagger(lift_diamond(r, cap))},
      {"diamond lift of converse vs converse of box lift",
       lift_diamond(rd, cap), dagger(lift_box(r, cap))},
      {"both-sided lift of converse vs converse of both-sided lift",
       lift_em(rd, cap), dagger(lift_em(r, cap))},
  };
  rep.left = checks[0].a.matrix().to_hex();
  rep.right = checks[0].b.matrix().to_hex();
  for (const auto& c : checks) {
    if (c.a.matrix() != c.b.matrix()) {
      rep.pass = false;
      rep.left = c.a.matrix().to_hex();
      rep.right = c.b.matrix().to_hex();
      rep.witness =
          std::string(c.name) + ": " +
          first_mismatch(c.a.matrix(), c.b.matrix());
      return rep;
    }
  }
  // Naturality of the duality itself under converses.
  const Subordination sl = clop_mor(rd);
  const Subordination sr = dagger(clop_mor(r));
  if (sl != sr) {
    rep.pass = false;
    rep.witness = "dual of converse differs from converse of dual: " +
                  first_mismatch(sl.dual().matrix(), sr.dual().matrix());
  }
  return rep;
}

SquareReport stone_e_instance(const Relation& e1, const Relation& e2,
                              const Relation& r, const RunConfig& config) {
  SquareReport rep{Square::stone_e,
                   "|X1|=" + std::to_string(r.source().atom_count()) +
                       " |X2|=" + std::to_string(r.target().atom_count()) +
                       " E1=" + e1.matrix().to_hex() +
                       " E2=" + e2.matrix().to_hex() +
                       " R=" + r.matrix().to_hex(),
                   "", "", true, ""};
  const int cap = config.caps.vietoris;
  const Relation ve1 = lift_em(e1, cap);
  const Relation ve2 = lift_em(e2, cap);
  if (!is_equivalence(ve1) || !is_equivalence(ve2)) {
    rep.pass = false;
    rep.witness = "both-sided lift of an equivalence is not an equivalence";
    return rep;
  }
  const Relation a = q_mor(lift_em(r, cap), ve1, ve2);
  const Relation b = q_mor(r, e1, e2);
  const Relation bl = lift_em(b, cap);
  const QuotientResult vq1 = quotient(ve1);
  const QuotientResult vq2 = quotient(ve2);
  const QuotientResult q1 = quotient(e1);
  const QuotientResult q2 = quotient(e2);
  // The subset-image map must identify lift classes with subsets of classes.
  const auto pi = [](const QuotientResult& q, std::uint64_t subset) {
    std::uint64_t out = 0;
    for (std::uint64_t m = subset; m; m &= m - 1) {
      out |= std::uint64_t{1}
             << q.class_of[static_cast<std::size_t>(std::countr_zero(m))];
    }
    return out;
  };
  const int m1 = 1 << e1.source().atom_count();
  const int m2 = 1 << e2.source().atom_count();
  if (vq1.classes.atom_count() != 1 << q1.classes.atom_count() ||
      vq2.classes.atom_count() != 1 << q2.classes.atom_count()) {
    rep.pass = false;
    rep.witness = "lift quotient size differs from the subset space of classes";
    return rep;
  }
  for (int fa = 0; fa < m1; ++fa) {
    for (int fb = 0; fb < m1; ++fb) {
      const bool same_class = vq1.class_of[static_cast<std::size_t>(fa)] ==
                              vq1.class_of[static_cast<std::size_t>(fb)];
      const bool same_image = pi(q1, static_cast<std::uint64_t>(fa)) ==
                              pi(q1, static_cast<std::uint64_t>(fb));
      if (same_class != same_image) {
        rep.pass = false;
        rep.witness = "subsets " + std::to_string(fa) + " and " +
                      std::to_string(fb) +
                      " are identified on one side only";
        return rep;
      }
    }
  }
  BitMatrix lm(static_cast<std::size_t>(vq1.classes.atom_count()),
               static_cast<std::size_t>(vq2.classes.atom_count()));
  BitMatrix rm(lm.rows(), lm.cols());
  for (int fa = 0; fa < m1; ++fa) {
    for (int gb = 0; gb < m2; ++gb) {
      const int ca = vq1.class_of[static_cast<std::size_t>(fa)];
      const int cb = vq2.class_of[static_cast<std::size_t>(gb)];
      if (a.holds(ca, cb)) lm.set(static_cast<std::size_t>(ca), static_cast<std::size_t>(cb));
      if (bl.holds(static_cast<int>(pi(q1, static_cast<std::uint64_t>(fa))),
                   static_cast<int>(pi(q2, static_cast<std::uint64_t>(gb))))) {
        rm.set(static_cast<std::size_t>(ca), static_cast<std::size_t>(cb));
      }
    }
  }
  rep.left = lm.to_hex();
  rep.right = rm.to_hex();
  if (lm != rm) {
    rep.pass = false;
    rep.witness = "quotient of the lift differs from the lift of the "
                  "quotient: " + first_mismatch(lm, rm);
  }
  return rep;
}

SquareReport macneille_instance(const Relation& e1, const Relation& e2,
                                const Relation& r, const RunConfig& config) {
  SquareReport rep{Square::macneille,
                   "|X1|=" + std::to_string(r.source().atom_count()) +
                       " |X2|=" + std::to_string(r.target().atom_count()) +
                       " E1=" + e1.matrix().to_hex() +
                       " E2=" + e2.matrix().to_hex() +
                       " T-dual=" + r.matrix().to_hex(),
                   "", "", true, ""};
  const S5Algebra o1{e1.source(), clop_mor(e1)};
  const S5Algebra o2{e2.source(), clop_mor(e2)};
  const Subordination t = clop_mor(r);
  const auto k_side = [&](const S5Algebra& o) {
    const Subordination ks = materialize_subordination(
        lift_subord(o.s, Flavor::em), config.caps.k_subordination);
    return S5Algebra{ks.source(), ks};
  };
  const S5Algebra k1 = k_side(o1);
  const S5Algebra k2 = k_side(o2);
  const Subordination kt = materialize_subordination(
      lift_subord(t, Flavor::em), config.caps.k_subordination);
  const Subordination p1 = macneille_morphism(kt, k1, k2);
  const MacneilleResult m1 = macneille(o1);
  const MacneilleResult m2 = macneille(o2);
  const Subordination mt = macneille_morphism(t, o1, o2);
  const Subordination p2 = l_s_morphism(mt, m1.completion, m2.completion);
  const MacneilleResult mk1 = macneille(k1);
  const MacneilleResult mk2 = macneille(k2);
  const QuotientResult q1 = quotient(e1);
  const QuotientResult q2 = quotient(e2);
  const auto iota = [](const MacneilleResult& mk, const QuotientResult& q) {
    std::vector<int> out;
    for (std::uint64_t g : mk.atom_generators) {
      const std::uint64_t rep_subset =
          static_cast<std::uint64_t>(std::countr_zero(g));
      std::uint64_t image = 0;
      for (std::uint64_t m = rep_subset; m; m &= m - 1) {
        image |= std::uint64_t{1}
                 << q.class_of[static_cast<std::size_t>(std::countr_zero(m))];
      }
      out.push_back(static_cast<int>(image));
    }
    return out;
  };
  const std::vector<int> i1 = iota(mk1, q1);
  const std::vector<int> i2 = iota(mk2, q2);
  if (p2.source().atom_count() != 1 << q1.classes.atom_count() ||
      p2.target().atom_count() != 1 << q2.classes.atom_count() ||
      static_cast<int>(i1.size()) != p2.source().atom_count() ||
      static_cast<int>(i2.size()) != p2.target().atom_count()) {
    rep.pass = false;
    rep.witness = "completion sizes do not line up across the two paths";
    return rep;
  }
  for (std::size_t a = 0; a < i1.size(); ++a) {
    for (std::size_t b = 0; b < i1.size(); ++b) {
      if (a != b && i1[a] == i1[b]) {
        rep.pass = false;
        rep.witness = "atom translation is not injective";
        return rep;
      }
    }
  }
  const BitMatrix lm = p1.dual().matrix();
  BitMatrix rm(lm.rows(), lm.cols());
  for (std::size_t a = 0; a < i1.size(); ++a) {
    for (std::size_t b = 0; b < i2.size(); ++b) {
      if (p2.dual().holds(i1[a], i2[b])) rm.set(a, b);
    }
  }
  rep.left = lm.to_hex();
  rep.right = rm.to_hex();
  if (lm != rm) {
    rep.pass = false;
    rep.witness = "completion of the lifted morphism differs from the lifted "
                  "completion: " + first_mismatch(lm, rm);
  }
  return rep;
}

SquareReport dev_instance(const Relation& r, const RunConfig& config) {
  SquareReport rep{Square::dev,
                   "|X1|=" + std::to_string(r.source().atom_count()) +
                       " |X2|=" + std::to_string(r.target().atom_count()) +
                       " R=" + r.matrix().to_hex(),
                   "", "", true, ""};
  const Relation left = lift_em(r, config.caps.vietoris);
  const S5Algebra d1{r.source(), identity_subordination(r.source())};
  const S5Algebra d2{r.target(), identity_subordination(r.target())};
  const Subordination right = l_s_morphism(d_mor(r), d1, d2);
  rep.left = left.matrix().to_hex();
  rep.right = right.dual().matrix().to_hex();
  if (right.source().atom_count() != 1 << r.source().atom_count() ||
      right.target().atom_count() != 1 << r.target().atom_count()) {
    rep.pass = false;
    rep.witness = "completion atoms do not match the subset space";
    return rep;
  }
  if (left.matrix() != right.dual().matrix()) {
    rep.pass = false;
    rep.witness = "regular-open image of the lift differs from the completed "
                  "modal path: " + first_mismatch(left.matrix(), right.dual().matrix());
  }
  return rep;
}

SquareReport frame_instance(const Relation& r, const RunConfig& config) {
  SquareReport rep{Square::frame,
                   "|X1|=" + std::to_string(r.source().atom_count()) +
                       " |X2|=" + std::to_string(r.target().atom_count()) +
                       " R=" + r.matrix().to_hex(),
                   "", "", true, ""};
  const int m1 = 1 << r.source().atom_count();  // Vietoris points on the left
  const int m2 = 1 << r.target().atom_count();
  const std::uint64_t full1 = full_of(m1);
  const std::uint64_t full2 = full_of(m2);
  const Relation vr = lift_em(r, config.caps.vietoris);
  // Left path: open-set action U -> -V^{-1}[-U] of the lifted relation.
  std::vector<std::uint64_t> left_table(std::size_t{1} << m2);
  for (std::uint64_t u = 0; u <= full2; ++u) {
    left_table[static_cast<std::size_t>(u)] =
        full1 & ~preimage64(vr, full2 & ~u);
  }
  const S5Algebra d1{r.source(), identity_subordination(r.source())};
  const S5Algebra d2{r.target(), identity_subordination(r.target())};
  const FiniteFrame f1 = j_p(d1);
  const FiniteFrame f2 = j_p(d2);
  if (f1.size() != 1 << m1 || f2.size() != 1 << m2) {
    rep.pass = false;
    rep.witness = "ideal frame is not the full open-set lattice";
    return rep;
  }
  // Object part: the frame built from the frame-presented input agrees.
  const FiniteFrame g1 = j_p(si_frame(d1));
  const FiniteFrame g2 = j_p(si_frame(d2));
  if (!(g1.base() == f1.base()) || g1.ideals() != f1.ideals() ||
      !(g2.base() == f2.base()) || g2.ideals() != f2.ideals()) {
    rep.pass = false;
    rep.witness = "frame-presented and algebra-presented objects disagree";
    return rep;
  }
  const Subordination kt = materialize_subordination(
      lift_subord(d_mor(r), Flavor::em), config.caps.k_subordination);
  std::string left_str, right_str;
  for (int j = 0; j < f2.size(); ++j) {
    const std::uint64_t g = f2.generator(j);
    IdealMask pre = 0;
    for (std::uint64_t a = 0; a <= full1; ++a) {
      bool related = false;
      for (IdealMask m = f2.ideals()[static_cast<std::size_t>(j)];
           m && !related; m &= m - 1) {
        const std::uint64_t b =
            static_cast<std::uint64_t>(std::countr_zero(m));
        related = kt.holds_masks(a, b);
      }
      if (related) pre |= IdealMask{1} << a;
    }
    const int i1 = f1.index_of(pre);
    if (i1 < 0) {
      rep.pass = false;
      rep.witness = "preimage of an ideal is not an ideal of the source frame";
      return rep;
    }
    const std::uint64_t via_frames = f1.generator(i1);
    const std::uint64_t via_points = left_table[static_cast<std::size_t>(g)];
    if (j) {
      left_str += ".";
      right_str += ".";
    }
    left_str += std::to_string(via_points);
    right_str += std::to_string(via_frames);
    if (via_frames != via_points) {
      rep.pass = false;
      rep.left = left_str;
      rep.right = right_str;
      rep.witness = "open-set action differs from the ideal transport at "
                    "generator " + std::to_string(g);
      return rep;
    }
  }
  rep.left = left_str;
  rep.right = right_str;
  return rep;
}

}  // namespace

std::vector<SquareReport> verify_square(Square s, const RunConfig& config) {
  std::vector<SquareReport> out;
  RandomSource rng(config.seed);
  const int ex = config.caps.exhaustive;
  const int rnd = config.caps.randomized;
  switch (s) {
    case Square::vr_box:
    case Square::vr_diamond:
    case Square::vr_em: {
      const Algebra x = Algebra::with_size(ex, "x");
      for (const Relation& r : all_relations(x, x)) {
        out.push_back(vr_instance(s, r, config, rng));
      }
      const Algebra xr = Algebra::with_size(rnd, "x");
      for (int i = 0; i < config.samples; ++i) {
        out.push_back(vr_instance(s, random_relation(xr, xr, rng), config, rng));
      }
      break;
    }
    case Square::ks_dagger: {
      const Algebra a = Algebra::with_size(ex, "p");
      for (const Relation& r : all_relations(a, a)) {
        out.push_back(ks_dagger_instance(r, config));
      }
      const Algebra ar = Algebra::with_size(rnd, "p");
      for (int i = 0; i < config.samples; ++i) {
        out.push_back(ks_dagger_instance(random_relation(ar, ar, rng), config));
      }
      break;
    }
    case Square::vr_dagger: {
      const Algebra x = Algebra::with_size(ex, "x");
      for (const Relation& r : all_relations(x, x)) {
        out.push_back(vr_dagger_instance(r, config));
      }
      const Algebra xr = Algebra::with_size(rnd, "x");
      for (int i = 0; i < config.samples; ++i) {
        out.push_back(vr_dagger_instance(random_relation(xr, xr, rng), config));
      }
      break;
    }
    case Square::stone_e: {
      const Algebra x = Algebra::with_size(ex, "x");
      const std::vector<Relation> eqs = equivalences_on(x);
      for (const Relation& e1 : eqs) {
        for (const Relation& e2 : eqs) {
          for (const Relation& r : all_relations(x, x)) {
            if (compose(r, e1) != r || compose(e2, r) != r) continue;
            out.push_back(stone_e_instance(e1, e2, r, config));
          }
        }
      }
      const Algebra xr = Algebra::with_size(rnd, "x");
      for (int i = 0; i < config.samples; ++i) {
        const Relation e1 = random_equivalence(xr, rng);
        const Relation e2 = random_equivalence(xr, rng);
        const Relation r = compose(e2, compose(random_relation(xr, xr, rng), e1));
        out.push_back(stone_e_instance(e1, e2, r, config));
      }
      break;
    }
    case Square::macneille: {
      const int n = std::min(ex, config.caps.k_subordination);
      const Algebra x = Algebra::with_size(n, "p");
      const std::vector<Relation> eqs = equivalences_on(x);
      for (const Relation& e1 : eqs) {
        for (const Relation& e2 : eqs) {
          for (const Relation& r : all_relations(x, x)) {
            if (compose(r, e1) != r || compose(e2, r) != r) continue;
            out.push_back(macneille_instance(e1, e2, r, config));
          }
        }
      }
      for (int i = 0; i < config.samples; ++i) {
        const Relation e1 = random_equivalence(x, rng);
        const Relation e2 = random_equivalence(x, rng);
        const Relation r = compose(e2, compose(random_relation(x, x, rng), e1));
        out.push_back(macneille_instance(e1, e2, r, config));
      }
      break;
    }
    case Square::dev:
    case Square::frame: {
      const int n = std::min(ex, config.caps.k_subordination);
      for (int a = 1; a <= n; ++a) {
        for (int b = 1; b <= n; ++b) {
          const Algebra x1 = Algebra::with_size(a, "x");
          const Algebra x2 = Algebra::with_size(b, "y");
          for (const Relation& r : all_relations(x1, x2)) {
            out.push_back(s == Square::dev ? dev_instance(r, config)
                                           : frame_instance(r, config));
          }
        }
      }
      const Algebra x1 = Algebra::with_size(n, "x");
      const Algebra x2 = Algebra::with_size(n, "y");
      for (int i = 0; i < config.samples; ++i) {
        const Relation r = random_relation(x1, x2, rng);
        out.push_back(s == Square::dev ? dev_instance(r, config)
                                       : frame_instance(r, config));
      }
      break;
    }
  }
  return out;
}

}  // namespace dualvik
