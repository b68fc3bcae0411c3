// Acceptance gate for the workbench: ten checks, one line each, nonzero
// exit when any fails or overruns its time budget. Every tolerance and
// sample count is pinned here so two runs of this binary are comparable.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "dualvik/bits.hpp"
#include "dualvik/duality.hpp"
#include "dualvik/kalg.hpp"
#include "dualvik/klift.hpp"
#include "dualvik/rel.hpp"
#include "dualvik/rng.hpp"
#include "dualvik/s5mac.hpp"
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

BitMatrix bool_product(const BitMatrix& a, const BitMatrix& b) {
  BitMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a.get(i, j))
        for (std::size_t k = 0; k < b.cols(); ++k)
          if (b.get(j, k)) out.set(i, k);
  return out;
}

bool dnf_shape_ok(const Dnf& d) {
  std::uint64_t full = d.base.full_mask();
  for (std::size_t i = 0; i < d.clauses.size(); ++i) {
    if (i && !(d.clauses[i - 1] < d.clauses[i])) return false;
    const DnfClause& c = d.clauses[i];
    if (c.box & ~full) return false;
    for (std::size_t j = 0; j < c.diamonds.size(); ++j) {
      if (j && !(c.diamonds[j - 1] < c.diamonds[j])) return false;
      if (c.diamonds[j] == 0 || (c.diamonds[j] & ~c.box)) return false;
    }
  }
  return true;
}

bool cnf_shape_ok(const Cnf& c) {
  std::uint64_t full = c.base.full_mask();
  for (std::size_t i = 0; i < c.conjuncts.size(); ++i) {
    if (i && !(c.conjuncts[i - 1] < c.conjuncts[i])) return false;
    const CnfConjunct& j = c.conjuncts[i];
    if (j.diamond & ~full) return false;
    for (std::size_t k = 0; k < j.boxes.size(); ++k) {
      if (k && !(j.boxes[k - 1] < j.boxes[k])) return false;
      if (j.boxes[k] == full || (j.diamond & ~j.boxes[k])) return false;
    }
  }
  return true;
}

// 1. The normal-form order decision agrees with semantic inclusion on 1000
//    seeded random term pairs over one- to three-atom bases.
bool criterion_order_oracle(std::string& detail) {
  RandomSource rng(101);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    Algebra base = Algebra::with_size(1 + i % 3, "p");
    TermPtr x = random_term(base, 1 + static_cast<int>(rng.below(4)), rng);
    TermPtr y = random_term(base, 1 + static_cast<int>(rng.below(4)), rng);
    bool fast = term_leq(x, y);
    bool slow = eval_semantic(x).subset_of(eval_semantic(y));
    if (fast != slow) {
      detail = "mismatch on pair " + std::to_string(i) + ": " +
               render_term(x) + " vs " + render_term(y);
      return false;
    }
    ++checked;
  }
  detail = std::to_string(checked) + "/1000 pairs agree";
  return true;
}

// 2. Both normal forms keep their structural side conditions and preserve
//    the semantic value exactly, on 1000 seeded random terms.
bool criterion_normal_forms(std::string& detail) {
  RandomSource rng(102);
  for (int i = 0; i < 1000; ++i) {
    Algebra base = Algebra::with_size(1 + i % 3, "p");
    TermPtr t = random_term(base, 1 + static_cast<int>(rng.below(4)), rng);
    Dnf d = to_dnf(t);
    Cnf c = to_cnf(t);
    SemanticValue v = eval_semantic(t);
    if (!dnf_shape_ok(d) || !cnf_shape_ok(c)) {
      detail = "shape violation on term " + std::to_string(i) + ": " +
               render_term(t);
      return false;
    }
    if (eval_semantic(d) != v || eval_semantic(c) != v) {
      detail = "value drift on term " + std::to_string(i) + ": " +
               render_term(t);
      return false;
    }
  }
  detail = "1000/1000 terms keep shape and value";
  return true;
}

bool run_square(Square s, const RunConfig& cfg, std::string& detail,
                int* instances = nullptr) {
  auto reports = verify_square(s, cfg);
  if (instances) *instances += static_cast<int>(reports.size());
  for (const SquareReport& r : reports)
    if (!r.pass) {
      detail = square_name(s) + " fails at " + r.instance + ": " + r.witness;
      return false;
    }
  return true;
}

// 3. Lifting a relation then dualizing equals dualizing then lifting, for
//    all three flavors: exhaustive on two-point carriers plus 200 seeded
//    random three-point relations, with the per-pair membership criteria
//    cross-checked on every instance.
bool criterion_lift_squares(std::string& detail) {
  RunConfig cfg;
  cfg.seed = 103;
  cfg.samples = 200;
  int n = 0;
  for (Square s : {Square::vr_box, Square::vr_diamond, Square::vr_em})
    if (!run_square(s, cfg, detail, &n)) return false;
  detail = std::to_string(n) + " instances, zero mismatches";
  return true;
}

// 4. Both lift constructions respect composition, and the two-sided ones
//    respect identities, exhaustively at two points / two atoms.
bool criterion_functor_laws(std::string& detail) {
  Algebra x = Algebra::with_size(2, "x");
  if (lift_em(identity_relation(x)) !=
      identity_relation(vietoris_algebra(x))) {
    detail = "two-sided lift of the identity relation is not the identity";
    return false;
  }
  std::vector<Relation> rels;
  for (std::uint64_t m = 0; m < 16; ++m)
    rels.push_back(relation_from_mask(x, x, m));
  for (const Relation& r1 : rels)
    for (const Relation& r2 : rels) {
      Relation c = compose(r2, r1);
      if (lift_box(c) != compose(lift_box(r2), lift_box(r1)) ||
          lift_diamond(c) != compose(lift_diamond(r2), lift_diamond(r1)) ||
          lift_em(c) != compose(lift_em(r2), lift_em(r1))) {
        detail = "relation lift breaks composition";
        return false;
      }
    }

  Algebra a = Algebra::with_size(2, "p");
  std::vector<Subordination> subs;
  for (std::uint64_t m = 0; m < 16; ++m)
    subs.push_back(
        Subordination::from_relation(relation_from_mask(a, a, m)));
  const NfTables& t = nf_tables(2);
  BitMatrix id_mat =
      materialize_matrix(lift_subord(identity_subordination(a), Flavor::em));
  for (std::size_t i = 0; i < 16; ++i)
    for (std::size_t j = 0; j < 16; ++j)
      if (id_mat.get(i, j) != nf_leq(t.dnfs[i], t.cnfs[j])) {
        detail = "algebra lift of the order is not the term order";
        return false;
      }
  std::vector<std::vector<BitMatrix>> mats(3);
  for (int f = 0; f < 3; ++f)
    for (const Subordination& s : subs)
      mats[f].push_back(
          materialize_matrix(lift_subord(s, static_cast<Flavor>(f))));
  for (std::size_t i = 0; i < subs.size(); ++i)
    for (std::size_t j = 0; j < subs.size(); ++j) {
      Subordination c = compose(subs[j], subs[i]);
      for (int f = 0; f < 3; ++f) {
        BitMatrix direct =
            materialize_matrix(lift_subord(c, static_cast<Flavor>(f)));
        if (direct != bool_product(mats[f][i], mats[f][j])) {
          detail = "algebra lift breaks composition (" +
                   flavor_name(static_cast<Flavor>(f)) + ")";
          return false;
        }
      }
    }
  detail = "256 relation pairs and 256 subordination pairs compose";
  return true;
}

// 5. Converses transport through both lifts: each flavor of the lifted
//    converse equals the matching converse of a lifted flavor.
bool criterion_dagger(std::string& detail) {
  RunConfig cfg;
  cfg.seed = 105;
  int n = 0;
  if (!run_square(Square::ks_dagger, cfg, detail, &n)) return false;
  if (!run_square(Square::vr_dagger, cfg, detail, &n)) return false;
  detail = std::to_string(n) + " instances, all identities hold";
  return true;
}

// 6. The two-sided lift does not commute with intersections: the standard
//    two-point counterexample.
bool criterion_counterexample(std::string& detail) {
  Algebra x = Algebra::with_size(2, "x");
  Relation r1 = identity_relation(x);
  Relation r2 = from_pairs(x, x, {{0, 1}, {1, 0}});
  Relation lifted_meet = lift_em(rel_intersect(r1, r2));
  Relation meet_of_lifts = rel_intersect(lift_em(r1), lift_em(r2));
  if (lifted_meet.holds(3, 3)) {
    detail = "lift of the intersection unexpectedly relates X to X";
    return false;
  }
  if (!meet_of_lifts.holds(3, 3)) {
    detail = "intersection of lifts unexpectedly misses (X, X)";
    return false;
  }
  detail = "(X, X) separates the lift of a meet from the meet of lifts";
  return true;
}

// 7. The decomposition formula for joins agrees with the transported join
//    on every pair of subordinations between two-atom algebras, and the
//    hom lattice distributes on 100 seeded random triples.
bool criterion_hom_join(std::string& detail) {
  Algebra a = Algebra::with_size(2, "p");
  std::vector<Subordination> subs;
  for (std::uint64_t m = 0; m < 16; ++m)
    subs.push_back(
        Subordination::from_relation(relation_from_mask(a, a, m)));
  for (const Subordination& s1 : subs)
    for (const Subordination& s2 : subs) {
      if (hom_join(a, a, {s1, s2}) != hom_join_oracle(a, a, {s1, s2})) {
        detail = "join formula disagrees with the transported join";
        return false;
      }
    }
  RandomSource rng(107);
  for (int i = 0; i < 100; ++i) {
    const Subordination& s = subs[rng.below(16)];
    const Subordination& t1 = subs[rng.below(16)];
    const Subordination& t2 = subs[rng.below(16)];
    if (hom_meet(a, a, {s, hom_join(a, a, {t1, t2})}) !=
        hom_join(a, a,
                 {hom_meet(a, a, {s, t1}), hom_meet(a, a, {s, t2})})) {
      detail = "hom lattice fails distributivity on triple " +
               std::to_string(i);
      return false;
    }
  }
  detail = "256 join pairs and 100 distributivity triples agree";
  return true;
}

// 8. Completion behavior over every equivalence on up to three points:
//    ideals are principal over saturated elements and normal, the
//    completion is a power of the class count and passes every axiom, and
//    completing an already-complete input changes nothing.
bool criterion_completions(std::string& detail) {
  int carriers = 0;
  for (int n = 1; n <= 3; ++n) {
    Algebra x = Algebra::with_size(n, "x");
    int cells = n * n;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << cells); ++m) {
      Relation e = relation_from_mask(x, x, m);
      if (!is_equivalence(e)) continue;
      ++carriers;
      S5Algebra s5 = s5_from_relation(e);
      int classes = quotient(e).classes.atom_count();
      auto ideals = s_ideals(s5);
      if (ideals.size() != std::size_t{1} << classes) {
        detail = "ideal count differs from saturated element count";
        return false;
      }
      for (IdealMask ideal : ideals) {
        if (!is_normal_ideal(ideal, s5)) {
          detail = "non-normal ideal at finite scale";
          return false;
        }
        std::uint64_t gen = 0;
        for (int el = 0; el < (1 << n); ++el)
          if (ideal >> el & 1) gen |= static_cast<std::uint64_t>(el);
        if (image64(e, gen) != gen) {
          detail = "ideal generator is not saturated";
          return false;
        }
        IdealMask down = 0;
        for (std::uint64_t el = 0; el <= gen; ++el)
          if ((el & ~gen) == 0) down |= IdealMask{1} << el;
        if (ideal != down) {
          detail = "ideal is not the principal downset of its generator";
          return false;
        }
      }
      MacneilleResult mc = macneille(s5);
      if (mc.completion.algebra.atom_count() != classes ||
          !is_devries(mc.completion)) {
        detail = "completion shape or axioms fail";
        return false;
      }
      if (e == identity_relation(x)) {
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v)
          if (mc.embed[v] != v) {
            detail = "completion moves an already-complete input";
            return false;
          }
      }
    }
  }
  detail = std::to_string(carriers) + " equivalences checked";
  return true;
}

// 9. The one-step dual of a lifted relation equals the completion-of-lift
//    path on every relation over one- and two-point carriers.
bool criterion_completion_square(std::string& detail) {
  RunConfig cfg;
  cfg.seed = 109;
  int n = 0;
  if (!run_square(Square::dev, cfg, detail, &n)) return false;
  detail = std::to_string(n) + " instances, zero mismatches";
  return true;
}

std::string full_report(std::uint64_t seed) {
  RunConfig cfg;
  cfg.seed = seed;
  cfg.samples = 20;
  std::string out;
  for (Square s : all_squares()) {
    int pass = 0;
    auto reports = verify_square(s, cfg);
    for (const SquareReport& r : reports) {
      pass += r.pass;
      out += square_name(s) + " " + r.instance + " " +
             (r.pass ? "PASS" : "FAIL") + " " + r.witness + "\n";
    }
    out += square_name(s) + ": " + std::to_string(pass) + "/" +
           std::to_string(reports.size()) + "\n";
  }
  return out;
}

// 10. Two consecutive full verification runs with the same seed render
//     byte-identical reports.
bool criterion_determinism(std::string& detail) {
  std::string first = full_report(110);
  std::string second = full_report(110);
  if (first != second) {
    detail = "reports differ between runs";
    return false;
  }
  detail = std::to_string(first.size()) + " report bytes identical";
  return true;
}

struct Criterion {
  const char* name;
  bool (*run)(std::string&);
  double budget_seconds;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"order decision vs semantic oracle", criterion_order_oracle, 5.0},
      {"normal-form shape and value", criterion_normal_forms, 5.0},
      {"lift-then-dualize squares", criterion_lift_squares, 30.0},
      {"composition and identity laws", criterion_functor_laws, 30.0},
      {"converse transport", criterion_dagger, 10.0},
      {"meet counterexample", criterion_counterexample, 1.0},
      {"join formula vs transported join", criterion_hom_join, 20.0},
      {"ideals and completions", criterion_completions, 10.0},
      {"completion-of-lift square", criterion_completion_square, 30.0},
      {"byte-identical reruns", criterion_determinism, 30.0},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const Criterion& c = criteria[i];
    std::string detail;
    auto start = std::chrono::steady_clock::now();
    bool ok = c.run(detail);
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (elapsed > c.budget_seconds) {
      ok = false;
      detail += " [exceeded " + std::to_string(c.budget_seconds) + "s budget]";
    }
    failures += !ok;
    std::printf("criterion %2zu %s %6.2fs %s: %s\n", i + 1,
                ok ? "PASS" : "FAIL", elapsed, c.name, detail.c_str());
  }
  if (failures) {
    std::printf("acceptance: %d of %zu criteria fail\n", failures,
                criteria.size());
    return 1;
  }
  std::printf("acceptance: all %zu criteria pass\n", criteria.size());
  return 0;
}
