#include "dualvik/klift.hpp"

#include <algorithm>
#include <bit>

#include "dualvik/rel.hpp"

namespace dualvik {

std::string flavor_name(Flavor f) {
  switch (f) {
    case Flavor::box: return "box";
    case Flavor::diamond: return "diamond";
    case Flavor::em: return "em";
  }
  return "?";
}

bool LiftedSubordination::pair_holds(const DnfClause& i,
                                     const CnfConjunct& j) const {
  if (flavor_ != Flavor::diamond)
    for (std::uint64_t d : j.boxes)
      if (base_.holds_masks(i.box, d)) return true;
  if (flavor_ != Flavor::box)
    for (std::uint64_t b : i.diamonds)
      if (base_.holds_masks(b, j.diamond)) return true;
  return false;
}

bool LiftedSubordination::holds_nf(const Dnf& x, const Cnf& y) const {
  for (const auto& i : x.clauses)
    for (const auto& j : y.conjuncts)
      if (!pair_holds(i, j)) return false;
  return true;
}

bool LiftedSubordination::holds(const TermPtr& x, const TermPtr& y) const {
  require_same_algebra(x->base(), base_.source());
  require_same_algebra(y->base(), base_.target());
  return holds_nf(to_dnf(x), to_cnf(y));
}

std::vector<LiftedSubordination::PairWitness> LiftedSubordination::explain(
    const Dnf& x, const Cnf& y) const {
  std::vector<PairWitness> out;
  for (std::size_t i = 0; i < x.clauses.size(); ++i)
    for (std::size_t j = 0; j < y.conjuncts.size(); ++j) {
      PairWitness w{static_cast<int>(i), static_cast<int>(j), -1, -1};
      if (flavor_ != Flavor::diamond)
        for (std::size_t k = 0; k < y.conjuncts[j].boxes.size(); ++k)
          if (base_.holds_masks(x.clauses[i].box, y.conjuncts[j].boxes[k])) {
            w.box_index = static_cast<int>(k);
            break;
          }
      if (flavor_ != Flavor::box && w.box_index < 0)
        for (std::size_t l = 0; l < x.clauses[i].diamonds.size(); ++l)
          if (base_.holds_masks(x.clauses[i].diamonds[l],
                                y.conjuncts[j].diamond)) {
            w.diamond_index = static_cast<int>(l);
            break;
          }
      if (w.box_index < 0 && w.diamond_index < 0) return {w};
      out.push_back(w);
    }
  return out;
}

LiftedSubordination lift_subord(const Subordination& s, Flavor f) {
  return LiftedSubordination(s, f);
}

BitMatrix materialize_matrix(const LiftedSubordination& ls, int cap_atoms) {
  int na = ls.base().source().atom_count();
  int nb = ls.base().target().atom_count();
  if (na > cap_atoms || nb > cap_atoms)
    throw CapExceeded("K-matrix materialization capped at " +
                      std::to_string(cap_atoms) + " atoms");
  const NfTables& ta = nf_tables(na);
  const NfTables& tb = nf_tables(nb);
  std::size_t rows = ta.dnfs.size(), cols = tb.cnfs.size();

  // The verdict for (x, y) is a conjunction over clause/conjunct pairs, so
  // decide each distinct pool pair once and assemble by bitset algebra.
  std::vector<Bits> clause_ok(ta.clause_pool.size());
  for (std::size_t c = 0; c < ta.clause_pool.size(); ++c) {
    Bits ok(tb.conjunct_pool.size());
    for (std::size_t j = 0; j < tb.conjunct_pool.size(); ++j)
      if (ls.pair_holds(ta.clause_pool[c], tb.conjunct_pool[j])) ok.set(j);
    clause_ok[c] = std::move(ok);
  }

  std::vector<Bits> clause_cols(ta.clause_pool.size());
  for (std::size_t c = 0; c < ta.clause_pool.size(); ++c) {
    Bits col(cols);
    for (std::size_t y = 0; y < cols; ++y)
      if (tb.conjunct_sets[y].subset_of(clause_ok[c])) col.set(y);
    clause_cols[c] = std::move(col);
  }

  BitMatrix out(rows, cols);
  for (std::size_t x = 0; x < rows; ++x) {
    Bits row = Bits::ones(cols);
    for (int id : ta.clause_ids[x]) row &= clause_cols[id];
    for (std::size_t y = 0; y < cols; ++y)
      if (row.test(y)) out.set(x, y);
  }
  return out;
}

Subordination materialize_subordination(const LiftedSubordination& ls,
                                        int cap_atoms) {
  int na = ls.base().source().atom_count();
  int nb = ls.base().target().atom_count();
  if (na > cap_atoms || nb > cap_atoms)
    throw CapExceeded("K-subordination materialization capped at " +
                      std::to_string(cap_atoms) + " atoms");
  BitMatrix m = materialize_matrix(ls, cap_atoms);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
  for (std::size_t x = 0; x < m.rows(); ++x)
    for (std::size_t y = 0; y < m.cols(); ++y)
      if (m.get(x, y)) pairs.emplace_back(x, y);
  return Subordination::from_pairs(vietoris_algebra(ls.base().source()),
                                   vietoris_algebra(ls.base().target()),
                                   pairs);
}

bool lifted_equal(const LiftedSubordination& a, const LiftedSubordination& b,
                  RandomSource& rng, int samples) {
  if (a.base().source() != b.base().source() ||
      a.base().target() != b.base().target())
    throw ValidationError("lifted subordinations over different carriers");
  int na = a.base().source().atom_count();
  int nb = a.base().target().atom_count();
  Caps caps;
  if (na <= caps.k_subordination && nb <= caps.k_subordination)
    return materialize_matrix(a) == materialize_matrix(b);
  for (int i = 0; i < samples; ++i) {
    TermPtr x = random_term(a.base().source(), 3, rng);
    TermPtr y = random_term(a.base().target(), 3, rng);
    Dnf dx = to_dnf(x);
    Cnf cy = to_cnf(y);
    if (a.holds_nf(dx, cy) != b.holds_nf(dx, cy)) return false;
  }
  return true;
}

Dnf perturb_dnf(const Dnf& d, RandomSource& rng) {
  Dnf out = d;
  for (const auto& c : d.clauses) {
    // Duplicate with the box itself appended as a diamond: absorbed by the
    // original, so the join is unchanged, and 0 != box <= box keeps the
    // side conditions.
    if (c.box != 0 && rng.coin()) {
      DnfClause extra = c;
      extra.diamonds.push_back(c.box);
      std::sort(extra.diamonds.begin(), extra.diamonds.end());
      out.clauses.push_back(std::move(extra));
    }
    // Split one diamond b = b1 | b2 into two copies of the clause.
    if (!c.diamonds.empty()) {
      std::uint64_t b = c.diamonds[rng.below(c.diamonds.size())];
      if (std::popcount(b) >= 2) {
        std::uint64_t lowest = b & (~b + 1);
        DnfClause c1 = c, c2 = c;
        auto replace = [](DnfClause& cl, std::uint64_t from, std::uint64_t to) {
          for (auto& x : cl.diamonds)
            if (x == from) x = to;
          std::sort(cl.diamonds.begin(), cl.diamonds.end());
        };
        replace(c1, b, lowest);
        replace(c2, b, b & ~lowest);
        out.clauses.push_back(std::move(c1));
        out.clauses.push_back(std::move(c2));
      }
    }
  }
  return out;
}

Cnf perturb_cnf(const Cnf& c, RandomSource& rng) {
  // Work through the dual: dualizing preserves the side conditions and the
  // perturbations dualize to conjunct duplication and box splitting.
  return dual_cnf(perturb_dnf(dual_dnf(c), rng));
}

TermPtr random_term(const Algebra& base, int depth, RandomSource& rng) {
  if (depth <= 0) {
    switch (rng.below(4)) {
      case 0: return t_bot(base);
      case 1: return t_top(base);
      case 2: return t_box(Element(base, rng.subset(base.atom_count())));
      default: return t_dia(Element(base, rng.subset(base.atom_count())));
    }
  }
  switch (rng.below(5)) {
    case 0: return t_not(random_term(base, depth - 1, rng));
    case 1:
      return t_and(random_term(base, depth - 1, rng),
                   random_term(base, depth - 1, rng));
    case 2:
      return t_or(random_term(base, depth - 1, rng),
                  random_term(base, depth - 1, rng));
    case 3: return t_box(Element(base, rng.subset(base.atom_count())));
    default: return t_dia(Element(base, rng.subset(base.atom_count())));
  }
}

}  // namespace dualvik
