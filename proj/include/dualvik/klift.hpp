#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dualvik/bits.hpp"
#include "dualvik/config.hpp"
#include "dualvik/kalg.hpp"
#include "dualvik/rng.hpp"
#include "dualvik/subord.hpp"

namespace dualvik {

enum class Flavor { box, diamond, em };

std::string flavor_name(Flavor f);

// A subordination between the modal constructions over S's carriers, given
// as a decider on normal forms: membership of (x, y) reduces to a witness
// search per DNF-clause/CNF-conjunct pair.
//   box:     some conjunct box d has (clause box) S d
//   diamond: some clause diamond b has b S (conjunct diamond)
//   em:      either
class LiftedSubordination {
public:
  LiftedSubordination(Subordination base, Flavor flavor)
      : base_(std::move(base)), flavor_(flavor) {}

  const Subordination& base() const { return base_; }
  Flavor flavor() const { return flavor_; }

  bool pair_holds(const DnfClause& i, const CnfConjunct& j) const;
  bool holds_nf(const Dnf& x, const Cnf& y) const;
  bool holds(const TermPtr& x, const TermPtr& y) const;

  // Per clause/conjunct pair: the witnessing index into the conjunct's boxes
  // (box flavor) or the clause's diamonds (diamond flavor), or -1.
  struct PairWitness {
    int clause, conjunct;
    int box_index, diamond_index;
  };
  // Witness table when the membership holds; otherwise the first failing
  // pair is returned as a single entry with indices -1.
  std::vector<PairWitness> explain(const Dnf& x, const Cnf& y) const;

private:
  Subordination base_;
  Flavor flavor_;
};

LiftedSubordination lift_subord(const Subordination& s, Flavor f);

// Membership matrix over all K-elements, rows/cols indexed by semantic
// bitmask. Requires both base algebras within `cap_atoms` (<= 3).
BitMatrix materialize_matrix(const LiftedSubordination& ls,
                             int cap_atoms = Caps{}.k_matrix);

// The lifted subordination as a Subordination between the powerset algebras
// on the Vietoris points of the carriers, revalidated through the pair-set
// constructor. Requires base algebras within `cap_atoms` (<= 2).
Subordination materialize_subordination(const LiftedSubordination& ls,
                                        int cap_atoms = Caps{}.k_subordination);

// Equality of two lifted subordinations over the same carriers: decided by
// matrix comparison when both bases fit the 2-atom cap, otherwise by seeded
// sampling of `samples` term pairs.
bool lifted_equal(const LiftedSubordination& a, const LiftedSubordination& b,
                  RandomSource& rng, int samples = 500);

// Perturb canonical forms without changing their semantic value or breaking
// the normal-form side conditions: duplicate diamonds at the clause box and
// split diamonds/boxes in two. Used to exercise representation independence.
Dnf perturb_dnf(const Dnf& d, RandomSource& rng);
Cnf perturb_cnf(const Cnf& c, RandomSource& rng);

// A random term over `base` with the given connective depth.
TermPtr random_term(const Algebra& base, int depth, RandomSource& rng);

}  // namespace dualvik
