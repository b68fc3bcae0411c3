#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "dualvik/boolalg.hpp"
#include "dualvik/config.hpp"
#include "dualvik/rel.hpp"

namespace dualvik {

// A subordination between finite boolean algebras. The canonical backing is
// the dual relation on atoms: a S b iff R[atoms(a)] ⊆ atoms(b). The explicit
// pair set is derived on demand and memoized.
class Subordination {
public:
  // Adopt a relation between the atom sets as the dual backing.
  static Subordination from_relation(const Relation& dual);

  // Build from an explicit pair set (element masks). Validates the closure
  // axioms S1-S4, derives the dual relation, and checks that it reproduces
  // the given pairs exactly.
  static Subordination from_pairs(
      const Algebra& source, const Algebra& target,
      const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pairs);

  const Algebra& source() const;
  const Algebra& target() const;
  const Relation& dual() const;

  bool holds(const Element& a, const Element& b) const;
  bool holds_masks(std::uint64_t a, std::uint64_t b) const;

  // The full pair set, masks ascending lexicographically; memoized.
  // Requires both algebras under the enumeration cap.
  const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pairs() const;

  bool operator==(const Subordination& other) const;
  bool operator!=(const Subordination& other) const { return !(*this == other); }

private:
  struct State;
  explicit Subordination(std::shared_ptr<State> state) : state_(std::move(state)) {}
  std::shared_ptr<State> state_;
};

Relation to_relation(const Subordination& s);

// Identity of the category: the lattice order itself.
Subordination identity_subordination(const Algebra& a);

// second ∘ first.
Subordination compose(const Subordination& second, const Subordination& first);

// b S† a iff ¬a S ¬b.
Subordination dagger(const Subordination& s);

// Pointwise (pair-set) inclusion.
bool subord_subset(const Subordination& a, const Subordination& b);

// Hom-set lattice operations; an empty family yields the bottom/top
// subordination of the given hom-set.
Subordination hom_meet(const Algebra& source, const Algebra& target,
                       const std::vector<Subordination>& family);
Subordination hom_join(const Algebra& source, const Algebra& target,
                       const std::vector<Subordination>& family);

// Direct join computation: (x, y) is in the join iff some finite F with
// join F = x and G with meet G = y have every pair (a, b) in F x G inside a
// family member. Exhaustive over subsets; oracle-grade, carriers <= 3 atoms.
Subordination hom_join_oracle(const Algebra& source, const Algebra& target,
                              const std::vector<Subordination>& family,
                              int cap_atoms = 3);

enum class Axiom { S1, S2, S3, S4, S5, S6, S7, S8 };

std::string axiom_name(Axiom a);

struct AxiomReport {
  Axiom axiom;
  bool pass;
  std::string witness;  // empty when pass
};

// Exhaustive check over all element tuples. S5-S7 require an endo
// subordination. Carriers capped by `cap_atoms`.
std::vector<AxiomReport> check_axioms(const Subordination& s,
                                      const std::vector<Axiom>& which,
                                      int cap_atoms = Caps{}.axiom_check);

}  // namespace dualvik
