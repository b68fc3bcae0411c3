#pragma once

#include <cstdint>
#include <vector>

#include "dualvik/config.hpp"
#include "dualvik/subord.hpp"

namespace dualvik {

// A boolean algebra carrying an endo-subordination.
struct S5Algebra {
  Algebra algebra;
  Subordination s;
};

S5Algebra s5_from_relation(const Relation& equivalence_or_any);

// S1-S7 hold (exhaustively checked).
bool is_s5(const S5Algebra& a, int cap_atoms = Caps{}.axiom_check);
// S1-S8 hold; finite completeness is automatic.
bool is_devries(const S5Algebra& a, int cap_atoms = Caps{}.axiom_check);

// T ∘ S_src = T = S_tgt ∘ T.
bool is_compatible(const Subordination& t, const S5Algebra& src,
                   const S5Algebra& tgt);

// An S-ideal, stored as one bit per element mask of the carrier. Carriers
// are capped so an ideal fits a word.
using IdealMask = std::uint64_t;

bool is_s_ideal(IdealMask ideal, const S5Algebra& a);
// The defining equation, computed literally: I = S⁻¹[(S[Iᵘ])^ℓ].
bool is_normal_ideal(IdealMask ideal, const S5Algebra& a);

// All S-ideals, sorted by (member count, mask).
std::vector<IdealMask> s_ideals(const S5Algebra& a,
                                int cap_atoms = Caps{}.ideal_enum);

// The lattice of all S-ideals under inclusion. Meets are intersections;
// joins are least containing ideals.
class FiniteFrame {
public:
  FiniteFrame(Algebra base, std::vector<IdealMask> ideals);

  const Algebra& base() const { return base_; }
  const std::vector<IdealMask>& ideals() const { return ideals_; }
  int size() const { return static_cast<int>(ideals_.size()); }

  int index_of(IdealMask mask) const;  // -1 when absent
  int bottom() const;
  int top() const;
  bool leq(int i, int j) const;
  int meet(int i, int j) const;
  int join(int i, int j) const;
  // Least ideal containing a set of elements (given as an element-mask set).
  int least_containing(IdealMask members) const;
  // Pseudocomplement: the largest x with x ∧ i = bottom.
  int star(int i) const;
  // Join of all members; S-ideals of a finite carrier are principal, so this
  // is the generating element's mask.
  std::uint64_t generator(int i) const;

private:
  Algebra base_;
  std::vector<IdealMask> ideals_;
};

FiniteFrame si_frame(const S5Algebra& a, int cap_atoms = Caps{}.ideal_enum);

struct MacneilleResult {
  S5Algebra completion;
  // Base element mask -> completion element mask (the least normal ideal
  // containing the element, read off on the completion's atoms).
  std::vector<std::uint64_t> embed;
  std::vector<IdealMask> normal_ideals;
  std::vector<std::uint64_t> atom_generators;  // completion atom -> base element mask
};

// MacNeille completion by normal S-ideals. At finite scale the result is the
// powerset of the dual equivalence's classes with the inclusion order as its
// subordination.
MacneilleResult macneille(const S5Algebra& a, int cap_atoms = Caps{}.ideal_enum);

// Morphism action, defined by transport along the finite duality: quotient
// the dual relation by the two equivalences, then take the subordination of
// that relation between the completions.
Subordination macneille_morphism(const Subordination& t, const S5Algebra& src,
                                 const S5Algebra& tgt);

// The booleanization of a frame: elements with x** = x, meet inherited,
// join x ∨' y = (x ∨ y)**, with a ≺ b iff a* ∨ b = 1.
struct BooleanizeResult {
  S5Algebra algebra;
  std::vector<int> element_to_frame;  // algebra element mask -> frame index
};

BooleanizeResult booleanize(const FiniteFrame& l);

// L^S = MacNeille ∘ K-lift (EM) ∘ inclusion, on a de Vries input.
MacneilleResult l_s(const S5Algebra& a);
Subordination l_s_morphism(const Subordination& t, const S5Algebra& src,
                           const S5Algebra& tgt);

// J^P on a frame: booleanize, K-lift (EM), then the S-ideal frame.
FiniteFrame j_p(const FiniteFrame& l);
// J^P on an algebra already presented as the booleanization (de Vries input).
FiniteFrame j_p(const S5Algebra& a);

}  // namespace dualvik
