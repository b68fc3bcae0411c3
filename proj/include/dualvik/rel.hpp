#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dualvik/bits.hpp"
#include "dualvik/boolalg.hpp"
#include "dualvik/config.hpp"

namespace dualvik {

// A relation between two finite point sets, stored as a boolean matrix.
// Point sets are Algebras used for their atoms only.
class Relation {
public:
  Relation(Algebra source, Algebra target);
  Relation(Algebra source, Algebra target, BitMatrix matrix);

  const Algebra& source() const { return source_; }
  const Algebra& target() const { return target_; }
  const BitMatrix& matrix() const { return matrix_; }

  bool holds(int x, int y) const { return matrix_.get(x, y); }
  void add(int x, int y) { matrix_.set(x, y); }

  bool operator==(const Relation& other) const {
    return source_ == other.source_ && target_ == other.target_ &&
           matrix_ == other.matrix_;
  }
  bool operator!=(const Relation& other) const { return !(*this == other); }

private:
  Algebra source_, target_;
  BitMatrix matrix_;
};

Relation identity_relation(const Algebra& x);
Relation empty_relation(const Algebra& x, const Algebra& y);
Relation full_relation(const Algebra& x, const Algebra& y);
Relation from_pairs(const Algebra& x, const Algebra& y,
                    const std::vector<std::pair<int, int>>& pairs);

// second ∘ first: apply `first`, then `second`.
Relation compose(const Relation& second, const Relation& first);

// Converse relation.
Relation dagger(const Relation& r);

Relation rel_union(const Relation& a, const Relation& b);
Relation rel_intersect(const Relation& a, const Relation& b);
bool rel_subset(const Relation& a, const Relation& b);

Bits image(const Relation& r, const Bits& xs);
Bits preimage(const Relation& r, const Bits& ys);
// Mask forms for carriers of at most 64 points.
std::uint64_t image64(const Relation& r, std::uint64_t xs);
std::uint64_t preimage64(const Relation& r, std::uint64_t ys);

bool is_equivalence(const Relation& r);

// A point of the Vietoris construction: one subset of the base points.
struct VietorisPoint {
  std::uint64_t subset;
};

// All subsets of the base point set, ordered by binary encoding ascending.
// The same ordering indexes semantic values of modal terms, so the two sides
// of the duality share indices.
std::vector<VietorisPoint> vietoris_points(const Algebra& x,
                                           int cap = Caps{}.vietoris);

// The Vietoris point set as a named point set: atoms "{}", "{p}", "{p,q}", ...
Algebra vietoris_algebra(const Algebra& x, int cap = Caps{}.vietoris);

// Box lift: F -> G iff G ⊆ R[F].
Relation lift_box(const Relation& r, int cap = Caps{}.vietoris);
// Diamond lift: F -> G iff F ⊆ R⁻¹[G].
Relation lift_diamond(const Relation& r, int cap = Caps{}.vietoris);
// Egli-Milner lift: the intersection of the two.
Relation lift_em(const Relation& r, int cap = Caps{}.vietoris);

struct QuotientResult {
  Algebra classes;          // one atom per class, named "[<smallest member>]"
  Relation projection;      // base -> classes
  std::vector<int> class_of;  // base point index -> class index
};

// Quotient by an equivalence; classes ordered by smallest member index.
QuotientResult quotient(const Relation& equivalence);

}  // namespace dualvik
