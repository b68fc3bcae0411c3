#include "dualvik/s5mac.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "dualvik/errors.hpp"
#include "dualvik/klift.hpp"

namespace dualvik {

namespace {

void require_shape(const S5Algebra& a) {
  if (!(a.s.source() == a.algebra) || !(a.s.target() == a.algebra)) {
    throw ValidationError("subordination does not live on the carrier algebra");
  }
}

// Ideal masks carry one bit per element, so the carrier is limited to 6 atoms
// (64 elements) on top of any operation-specific cap.
int element_space(const Algebra& a, int cap_atoms, const char* op) {
  if (a.atom_count() > cap_atoms || a.atom_count() > 6) {
    throw CapExceeded(std::string(op) + " supports at most " +
                      std::to_string(std::min(cap_atoms, 6)) + " atoms, got " +
                      std::to_string(a.atom_count()));
  }
  return 1 << a.atom_count();
}

bool all_pass(const std::vector<AxiomReport>& reports) {
  for (const auto& r : reports) {
    if (!r.pass) return false;
  }
  return true;
}

}  // namespace

S5Algebra s5_from_relation(const Relation& r) {
  if (!(r.source() == r.target())) {
    throw ValidationError("expected an endo-relation");
  }
  if (!is_equivalence(r)) {
    throw ValidationError("relation is not an equivalence");
  }
  return S5Algebra{r.source(), Subordination::from_relation(r)};
}

bool is_s5(const S5Algebra& a, int cap_atoms) {
  require_shape(a);
  return all_pass(check_axioms(a.s,
                               {Axiom::S1, Axiom::S2, Axiom::S3, Axiom::S4,
                                Axiom::S5, Axiom::S6, Axiom::S7},
                               cap_atoms));
}

bool is_devries(const S5Algebra& a, int cap_atoms) {
  require_shape(a);
  return all_pass(check_axioms(a.s,
                               {Axiom::S1, Axiom::S2, Axiom::S3, Axiom::S4,
                                Axiom::S5, Axiom::S6, Axiom::S7, Axiom::S8},
                               cap_atoms));
}

bool is_compatible(const Subordination& t, const S5Algebra& src,
                   const S5Algebra& tgt) {
  require_shape(src);
  require_shape(tgt);
  if (!(t.source() == src.algebra) || !(t.target() == tgt.algebra)) {
    throw ValidationError("morphism endpoints do not match the given algebras");
  }
  return compose(t, src.s) == t && compose(tgt.s, t) == t;
}

bool is_s_ideal(IdealMask ideal, const S5Algebra& a) {
  require_shape(a);
  const int count = element_space(a.algebra, 6, "ideal check");
  const IdealMask space =
      count == 64 ? ~IdealMask{0} : (IdealMask{1} << count) - 1;
  if ((ideal & ~space) != 0) {
    throw ValidationError("ideal mask has bits outside the element space");
  }
  if ((ideal & 1) == 0) return false;  // 0 belongs to every ideal
  for (IdealMask m = ideal; m; m &= m - 1) {
    const std::uint64_t e = static_cast<std::uint64_t>(std::countr_zero(m));
    for (std::uint64_t sub = e;; sub = (sub - 1) & e) {
      if ((ideal >> sub & 1) == 0) return false;
      if (sub == 0) break;
    }
    bool subordinate = false;
    for (IdealMask w = ideal; w && !subordinate; w &= w - 1) {
      const std::uint64_t b = static_cast<std::uint64_t>(std::countr_zero(w));
      subordinate = a.s.holds_masks(e, b);
    }
    if (!subordinate) return false;
  }
  for (IdealMask m = ideal; m; m &= m - 1) {
    const std::uint64_t e = static_cast<std::uint64_t>(std::countr_zero(m));
    for (IdealMask w = ideal; w; w &= w - 1) {
      const std::uint64_t f = static_cast<std::uint64_t>(std::countr_zero(w));
      if ((ideal >> (e | f) & 1) == 0) return false;
    }
  }
  return true;
}

bool is_normal_ideal(IdealMask ideal, const S5Algebra& a) {
  require_shape(a);
  const int count = element_space(a.algebra, 6, "normality check");
  IdealMask upper = 0;
  for (int u = 0; u < count; ++u) {
    bool bounds = true;
    for (IdealMask m = ideal; m && bounds; m &= m - 1) {
      const std::uint64_t e = static_cast<std::uint64_t>(std::countr_zero(m));
      bounds = (e & ~static_cast<std::uint64_t>(u)) == 0;
    }
    if (bounds) upper |= IdealMask{1} << u;
  }
  IdealMask image = 0;
  for (int b = 0; b < count; ++b) {
    for (IdealMask m = upper; m; m &= m - 1) {
      const std::uint64_t u = static_cast<std::uint64_t>(std::countr_zero(m));
      if (a.s.holds_masks(u, static_cast<std::uint64_t>(b))) {
        image |= IdealMask{1} << b;
        break;
      }
    }
  }
  IdealMask lower = 0;
  for (int l = 0; l < count; ++l) {
    bool below = true;
    for (IdealMask m = image; m && below; m &= m - 1) {
      const std::uint64_t b = static_cast<std::uint64_t>(std::countr_zero(m));
      below = (static_cast<std::uint64_t>(l) & ~b) == 0;
    }
    if (below) lower |= IdealMask{1} << l;
  }
  IdealMask pre = 0;
  for (int x = 0; x < count; ++x) {
    for (IdealMask m = lower; m; m &= m - 1) {
      const std::uint64_t b = static_cast<std::uint64_t>(std::countr_zero(m));
      if (a.s.holds_masks(static_cast<std::uint64_t>(x), b)) {
        pre |= IdealMask{1} << x;
        break;
      }
    }
  }
  return pre == ideal;
}

std::vector<IdealMask> s_ideals(const S5Algebra& a, int cap_atoms) {
  require_shape(a);
  const int count = element_space(a.algebra, cap_atoms, "S-ideal enumeration");
  if (count > 32) {
    throw CapExceeded("S-ideal enumeration walks all element subsets; "
                      "carriers over 5 atoms refused");
  }
  std::vector<IdealMask> out;
  const std::uint64_t subsets = std::uint64_t{1} << count;
  for (std::uint64_t m = 1; m < subsets; m += 2) {  // must contain element 0
    if (is_s_ideal(m, a)) out.push_back(m);
  }
  std::sort(out.begin(), out.end(), [](IdealMask x, IdealMask y) {
    const int px = std::popcount(x), py = std::popcount(y);
    return px != py ? px < py : x < y;
  });
  return out;
}

FiniteFrame::FiniteFrame(Algebra base, std::vector<IdealMask> ideals)
    : base_(std::move(base)), ideals_(std::move(ideals)) {
  const int count = element_space(base_, 6, "frame construction");
  const IdealMask space =
      count == 64 ? ~IdealMask{0} : (IdealMask{1} << count) - 1;
  if (ideals_.empty()) throw ValidationError("a frame needs at least one ideal");
  bool has_bottom = false, has_top = false;
  for (IdealMask m : ideals_) {
    if ((m & ~space) != 0 || (m & 1) == 0) {
      throw ValidationError("frame member is not an ideal of the carrier");
    }
    has_bottom = has_bottom || m == 1;
    has_top = has_top || m == space;
  }
  if (!has_bottom || !has_top) {
    throw ValidationError("frame is missing its bottom or top ideal");
  }
}

int FiniteFrame::index_of(IdealMask mask) const {
  for (int i = 0; i < size(); ++i) {
    if (ideals_[i] == mask) return i;
  }
  return -1;
}

int FiniteFrame::bottom() const { return index_of(1); }

int FiniteFrame::top() const {
  const int count = 1 << base_.atom_count();
  return index_of(count == 64 ? ~IdealMask{0} : (IdealMask{1} << count) - 1);
}

bool FiniteFrame::leq(int i, int j) const {
  return (ideals_[i] & ~ideals_[j]) == 0;
}

int FiniteFrame::meet(int i, int j) const {
  const int k = index_of(ideals_[i] & ideals_[j]);
  if (k < 0) throw ValidationError("frame is not closed under intersection");
  return k;
}

int FiniteFrame::least_containing(IdealMask members) const {
  IdealMask acc = 0;
  bool found = false;
  for (IdealMask m : ideals_) {
    if ((members & ~m) != 0) continue;
    acc = found ? acc & m : m;
    found = true;
  }
  if (!found) throw ValidationError("no frame member contains the given set");
  const int k = index_of(acc);
  if (k < 0) throw ValidationError("frame is not closed under meets of covers");
  return k;
}

int FiniteFrame::join(int i, int j) const {
  return least_containing(ideals_[i] | ideals_[j]);
}

int FiniteFrame::star(int i) const {
  const int bot = bottom();
  IdealMask members = 0;
  for (int j = 0; j < size(); ++j) {
    if (meet(i, j) == bot) members |= ideals_[j];
  }
  return least_containing(members);
}

std::uint64_t FiniteFrame::generator(int i) const {
  std::uint64_t g = 0;
  for (IdealMask m = ideals_[i]; m; m &= m - 1) {
    g |= static_cast<std::uint64_t>(std::countr_zero(m));
  }
  return g;
}

FiniteFrame si_frame(const S5Algebra& a, int cap_atoms) {
  return FiniteFrame(a.algebra, s_ideals(a, cap_atoms));
}

MacneilleResult macneille(const S5Algebra& a, int cap_atoms) {
  require_shape(a);
  const int count = element_space(a.algebra, cap_atoms, "MacNeille completion");
  if (!is_s5(a, 6)) {
    throw ValidationError("MacNeille completion needs all of S1-S7");
  }
  std::vector<IdealMask> normals;
  for (IdealMask m : s_ideals(a, cap_atoms)) {
    if (is_normal_ideal(m, a)) normals.push_back(m);
  }
  if (normals.empty() || normals.front() != 1) {
    throw std::logic_error("normal ideals lost the bottom ideal");
  }
  // Atoms of the completion: minimal nonbottom normal ideals.
  std::vector<IdealMask> atoms;
  for (IdealMask m : normals) {
    if (m == 1) continue;
    bool minimal = true;
    for (IdealMask other : normals) {
      if (other != 1 && other != m && (other & ~m) == 0) {
        minimal = false;
        break;
      }
    }
    if (minimal) atoms.push_back(m);
  }
  std::vector<std::uint64_t> generators;
  for (IdealMask m : atoms) {
    std::uint64_t g = 0;
    for (IdealMask w = m; w; w &= w - 1) {
      g |= static_cast<std::uint64_t>(std::countr_zero(w));
    }
    generators.push_back(g);
  }
  // Order atoms like quotient classes: by smallest generator atom.
  std::vector<int> order(atoms.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    return std::countr_zero(generators[x]) < std::countr_zero(generators[y]);
  });
  std::vector<IdealMask> atom_ideals;
  std::vector<std::uint64_t> atom_generators;
  std::vector<std::string> names;
  for (int i : order) {
    atom_ideals.push_back(atoms[i]);
    atom_generators.push_back(generators[i]);
    names.push_back(
        "[" + a.algebra.atom_name(std::countr_zero(generators[i])) + "]");
  }
  if (normals.size() != (std::size_t{1} << atom_ideals.size())) {
    throw std::logic_error("completion is not the powerset of its atoms");
  }
  Algebra completion{names};
  std::vector<std::uint64_t> embed(static_cast<std::size_t>(count));
  for (int e = 0; e < count; ++e) {
    IdealMask least = 0;
    bool found = false;
    for (IdealMask m : normals) {
      if ((m >> e & 1) == 0) continue;
      least = found ? least & m : m;
      found = true;
    }
    if (!found || !is_normal_ideal(least, a)) {
      throw std::logic_error("no least normal ideal over an element");
    }
    std::uint64_t image = 0;
    for (std::size_t k = 0; k < atom_ideals.size(); ++k) {
      if ((atom_ideals[k] & ~least) == 0) image |= std::uint64_t{1} << k;
    }
    embed[static_cast<std::size_t>(e)] = image;
  }
  return MacneilleResult{
      S5Algebra{completion, identity_subordination(completion)},
      std::move(embed), std::move(normals), std::move(atom_generators)};
}

Subordination macneille_morphism(const Subordination& t, const S5Algebra& src,
                                 const S5Algebra& tgt) {
  if (!is_compatible(t, src, tgt)) {
    throw ValidationError("morphism is not compatible with the two carriers");
  }
  const Relation e1 = to_relation(src.s);
  const Relation e2 = to_relation(tgt.s);
  if (!is_equivalence(e1) || !is_equivalence(e2)) {
    throw ValidationError("carrier subordination is not S5 (dual relation "
                          "is not an equivalence)");
  }
  const QuotientResult q1 = quotient(e1);
  const QuotientResult q2 = quotient(e2);
  const Relation through =
      compose(q2.projection, compose(to_relation(t), dagger(q1.projection)));
  const MacneilleResult m1 = macneille(src);
  const MacneilleResult m2 = macneille(tgt);
  if (!(m1.completion.algebra == q1.classes) ||
      !(m2.completion.algebra == q2.classes)) {
    throw std::logic_error("completion atoms do not line up with classes");
  }
  return Subordination::from_relation(Relation(
      m1.completion.algebra, m2.completion.algebra, through.matrix()));
}

BooleanizeResult booleanize(const FiniteFrame& l) {
  std::vector<int> star(static_cast<std::size_t>(l.size()));
  for (int i = 0; i < l.size(); ++i) star[static_cast<std::size_t>(i)] = l.star(i);
  std::vector<int> regulars;
  for (int i = 0; i < l.size(); ++i) {
    if (star[static_cast<std::size_t>(star[static_cast<std::size_t>(i)])] == i) {
      regulars.push_back(i);
    }
  }
  const int bot = l.bottom();
  std::vector<int> atom_indices;
  for (int i : regulars) {
    if (i == bot) continue;
    bool minimal = true;
    for (int j : regulars) {
      if (j != bot && j != i && l.leq(j, i)) {
        minimal = false;
        break;
      }
    }
    if (minimal) atom_indices.push_back(i);
  }
  std::sort(atom_indices.begin(), atom_indices.end(),
            [&](int x, int y) { return l.generator(x) < l.generator(y); });
  if (regulars.size() != (std::size_t{1} << atom_indices.size())) {
    throw std::logic_error("regular elements do not form a powerset");
  }
  std::vector<std::string> names;
  for (int i : atom_indices) {
    // Joined atom names, with no top/bottom shorthand: an atom whose
    // generator is the whole carrier must still get a stable join name.
    std::string name;
    for (std::uint64_t w = l.generator(i); w; w &= w - 1) {
      if (!name.empty()) name += "|";
      name += l.base().atom_name(std::countr_zero(w));
    }
    if (name.empty()) name = "0";
    names.push_back(std::move(name));
  }
  Algebra algebra{names};
  const std::uint64_t elements = std::uint64_t{1} << atom_indices.size();
  std::vector<int> to_frame(static_cast<std::size_t>(elements));
  for (std::uint64_t m = 0; m < elements; ++m) {
    IdealMask members = 1;
    for (std::uint64_t w = m; w; w &= w - 1) {
      members |= l.ideals()[static_cast<std::size_t>(
          atom_indices[static_cast<std::size_t>(std::countr_zero(w))])];
    }
    int idx = l.least_containing(members);
    idx = star[static_cast<std::size_t>(star[static_cast<std::size_t>(idx)])];
    to_frame[static_cast<std::size_t>(m)] = idx;
  }
  for (std::size_t i = 0; i < to_frame.size(); ++i) {
    for (std::size_t j = i + 1; j < to_frame.size(); ++j) {
      if (to_frame[i] == to_frame[j]) {
        throw std::logic_error("atom joins collide in the booleanization");
      }
    }
  }
  const int top = l.top();
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
  for (std::uint64_t x = 0; x < elements; ++x) {
    for (std::uint64_t y = 0; y < elements; ++y) {
      const int sx = star[static_cast<std::size_t>(
          to_frame[static_cast<std::size_t>(x)])];
      if (l.join(sx, to_frame[static_cast<std::size_t>(y)]) == top) {
        pairs.emplace_back(x, y);
      }
    }
  }
  return BooleanizeResult{
      S5Algebra{algebra, Subordination::from_pairs(algebra, algebra, pairs)},
      std::move(to_frame)};
}

namespace {

S5Algebra modal_object(const S5Algebra& a) {
  if (a.algebra.atom_count() > Caps{}.k_subordination) {
    throw CapExceeded("the modal construction is doubly exponential; "
                      "carriers over 2 atoms refused");
  }
  if (!is_devries(a)) {
    throw ValidationError("input must satisfy S1-S8");
  }
  const Subordination lifted =
      materialize_subordination(lift_subord(a.s, Flavor::em));
  return S5Algebra{lifted.source(), lifted};
}

}  // namespace

MacneilleResult l_s(const S5Algebra& a) {
  return macneille(modal_object(a));
}

Subordination l_s_morphism(const Subordination& t, const S5Algebra& src,
                           const S5Algebra& tgt) {
  const S5Algebra ksrc = modal_object(src);
  const S5Algebra ktgt = modal_object(tgt);
  if (!is_compatible(t, src, tgt)) {
    throw ValidationError("morphism is not compatible with the two carriers");
  }
  const Subordination lifted =
      materialize_subordination(lift_subord(t, Flavor::em));
  return macneille_morphism(lifted, ksrc, ktgt);
}

FiniteFrame j_p(const S5Algebra& a) {
  return si_frame(modal_object(a));
}

FiniteFrame j_p(const FiniteFrame& l) {
  return j_p(booleanize(l).algebra);
}

}  // namespace dualvik
