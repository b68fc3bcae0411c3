#include "dualvik/subord.hpp"

#include <algorithm>
#include <bit>
#include <mutex>

namespace dualvik {

struct Subordination::State {
  Algebra source, target;
  Relation dual;
  // Per-source-atom image masks; the membership hot path stays allocation
  // free for carriers that fit a word.
  std::vector<std::uint64_t> row64;
  mutable std::once_flag pairs_once;
  mutable std::vector<std::pair<std::uint64_t, std::uint64_t>> pair_set;

  State(Algebra s, Algebra t, Relation d)
      : source(std::move(s)), target(std::move(t)), dual(std::move(d)) {
    if (source.atom_count() <= 64 && target.atom_count() <= 64) {
      row64.reserve(source.atom_count());
      for (int x = 0; x < source.atom_count(); ++x) {
        std::uint64_t row = 0;
        for (int y = 0; y < target.atom_count(); ++y)
          if (dual.holds(x, y)) row |= std::uint64_t{1} << y;
        row64.push_back(row);
      }
    }
  }
};

Subordination Subordination::from_relation(const Relation& dual) {
  return Subordination(
      std::make_shared<State>(dual.source(), dual.target(), dual));
}

const Algebra& Subordination::source() const { return state_->source; }
const Algebra& Subordination::target() const { return state_->target; }
const Relation& Subordination::dual() const { return state_->dual; }

bool Subordination::operator==(const Subordination& other) const {
  return state_->dual == other.state_->dual;
}

bool Subordination::holds_masks(std::uint64_t a, std::uint64_t b) const {
  if (!state_->row64.empty() || state_->source.atom_count() == 0) {
    std::uint64_t img = 0;
    for (std::uint64_t rest = a; rest;) {
      int x = std::countr_zero(rest);
      rest &= rest - 1;
      img |= state_->row64[x];
    }
    return (img & ~b) == 0;
  }
  return (image64(state_->dual, a) & ~b) == 0;
}

bool Subordination::holds(const Element& a, const Element& b) const {
  require_same_algebra(a.algebra(), source());
  require_same_algebra(b.algebra(), target());
  return holds_masks(a.mask(), b.mask());
}

const std::vector<std::pair<std::uint64_t, std::uint64_t>>&
Subordination::pairs() const {
  std::call_once(state_->pairs_once, [this] {
    Caps caps;
    if (source().atom_count() > caps.enumeration ||
        target().atom_count() > caps.enumeration)
      throw CapExceeded("pair-set materialization capped at " +
                        std::to_string(caps.enumeration) + " atoms");
    std::uint64_t na = std::uint64_t{1} << source().atom_count();
    std::uint64_t nb = std::uint64_t{1} << target().atom_count();
    for (std::uint64_t a = 0; a < na; ++a) {
      std::uint64_t img = image64(state_->dual, a);
      for (std::uint64_t b = 0; b < nb; ++b)
        if ((img & ~b) == 0) state_->pair_set.emplace_back(a, b);
    }
  });
  return state_->pair_set;
}

namespace {

std::string pair_witness(const Algebra& src, const Algebra& tgt,
                         std::uint64_t a, std::uint64_t b) {
  return "(" + render_mask(src, a) + ", " + render_mask(tgt, b) + ")";
}

}  // namespace

Subordination Subordination::from_pairs(
    const Algebra& source, const Algebra& target,
    const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pair_list) {
  if (source.atom_count() > 10 || target.atom_count() > 10)
    throw CapExceeded("explicit pair sets supported up to 10 atoms; "
                      "use a dual-relation backing instead");
  std::uint64_t fa = source.full_mask();
  std::uint64_t fb = target.full_mask();

  // Dedup into a sorted set; membership tests below use binary search.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> s(pair_list);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  for (auto [a, b] : s)
    if ((a & ~fa) || (b & ~fb))
      throw ValidationError("subordination pair uses bits outside the atom set");
  auto contains = [&s](std::uint64_t a, std::uint64_t b) {
    return std::binary_search(s.begin(), s.end(), std::make_pair(a, b));
  };

  // S1: bottom and top pairs present.
  if (!contains(0, 0) || !contains(fa, fb))
    throw ValidationError("pair set violates S1: (0, 0) and (1, 1) required");
  // S2: left joins.
  for (auto [a, c] : s)
    for (auto [b, c2] : s)
      if (c == c2 && !contains(a | b, c))
        throw ValidationError("pair set violates S2 at " +
                              pair_witness(source, target, a | b, c));
  // S3: right meets.
  for (auto [a, c] : s)
    for (auto [a2, d] : s)
      if (a == a2 && !contains(a, c & d))
        throw ValidationError("pair set violates S3 at " +
                              pair_witness(source, target, a, c & d));
  // S4: down-up closure.
  for (auto [b, c] : s) {
    // Subsets of b and supersets of c.
    for (std::uint64_t a = b;; a = (a - 1) & b) {
      for (std::uint64_t dd = ~c & fb;; dd = (dd - 1) & (~c & fb)) {
        std::uint64_t d = c | dd;
        if (!contains(a, d))
          throw ValidationError("pair set violates S4 at " +
                                pair_witness(source, target, a, d));
        if (dd == 0) break;
      }
      if (a == 0) break;
    }
  }

  // Derive the dual relation: x R y iff every pair (a, b) with x ≤ a has y ≤ b.
  Relation dual(source, target);
  for (int x = 0; x < source.atom_count(); ++x)
    for (int y = 0; y < target.atom_count(); ++y) {
      bool related = true;
      for (auto [a, b] : s)
        if (((a >> x) & 1) && !((b >> y) & 1)) {
          related = false;
          break;
        }
      if (related) dual.add(x, y);
    }

  Subordination out = from_relation(dual);
  // The two backings must agree exactly; S1-S4 closure guarantees it.
  std::uint64_t idx = 0;
  for (std::uint64_t a = 0; a <= fa; ++a) {
    std::uint64_t img = image64(dual, a);
    for (std::uint64_t b = 0; b <= fb; ++b) {
      bool member = (img & ~b) == 0;
      bool listed = idx < s.size() && s[idx] == std::make_pair(a, b);
      if (listed) ++idx;
      if (member != listed)
        throw ValidationError("pair set is not closed under S1-S4 at " +
                              pair_witness(source, target, a, b));
      if (b == fb) break;
    }
    if (a == fa) break;
  }
  return out;
}

Relation to_relation(const Subordination& s) { return s.dual(); }

Subordination identity_subordination(const Algebra& a) {
  return Subordination::from_relation(identity_relation(a));
}

Subordination compose(const Subordination& second, const Subordination& first) {
  if (first.target() != second.source())
    throw ValidationError("composition carrier mismatch");
  return Subordination::from_relation(compose(second.dual(), first.dual()));
}

Subordination dagger(const Subordination& s) {
  return Subordination::from_relation(dagger(s.dual()));
}

bool subord_subset(const Subordination& a, const Subordination& b) {
  // Pair-set inclusion is dual-relation reverse inclusion.
  return rel_subset(b.dual(), a.dual());
}

namespace {

void check_family(const Algebra& source, const Algebra& target,
                  const std::vector<Subordination>& family) {
  for (const auto& s : family)
    if (s.source() != source || s.target() != target)
      throw ValidationError("hom-set operation across different hom-sets");
}

}  // namespace

Subordination hom_meet(const Algebra& source, const Algebra& target,
                       const std::vector<Subordination>& family) {
  check_family(source, target, family);
  // Meet of subordinations is the union of dual relations; the empty meet is
  // the top of the hom-set (empty dual relation: the total subordination).
  Relation acc = empty_relation(source, target);
  for (const auto& s : family) acc = rel_union(acc, s.dual());
  return Subordination::from_relation(acc);
}

Subordination hom_join(const Algebra& source, const Algebra& target,
                       const std::vector<Subordination>& family) {
  check_family(source, target, family);
  Relation acc = full_relation(source, target);
  for (const auto& s : family) acc = rel_intersect(acc, s.dual());
  return Subordination::from_relation(acc);
}

Subordination hom_join_oracle(const Algebra& source, const Algebra& target,
                              const std::vector<Subordination>& family,
                              int cap_atoms) {
  check_family(source, target, family);
  if (source.atom_count() > cap_atoms || target.atom_count() > cap_atoms)
    throw CapExceeded("join oracle capped at " + std::to_string(cap_atoms) +
                      " atoms");
  std::uint64_t fa = source.full_mask();
  std::uint64_t fb = target.full_mask();

  auto covered = [&family](std::uint64_t a, std::uint64_t b) {
    for (const auto& s : family)
      if (s.holds_masks(a, b)) return true;
    return false;
  };

  std::vector<std::pair<std::uint64_t, std::uint64_t>> result;
  for (std::uint64_t x = 0; x <= fa; ++x) {
    // Candidate decompositions: F ranges over sets of elements below x.
    std::vector<std::uint64_t> down;
    for (std::uint64_t a = x;; a = (a - 1) & x) {
      down.push_back(a);
      if (a == 0) break;
    }
    for (std::uint64_t y = 0; y <= fb; ++y) {
      std::vector<std::uint64_t> up;
      for (std::uint64_t dd = ~y & fb;; dd = (dd - 1) & (~y & fb)) {
        up.push_back(y | dd);
        if (dd == 0) break;
      }
      bool member = false;
      for (std::uint64_t fs = 0; fs < (std::uint64_t{1} << down.size()) && !member;
           ++fs) {
        std::uint64_t joined = 0;
        for (std::size_t i = 0; i < down.size(); ++i)
          if ((fs >> i) & 1) joined |= down[i];
        if (joined != x) continue;
        for (std::uint64_t gs = 0; gs < (std::uint64_t{1} << up.size()) && !member;
             ++gs) {
          std::uint64_t met = fb;
          for (std::size_t j = 0; j < up.size(); ++j)
            if ((gs >> j) & 1) met &= up[j];
          if (met != y) continue;
          bool all = true;
          for (std::size_t i = 0; i < down.size() && all; ++i) {
            if (!((fs >> i) & 1)) continue;
            for (std::size_t j = 0; j < up.size() && all; ++j) {
              if (!((gs >> j) & 1)) continue;
              if (!covered(down[i], up[j])) all = false;
            }
          }
          member = all;
        }
      }
      if (member) result.emplace_back(x, y);
      if (y == fb) break;
    }
    if (x == fa) break;
  }
  return Subordination::from_pairs(source, target, result);
}

std::string axiom_name(Axiom a) {
  switch (a) {
    case Axiom::S1: return "S1";
    case Axiom::S2: return "S2";
    case Axiom::S3: return "S3";
    case Axiom::S4: return "S4";
    case Axiom::S5: return "S5";
    case Axiom::S6: return "S6";
    case Axiom::S7: return "S7";
    case Axiom::S8: return "S8";
  }
  return "?";
}

std::vector<AxiomReport> check_axioms(const Subordination& s,
                                      const std::vector<Axiom>& which,
                                      int cap_atoms) {
  const Algebra& A = s.source();
  const Algebra& B = s.target();
  if (A.atom_count() > cap_atoms || B.atom_count() > cap_atoms)
    throw CapExceeded("axiom check capped at " + std::to_string(cap_atoms) +
                      " atoms");
  std::uint64_t fa = A.full_mask();
  std::uint64_t fb = B.full_mask();
  bool endo = A == B;

  auto all_a = [fa](auto&& fn) {
    for (std::uint64_t a = 0;; ++a) {
      if (!fn(a)) return false;
      if (a == fa) return true;
    }
  };
  auto all_b = [fb](auto&& fn) {
    for (std::uint64_t b = 0;; ++b) {
      if (!fn(b)) return false;
      if (b == fb) return true;
    }
  };

  std::vector<AxiomReport> out;
  for (Axiom ax : which) {
    AxiomReport rep{ax, true, ""};
    auto fail = [&](std::uint64_t a, std::uint64_t b) {
      rep.pass = false;
      rep.witness = pair_witness(A, B, a, b);
      return false;
    };
    if ((ax == Axiom::S5 || ax == Axiom::S6 || ax == Axiom::S7) && !endo)
      throw ValidationError(axiom_name(ax) +
                            " requires a subordination on a single algebra");
    switch (ax) {
      case Axiom::S1:
        if (!s.holds_masks(0, 0)) fail(0, 0);
        else if (!s.holds_masks(fa, fb)) fail(fa, fb);
        break;
      case Axiom::S2:
        all_a([&](std::uint64_t a) {
          return all_a([&](std::uint64_t b) {
            return all_b([&](std::uint64_t c) {
              if (s.holds_masks(a, c) && s.holds_masks(b, c) &&
                  !s.holds_masks(a | b, c))
                return fail(a | b, c);
              return true;
            });
          });
        });
        break;
      case Axiom::S3:
        all_a([&](std::uint64_t a) {
          return all_b([&](std::uint64_t c) {
            return all_b([&](std::uint64_t d) {
              if (s.holds_masks(a, c) && s.holds_masks(a, d) &&
                  !s.holds_masks(a, c & d))
                return fail(a, c & d);
              return true;
            });
          });
        });
        break;
      case Axiom::S4:
        all_a([&](std::uint64_t a) {
          return all_a([&](std::uint64_t b) {
            if ((a & ~b) != 0) return true;
            return all_b([&](std::uint64_t c) {
              if (!s.holds_masks(b, c)) return true;
              return all_b([&](std::uint64_t d) {
                if ((c & ~d) == 0 && !s.holds_masks(a, d)) return fail(a, d);
                return true;
              });
            });
          });
        });
        break;
      case Axiom::S5:
        all_a([&](std::uint64_t a) {
          return all_b([&](std::uint64_t b) {
            if (s.holds_masks(a, b) && (a & ~b) != 0) return fail(a, b);
            return true;
          });
        });
        break;
      case Axiom::S6:
        all_a([&](std::uint64_t a) {
          return all_b([&](std::uint64_t b) {
            if (s.holds_masks(a, b) && !s.holds_masks(~b & fb, ~a & fa))
              return fail(~b & fb, ~a & fa);
            return true;
          });
        });
        break;
      case Axiom::S7:
        all_a([&](std::uint64_t a) {
          return all_b([&](std::uint64_t b) {
            if (!s.holds_masks(a, b)) return true;
            for (std::uint64_t c = 0;; ++c) {
              if (s.holds_masks(a, c) && s.holds_masks(c, b)) return true;
              if (c == fb) break;
            }
            return fail(a, b);
          });
        });
        break;
      case Axiom::S8:
        all_b([&](std::uint64_t b) {
          if (b == 0) return true;
          for (std::uint64_t a = 1; a <= fa; ++a)
            if (s.holds_masks(a, b)) return true;
          rep.pass = false;
          rep.witness = "no nonzero a with a S " + render_mask(B, b);
          return false;
        });
        break;
    }
    out.push_back(std::move(rep));
  }
  return out;
}

}  // namespace dualvik
