#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "dualvik/config.hpp"
#include "dualvik/errors.hpp"

namespace dualvik {

// A finite boolean algebra, presented by its atom set. Elements are the
// subsets of the atoms; the algebra itself never materializes them.
//
// Atoms double as the points of the dual finite Stone space: a point set is
// just an Algebra whose elements nobody constructs.
class Algebra {
public:
  Algebra() : names_(std::make_shared<const std::vector<std::string>>()) {}
  explicit Algebra(std::vector<std::string> atom_names);

  // Atoms named `<prefix>0`, `<prefix>1`, ...
  static Algebra with_size(int n, std::string_view prefix);

  int atom_count() const { return static_cast<int>(names_->size()); }
  const std::vector<std::string>& atom_names() const { return *names_; }
  const std::string& atom_name(int i) const { return (*names_)[i]; }

  // Index of a named atom, or -1.
  int atom_index(std::string_view name) const;

  // All-atoms mask; element-level use requires atom_count() <= 63.
  std::uint64_t full_mask() const;

  // Structural equality: same atom names in the same order. The shared
  // payload makes the common same-object case O(1).
  bool operator==(const Algebra& other) const {
    return names_ == other.names_ || *names_ == *other.names_;
  }
  bool operator!=(const Algebra& other) const { return !(*this == other); }

private:
  std::shared_ptr<const std::vector<std::string>> names_;
};

// An element of a specific algebra: the set of atoms below it.
class Element {
public:
  Element(Algebra algebra, std::uint64_t atom_mask);

  const Algebra& algebra() const { return algebra_; }
  std::uint64_t mask() const { return mask_; }

  bool operator==(const Element& other) const {
    return algebra_ == other.algebra_ && mask_ == other.mask_;
  }
  bool operator!=(const Element& other) const { return !(*this == other); }

private:
  Algebra algebra_;
  std::uint64_t mask_;
};

Element bot(const Algebra& a);
Element top(const Algebra& a);

Element meet(const Element& a, const Element& b);
Element join(const Element& a, const Element& b);
Element neg(const Element& a);
bool leq(const Element& a, const Element& b);
bool is_bot(const Element& a);
bool is_top(const Element& a);

// All 2^n elements, ordered by binary encoding of the atom set ascending.
// This ordering is shared with the Vietoris point enumeration, so indices
// line up across the duality.
std::vector<Element> enumerate_elements(const Algebra& a,
                                        int cap_atoms = Caps{}.enumeration);

// Element from a list of atom names (the instance-file literal form).
Element element_from_atoms(const Algebra& a,
                           const std::vector<std::string>& atoms);

// "0", "1", or the joined atom names ("p|q"), atoms ascending.
std::string render_element(const Element& e);
std::string render_mask(const Algebra& a, std::uint64_t mask);

// Throws ValidationError on mismatch; used by every binary operation.
void require_same_algebra(const Algebra& a, const Algebra& b);

}  // namespace dualvik
