#include "dualvik/boolalg.hpp"

#include <algorithm>
#include <unordered_set>

namespace dualvik {

Algebra::Algebra(std::vector<std::string> atom_names) {
  std::unordered_set<std::string_view> seen;
  for (const auto& name : atom_names) {
    if (name.empty()) throw ValidationError("atom names must be nonempty");
    if (!seen.insert(name).second)
      throw ValidationError("duplicate atom name '" + name + "'");
  }
  names_ = std::make_shared<const std::vector<std::string>>(std::move(atom_names));
}

Algebra Algebra::with_size(int n, std::string_view prefix) {
  if (n < 0) throw ValidationError("negative atom count");
  std::vector<std::string> names;
  names.reserve(n);
  for (int i = 0; i < n; ++i)
    names.push_back(std::string(prefix) + std::to_string(i));
  return Algebra(std::move(names));
}

int Algebra::atom_index(std::string_view name) const {
  for (int i = 0; i < atom_count(); ++i)
    if ((*names_)[i] == name) return i;
  return -1;
}

std::uint64_t Algebra::full_mask() const {
  int n = atom_count();
  if (n > 63)
    throw CapExceeded("element-level operations support at most 63 atoms, got " +
                      std::to_string(n));
  return n ? (std::uint64_t{1} << n) - 1 : 0;
}

Element::Element(Algebra algebra, std::uint64_t atom_mask)
    : algebra_(std::move(algebra)), mask_(atom_mask) {
  if (atom_mask & ~algebra_.full_mask())
    throw ValidationError("element mask has bits outside the atom set");
}

Element bot(const Algebra& a) { return Element(a, 0); }
Element top(const Algebra& a) { return Element(a, a.full_mask()); }

void require_same_algebra(const Algebra& a, const Algebra& b) {
  if (a != b) throw ValidationError("algebra mismatch");
}

Element meet(const Element& a, const Element& b) {
  require_same_algebra(a.algebra(), b.algebra());
  return Element(a.algebra(), a.mask() & b.mask());
}

Element join(const Element& a, const Element& b) {
  require_same_algebra(a.algebra(), b.algebra());
  return Element(a.algebra(), a.mask() | b.mask());
}

Element neg(const Element& a) {
  return Element(a.algebra(), ~a.mask() & a.algebra().full_mask());
}

bool leq(const Element& a, const Element& b) {
  require_same_algebra(a.algebra(), b.algebra());
  return (a.mask() & ~b.mask()) == 0;
}

bool is_bot(const Element& a) { return a.mask() == 0; }
bool is_top(const Element& a) { return a.mask() == a.algebra().full_mask(); }

std::vector<Element> enumerate_elements(const Algebra& a, int cap_atoms) {
  if (a.atom_count() > cap_atoms)
    throw CapExceeded("element enumeration capped at " +
                      std::to_string(cap_atoms) + " atoms, got " +
                      std::to_string(a.atom_count()));
  std::uint64_t full = a.full_mask();
  std::vector<Element> out;
  out.reserve(std::size_t{1} << a.atom_count());
  for (std::uint64_t m = 0;; ++m) {
    out.emplace_back(a, m);
    if (m == full) break;
  }
  return out;
}

Element element_from_atoms(const Algebra& a,
                           const std::vector<std::string>& atoms) {
  std::uint64_t mask = 0;
  for (const auto& name : atoms) {
    int i = a.atom_index(name);
    if (i < 0) throw ValidationError("unknown atom '" + name + "'");
    mask |= std::uint64_t{1} << i;
  }
  return Element(a, mask);
}

std::string render_mask(const Algebra& a, std::uint64_t mask) {
  if (mask == 0) return "0";
  if (mask == a.full_mask()) return "1";
  std::string out;
  for (int i = 0; i < a.atom_count(); ++i) {
    if (!((mask >> i) & 1)) continue;
    if (!out.empty()) out += "|";
    out += a.atom_name(i);
  }
  return out;
}

std::string render_element(const Element& e) {
  return render_mask(e.algebra(), e.mask());
}

}  // namespace dualvik
