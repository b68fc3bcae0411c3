#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dualvik/boolalg.hpp"
#include "dualvik/rel.hpp"
#include "dualvik/subord.hpp"

namespace dualvik {

// A parsed instance file. Carrier names are unique across algebras and point
// sets; relations reference carriers, subordinations reference carriers and
// optionally a relation as their dual backing. Declaration order is kept for
// canonical rendering.
struct Instance {
  std::vector<std::pair<std::string, Algebra>> algebras;
  std::vector<std::pair<std::string, Algebra>> points;
  std::vector<std::pair<std::string, Relation>> relations;
  std::vector<std::pair<std::string, Subordination>> subordinations;

  const Algebra* find_carrier(const std::string& name) const;
  const Relation* find_relation(const std::string& name) const;
  const Subordination* find_subordination(const std::string& name) const;
};

// Parse from JSON text. Unknown keys are rejected; every subordination given
// by pairs is validated (S1-S4) on load; syntax errors carry line/column.
Instance parse_instance(const std::string& text);
Instance load_instance(const std::string& path);

// Canonical JSON rendering: fixed key order, two-space indent, trailing
// newline. parse_instance(render_instance(i)) reproduces i.
std::string render_instance(const Instance& inst);

// Deterministic seeded instance: one algebra and one point set of the given
// size, a random relation on the points, and a subordination with a random
// dual relation on the atoms.
Instance random_instance(int atoms, std::uint64_t seed);

}  // namespace dualvik
