#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dualvik/config.hpp"
#include "dualvik/rel.hpp"
#include "dualvik/s5mac.hpp"
#include "dualvik/subord.hpp"

namespace dualvik {

// The two directions of the finite duality, under their functor names.
Subordination clop_mor(const Relation& r);
Relation uf_mor(const Subordination& s);

// Quotient action on a compatible relation: project both sides. Validates
// R ∘ E1 = R = E2 ∘ R.
Relation q_mor(const Relation& r, const Relation& e1, const Relation& e2);

// Finite covers are trivial: every finite Hausdorff space is discrete.
struct CoveredSpace {
  Algebra points;
  Relation cover;  // the identity equivalence
};

CoveredSpace gleason_finite(const Algebra& x);
Relation gleason_mor(const Relation& r);

// The regular-open functor; on finite discrete spaces every subset is
// regular open and closure is the identity, so this coincides with clop_mor.
// Kept as its own name so each verified square reads like its source.
Subordination d_mor(const Relation& r);

enum class Square {
  vr_box,
  vr_diamond,
  vr_em,
  ks_dagger,
  vr_dagger,
  stone_e,
  macneille,
  dev,
  frame,
};

std::string square_name(Square s);
Square square_from_name(std::string_view name);  // ValidationError on unknown
std::vector<Square> all_squares();

struct SquareReport {
  Square square;
  std::string instance;  // deterministic description of the generated input
  std::string left;      // rendered left-path value
  std::string right;     // rendered right-path value
  bool pass;
  std::string witness;   // first mismatch; empty when passing
};

// Runs the square's exhaustive instance family at the configured size plus
// `samples` seeded random instances, and returns one report per instance.
std::vector<SquareReport> verify_square(Square s, const RunConfig& config);

}  // namespace dualvik
