#pragma once

#include <cstdint>
#include <string>

namespace dualvik {

// Size caps. Everything above a cap is rejected with CapExceeded instead of
// silently running forever; callers may raise them explicitly.
struct Caps {
  int exhaustive = 2;     // max carrier size for exhaustive sweeps
  int randomized = 3;     // max carrier size for seeded random sweeps
  int vietoris = 10;      // max base-point count for Vietoris constructions
  int enumeration = 16;   // max atom count for element enumeration
  int axiom_check = 6;    // max atom count for exhaustive axiom checks
  int k_matrix = 3;       // max base atoms for K-membership matrices
  int k_subordination = 2;  // max base atoms for K-level Subordination objects
  int ideal_enum = 4;     // max atom count for S-ideal enumeration
};

enum class ReportFormat { text, json };

// One run of the verification machinery: a single seed drives every random
// choice, so equal configs produce byte-identical reports.
struct RunConfig {
  std::uint64_t seed = 1;
  int samples = 0;  // random instances at the `randomized` size, on top of the exhaustive family
  Caps caps;
  ReportFormat format = ReportFormat::text;
};

}  // namespace dualvik
