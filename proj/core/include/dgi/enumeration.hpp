#pragma once

// Exhaustive census of small distinguished graphs up to equivalence, plus
// mutation and relabeling helpers for negative and property testing.

#include <cstdint>
#include <vector>

#include "dgi/equivalence.hpp"
#include "dgi/realizability.hpp"

namespace dgi {

struct EnumerationParams {
  int max_edges = 1;              // >= 1
  bool require_orientable = false;
  // Structural validity already forces a connected complex; the flag is kept
  // for callers that want to state the requirement explicitly.
  bool require_connected = true;
  int max_patch_genus = 0;        // genus cap per patch; censuses are infinite without one
};

struct CensusEntry {
  DistinguishedGraph representative;  // first generated member of the class
  CanonicalCode code;
  SurfaceInvariants invariants;
  long long class_size = 0;  // generated instances that collapsed here
};

// Generates every structurally valid graph within the caps whose valences
// satisfy condition (b), whose letters satisfy condition (a), and whose word
// structure is corner-compatible (each vertex link a single circle, i.e. the
// complex is a closed surface); keeps those passing is_realizable; dedupes by
// canonical code, cross-validating collisions with are_equivalent. Entries
// come back sorted by code. Deterministic. Throws ResourceError when the
// candidate budget or time cap is exceeded.
std::vector<CensusEntry> enumerate_census(const EnumerationParams& params,
                                          const ResourceLimits& limits = {});

enum class MutationTarget : std::uint8_t {
  ConditionA,
  LinkConnected,
  ConditionB,
  ConditionC,
  Orientability,
};

// Structurally valid variants of g that break exactly the targeted property:
// dropped or duplicated letters for (a), resequenced words for the link,
// a fresh loop traversed immediately for (b), transposed letters for (c),
// a flipped loop exponent for orientability. May be empty when no mutation
// of that shape exists. Deterministic order.
std::vector<DistinguishedGraph> mutate(const DistinguishedGraph& g,
                                       MutationTarget target);

// Seed-deterministic permutation of vertex and edge ids (within the existing
// id sets), word rotations, per-patch reversals and container reordering.
// The result is equivalent to g by construction.
DistinguishedGraph random_relabel(const DistinguishedGraph& g,
                                  std::uint64_t seed);

}  // namespace dgi
