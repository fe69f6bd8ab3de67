#pragma once

// Deciding equivalence of distinguished graphs, conjugacy of the induced
// dynamics via inner automorphisms, and a canonical code.
//
// An isomorphism maps vertices to vertices and edges to signed edges,
// preserving the circle family and incidence (a sign of -1 swaps the image's
// endpoints). It is an equivalence witness when substituting it into the
// first graph's boundary words matches the patch collections: a bijection of
// patches with equal genus whose word multisets agree directly ("equivalent")
// or after reversing one side ("reverse"). The paper's Lemma on orientation
// reads off the orientation behaviour from the flags: the witness preserves
// orientation iff every flag is direct.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dgi/model.hpp"
#include "dgi/words.hpp"

namespace dgi {

struct ResourceLimits {
  int max_edges = 64;                    // size guard for backtracking searches
  long long max_candidates = 10'000'000; // generation / orbit budget
  long long time_limit_ms = 60'000;      // wall-clock cap per census call
};

// Default limits with the optional DGI_MAX_EDGES environment override applied.
ResourceLimits limits_from_env();

struct GraphIsomorphism {
  std::map<VertexId, VertexId> vertex_map;
  std::map<EdgeId, SignedEdge> edge_map;
  bool operator==(const GraphIsomorphism&) const = default;
};

// An equivalence witness from a graph to itself; the combinatorial shadow of
// the map a diffeomorphism induces on its own invariant.
using InnerAutomorphism = GraphIsomorphism;

GraphIsomorphism identity_isomorphism(const DistinguishedGraph& g);

// Total bijections on vertices and edges, family preserved, incidence
// preserved under the declared signs.
bool is_valid_isomorphism(const DistinguishedGraph& g1,
                          const DistinguishedGraph& g2,
                          const GraphIsomorphism& iso);

// (outer ∘ inner)(x) = outer(inner(x)); edge signs multiply.
GraphIsomorphism compose(const GraphIsomorphism& outer,
                         const GraphIsomorphism& inner);

// Inverse bijection; an edge mapped with sign s maps back with the same sign.
GraphIsomorphism invert(const GraphIsomorphism& iso);

enum class PairFlag : std::uint8_t { Equivalent, Reverse };

struct PatchPair {
  std::size_t from = 0;  // patch index in the first graph
  std::size_t to = 0;    // patch index in the second graph
  PairFlag flag = PairFlag::Equivalent;
  auto operator<=>(const PatchPair&) const = default;
};

struct EquivalenceWitness {
  GraphIsomorphism iso;
  std::vector<PatchPair> patch_pairing;
  bool orientation_preserving = false;  // true iff every flag is Equivalent
};

enum class WitnessMode : std::uint8_t {
  AllowPatchReversal,     // per-patch reverse pairing allowed (default)
  OrientationPreserving,  // only direct pairings accepted
};

// Visits every family- and incidence-preserving isomorphism in a fixed order
// (vertices refined by degree and per-family end counts, candidates by id,
// loop signs + before -). Return false from the visitor to stop early.
// Throws ContractError when either graph is not structurally valid and
// ResourceError when either graph exceeds limits.max_edges.
void enumerate_isomorphisms(const DistinguishedGraph& g1,
                            const DistinguishedGraph& g2,
                            const std::function<bool(const GraphIsomorphism&)>& visit,
                            const ResourceLimits& limits = {});

std::vector<GraphIsomorphism> all_isomorphisms(const DistinguishedGraph& g1,
                                               const DistinguishedGraph& g2,
                                               const ResourceLimits& limits = {});

// Checks one candidate isomorphism. Throws ContractError if it is not a valid
// isomorphism g1 -> g2; returns nothing if the patch collections do not match.
std::optional<EquivalenceWitness> is_equivalence_witness(
    const DistinguishedGraph& g1, const DistinguishedGraph& g2,
    const GraphIsomorphism& iso,
    WitnessMode mode = WitnessMode::AllowPatchReversal);

// First witness in enumeration order, if any.
std::optional<EquivalenceWitness> are_equivalent(
    const DistinguishedGraph& g1, const DistinguishedGraph& g2,
    WitnessMode mode = WitnessMode::AllowPatchReversal,
    const ResourceLimits& limits = {});

bool is_inner_automorphism(const DistinguishedGraph& g,
                           const GraphIsomorphism& a);

// Witness of conjugacy: an equivalence witness phi with phi∘s1 = s2∘phi on
// vertices and signed edges. Throws ContractError when s1 or s2 is not an
// inner automorphism of its graph.
std::optional<EquivalenceWitness> are_conjugate(
    const DistinguishedGraph& g1, const InnerAutomorphism& s1,
    const DistinguishedGraph& g2, const InnerAutomorphism& s2,
    WitnessMode mode = WitnessMode::AllowPatchReversal,
    const ResourceLimits& limits = {});

// Total byte order; equal codes iff the graphs are equivalent.
struct CanonicalCode {
  std::string bytes;
  auto operator<=>(const CanonicalCode&) const = default;
};

// Lexicographically minimal serialization over every relabeling of vertices
// and edges into fixed ranges, every edge orientation flip, every patch
// ordering, every word rotation and every uniform per-patch reversal.
// Cross-validated against are_equivalent by the test suite, never assumed.
CanonicalCode canonical_code(const DistinguishedGraph& g,
                             const ResourceLimits& limits = {});

// The code together with a labeling that achieves it: an isomorphism onto
// synthetic canonical ids ("0", "1", ...) whose edge signs record the
// orientation flips of the minimal serialization. For graphs with equal
// codes, compose(invert(form2.to_canonical), form1.to_canonical) is an
// isomorphism from the first graph to the second that carries the patch
// collections onto each other.
struct CanonicalForm {
  CanonicalCode code;
  GraphIsomorphism to_canonical;
};

CanonicalForm canonical_form(const DistinguishedGraph& g,
                             const ResourceLimits& limits = {});

}  // namespace dgi
