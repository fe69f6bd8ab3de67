#pragma once

// Combinatorial model of a distinguished graph.
//
// The object is the trace a gradient-like flow leaves on a Heegaard surface:
// two families of circles (sections of the one-dimensional unstable and stable
// manifolds) meeting in isolated points. Crossing points and one marker point
// per free circle become vertices; the arcs between them become edges, each
// belonging to one circle family. The components of the surface minus the
// circles are recorded as patches: a genus plus the cyclic boundary words the
// patch traces along the edges. A word letter is an edge with exponent +1
// (traversed tail to head) or -1 (head to tail).
//
// Everything incidence-related (degree, corners, links) is phrased in terms of
// half-edge ends: a loop has two distinct ends at its vertex, and statements
// about "the edges at a vertex" are ambiguous exactly there.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dgi {

template <class Tag>
struct Id {
  std::string value;
  auto operator<=>(const Id&) const = default;
};

struct VertexIdTag {};
struct EdgeIdTag {};
using VertexId = Id<VertexIdTag>;
using EdgeId = Id<EdgeIdTag>;

// Unstable carries the circles cut out by unstable manifolds of saddle points
// of the first kind, Stable those of the second kind. The two families are
// distinguishable: no symmetry of the invariant may swap them.
enum class CircleFamily : std::uint8_t { Unstable, Stable };

char family_letter(CircleFamily f);
std::optional<CircleFamily> family_from_letter(char c);

struct Edge {
  EdgeId id;
  VertexId tail;
  VertexId head;  // reference orientation runs tail -> head
  CircleFamily family = CircleFamily::Unstable;

  bool is_loop() const { return tail == head; }
  auto operator<=>(const Edge&) const = default;
};

struct Letter {
  EdgeId edge;
  int exponent = 1;  // +1 or -1
  auto operator<=>(const Letter&) const = default;
};

// A cyclic sequence of letters; the stored rotation is not significant.
// Consecutive letters chain through vertices: the vertex a letter arrives at
// equals the vertex the next letter departs from (cyclically).
struct Word {
  std::vector<Letter> letters;
  auto operator<=>(const Word&) const = default;
};

struct Patch {
  int genus = 0;               // nonnegative
  std::vector<Word> boundary;  // nonempty multiset; order not significant
  auto operator<=>(const Patch&) const = default;
};

struct DistinguishedGraph {
  std::vector<VertexId> vertices;  // unique ids
  std::vector<Edge> edges;         // unique ids
  std::vector<Patch> patches;      // multiset
  auto operator<=>(const DistinguishedGraph&) const = default;
};

// Sorts vertices and edges by id. IDs themselves are never rewritten.
void normalize(DistinguishedGraph& g);

// ---- half-edge ends and corners ----

enum class EndKind : std::uint8_t { Tail, Head };

struct EdgeEnd {
  EdgeId edge;
  EndKind end = EndKind::Tail;
  auto operator<=>(const EdgeEnd&) const = default;
};

// End a traversal leaves from / arrives at, under the letter's exponent.
EdgeEnd departure_end(const Letter& l);
EdgeEnd arrival_end(const Letter& l);

// Unordered pair of half-edge ends meeting at a vertex, produced by two
// cyclically consecutive letters of a boundary word. The two ends may
// coincide (a boundary word making a U-turn around a loop end).
struct Corner {
  VertexId at;
  EdgeEnd first;   // normalized: first <= second
  EdgeEnd second;
  auto operator<=>(const Corner&) const = default;
};

// ---- structural validation ----

enum class ViolationKind : std::uint8_t {
  DuplicateVertexId,
  DuplicateEdgeId,
  DanglingEndpoint,       // edge endpoint names no declared vertex
  DanglingEdgeReference,  // word letter names no declared edge
  EmptyPatch,             // patch without boundary words
  EmptyWord,              // word without letters
  BrokenChaining,         // consecutive letters do not share a vertex
  NoEdges,
  DisconnectedComplex,    // graph plus patches does not glue connectedly
};

const char* violation_kind_name(ViolationKind k);

struct Violation {
  ViolationKind kind;
  std::string message;
};

// All violated invariants, in a deterministic order. An empty report means
// "structurally valid"; every operation below assumes that unless noted.
struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate(const DistinguishedGraph& g);

// Connectivity of the glued complex: vertices, edges and patches as one
// incidence structure. Patches reach every edge their boundary words name, so
// a patch with several boundary words can bridge graph components.
bool complex_connected(const DistinguishedGraph& g);

// Number of half-edge ends at v (a loop counts twice).
// Throws ContractError if v is not a vertex of g.
int degree(const DistinguishedGraph& g, const VertexId& v);

// The corner multiset of all boundary words, sorted. Its size equals the
// total letter count: each consecutive pair contributes one corner, and a
// word of length one contributes the corner joining its letter's two ends.
std::vector<Corner> corners(const DistinguishedGraph& g);

std::size_t total_letter_count(const DistinguishedGraph& g);

const Edge* find_edge(const DistinguishedGraph& g, const EdgeId& id);
bool has_vertex(const DistinguishedGraph& g, const VertexId& id);

}  // namespace dgi
