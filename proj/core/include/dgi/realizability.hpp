#pragma once

// Realizability of an abstract distinguished graph as the invariant of an
// actual flow, plus the surface quantities of the glued complex.
//
// The realizability conditions, checked verbatim:
//   (a)  every edge letter occurs exactly twice across all boundary words,
//        exponents ignored;
//   (2)  at every vertex the incident edges form one chain under corner
//        adjacency (edges are adjacent when some word passes from one to the
//        other at that vertex);
//   (b)  every vertex has four half-edge ends, or two ends supplied by a
//        single loop (a free circle's marker point);
//   (c)  at every four-valent vertex each corner joins ends of edges from
//        different circle families.
//
// Checks run in the order a, link, b, c; link needs (a) to make sense and (c)
// needs the link to be a single chain, so those are left unevaluated when a
// prerequisite fails.

#include <optional>
#include <vector>

#include "dgi/model.hpp"

namespace dgi {

enum class VerdictState : std::uint8_t { Pass, Fail, NotEvaluated };

const char* verdict_state_name(VerdictState s);

template <class Offender>
struct Verdict {
  VerdictState state = VerdictState::NotEvaluated;
  std::vector<Offender> offenders;  // sorted, empty unless Fail

  bool passed() const { return state == VerdictState::Pass; }
  bool failed() const { return state == VerdictState::Fail; }
};

struct RealizabilityReport {
  Verdict<EdgeId> condition_a;
  Verdict<VertexId> link_connected;
  Verdict<VertexId> condition_b;
  Verdict<Corner> condition_c;
  bool overall = false;  // true iff all four pass
};

Verdict<EdgeId> check_condition_a(const DistinguishedGraph& g);

// Chain closure of corner adjacency on the edges incident to each vertex;
// equivalently on half-edge ends with a loop's two ends identified there.
// Meaningful on any structurally valid graph, conclusive under condition (a).
Verdict<VertexId> check_link_connected(const DistinguishedGraph& g);

Verdict<VertexId> check_condition_b(const DistinguishedGraph& g);

// Only corners at four-valent vertices are judged; loop vertices are exempt.
Verdict<Corner> check_condition_c(const DistinguishedGraph& g);

RealizabilityReport is_realizable(const DistinguishedGraph& g);

struct SurfaceInvariants {
  int euler_characteristic = 0;
  bool orientable = false;
  // Present iff orientable with even characteristic at most 2; then
  // euler_characteristic == 2 - 2 * genus.
  std::optional<int> genus;
};

// chi = |V| - |E| + sum over patches of (2 - 2 genus - #boundary words).
// Throws NonSurfaceError unless condition (a) passes.
int euler_characteristic(const DistinguishedGraph& g);

// Orientability by parity constraint propagation: one flip variable per
// patch; each edge's two traversals must end up with opposite exponents.
// Throws NonSurfaceError unless condition (a) passes.
SurfaceInvariants orientability_and_genus(const DistinguishedGraph& g);

// True when at every vertex the half-edge ends form one chain under corner
// adjacency. Under condition (a) every end lies in exactly two corners, so
// this says each vertex link is a single circle: the glued complex is a
// closed surface. Strictly stronger than check_link_connected at loops.
bool locally_planar(const DistinguishedGraph& g);

}  // namespace dgi
