#include "dgi/realizability.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dgi/errors.hpp"

namespace dgi {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Occurrence counts of each edge letter across all boundary words,
// irrespective of exponent.
std::map<EdgeId, int> letter_counts(const DistinguishedGraph& g) {
  std::map<EdgeId, int> counts;
  for (const Edge& e : g.edges) counts.emplace(e.id, 0);
  for (const Patch& p : g.patches) {
    for (const Word& w : p.boundary) {
      for (const Letter& l : w.letters) ++counts[l.edge];
    }
  }
  return counts;
}

void require_condition_a(const DistinguishedGraph& g, const char* op) {
  Verdict<EdgeId> a = check_condition_a(g);
  if (!a.passed()) {
    throw NonSurfaceError(std::string(op) +
                          ": boundary words do not traverse every edge "
                          "exactly twice (first offender '" +
                          a.offenders.front().value + "')");
  }
}

}  // namespace

const char* verdict_state_name(VerdictState s) {
  switch (s) {
    case VerdictState::Pass:
      return "pass";
    case VerdictState::Fail:
      return "fail";
    case VerdictState::NotEvaluated:
      return "not_evaluated";
  }
  return "unknown";
}

Verdict<EdgeId> check_condition_a(const DistinguishedGraph& g) {
  Verdict<EdgeId> v;
  v.state = VerdictState::Pass;
  for (const auto& [id, count] : letter_counts(g)) {
    if (count != 2) v.offenders.push_back(id);
  }
  if (!v.offenders.empty()) v.state = VerdictState::Fail;
  return v;
}

// The link of a vertex: take every edge incident to the vertex and declare
// two edges adjacent whenever some corner of a boundary word joins them
// there. The vertex passes when this relation has a single class over its
// incident edges.
Verdict<VertexId> check_link_connected(const DistinguishedGraph& g) {
  Verdict<VertexId> v;
  v.state = VerdictState::Pass;

  std::map<VertexId, std::set<EdgeId>> incident;
  for (const VertexId& vid : g.vertices) incident[vid];
  for (const Edge& e : g.edges) {
    incident[e.tail].insert(e.id);
    incident[e.head].insert(e.id);
  }

  std::map<VertexId, std::map<EdgeId, int>> index;
  std::map<VertexId, UnionFind> uf;
  for (const auto& [vid, edges] : incident) {
    int i = 0;
    for (const EdgeId& e : edges) index[vid].emplace(e, i++);
    uf.emplace(vid, UnionFind(edges.size()));
  }

  for (const Corner& c : corners(g)) {
    auto& at = uf.at(c.at);
    const auto& idx = index.at(c.at);
    at.unite(idx.at(c.first.edge), idx.at(c.second.edge));
  }

  for (const auto& [vid, edges] : incident) {
    if (edges.empty()) continue;  // isolated vertex, reported by condition b
    auto& u = uf.at(vid);
    const int root = u.find(0);
    bool connected = true;
    for (std::size_t i = 1; i < edges.size(); ++i) {
      if (u.find(static_cast<int>(i)) != root) {
        connected = false;
        break;
      }
    }
    if (!connected) v.offenders.push_back(vid);
  }
  if (!v.offenders.empty()) v.state = VerdictState::Fail;
  return v;
}

Verdict<VertexId> check_condition_b(const DistinguishedGraph& g) {
  Verdict<VertexId> v;
  v.state = VerdictState::Pass;
  for (const VertexId& vid : g.vertices) {
    const int d = degree(g, vid);
    if (d == 4) continue;
    if (d == 2) {
      // Degree two must come from a single loop edge, not two edge ends.
      int loops = 0, others = 0;
      for (const Edge& e : g.edges) {
        if (e.is_loop() && e.tail == vid) ++loops;
        else if (e.tail == vid || e.head == vid) ++others;
      }
      if (loops == 1 && others == 0) continue;
    }
    v.offenders.push_back(vid);
  }
  std::sort(v.offenders.begin(), v.offenders.end());
  if (!v.offenders.empty()) v.state = VerdictState::Fail;
  return v;
}

Verdict<Corner> check_condition_c(const DistinguishedGraph& g) {
  Verdict<Corner> v;
  v.state = VerdictState::Pass;
  std::map<EdgeId, const Edge*> by_id;
  for (const Edge& e : g.edges) by_id.emplace(e.id, &e);
  for (const Corner& c : corners(g)) {
    if (degree(g, c.at) != 4) continue;
    if (by_id.at(c.first.edge)->family == by_id.at(c.second.edge)->family) {
      v.offenders.push_back(c);
    }
  }
  if (!v.offenders.empty()) v.state = VerdictState::Fail;
  return v;
}

RealizabilityReport is_realizable(const DistinguishedGraph& g) {
  RealizabilityReport r;
  r.condition_a = check_condition_a(g);
  if (r.condition_a.passed()) {
    r.link_connected = check_link_connected(g);
  }
  r.condition_b = check_condition_b(g);
  if (r.condition_a.passed() && r.link_connected.passed()) {
    r.condition_c = check_condition_c(g);
  }
  r.overall = r.condition_a.passed() && r.link_connected.passed() &&
              r.condition_b.passed() && r.condition_c.passed();
  return r;
}

int euler_characteristic(const DistinguishedGraph& g) {
  require_condition_a(g, "euler_characteristic");
  int patch_term = 0;
  for (const Patch& p : g.patches) {
    patch_term += 2 - 2 * p.genus - static_cast<int>(p.boundary.size());
  }
  return static_cast<int>(g.vertices.size()) -
         static_cast<int>(g.edges.size()) + patch_term;
}

// Orientability: orient each patch up to a flip variable. An edge appears in
// boundary words exactly twice; on an orientable glued surface the two
// traversals run in opposite directions once patch orientations are chosen
// coherently. Each edge therefore constrains the flip parity of the one or
// two patches holding its occurrences, and the system is solvable exactly
// when a parity union-find over patches stays consistent.
SurfaceInvariants orientability_and_genus(const DistinguishedGraph& g) {
  require_condition_a(g, "orientability_and_genus");

  const int np = static_cast<int>(g.patches.size());
  // parent link with parity relative to parent
  std::vector<int> parent(np), rel(np, 0);
  for (int i = 0; i < np; ++i) parent[i] = i;
  auto parity_of = [&](int x) {
    int par = 0;
    while (parent[x] != x) {
      par ^= rel[x];
      x = parent[x];
    }
    return std::pair<int, int>(x, par);
  };

  struct Occurrence {
    int patch;
    int exponent;
  };
  std::map<EdgeId, std::vector<Occurrence>> occ;
  for (int pi = 0; pi < np; ++pi) {
    for (const Word& w : g.patches[pi].boundary) {
      for (const Letter& l : w.letters) {
        occ[l.edge].push_back({pi, l.exponent});
      }
    }
  }

  bool orientable = true;
  for (const auto& [eid, v] : occ) {
    // exactly two occurrences, guaranteed above
    const Occurrence& x = v[0];
    const Occurrence& y = v[1];
    // After flips the exponents must be opposite, so the two patch flips
    // must differ exactly when the raw exponents agree.
    const int need = (x.exponent == y.exponent) ? 1 : 0;
    auto [rx, px] = parity_of(x.patch);
    auto [ry, py] = parity_of(y.patch);
    if (rx == ry) {
      if ((px ^ py) != need) {
        orientable = false;
        break;
      }
    } else {
      parent[rx] = ry;
      rel[rx] = px ^ py ^ need;
    }
  }

  SurfaceInvariants inv;
  inv.euler_characteristic = euler_characteristic(g);
  inv.orientable = orientable;
  if (orientable && inv.euler_characteristic <= 2 &&
      inv.euler_characteristic % 2 == 0) {
    inv.genus = (2 - inv.euler_characteristic) / 2;
  }
  return inv;
}

// Strong form of link connectivity on half-edges: the ends incident to a
// vertex (a loop contributes both of its ends) must be joined into a single
// cycle by the corners alone. Under condition (a) every end is met by
// exactly two corners, so connectivity of the corner relation on ends is
// equivalent to the link being one circle, which is what an actual surface
// neighborhood provides.
bool locally_planar(const DistinguishedGraph& g) {
  if (!check_condition_a(g).passed()) return false;

  std::map<VertexId, std::vector<EdgeEnd>> ends;
  for (const VertexId& v : g.vertices) ends[v];
  for (const Edge& e : g.edges) {
    ends[e.tail].push_back({e.id, EndKind::Tail});
    ends[e.head].push_back({e.id, EndKind::Head});
  }

  std::map<VertexId, std::map<EdgeEnd, int>> index;
  std::map<VertexId, UnionFind> uf;
  for (const auto& [v, list] : ends) {
    int i = 0;
    for (const EdgeEnd& ee : list) index[v].emplace(ee, i++);
    uf.emplace(v, UnionFind(list.size()));
  }

  for (const Corner& c : corners(g)) {
    auto& at = uf.at(c.at);
    const auto& idx = index.at(c.at);
    at.unite(idx.at(c.first), idx.at(c.second));
  }

  for (const auto& [v, list] : ends) {
    if (list.empty()) return false;  // isolated vertex has no link at all
    auto& u = uf.at(v);
    const int root = u.find(0);
    for (std::size_t i = 1; i < list.size(); ++i) {
      if (u.find(static_cast<int>(i)) != root) return false;
    }
  }
  return true;
}

}  // namespace dgi
