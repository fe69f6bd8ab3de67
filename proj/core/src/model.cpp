#include "dgi/model.hpp"

#include <algorithm>
#include <numeric>

#include "dgi/errors.hpp"

namespace dgi {

char family_letter(CircleFamily f) {
  return f == CircleFamily::Unstable ? 'U' : 'V';
}

std::optional<CircleFamily> family_from_letter(char c) {
  switch (c) {
    case 'U': return CircleFamily::Unstable;
    case 'V': return CircleFamily::Stable;
    default: return std::nullopt;
  }
}

void normalize(DistinguishedGraph& g) {
  std::sort(g.vertices.begin(), g.vertices.end());
  std::sort(g.edges.begin(), g.edges.end(),
            [](const Edge& a, const Edge& b) { return a.id < b.id; });
}

EdgeEnd departure_end(const Letter& l) {
  return {l.edge, l.exponent >= 0 ? EndKind::Tail : EndKind::Head};
}

EdgeEnd arrival_end(const Letter& l) {
  return {l.edge, l.exponent >= 0 ? EndKind::Head : EndKind::Tail};
}

const char* violation_kind_name(ViolationKind k) {
  switch (k) {
    case ViolationKind::DuplicateVertexId: return "duplicate-vertex-id";
    case ViolationKind::DuplicateEdgeId: return "duplicate-edge-id";
    case ViolationKind::DanglingEndpoint: return "dangling-endpoint";
    case ViolationKind::DanglingEdgeReference: return "dangling-edge-reference";
    case ViolationKind::EmptyPatch: return "empty-patch";
    case ViolationKind::EmptyWord: return "empty-word";
    case ViolationKind::BrokenChaining: return "broken-chaining";
    case ViolationKind::NoEdges: return "no-edges";
    case ViolationKind::DisconnectedComplex: return "disconnected-complex";
  }
  return "unknown";
}

const Edge* find_edge(const DistinguishedGraph& g, const EdgeId& id) {
  for (const Edge& e : g.edges) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

bool has_vertex(const DistinguishedGraph& g, const VertexId& id) {
  return std::find(g.vertices.begin(), g.vertices.end(), id) !=
         g.vertices.end();
}

int degree(const DistinguishedGraph& g, const VertexId& v) {
  if (!has_vertex(g, v)) {
    throw ContractError("degree: unknown vertex '" + v.value + "'");
  }
  int d = 0;
  for (const Edge& e : g.edges) {
    if (e.tail == v) ++d;
    if (e.head == v) ++d;
  }
  return d;
}

std::size_t total_letter_count(const DistinguishedGraph& g) {
  std::size_t n = 0;
  for (const Patch& p : g.patches) {
    for (const Word& w : p.boundary) n += w.letters.size();
  }
  return n;
}

namespace {

VertexId end_vertex(const Edge& e, EndKind k) {
  return k == EndKind::Tail ? e.tail : e.head;
}

Corner make_corner(const VertexId& at, EdgeEnd a, EdgeEnd b) {
  if (b < a) std::swap(a, b);
  return Corner{at, a, b};
}

// Plain union-find, indices into whatever node numbering the caller uses.
struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Indices into a container, ordered by id value with declaration order
// breaking ties, so lookups resolve duplicated ids to the first declaration
// the way map insertion would.
template <class GetId>
std::vector<int> sorted_by_id(std::size_t count, GetId&& id_at) {
  std::vector<int> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    const auto& ix = id_at(x);
    const auto& iy = id_at(y);
    if (ix != iy) return ix < iy;
    return x < y;
  });
  return order;
}

// First declared element carrying the id, or -1.
template <class GetId, class IdT>
int lookup_id(const std::vector<int>& order, GetId&& id_at, const IdT& key) {
  auto it = std::lower_bound(order.begin(), order.end(), key,
                             [&](int x, const IdT& k) { return id_at(x) < k; });
  if (it == order.end() || !(id_at(*it) == key)) return -1;
  return *it;
}

// Connectivity over precomputed id orders, shared between the public check
// and validate so the sort work is not repeated.
bool connected_impl(const DistinguishedGraph& g, const std::vector<int>& vord,
                    const std::vector<int>& eord) {
  const int nv = static_cast<int>(g.vertices.size());
  const int ne = static_cast<int>(g.edges.size());
  const int np = static_cast<int>(g.patches.size());
  if (nv + ne + np == 0) return true;

  auto vid = [&](int i) -> const VertexId& { return g.vertices[i]; };
  auto eid = [&](int i) -> const EdgeId& { return g.edges[i].id; };

  // Nodes: vertices, then edges, then patches.
  UnionFind uf(nv + ne + np);
  for (int i = 0; i < ne; ++i) {
    const int t = lookup_id(vord, vid, g.edges[i].tail);
    const int h = lookup_id(vord, vid, g.edges[i].head);
    if (t >= 0) uf.unite(nv + i, t);
    if (h >= 0) uf.unite(nv + i, h);
  }
  for (int i = 0; i < np; ++i) {
    for (const Word& w : g.patches[i].boundary) {
      for (const Letter& l : w.letters) {
        const int e = lookup_id(eord, eid, l.edge);
        if (e >= 0) uf.unite(nv + ne + i, nv + e);
      }
    }
  }

  const int root = uf.find(0);
  for (int i = 1; i < nv + ne + np; ++i) {
    if (uf.find(i) != root) return false;
  }
  return true;
}

}  // namespace

std::vector<Corner> corners(const DistinguishedGraph& g) {
  auto eid = [&](int i) -> const EdgeId& { return g.edges[i].id; };
  const std::vector<int> eord = sorted_by_id(g.edges.size(), eid);

  std::vector<Corner> out;
  out.reserve(total_letter_count(g));
  for (const Patch& p : g.patches) {
    for (const Word& w : p.boundary) {
      const std::size_t n = w.letters.size();
      for (std::size_t k = 0; k < n; ++k) {
        const Letter& cur = w.letters[k];
        const Letter& nxt = w.letters[(k + 1) % n];
        const int e = lookup_id(eord, eid, cur.edge);
        if (e < 0) {
          throw ContractError("corners: unknown edge '" + cur.edge.value + "'");
        }
        EdgeEnd arr = arrival_end(cur);
        EdgeEnd dep = departure_end(nxt);
        out.push_back(make_corner(end_vertex(g.edges[e], arr.end), arr, dep));
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool complex_connected(const DistinguishedGraph& g) {
  auto vid = [&](int i) -> const VertexId& { return g.vertices[i]; };
  auto eid = [&](int i) -> const EdgeId& { return g.edges[i].id; };
  const std::vector<int> vord = sorted_by_id(g.vertices.size(), vid);
  const std::vector<int> eord = sorted_by_id(g.edges.size(), eid);
  return connected_impl(g, vord, eord);
}

ValidationReport validate(const DistinguishedGraph& g) {
  ValidationReport report;
  auto add = [&](ViolationKind k, std::string msg) {
    report.violations.push_back({k, std::move(msg)});
  };

  auto vid = [&](int i) -> const VertexId& { return g.vertices[i]; };
  auto eid = [&](int i) -> const EdgeId& { return g.edges[i].id; };
  const std::vector<int> vord = sorted_by_id(g.vertices.size(), vid);
  const std::vector<int> eord = sorted_by_id(g.edges.size(), eid);

  // Duplicate ids; every declaration after the first is flagged, in
  // declaration order.
  bool ids_ok = true;
  {
    std::vector<int> dups;
    for (std::size_t k = 1; k < vord.size(); ++k) {
      if (vid(vord[k]) == vid(vord[k - 1])) dups.push_back(vord[k]);
    }
    std::sort(dups.begin(), dups.end());
    for (int i : dups) {
      add(ViolationKind::DuplicateVertexId,
          "vertex id '" + g.vertices[i].value + "' declared more than once");
      ids_ok = false;
    }
    dups.clear();
    for (std::size_t k = 1; k < eord.size(); ++k) {
      if (eid(eord[k]) == eid(eord[k - 1])) dups.push_back(eord[k]);
    }
    std::sort(dups.begin(), dups.end());
    for (int i : dups) {
      add(ViolationKind::DuplicateEdgeId,
          "edge id '" + g.edges[i].id.value + "' declared more than once");
      ids_ok = false;
    }
  }

  // Edge endpoints.
  bool refs_ok = true;
  for (const Edge& e : g.edges) {
    if (lookup_id(vord, vid, e.tail) < 0) {
      add(ViolationKind::DanglingEndpoint, "edge '" + e.id.value +
              "' tail names unknown vertex '" + e.tail.value + "'");
      refs_ok = false;
    }
    if (lookup_id(vord, vid, e.head) < 0) {
      add(ViolationKind::DanglingEndpoint, "edge '" + e.id.value +
              "' head names unknown vertex '" + e.head.value + "'");
      refs_ok = false;
    }
  }

  if (g.edges.empty()) {
    add(ViolationKind::NoEdges, "graph has no edges");
  }

  // Patch structure and letter references.
  std::vector<int> widx;
  for (std::size_t pi = 0; pi < g.patches.size(); ++pi) {
    const Patch& p = g.patches[pi];
    if (p.boundary.empty()) {
      add(ViolationKind::EmptyPatch,
          "patch " + std::to_string(pi) + " has no boundary words");
      continue;
    }
    for (std::size_t wi = 0; wi < p.boundary.size(); ++wi) {
      const Word& w = p.boundary[wi];
      if (w.letters.empty()) {
        add(ViolationKind::EmptyWord, "patch " + std::to_string(pi) +
                " word " + std::to_string(wi) + " is empty");
        continue;
      }
      bool resolved = true;
      widx.clear();
      for (const Letter& l : w.letters) {
        const int e = lookup_id(eord, eid, l.edge);
        widx.push_back(e);
        if (e < 0) {
          add(ViolationKind::DanglingEdgeReference,
              "patch " + std::to_string(pi) + " word " + std::to_string(wi) +
                  " names unknown edge '" + l.edge.value + "'");
          resolved = false;
          refs_ok = false;
        }
      }
      if (!resolved) continue;
      const std::size_t n = w.letters.size();
      for (std::size_t k = 0; k < n; ++k) {
        const Edge& ce = g.edges[widx[k]];
        const Edge& ne = g.edges[widx[(k + 1) % n]];
        // A positive letter runs tail to head, so it arrives at the head and
        // the next letter departs from its tail end.
        const VertexId& arrive = w.letters[k].exponent >= 0 ? ce.head : ce.tail;
        const VertexId& depart =
            w.letters[(k + 1) % n].exponent >= 0 ? ne.tail : ne.head;
        if (arrive != depart) {
          add(ViolationKind::BrokenChaining,
              "patch " + std::to_string(pi) + " word " + std::to_string(wi) +
                  ": letter " + std::to_string(k) + " arrives at '" +
                  arrive.value + "' but the next letter departs from '" +
                  depart.value + "'");
        }
      }
    }
  }

  // Connectivity is only meaningful once ids and references resolve.
  if (ids_ok && refs_ok && !g.edges.empty() &&
      !connected_impl(g, vord, eord)) {
    add(ViolationKind::DisconnectedComplex,
        "the glued complex (graph plus patches) is not connected");
  }

  return report;
}

}  // namespace dgi
