#include "dgi/equivalence.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <set>
#include <string>
#include <tuple>
#include <type_traits>

#include "dgi/errors.hpp"

namespace dgi {

namespace {

void require_valid(const DistinguishedGraph& g, const char* op) {
  ValidationReport r = validate(g);
  if (!r.ok()) {
    throw ContractError(std::string(op) + ": input graph is not structurally "
                        "valid (" + r.violations.front().message + ")");
  }
}

// Failure path of the integer-space validity check in Indexed::fill below;
// runs the string-based validation once more to phrase the message from the
// canonical report.
[[noreturn]] void throw_invalid(const DistinguishedGraph& g, const char* op) {
  require_valid(g, op);
  throw ContractError(std::string(op) +
                      ": input graph is not structurally valid");
}

void check_edge_cap(const DistinguishedGraph& g, const ResourceLimits& limits,
                    const char* op) {
  if (static_cast<int>(g.edges.size()) > limits.max_edges) {
    throw ResourceError("max_edges", std::string(op) + " on " +
                          std::to_string(g.edges.size()) + " edges (cap " +
                          std::to_string(limits.max_edges) + ")");
  }
}

// Smallest rotation of an integer-encoded cyclic word, by index comparison.
std::size_t min_rotation_start(const int* s, std::size_t len) {
  std::size_t best_r = 0;
  for (std::size_t r = 1; r < len; ++r) {
    for (std::size_t k = 0; k < len; ++k) {
      const int a = s[(r + k) % len];
      const int b = s[(best_r + k) % len];
      if (a != b) {
        if (a < b) best_r = r;
        break;
      }
    }
  }
  return best_r;
}

// Deterministic 64-bit mixer (splitmix64 finalizer); shape hashes built from
// it are stable across runs and platforms.
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Id-sorted view with small-integer indices for the backtracking searches.
// Endpoints are pre-resolved to indices and every edge and vertex carries a
// shape hash summarizing how it sits inside the patch system; equal shapes
// are necessary for any assignment extending to an equivalence witness, so
// the witness searches use them as filters (pure skeleton isomorphism
// enumeration must not).
//
// fill() doubles as the validity check: every structural rule validate()
// enforces has an integer-space twin along the resolution work fill() does
// anyway, so the hot entry points skip the separate string-based pass and
// only fall back to validate() (via throw_invalid) to phrase the error.
// Instances are reusable; buffers keep their capacity across fills, which
// the equivalence and conjugacy deciders exploit with thread-local scratch.
struct Indexed {
  std::vector<VertexId> verts;           // sorted
  std::vector<Edge> edges;               // sorted by id
  std::vector<int> etail, ehead;         // per edge: endpoint vertex indices
  std::vector<unsigned char> eloop;      // per edge: tail == head
  // per vertex: degree, unstable ends, stable ends, unstable loops, stable
  // loops; loops count once per edge
  std::vector<std::array<int, 5>> sig;
  std::vector<std::array<int, 5>> sig_multiset;  // sorted copy of sig
  std::array<int, 2> edges_by_family{0, 0};
  // Multiset hash over an edge's word occurrences of (word length, patch
  // genus, patch word count, patch letter total, occurrences in this word);
  // invariant under relabeling, edge flips and patch reversal.
  std::vector<std::uint64_t> eshape;
  // Vertex signature plus the multiset of incident edge shapes.
  std::vector<std::uint64_t> vshape;
  // Multiset hash of (genus, word length multiset) over all patches.
  std::uint64_t pshape = 0;
  // Flat patch storage: a word is a slice of wbuf, a patch a run of words.
  // Letters are encoded as the edge index for a positive exponent and
  // m + index for a negative one.
  struct WordRef {
    int off = 0;
    int len = 0;
  };
  struct PatchRef {
    int genus = 0;
    int first = 0;  // index of the patch's first word
    int count = 0;
  };
  std::vector<int> wbuf;
  std::vector<WordRef> words;
  std::vector<PatchRef> patches;
  bool ok = false;  // whether the last fill() saw a structurally valid graph

  int vindex(const VertexId& v) const {
    return static_cast<int>(
        std::lower_bound(verts.begin(), verts.end(), v) - verts.begin());
  }
  int eindex(const EdgeId& id) const {
    return static_cast<int>(
        std::lower_bound(edges.begin(), edges.end(), id,
                         [](const Edge& e, const EdgeId& key) {
                           return e.id < key;
                         }) -
        edges.begin());
  }
  // Resolving variants; -1 when the id is absent.
  int find_vertex(const VertexId& v) const {
    const int i = vindex(v);
    return i < static_cast<int>(verts.size()) && verts[i] == v ? i : -1;
  }
  int find_edge(const EdgeId& id) const {
    const int i = eindex(id);
    return i < static_cast<int>(edges.size()) && edges[i].id == id ? i : -1;
  }

  Indexed() = default;
  explicit Indexed(const DistinguishedGraph& g) { fill(g); }

  // Builds the view and reports whether g is structurally valid, with the
  // exact same verdict validate() reaches: unique ids, resolving endpoint
  // and letter references, at least one edge, no empty patch or word, every
  // word chained end to end, and a connected glued complex. On a false
  // return the view's contents are unspecified.
  bool fill(const DistinguishedGraph& g) {
    ok = false;
    pshape = 0;
    edges_by_family = {0, 0};
    verts = g.vertices;
    edges = g.edges;
    std::sort(verts.begin(), verts.end());
    std::sort(edges.begin(), edges.end(),
              [](const Edge& a, const Edge& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < verts.size(); ++i) {
      if (verts[i] == verts[i - 1]) return false;
    }
    for (std::size_t i = 1; i < edges.size(); ++i) {
      if (edges[i].id == edges[i - 1].id) return false;
    }
    const int n = static_cast<int>(verts.size());
    const int m = static_cast<int>(edges.size());
    if (m == 0) return false;

    sig.assign(n, {0, 0, 0, 0, 0});
    etail.resize(m);
    ehead.resize(m);
    eloop.resize(m);
    for (int i = 0; i < m; ++i) {
      const Edge& e = edges[i];
      etail[i] = find_vertex(e.tail);
      ehead[i] = find_vertex(e.head);
      if (etail[i] < 0 || ehead[i] < 0) return false;
      const int fam = e.family == CircleFamily::Unstable ? 0 : 1;
      ++edges_by_family[fam];
      eloop[i] = etail[i] == ehead[i] ? 1 : 0;
      for (int v : {etail[i], ehead[i]}) {
        ++sig[v][0];
        ++sig[v][1 + fam];
      }
      if (eloop[i]) ++sig[etail[i]][3 + fam];
    }

    wbuf.clear();
    words.clear();
    patches.clear();
    eshape.assign(m, 0);
    occurrences.assign(m, 0);
    for (const Patch& p : g.patches) {
      if (p.boundary.empty()) return false;
      const int first = static_cast<int>(words.size());
      std::size_t letter_total = 0;
      for (const Word& w : p.boundary) letter_total += w.letters.size();
      std::uint64_t patch_hash = mix64(0x70617463ULL + p.genus);
      for (const Word& w : p.boundary) {
        const int len = static_cast<int>(w.letters.size());
        if (len == 0) return false;
        const int off = static_cast<int>(wbuf.size());
        std::fill(occurrences.begin(), occurrences.end(), 0);
        for (const Letter& l : w.letters) {
          const int idx = find_edge(l.edge);
          if (idx < 0) return false;
          wbuf.push_back(l.exponent > 0 ? idx : m + idx);
          ++occurrences[idx];
        }
        // Chaining: each letter's arrival vertex is the next letter's
        // departure vertex. Signs follow the traversal ends (exponent >= 0);
        // on the documented +1/-1 domain this agrees with the encoding.
        for (int k = 0; k < len; ++k) {
          const int ce = decode(wbuf[off + k], m);
          const int nx = decode(wbuf[off + (k + 1) % len], m);
          const int arrive =
              w.letters[k].exponent >= 0 ? ehead[ce] : etail[ce];
          const int depart =
              w.letters[(k + 1) % len].exponent >= 0 ? etail[nx] : ehead[nx];
          if (arrive != depart) return false;
        }
        const std::uint64_t slot =
            mix64((static_cast<std::uint64_t>(w.letters.size()) << 40) ^
                  (static_cast<std::uint64_t>(p.genus) << 30) ^
                  (static_cast<std::uint64_t>(p.boundary.size()) << 16) ^
                  letter_total);
        for (int k = 0; k < len; ++k) {
          const int idx = decode(wbuf[off + k], m);
          eshape[idx] += mix64(slot ^ occurrences[idx]);
        }
        patch_hash += mix64(0x776f7264ULL + w.letters.size());
        words.push_back({off, len});
      }
      pshape += mix64(patch_hash);
      patches.push_back(
          {p.genus, first, static_cast<int>(words.size()) - first});
    }

    // Connectivity of the glued complex: vertices, edges and patches are the
    // nodes, incidence and traversal the links.
    const int np = static_cast<int>(patches.size());
    ufp.resize(n + m + np);
    std::iota(ufp.begin(), ufp.end(), 0);
    auto find = [&](int x) {
      while (ufp[x] != x) x = ufp[x] = ufp[ufp[x]];
      return x;
    };
    for (int i = 0; i < m; ++i) {
      ufp[find(n + i)] = find(etail[i]);
      ufp[find(n + i)] = find(ehead[i]);
    }
    for (int pi = 0; pi < np; ++pi) {
      const PatchRef& p = patches[pi];
      for (int wi = p.first; wi < p.first + p.count; ++wi) {
        for (int k = 0; k < words[wi].len; ++k) {
          const int e = decode(wbuf[words[wi].off + k], m);
          ufp[find(n + m + pi)] = find(n + e);
        }
      }
    }
    const int root = find(0);
    for (int x = 1; x < n + m + np; ++x) {
      if (find(x) != root) return false;
    }

    sig_multiset = sig;
    std::sort(sig_multiset.begin(), sig_multiset.end());

    vshape.assign(verts.size(), 0);
    for (std::size_t v = 0; v < verts.size(); ++v) {
      std::uint64_t h = 0x76657274ULL;
      for (int c : sig[v]) h = mix64(h ^ static_cast<std::uint64_t>(c));
      vshape[v] = h;
    }
    for (int i = 0; i < m; ++i) {
      vshape[etail[i]] += mix64(eshape[i]);
      vshape[ehead[i]] += mix64(eshape[i]);
    }
    // Two refinement rounds fold neighborhood shapes into each hash. The
    // endpoint combination is symmetric because an edge mapped with a flip
    // swaps tail and head, and the per-vertex combination is an unordered
    // sum, so refined values stay equal across any witness-compatible map
    // while separating more of the incompatible candidates.
    for (int round = 0; round < 2; ++round) {
      for (int i = 0; i < m; ++i) {
        eshape[i] = mix64(eshape[i] ^ (vshape[etail[i]] + vshape[ehead[i]]));
      }
      for (std::size_t v = 0; v < verts.size(); ++v) {
        vshape[v] = mix64(vshape[v]);
      }
      for (int i = 0; i < m; ++i) {
        vshape[etail[i]] += mix64(eshape[i]);
        vshape[ehead[i]] += mix64(eshape[i]);
      }
    }
    ok = true;
    return true;
  }

  static int decode(int v, int m) { return v >= m ? v - m : v; }

 private:
  std::vector<int> occurrences, ufp;  // fill() scratch
};

// Size, family-count and vertex-signature-multiset agreement: necessary for
// any isomorphism to exist and cheap enough to gate the search setup.
bool skeleton_compatible(const Indexed& a, const Indexed& b) {
  return a.verts.size() == b.verts.size() &&
         a.edges.size() == b.edges.size() &&
         a.edges_by_family == b.edges_by_family &&
         a.sig_multiset == b.sig_multiset;
}

// Accepts every partial assignment; the plain enumeration has no word
// structure to check against.
struct NoEdgeStep {
  bool operator()(std::size_t, const std::vector<int>&,
                  const std::vector<int>&) const {
    return true;
  }
};

// Backtracking over vertex then edge assignments; emits index vectors so
// callers on the hot path never build id maps for rejected candidates.
// With prune_shapes set, candidates whose shape hashes disagree are skipped,
// and edge_step is consulted after each edge placement so the witness search
// can reject branches whose completed words already fail; such assignments
// can never extend to an equivalence witness, but they may still be skeleton
// isomorphisms, so plain enumeration uses no pruning. Pruning only removes
// losing branches, so the order in which surviving assignments are emitted
// does not change.
template <class Callback, class EdgeStep>
struct IsoSearch {
  const Indexed& a;
  const Indexed& b;
  Callback& visit;
  EdgeStep& edge_step;
  bool prune_shapes;
  std::vector<int> vmap;        // a-vertex index -> b-vertex index
  std::vector<bool> vused;
  std::vector<int> emap;        // a-edge index -> b-edge index
  std::vector<int> esign;
  std::vector<bool> eused;
  std::vector<int> vorder;      // a-vertices, rarest signature first
  bool keep_going = true;

  IsoSearch(const Indexed& a_, const Indexed& b_, Callback& visit_,
            EdgeStep& edge_step_, bool prune_shapes_)
      : a(a_), b(b_), visit(visit_), edge_step(edge_step_),
        prune_shapes(prune_shapes_) {
    vmap.assign(a.verts.size(), -1);
    vused.assign(b.verts.size(), false);
    emap.assign(a.edges.size(), -1);
    esign.assign(a.edges.size(), 0);
    eused.assign(b.edges.size(), false);
    vorder.resize(a.verts.size());
    for (std::size_t i = 0; i < vorder.size(); ++i) {
      vorder[i] = static_cast<int>(i);
    }
    std::sort(vorder.begin(), vorder.end(), [&](int x, int y) {
      return std::tie(a.sig[x], a.verts[x]) < std::tie(a.sig[y], a.verts[y]);
    });
  }

  void assign_edges(std::size_t i) {
    if (!keep_going) return;
    if (i == a.edges.size()) {
      keep_going = visit(vmap, emap, esign);
      return;
    }
    const int t = vmap[a.etail[i]];
    const int h = vmap[a.ehead[i]];
    const CircleFamily fam = a.edges[i].family;
    for (std::size_t j = 0; j < b.edges.size() && keep_going; ++j) {
      if (eused[j]) continue;
      if (b.edges[j].family != fam) continue;
      if (prune_shapes && a.eshape[i] != b.eshape[j]) continue;
      const int ft = b.etail[j];
      const int fh = b.ehead[j];
      if (a.eloop[i]) {
        if (!b.eloop[j] || ft != t) continue;
        for (int s : {+1, -1}) {
          emap[i] = static_cast<int>(j);
          esign[i] = s;
          eused[j] = true;
          if (edge_step(i, emap, esign)) assign_edges(i + 1);
          eused[j] = false;
          if (!keep_going) return;
        }
      } else {
        int s = 0;
        if (ft == t && fh == h) s = +1;
        else if (ft == h && fh == t) s = -1;
        else continue;
        emap[i] = static_cast<int>(j);
        esign[i] = s;
        eused[j] = true;
        if (edge_step(i, emap, esign)) assign_edges(i + 1);
        eused[j] = false;
      }
    }
  }

  void assign_vertices(std::size_t k) {
    if (!keep_going) return;
    if (k == vorder.size()) {
      assign_edges(0);
      return;
    }
    const int i = vorder[k];
    for (std::size_t j = 0; j < b.verts.size() && keep_going; ++j) {
      if (vused[j] || b.sig[j] != a.sig[i]) continue;
      if (prune_shapes && a.vshape[i] != b.vshape[j]) continue;
      vmap[i] = static_cast<int>(j);
      vused[j] = true;
      assign_vertices(k + 1);
      vused[j] = false;
      vmap[i] = -1;
    }
  }
};

// Runs the quick rejects, then the search. The callback receives the index
// vectors (a-vertex -> b-vertex, a-edge -> b-edge, signs) and returns false
// to stop.
template <class Callback, class EdgeStep>
void for_each_isomorphism(const Indexed& a, const Indexed& b, Callback&& cb,
                          EdgeStep&& edge_step, bool prune_shapes) {
  if (!skeleton_compatible(a, b)) return;

  IsoSearch<std::remove_reference_t<Callback>,
            std::remove_reference_t<EdgeStep>>
      search(a, b, cb, edge_step, prune_shapes);
  search.assign_vertices(0);
}

template <class Callback>
void for_each_isomorphism(const Indexed& a, const Indexed& b, Callback&& cb) {
  for_each_isomorphism(a, b, std::forward<Callback>(cb), NoEdgeStep{},
                       /*prune_shapes=*/false);
}

GraphIsomorphism materialize(const Indexed& a, const Indexed& b,
                             const std::vector<int>& vmap,
                             const std::vector<int>& emap,
                             const std::vector<int>& esign) {
  GraphIsomorphism iso;
  for (std::size_t i = 0; i < a.verts.size(); ++i) {
    iso.vertex_map.emplace(a.verts[i], b.verts[vmap[i]]);
  }
  for (std::size_t i = 0; i < a.edges.size(); ++i) {
    iso.edge_map.emplace(a.edges[i].id, SignedEdge{b.edges[emap[i]].id, esign[i]});
  }
  return iso;
}

}  // namespace

ResourceLimits limits_from_env() {
  ResourceLimits limits;
  if (const char* s = std::getenv("DGI_MAX_EDGES")) {
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (end && *end == '\0' && v > 0) {
      limits.max_edges = static_cast<int>(v);
    }
  }
  return limits;
}

GraphIsomorphism identity_isomorphism(const DistinguishedGraph& g) {
  GraphIsomorphism iso;
  for (const VertexId& v : g.vertices) iso.vertex_map.emplace(v, v);
  for (const Edge& e : g.edges) {
    iso.edge_map.emplace(e.id, SignedEdge{e.id, +1});
  }
  return iso;
}

bool is_valid_isomorphism(const DistinguishedGraph& g1,
                          const DistinguishedGraph& g2,
                          const GraphIsomorphism& iso) {
  if (iso.vertex_map.size() != g1.vertices.size() ||
      iso.vertex_map.size() != g2.vertices.size() ||
      iso.edge_map.size() != g1.edges.size() ||
      iso.edge_map.size() != g2.edges.size()) {
    return false;
  }
  std::set<VertexId> targets;
  for (const VertexId& v : g1.vertices) {
    auto it = iso.vertex_map.find(v);
    if (it == iso.vertex_map.end()) return false;
    if (!has_vertex(g2, it->second)) return false;
    if (!targets.insert(it->second).second) return false;
  }
  std::set<EdgeId> etargets;
  for (const Edge& e : g1.edges) {
    auto it = iso.edge_map.find(e.id);
    if (it == iso.edge_map.end()) return false;
    const SignedEdge& se = it->second;
    if (se.sign != 1 && se.sign != -1) return false;
    const Edge* f = find_edge(g2, se.edge);
    if (!f || f->family != e.family) return false;
    if (!etargets.insert(se.edge).second) return false;
    const VertexId t = iso.vertex_map.at(e.tail);
    const VertexId h = iso.vertex_map.at(e.head);
    if (se.sign > 0) {
      if (f->tail != t || f->head != h) return false;
    } else {
      if (f->tail != h || f->head != t) return false;
    }
  }
  return true;
}

GraphIsomorphism compose(const GraphIsomorphism& outer,
                         const GraphIsomorphism& inner) {
  GraphIsomorphism out;
  for (const auto& [v, mid] : inner.vertex_map) {
    auto it = outer.vertex_map.find(mid);
    if (it == outer.vertex_map.end()) {
      throw ContractError("compose: vertex '" + mid.value +
                          "' missing from outer map");
    }
    out.vertex_map.emplace(v, it->second);
  }
  for (const auto& [e, mid] : inner.edge_map) {
    auto it = outer.edge_map.find(mid.edge);
    if (it == outer.edge_map.end()) {
      throw ContractError("compose: edge '" + mid.edge.value +
                          "' missing from outer map");
    }
    out.edge_map.emplace(e,
                         SignedEdge{it->second.edge, mid.sign * it->second.sign});
  }
  return out;
}

GraphIsomorphism invert(const GraphIsomorphism& iso) {
  GraphIsomorphism out;
  for (const auto& [v, w] : iso.vertex_map) out.vertex_map.emplace(w, v);
  for (const auto& [e, se] : iso.edge_map) {
    out.edge_map.emplace(se.edge, SignedEdge{e, se.sign});
  }
  if (out.vertex_map.size() != iso.vertex_map.size() ||
      out.edge_map.size() != iso.edge_map.size()) {
    throw ContractError("invert: mapping is not a bijection");
  }
  return out;
}

void enumerate_isomorphisms(
    const DistinguishedGraph& g1, const DistinguishedGraph& g2,
    const std::function<bool(const GraphIsomorphism&)>& visit,
    const ResourceLimits& limits) {
  check_edge_cap(g1, limits, "enumerate_isomorphisms");
  check_edge_cap(g2, limits, "enumerate_isomorphisms");

  // Local instances, not the shared scratch: the visitor is caller code and
  // may re-enter the deciders.
  Indexed a(g1), b(g2);
  if (!a.ok) throw_invalid(g1, "enumerate_isomorphisms");
  if (!b.ok) throw_invalid(g2, "enumerate_isomorphisms");
  for_each_isomorphism(a, b,
                       [&](const std::vector<int>& vmap,
                           const std::vector<int>& emap,
                           const std::vector<int>& esign) {
                         return visit(materialize(a, b, vmap, emap, esign));
                       });
}

std::vector<GraphIsomorphism> all_isomorphisms(const DistinguishedGraph& g1,
                                               const DistinguishedGraph& g2,
                                               const ResourceLimits& limits) {
  std::vector<GraphIsomorphism> out;
  enumerate_isomorphisms(
      g1, g2,
      [&](const GraphIsomorphism& iso) {
        out.push_back(iso);
        return true;
      },
      limits);
  return out;
}

namespace {

bool pair_patches(const std::vector<Patch>& mapped,
                  const std::vector<Patch>& target, WitnessMode mode,
                  std::vector<bool>& used, std::size_t i,
                  std::vector<PatchPair>& pairing) {
  if (i == mapped.size()) return true;
  for (std::size_t j = 0; j < target.size(); ++j) {
    if (used[j] || mapped[i].genus != target[j].genus) continue;
    if (words_match(mapped[i].boundary, target[j].boundary,
                    MatchMode::Direct)) {
      used[j] = true;
      pairing.push_back({i, j, PairFlag::Equivalent});
      if (pair_patches(mapped, target, mode, used, i + 1, pairing)) return true;
      pairing.pop_back();
      used[j] = false;
    }
    if (mode == WitnessMode::AllowPatchReversal &&
        words_match(mapped[i].boundary, target[j].boundary,
                    MatchMode::Reversed)) {
      used[j] = true;
      pairing.push_back({i, j, PairFlag::Reverse});
      if (pair_patches(mapped, target, mode, used, i + 1, pairing)) return true;
      pairing.pop_back();
      used[j] = false;
    }
  }
  return false;
}

// Patch matching for candidate assignments in index space. Words normalize
// to their minimal rotation, patches to the sorted list of their words'
// normal forms; two word lists agree up to cyclic rotation and pairing
// exactly when their normal forms are equal. Normal forms live in flat
// reused arenas addressed by (offset, length) keys, so a match attempt stops
// allocating once the scratch buffers have grown. Keys sort by length first,
// then content; multiset comparison is the same under any shared total
// order.
struct WitnessSearch {
  const Indexed* a = nullptr;
  const Indexed* b = nullptr;
  WitnessMode mode = WitnessMode::AllowPatchReversal;
  int m = 0;

  struct Key {
    int off = 0;
    int len = 0;
  };
  std::vector<int> tbuf;     // target arena: normal forms of all b words
  std::vector<Key> tkeys;    // grouped and sorted per b-patch
  std::vector<Key> tpatch;   // per b-patch: (first key, key count)
  std::vector<Key> all_tkeys;  // every target key, globally sorted
  std::vector<int> abuf;     // candidate arena, rebuilt per match()
  std::vector<Key> akeys;    // direct normal forms, grouped per a-patch
  std::vector<Key> rkeys;    // reversed counterparts, parallel to akeys
  std::vector<Key> apatch;   // per a-patch: (first key, key count)
  std::vector<int> tmp, rev, sbuf;
  std::vector<std::pair<std::size_t, PairFlag>> pairing;  // per a-patch
  std::vector<bool> used;
  // a-words become fully mapped once their highest edge index is assigned;
  // the edge-step hook checks them against the global target multiset then.
  // complete_wi holds a-word indices grouped by that edge; the group for
  // edge i is complete_wi[complete_off[i] .. complete_off[i + 1]).
  std::vector<int> complete_off;
  std::vector<int> complete_wi;
  std::vector<int> cursor;  // init() scratch for the grouping

  // Callers must have established skeleton_compatible(a_, b_); word letters
  // on both sides are decoded with a shared edge count. Buffers keep their
  // capacity across init calls.
  void init(const Indexed& a_, const Indexed& b_, WitnessMode mode_) {
    a = &a_;
    b = &b_;
    mode = mode_;
    m = static_cast<int>(b_.edges.size());
    tbuf.clear();
    tkeys.clear();
    tpatch.clear();
    for (const auto& p : b->patches) {
      const int first = static_cast<int>(tkeys.size());
      for (int wi = p.first; wi < p.first + p.count; ++wi) {
        tkeys.push_back(normalize_into(tbuf, b->wbuf.data() + b->words[wi].off,
                                       b->words[wi].len));
      }
      tpatch.push_back({first, p.count});
      sort_keys(tkeys, tbuf, first, p.count);
    }
    all_tkeys = tkeys;
    sort_keys(all_tkeys, tbuf, 0, static_cast<int>(all_tkeys.size()));

    const int na = static_cast<int>(a->edges.size());
    complete_off.assign(na + 1, 0);
    for (const auto& w : a->words) {
      ++complete_off[last_edge(w) + 1];
    }
    for (int i = 0; i < na; ++i) complete_off[i + 1] += complete_off[i];
    complete_wi.resize(a->words.size());
    cursor.assign(complete_off.begin(), complete_off.end() - 1);
    for (std::size_t wi = 0; wi < a->words.size(); ++wi) {
      complete_wi[cursor[last_edge(a->words[wi])]++] = static_cast<int>(wi);
    }
  }

  int last_edge(const Indexed::WordRef& w) const {
    int last = 0;
    for (int k = 0; k < w.len; ++k) {
      last = std::max(last, Indexed::decode(a->wbuf[w.off + k], m));
    }
    return last;
  }

  // Whether the normal form at key (over buf) occurs among the target words.
  bool target_contains(const Key& k, const std::vector<int>& buf) const {
    auto it = std::lower_bound(
        all_tkeys.begin(), all_tkeys.end(), k,
        [&](const Key& t, const Key& key) {
          if (t.len != key.len) return t.len < key.len;
          return std::lexicographical_compare(
              tbuf.begin() + t.off, tbuf.begin() + t.off + t.len,
              buf.begin() + key.off, buf.begin() + key.off + key.len);
        });
    if (it == all_tkeys.end() || it->len != k.len) return false;
    return std::equal(buf.begin() + k.off, buf.begin() + k.off + k.len,
                      tbuf.begin() + it->off);
  }

  // Appends the minimal rotation of the word at w to buf and returns where
  // it landed.
  static Key normalize_into(std::vector<int>& buf, const int* w, int len) {
    const std::size_t r = min_rotation_start(w, static_cast<std::size_t>(len));
    const Key key{static_cast<int>(buf.size()), len};
    for (int k = 0; k < len; ++k) {
      buf.push_back(w[(r + k) % len]);
    }
    return key;
  }

  static void sort_keys(std::vector<Key>& keys, const std::vector<int>& buf,
                        int first, int count) {
    std::sort(keys.begin() + first, keys.begin() + first + count,
              [&buf](const Key& x, const Key& y) {
                if (x.len != y.len) return x.len < y.len;
                return std::lexicographical_compare(
                    buf.begin() + x.off, buf.begin() + x.off + x.len,
                    buf.begin() + y.off, buf.begin() + y.off + y.len);
              });
  }

  // Sorted key ranges of equal length compare pairwise.
  bool range_matches(const std::vector<Key>& keys, int first,
                     std::size_t j) const {
    const Key& t = tpatch[j];
    for (int k = 0; k < t.len; ++k) {
      const Key& x = keys[first + k];
      const Key& y = tkeys[t.off + k];
      if (x.len != y.len ||
          !std::equal(abuf.begin() + x.off, abuf.begin() + x.off + x.len,
                      tbuf.begin() + y.off)) {
        return false;
      }
    }
    return true;
  }

  // Forward check: every word whose letters are now fully assigned must map
  // to some target word (up to rotation, and reversal when allowed), or no
  // extension of this branch can match. Checking costs roughly one failed
  // match attempt, so it only pays off where the subtree below an edge
  // placement is deep; small searches skip it, and so does the last edge,
  // where the full patch match runs immediately anyway.
  static constexpr std::size_t kForwardCheckMinEdges = 6;

  // Writes the image of the a-word at w under (emap, esign) into tmp.
  void remap_into(const Indexed::WordRef& w, const std::vector<int>& emap,
                  const std::vector<int>& esign) {
    tmp.clear();
    for (int k = 0; k < w.len; ++k) {
      const int v = a->wbuf[w.off + k];
      const int idx = Indexed::decode(v, m);
      const int exp = (v >= m ? -1 : +1) * esign[idx];
      tmp.push_back(exp > 0 ? emap[idx] : m + emap[idx]);
    }
  }

  bool edge_step(std::size_t i, const std::vector<int>& emap,
                 const std::vector<int>& esign) {
    if (a->edges.size() < kForwardCheckMinEdges ||
        i + 1 == a->edges.size()) {
      return true;
    }
    for (int c = complete_off[i]; c < complete_off[i + 1]; ++c) {
      remap_into(a->words[complete_wi[c]], emap, esign);
      sbuf.clear();
      if (target_contains(normalize_into(sbuf, tmp.data(),
                                         static_cast<int>(tmp.size())),
                          sbuf)) {
        continue;
      }
      if (mode != WitnessMode::AllowPatchReversal) return false;
      reverse_tmp();
      if (!target_contains(normalize_into(sbuf, rev.data(),
                                          static_cast<int>(rev.size())),
                           sbuf)) {
        return false;
      }
    }
    return true;
  }

  // Reversal writes tmp's letters backwards with negated exponents into rev.
  void reverse_tmp() {
    rev.clear();
    for (std::size_t k = tmp.size(); k-- > 0;) {
      const int v = tmp[k];
      rev.push_back(v >= m ? v - m : v + m);
    }
  }

  bool match(const std::vector<int>& emap, const std::vector<int>& esign) {
    abuf.clear();
    akeys.clear();
    rkeys.clear();
    apatch.clear();
    for (const auto& p : a->patches) {
      const int first = static_cast<int>(akeys.size());
      for (int wi = p.first; wi < p.first + p.count; ++wi) {
        remap_into(a->words[wi], emap, esign);
        akeys.push_back(normalize_into(abuf, tmp.data(),
                                       static_cast<int>(tmp.size())));
        if (mode == WitnessMode::AllowPatchReversal) {
          reverse_tmp();
          rkeys.push_back(normalize_into(abuf, rev.data(),
                                         static_cast<int>(rev.size())));
        }
      }
      apatch.push_back({first, p.count});
      sort_keys(akeys, abuf, first, p.count);
      if (mode == WitnessMode::AllowPatchReversal) {
        sort_keys(rkeys, abuf, first, p.count);
      }
    }
    pairing.clear();
    used.assign(b->patches.size(), false);
    return assign(0);
  }

  bool assign(std::size_t i) {
    if (i == a->patches.size()) return true;
    const Key& span = apatch[i];
    for (std::size_t j = 0; j < b->patches.size(); ++j) {
      if (used[j] || a->patches[i].genus != b->patches[j].genus ||
          tpatch[j].len != span.len) {
        continue;
      }
      if (range_matches(akeys, span.off, j)) {
        used[j] = true;
        pairing.push_back({j, PairFlag::Equivalent});
        if (assign(i + 1)) return true;
        pairing.pop_back();
        used[j] = false;
      }
      if (mode == WitnessMode::AllowPatchReversal &&
          range_matches(rkeys, span.off, j)) {
        used[j] = true;
        pairing.push_back({j, PairFlag::Reverse});
        if (assign(i + 1)) return true;
        pairing.pop_back();
        used[j] = false;
      }
    }
    return false;
  }

  EquivalenceWitness witness(const std::vector<int>& vmap,
                             const std::vector<int>& emap,
                             const std::vector<int>& esign) const {
    EquivalenceWitness w;
    w.iso = materialize(*a, *b, vmap, emap, esign);
    w.patch_pairing.reserve(pairing.size());
    for (std::size_t i = 0; i < pairing.size(); ++i) {
      w.patch_pairing.push_back({i, pairing[i].first, pairing[i].second});
    }
    w.orientation_preserving =
        std::all_of(w.patch_pairing.begin(), w.patch_pairing.end(),
                    [](const PatchPair& p) { return p.flag == PairFlag::Equivalent; });
    return w;
  }
};

// Patch-count and per-patch shape check shared by the equivalence and
// conjugacy searches. Equal (genus, word length multiset) profiles hash
// equal, so a hash mismatch is a sound reject; on the (theoretical) collision
// side the exact word comparison in the witness search still decides.
bool patch_profiles_agree(const Indexed& a, const Indexed& b) {
  return a.patches.size() == b.patches.size() && a.pshape == b.pshape;
}

// Reused across calls; the deciders run millions of times over small graphs
// in enumeration workloads and the searches are allocation-free once these
// buffers have grown. Nothing below the deciders calls back into them, so a
// per-thread instance cannot be re-entered while in use.
struct DeciderScratch {
  Indexed a, b;
  WitnessSearch ws;
};

DeciderScratch& decider_scratch() {
  static thread_local DeciderScratch s;
  return s;
}

}  // namespace

std::optional<EquivalenceWitness> is_equivalence_witness(
    const DistinguishedGraph& g1, const DistinguishedGraph& g2,
    const GraphIsomorphism& iso, WitnessMode mode) {
  if (!is_valid_isomorphism(g1, g2, iso)) {
    throw ContractError(
        "is_equivalence_witness: not a valid isomorphism between the graphs");
  }
  if (g1.patches.size() != g2.patches.size()) return std::nullopt;

  std::vector<Patch> mapped;
  mapped.reserve(g1.patches.size());
  for (const Patch& p : g1.patches) {
    Patch q;
    q.genus = p.genus;
    for (const Word& w : p.boundary) q.boundary.push_back(substitute(w, iso.edge_map));
    mapped.push_back(std::move(q));
  }

  std::vector<bool> used(g2.patches.size(), false);
  std::vector<PatchPair> pairing;
  if (!pair_patches(mapped, g2.patches, mode, used, 0, pairing)) {
    return std::nullopt;
  }
  EquivalenceWitness w;
  w.iso = iso;
  w.patch_pairing = std::move(pairing);
  w.orientation_preserving =
      std::all_of(w.patch_pairing.begin(), w.patch_pairing.end(),
                  [](const PatchPair& p) { return p.flag == PairFlag::Equivalent; });
  return w;
}

std::optional<EquivalenceWitness> are_equivalent(const DistinguishedGraph& g1,
                                                 const DistinguishedGraph& g2,
                                                 WitnessMode mode,
                                                 const ResourceLimits& limits) {
  DeciderScratch& s = decider_scratch();
  Indexed& a = s.a;
  Indexed& b = s.b;
  if (!a.fill(g1)) throw_invalid(g1, "are_equivalent");
  if (!b.fill(g2)) throw_invalid(g2, "are_equivalent");
  check_edge_cap(g1, limits, "are_equivalent");
  check_edge_cap(g2, limits, "are_equivalent");

  if (!skeleton_compatible(a, b) || !patch_profiles_agree(a, b)) {
    return std::nullopt;
  }
  WitnessSearch& ws = s.ws;
  ws.init(a, b, mode);
  std::optional<EquivalenceWitness> found;
  for_each_isomorphism(a, b,
                       [&](const std::vector<int>& vmap,
                           const std::vector<int>& emap,
                           const std::vector<int>& esign) {
                         if (!ws.match(emap, esign)) return true;
                         found = ws.witness(vmap, emap, esign);
                         return false;
                       },
                       [&](std::size_t i, const std::vector<int>& emap,
                           const std::vector<int>& esign) {
                         return ws.edge_step(i, emap, esign);
                       },
                       /*prune_shapes=*/true);
  return found;
}

bool is_inner_automorphism(const DistinguishedGraph& g,
                           const GraphIsomorphism& a) {
  if (!is_valid_isomorphism(g, g, a)) return false;
  return is_equivalence_witness(g, g, a).has_value();
}

std::optional<EquivalenceWitness> are_conjugate(const DistinguishedGraph& g1,
                                                const InnerAutomorphism& s1,
                                                const DistinguishedGraph& g2,
                                                const InnerAutomorphism& s2,
                                                WitnessMode mode,
                                                const ResourceLimits& limits) {
  DeciderScratch& scratch = decider_scratch();
  Indexed& a = scratch.a;
  Indexed& b = scratch.b;
  if (!a.fill(g1)) throw_invalid(g1, "are_conjugate");
  if (!b.fill(g2)) throw_invalid(g2, "are_conjugate");
  if (!is_inner_automorphism(g1, s1)) {
    throw ContractError(
        "are_conjugate: s1 is not an inner automorphism of the first graph");
  }
  if (!is_inner_automorphism(g2, s2)) {
    throw ContractError(
        "are_conjugate: s2 is not an inner automorphism of the second graph");
  }
  check_edge_cap(g1, limits, "are_conjugate");
  check_edge_cap(g2, limits, "are_conjugate");

  if (!skeleton_compatible(a, b) || !patch_profiles_agree(a, b)) {
    return std::nullopt;
  }

  // Index forms of the inner automorphisms for the commutation test.
  const std::size_t nv = a.verts.size();
  const std::size_t ne = a.edges.size();
  std::vector<int> s1v(nv), s2v(nv), s1e(ne), s2e(ne), s1s(ne), s2s(ne);
  for (std::size_t i = 0; i < nv; ++i) {
    s1v[i] = a.vindex(s1.vertex_map.at(a.verts[i]));
    s2v[i] = b.vindex(s2.vertex_map.at(b.verts[i]));
  }
  for (std::size_t i = 0; i < ne; ++i) {
    const SignedEdge& m1 = s1.edge_map.at(a.edges[i].id);
    const SignedEdge& m2 = s2.edge_map.at(b.edges[i].id);
    s1e[i] = a.eindex(m1.edge);
    s1s[i] = m1.sign;
    s2e[i] = b.eindex(m2.edge);
    s2s[i] = m2.sign;
  }

  WitnessSearch& ws = scratch.ws;
  ws.init(a, b, mode);
  std::optional<EquivalenceWitness> found;
  for_each_isomorphism(
      a, b,
      [&](const std::vector<int>& vmap, const std::vector<int>& emap,
          const std::vector<int>& esign) {
        // phi∘s1 = s2∘phi on vertices and on signed edges.
        for (std::size_t i = 0; i < nv; ++i) {
          if (vmap[s1v[i]] != s2v[vmap[i]]) return true;
        }
        for (std::size_t i = 0; i < ne; ++i) {
          if (emap[s1e[i]] != s2e[emap[i]] ||
              s1s[i] * esign[s1e[i]] != esign[i] * s2s[emap[i]]) {
            return true;
          }
        }
        if (!ws.match(emap, esign)) return true;
        found = ws.witness(vmap, emap, esign);
        return false;
      },
      [&](std::size_t i, const std::vector<int>& emap,
          const std::vector<int>& esign) {
        return ws.edge_step(i, emap, esign);
      },
      /*prune_shapes=*/true);
  return found;
}

// ---- canonical code ----
//
// The code is the lexicographic minimum, over the whole symmetry orbit, of a
// fixed-width serialization:
//
//   n<verts>m<edges>;<edge records>|<patch keys>
//
// Relabelings assign vertices and edges the labels 0..n-1 / 0..m-1 and pick
// an orientation flip per edge. For a fixed vertex labeling and flip mask the
// minimal edge table is the sorted record list (records are fixed width, and
// sorting fixed-width blocks minimizes their concatenation), so only label
// assignments compatible with that sorted order are explored: permutations
// inside groups of identical records. Words are rotated to their minimal
// serialization, word lists sorted, and each patch takes the smaller of its
// direct and reversed key, which is exactly the freedom the equivalence
// relation grants. Fixed-width labels keep all candidate strings the same
// length, so prefix comparison against the best edge table prunes safely.
//
// The census calls this on every generated instance, so the search avoids
// strings until the end. Edge records and word letters are encoded as
// integers whose ordering matches the byte ordering of the serialization
// (family then endpoints for records; '+' before '-' then label for letters;
// the word and patch separators sit at the right points of the letter range).
// The search runs two sweeps: the first finds the minimal edge table over
// all vertex labelings and flip masks with integer work only, the second
// expands tie labelings for exactly the labelings that reach that table.
// Patch sections depend only on the flip mask and edge labels, never on
// vertex labels, so duplicate (mask, labeling) pairs met through different
// vertex labelings are evaluated once. The minimum found is the same as for
// the direct string search.

namespace {

struct CodeBuilder {
  const DistinguishedGraph& g;
  const ResourceLimits& limits;
  std::vector<VertexId> verts;
  std::vector<Edge> edges;
  int n, m, vw, ew;
  long long candidates = 0;

  // Integer views of the structure, indexed by position in the sorted lists.
  std::vector<std::array<int, 3>> erec;  // per edge: family bit, tail, head
  // Per patch, per boundary word, the (edge index, exponent) letter list.
  std::vector<std::vector<std::vector<std::pair<int, int>>>> pwords;
  std::vector<std::vector<int>> genus_prefix;  // per patch, encoded "g<genus>:"

  // Letters encode as 2 * (sign * m + label), so '+' letters occupy even
  // values below 2m and '-' letters even values from 2m up. The word
  // separator (',') sits between them and the patch separator (';') above
  // both, mirroring the ASCII order '+' < ',' < '-' < ';'. Genus prefix
  // bytes live above everything; they are only ever compared to each other.
  int sep_word, sep_patch, prefix_offset;

  std::vector<long long> best_table;
  std::vector<int> best_section;
  bool have_table = false;
  bool have_section = false;

  // The labeling that achieved the minimum, for canonical_form.
  std::vector<int> cap_vlab, cap_elab;
  unsigned cap_mask = 0;
  const std::vector<int>* cur_vlab = nullptr;

  // Scratch reused across candidates.
  std::vector<std::pair<long long, int>> recs;
  std::vector<std::vector<int>> groups;
  std::vector<int> enc, enc_rev, key_a, key_b, section;
  std::vector<std::vector<int>> wkeys_a, wkeys_b, pkeys;
  std::set<std::vector<int>> visited;  // (mask, edge labels) already evaluated

  CodeBuilder(const DistinguishedGraph& gg, const ResourceLimits& lim)
      : g(gg), limits(lim), verts(gg.vertices), edges(gg.edges) {
    std::sort(verts.begin(), verts.end());
    std::sort(edges.begin(), edges.end(),
              [](const Edge& a, const Edge& b) { return a.id < b.id; });
    std::map<VertexId, int> vpos;
    std::map<EdgeId, int> epos;
    for (std::size_t i = 0; i < verts.size(); ++i) {
      vpos.emplace(verts[i], static_cast<int>(i));
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
      epos.emplace(edges[i].id, static_cast<int>(i));
    }
    n = static_cast<int>(verts.size());
    m = static_cast<int>(edges.size());
    vw = label_width(n);
    ew = label_width(m);
    sep_word = 2 * m - 1;
    sep_patch = 4 * m + 1;
    prefix_offset = 4 * m + 2;
    erec.reserve(edges.size());
    for (const Edge& e : edges) {
      erec.push_back({e.family == CircleFamily::Unstable ? 0 : 1,
                      vpos.at(e.tail), vpos.at(e.head)});
    }
    pwords.reserve(g.patches.size());
    genus_prefix.reserve(g.patches.size());
    for (const Patch& p : g.patches) {
      auto& words = pwords.emplace_back();
      words.reserve(p.boundary.size());
      for (const Word& w : p.boundary) {
        auto& letters = words.emplace_back();
        letters.reserve(w.letters.size());
        for (const Letter& l : w.letters) {
          letters.emplace_back(epos.at(l.edge), l.exponent);
        }
      }
      auto& pre = genus_prefix.emplace_back();
      for (char c : "g" + std::to_string(p.genus) + ":") {
        pre.push_back(prefix_offset + c);
      }
    }
  }

  static int label_width(int count) {
    int w = 1;
    for (int v = count - 1; v >= 10; v /= 10) ++w;
    return w;
  }

  static void append_label(std::string& s, int value, int width) {
    char buf[16];
    char* p = buf + width;
    for (int i = 0; i < width; ++i) {
      *--p = static_cast<char>('0' + value % 10);
      value /= 10;
    }
    s.append(buf, static_cast<std::size_t>(width));
  }

  void count_candidate() {
    if (++candidates > limits.max_candidates) {
      throw ResourceError("max_candidates",
                          "canonical_code orbit exceeds " +
                              std::to_string(limits.max_candidates) +
                              " candidates");
    }
  }

  void emit_word(const std::vector<int>& s, std::vector<int>& out) const {
    const std::size_t len = s.size();
    const std::size_t r = min_rotation_start(s.data(), len);
    out.clear();
    for (std::size_t k = 0; k < len; ++k) {
      out.push_back(2 * s[(r + k) % len]);
    }
  }

  void patch_key(std::size_t pi, const std::vector<int>& elab,
                 const std::vector<int>& flip, std::vector<int>& out) {
    const auto& words = pwords[pi];
    wkeys_a.resize(words.size());
    wkeys_b.resize(words.size());
    for (std::size_t wi = 0; wi < words.size(); ++wi) {
      const auto& letters = words[wi];
      enc.clear();
      enc_rev.clear();
      for (const auto& [idx, ex] : letters) {
        enc.push_back((ex * flip[idx] > 0 ? 0 : m) + elab[idx]);
      }
      // Reversal writes the letters backwards with negated exponents.
      for (std::size_t k = letters.size(); k-- > 0;) {
        const int v = enc[k];
        enc_rev.push_back(v >= m ? v - m : v + m);
      }
      emit_word(enc, wkeys_a[wi]);
      emit_word(enc_rev, wkeys_b[wi]);
    }
    std::sort(wkeys_a.begin(), wkeys_a.end());
    std::sort(wkeys_b.begin(), wkeys_b.end());
    key_a.assign(genus_prefix[pi].begin(), genus_prefix[pi].end());
    key_b = key_a;
    for (const auto& w : wkeys_a) {
      key_a.insert(key_a.end(), w.begin(), w.end());
      key_a.push_back(sep_word);
    }
    for (const auto& w : wkeys_b) {
      key_b.insert(key_b.end(), w.begin(), w.end());
      key_b.push_back(sep_word);
    }
    out = key_a < key_b ? key_a : key_b;
  }

  void try_edge_labeling(const std::vector<int>& elab, unsigned mask,
                         const std::vector<int>& flip) {
    count_candidate();
    std::vector<int> stamp;
    stamp.reserve(elab.size() + 1);
    stamp.push_back(static_cast<int>(mask));
    stamp.insert(stamp.end(), elab.begin(), elab.end());
    if (!visited.insert(std::move(stamp)).second) return;
    pkeys.resize(pwords.size());
    for (std::size_t pi = 0; pi < pwords.size(); ++pi) {
      patch_key(pi, elab, flip, pkeys[pi]);
    }
    std::sort(pkeys.begin(), pkeys.end());
    section.clear();
    for (const auto& k : pkeys) {
      section.insert(section.end(), k.begin(), k.end());
      section.push_back(sep_patch);
    }
    if (!have_section || section < best_section) {
      best_section = section;
      have_section = true;
      cap_vlab = *cur_vlab;
      cap_mask = mask;
      cap_elab = elab;
    }
  }

  // Permutations of edge labels inside groups of identical records.
  void expand_ties(std::size_t gi, std::vector<int>& elab, unsigned mask,
                   const std::vector<int>& flip) {
    if (gi == groups.size()) {
      try_edge_labeling(elab, mask, flip);
      return;
    }
    std::vector<int>& grp = groups[gi];
    int base = 0;
    for (std::size_t k = 0; k < gi; ++k) {
      base += static_cast<int>(groups[k].size());
    }
    std::sort(grp.begin(), grp.end());
    do {
      for (std::size_t k = 0; k < grp.size(); ++k) {
        elab[grp[k]] = base + static_cast<int>(k);
      }
      expand_ties(gi + 1, elab, mask, flip);
    } while (std::next_permutation(grp.begin(), grp.end()));
  }

  // Sorted edge table for one vertex labeling and flip mask; recs pairs each
  // record with its edge index.
  void build_table(const std::vector<int>& vlab, unsigned mask,
                   std::vector<int>& flip, std::vector<long long>& table) {
    for (int e = 0; e < m; ++e) flip[e] = (mask >> e) & 1 ? -1 : +1;
    recs.resize(static_cast<std::size_t>(m));
    for (int e = 0; e < m; ++e) {
      int t = vlab[erec[e][1]];
      int h = vlab[erec[e][2]];
      if (flip[e] < 0) std::swap(t, h);
      recs[e] = {(static_cast<long long>(erec[e][0]) << 40) |
                     (static_cast<long long>(t) << 20) | h,
                 e};
    }
    std::sort(recs.begin(), recs.end());
    table.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) table[i] = recs[i].first;
  }

  void run() {
    if (m >= 32) {
      // 2^m flip masks alone dwarf any candidate budget; refuse up front
      // instead of overflowing the mask loop.
      throw ResourceError("max_candidates",
                          "canonical_code flip space 2^" + std::to_string(m) +
                              " exceeds any candidate budget");
    }
    std::vector<int> vlab(n);
    for (int i = 0; i < n; ++i) vlab[i] = i;
    std::vector<int> flip(m, +1);
    std::vector<int> elab(m, 0);
    std::vector<long long> table(m);

    // Sweep 1: the minimal table. One candidate per labeling/mask pair.
    do {
      for (unsigned mask = 0; mask < (1u << m); ++mask) {
        count_candidate();
        build_table(vlab, mask, flip, table);
        if (!have_table || table < best_table) {
          best_table = table;
          have_table = true;
        }
      }
    } while (std::next_permutation(vlab.begin(), vlab.end()));

    // Sweep 2: patch sections for the labelings that reach the minimal
    // table, one candidate per tie labeling.
    cur_vlab = &vlab;
    do {
      for (unsigned mask = 0; mask < (1u << m); ++mask) {
        build_table(vlab, mask, flip, table);
        if (table != best_table) continue;
        groups.clear();
        for (int i = 0; i < m; ++i) {
          if (i == 0 || recs[i].first != recs[i - 1].first) groups.emplace_back();
          groups.back().push_back(recs[i].second);
        }
        expand_ties(0, elab, mask, flip);
      }
    } while (std::next_permutation(vlab.begin(), vlab.end()));
  }

  std::string render() const {
    std::string text = "n" + std::to_string(n) + "m" + std::to_string(m) + ";";
    for (long long rec : best_table) {
      text.push_back((rec >> 40) & 1 ? 'V' : 'U');
      append_label(text, static_cast<int>((rec >> 20) & 0xfffff), vw);
      append_label(text, static_cast<int>(rec & 0xfffff), vw);
      text += ',';
    }
    text += '|';
    for (int x : best_section) {
      if (x == sep_patch) {
        text += ';';
      } else if (x == sep_word) {
        text += ',';
      } else if (x >= prefix_offset) {
        text.push_back(static_cast<char>(x - prefix_offset));
      } else {
        const int v = x / 2;
        text.push_back(v >= m ? '-' : '+');
        append_label(text, v >= m ? v - m : v, ew);
      }
    }
    return text;
  }
};

}  // namespace

CanonicalCode canonical_code(const DistinguishedGraph& g,
                             const ResourceLimits& limits) {
  return canonical_form(g, limits).code;
}

CanonicalForm canonical_form(const DistinguishedGraph& g,
                             const ResourceLimits& limits) {
  require_valid(g, "canonical_form");
  check_edge_cap(g, limits, "canonical_form");
  CodeBuilder builder(g, limits);
  builder.run();
  CanonicalForm form;
  form.code = CanonicalCode{builder.render()};
  for (std::size_t i = 0; i < builder.verts.size(); ++i) {
    form.to_canonical.vertex_map.emplace(
        builder.verts[i], VertexId{std::to_string(builder.cap_vlab[i])});
  }
  for (std::size_t i = 0; i < builder.edges.size(); ++i) {
    const int sign = (builder.cap_mask >> i) & 1 ? -1 : +1;
    form.to_canonical.edge_map.emplace(
        builder.edges[i].id,
        SignedEdge{EdgeId{std::to_string(builder.cap_elab[i])}, sign});
  }
  return form;
}

}  // namespace dgi
