#include "dgi/enumeration.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

#include "dgi/errors.hpp"
#include "dgi/words.hpp"

// Census generation walks a layered search space instead of filtering random
// garbage:
//
//   1. vertex profile: k4 four-valent vertices plus k2 loop-only vertices
//      with 4*k4 + 2*k2 = 2m, which is all condition (b) allows;
//   2. skeleton: a multigraph on the four-valent vertices with every degree
//      exactly four (loop vertices each carry one forced loop);
//   3. family mask over edges, pruned so each four-valent vertex sees two
//      ends of either family, a prerequisite of condition (c);
//   4. occurrence exponents: each edge is traversed twice; (+,+) and (+,-)
//      suffice because flipping an edge turns (-,-) into (+,+) and swapping
//      the two anonymous occurrences turns (-,+) into (+,-), both of which
//      are relabelings the final dedup absorbs anyway;
//   5. successor permutation: every way of chaining arrivals to departures
//      vertex by vertex; its cycles are the boundary words. Condition (a)
//      holds by construction. Structures whose corners fail to close each
//      vertex link into a single circle, or that pair same-family ends at a
//      four-valent vertex, are dropped here since neither property depends
//      on how words are later distributed into patches;
//   6. partition of the word list into patches and a genus choice per patch.
//
// Everything that survives is validated, run through is_realizable, coded
// and collapsed into classes. Canonical-code collisions are cross-checked
// with are_equivalent every single time, and each fresh class is checked
// against the previously inserted one for non-equivalence; a discrepancy in
// either direction means one of the two procedures is wrong, and the census
// refuses to continue.

namespace dgi {

namespace {

using Clock = std::chrono::steady_clock;

struct Budget {
  const ResourceLimits& limits;
  Clock::time_point start = Clock::now();
  long long candidates = 0;

  void tick() {
    if (++candidates > limits.max_candidates) {
      throw ResourceError("max_candidates",
                          "census generation exceeded " +
                              std::to_string(limits.max_candidates) +
                              " candidates");
    }
    if ((candidates & 0x3ff) == 0) {
      auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                    Clock::now() - start)
                    .count();
      if (ms > limits.time_limit_ms) {
        throw ResourceError("time_limit_ms",
                            "census generation exceeded " +
                                std::to_string(limits.time_limit_ms) + " ms");
      }
    }
  }
};

// All multigraphs (as sorted edge lists over vertex indices, loops allowed)
// on k4 vertices with every degree exactly 4. Generated by pairing half-edge
// slots and deduplicating the resulting edge multisets.
std::set<std::vector<std::pair<int, int>>> quad_skeletons(int k4) {
  std::set<std::vector<std::pair<int, int>>> out;
  std::vector<int> slot_vertex;
  for (int v = 0; v < k4; ++v) {
    for (int s = 0; s < 4; ++s) slot_vertex.push_back(v);
  }
  std::vector<bool> used(slot_vertex.size(), false);
  std::vector<std::pair<int, int>> edges;

  auto rec = [&](auto&& self) -> void {
    std::size_t a = 0;
    while (a < used.size() && used[a]) ++a;
    if (a == used.size()) {
      auto sorted = edges;
      std::sort(sorted.begin(), sorted.end());
      out.insert(std::move(sorted));
      return;
    }
    used[a] = true;
    for (std::size_t b = a + 1; b < used.size(); ++b) {
      if (used[b]) continue;
      used[b] = true;
      edges.emplace_back(std::min(slot_vertex[a], slot_vertex[b]),
                         std::max(slot_vertex[a], slot_vertex[b]));
      self(self);
      edges.pop_back();
      used[b] = false;
    }
    used[a] = false;
  };
  if (slot_vertex.empty()) {
    out.emplace();  // the empty skeleton: no four-valent vertices
  } else {
    rec(rec);
  }
  return out;
}

// word as (edge index, exponent) pairs, stored at its minimal rotation
using IWord = std::vector<std::pair<int, int>>;

std::string iword_key(const IWord& w) {
  std::string s;
  for (const auto& [e, x] : w) {
    s += (x > 0 ? '+' : '-');
    s += std::to_string(e);
    s += '.';
  }
  return s;
}

IWord min_rotation(const IWord& w) {
  IWord best = w, cur = w;
  for (std::size_t r = 1; r < w.size(); ++r) {
    std::rotate(cur.begin(), cur.begin() + 1, cur.end());
    if (cur < best) best = cur;
  }
  return best;
}

struct Structure {
  int nverts;
  std::vector<std::pair<int, int>> edges;  // (tail, head) vertex indices
  std::vector<CircleFamily> family;
  std::vector<IWord> words;  // min-rotated, sorted
};

DistinguishedGraph build_graph(const Structure& st,
                               const std::vector<std::vector<int>>& blocks,
                               const std::vector<int>& genus) {
  DistinguishedGraph g;
  auto vname = [](int i) { return VertexId{"v" + std::to_string(i)}; };
  auto ename = [](int i) { return EdgeId{"e" + std::to_string(i)}; };
  for (int i = 0; i < st.nverts; ++i) g.vertices.push_back(vname(i));
  for (std::size_t e = 0; e < st.edges.size(); ++e) {
    g.edges.push_back(Edge{ename(static_cast<int>(e)),
                           vname(st.edges[e].first), vname(st.edges[e].second),
                           st.family[e]});
  }
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    Patch p;
    p.genus = genus[b];
    for (int wi : blocks[b]) {
      Word w;
      for (const auto& [e, x] : st.words[wi]) {
        w.letters.push_back(Letter{ename(e), x});
      }
      p.boundary.push_back(std::move(w));
    }
    g.patches.push_back(std::move(p));
  }
  normalize(g);
  return g;
}

// Corner compatibility of a bare word structure: links close into single
// circles and four-valent corners mix the families. Both properties ignore
// the patch partition, so they prune before partitions are enumerated.
bool corner_compatible(const Structure& st) {
  std::vector<int> all;
  for (std::size_t i = 0; i < st.words.size(); ++i) {
    all.push_back(static_cast<int>(i));
  }
  DistinguishedGraph probe = build_graph(st, {all}, {0});
  return locally_planar(probe) && check_condition_c(probe).passed();
}

// Restricted growth strings: every set partition of {0..n-1} exactly once.
void for_each_partition(
    int n, const std::function<void(const std::vector<std::vector<int>>&)>& f) {
  std::vector<int> rgs(n, 0);
  auto emit = [&] {
    int nblocks = *std::max_element(rgs.begin(), rgs.end()) + 1;
    std::vector<std::vector<int>> blocks(nblocks);
    for (int i = 0; i < n; ++i) blocks[rgs[i]].push_back(i);
    f(blocks);
  };
  auto rec = [&](auto&& self, int i, int maxv) -> void {
    if (i == n) {
      emit();
      return;
    }
    for (int v = 0; v <= maxv + 1; ++v) {
      rgs[i] = v;
      self(self, i + 1, std::max(maxv, v));
    }
  };
  if (n == 0) return;
  rgs[0] = 0;
  rec(rec, 1, 0);
}

struct ClassStore {
  struct Bucket {
    DistinguishedGraph rep;
    GraphIsomorphism from_canonical;  // canonical ids -> rep ids
    SurfaceInvariants inv;
    long long count = 0;
  };
  std::map<std::string, Bucket> by_code;
  const ResourceLimits& limits;
  std::string last_inserted;

  explicit ClassStore(const ResourceLimits& lim) : limits(lim) {}

  void add(const DistinguishedGraph& g, const SurfaceInvariants& inv) {
    CanonicalForm form = canonical_form(g, limits);
    std::string& code = form.code.bytes;
    auto it = by_code.find(code);
    if (it != by_code.end()) {
      // Equal codes must mean equivalent graphs. Compose the two canonical
      // labelings into an explicit isomorphism and re-verify it against the
      // patch collections with the independent witness checker.
      bool ok = false;
      try {
        GraphIsomorphism to_rep =
            compose(it->second.from_canonical, form.to_canonical);
        ok = is_equivalence_witness(g, it->second.rep, to_rep,
                                    WitnessMode::AllowPatchReversal)
                 .has_value();
      } catch (const ContractError&) {
        ok = false;
      }
      if (!ok) {
        throw std::logic_error(
            "census cross-check failed: identical canonical codes for "
            "inequivalent graphs (code " + code + ")");
      }
      ++it->second.count;
      return;
    }
    // Fresh class: sample a non-collision against the previous insertion.
    if (!last_inserted.empty()) {
      const Bucket& prev = by_code.at(last_inserted);
      if (are_equivalent(prev.rep, g, WitnessMode::AllowPatchReversal,
                         limits)) {
        throw std::logic_error(
            "census cross-check failed: distinct canonical codes for "
            "equivalent graphs (codes " + last_inserted + " and " + code +
            ")");
      }
    }
    by_code.emplace(code,
                    Bucket{g, invert(form.to_canonical), inv, 1});
    last_inserted = std::move(code);
  }
};

}  // namespace

std::vector<CensusEntry> enumerate_census(const EnumerationParams& params,
                                          const ResourceLimits& limits) {
  if (params.max_edges < 1) {
    throw ContractError("enumerate_census: max_edges must be at least 1");
  }
  if (params.max_patch_genus < 0) {
    throw ContractError("enumerate_census: max_patch_genus must be >= 0");
  }

  Budget budget{limits};
  ClassStore store(limits);

  for (int m = 1; m <= params.max_edges; ++m) {
    for (int k4 = 0; 4 * k4 <= 2 * m; ++k4) {
      const int k2 = (2 * m - 4 * k4) / 2;
      const int nverts = k4 + k2;
      const int nquad = 2 * k4;  // edges inside the four-valent part

      for (const auto& quad : quad_skeletons(k4)) {
        Structure st;
        st.nverts = nverts;
        st.edges = quad;
        for (int i = 0; i < k2; ++i) {
          st.edges.emplace_back(k4 + i, k4 + i);  // forced loops
        }
        st.family.assign(m, CircleFamily::Unstable);

        for (unsigned mask = 0; mask < (1u << m); ++mask) {
          for (int e = 0; e < m; ++e) {
            st.family[e] = (mask >> e) & 1 ? CircleFamily::Stable
                                           : CircleFamily::Unstable;
          }
          // each four-valent vertex needs two ends per family
          bool balanced = true;
          for (int v = 0; v < k4 && balanced; ++v) {
            int unstable_ends = 0;
            for (int e = 0; e < nquad; ++e) {
              if (st.family[e] != CircleFamily::Unstable) continue;
              if (st.edges[e].first == v) ++unstable_ends;
              if (st.edges[e].second == v) ++unstable_ends;
            }
            balanced = unstable_ends == 2;
          }
          if (!balanced) continue;

          for (unsigned smask = 0; smask < (1u << m); ++smask) {
            // token 2e is the +1 occurrence; token 2e+1 carries the bit sign
            auto exp_of = [&](int t) {
              return (t & 1) ? (((smask >> (t >> 1)) & 1) ? -1 : +1) : +1;
            };
            auto arrival = [&](int t) {
              const auto& [tl, hd] = st.edges[t >> 1];
              return exp_of(t) > 0 ? hd : tl;
            };
            auto departure = [&](int t) {
              const auto& [tl, hd] = st.edges[t >> 1];
              return exp_of(t) > 0 ? tl : hd;
            };

            std::vector<std::vector<int>> arr(nverts), dep(nverts);
            for (int t = 0; t < 2 * m; ++t) {
              arr[arrival(t)].push_back(t);
              dep[departure(t)].push_back(t);
            }
            bool feasible = true;
            for (int v = 0; v < nverts; ++v) {
              if (arr[v].size() != dep[v].size()) {
                feasible = false;
                break;
              }
            }
            if (!feasible) continue;

            std::set<std::string> seen_structures;
            std::vector<int> succ(2 * m, -1);

            auto on_sigma = [&] {
              budget.tick();
              // cycles of succ are the boundary words
              std::vector<bool> visited(2 * m, false);
              std::vector<IWord> words;
              for (int t0 = 0; t0 < 2 * m; ++t0) {
                if (visited[t0]) continue;
                IWord w;
                int t = t0;
                do {
                  visited[t] = true;
                  w.emplace_back(t >> 1, exp_of(t));
                  t = succ[t];
                } while (t != t0);
                words.push_back(min_rotation(w));
              }
              std::sort(words.begin(), words.end());

              std::string skey;
              for (const IWord& w : words) skey += iword_key(w) + "/";
              if (!seen_structures.insert(skey).second) return;

              Structure sw = st;
              sw.words = std::move(words);
              if (!corner_compatible(sw)) return;

              const int nwords = static_cast<int>(sw.words.size());
              std::set<std::string> seen_patchings;
              for_each_partition(nwords, [&](const std::vector<std::vector<int>>&
                                                 blocks) {
                const int nblocks = static_cast<int>(blocks.size());
                std::vector<int> genus(nblocks, 0);
                while (true) {
                  // patch multiset key for dedup
                  std::vector<std::string> pkeys;
                  for (int b = 0; b < nblocks; ++b) {
                    std::string pk = "g" + std::to_string(genus[b]) + ":";
                    std::vector<std::string> wk;
                    for (int wi : blocks[b]) wk.push_back(iword_key(sw.words[wi]));
                    std::sort(wk.begin(), wk.end());
                    for (const auto& k : wk) pk += k + "|";
                    pkeys.push_back(std::move(pk));
                  }
                  std::sort(pkeys.begin(), pkeys.end());
                  std::string mkey;
                  for (const auto& k : pkeys) mkey += k + ";";

                  if (seen_patchings.insert(mkey).second) {
                    budget.tick();
                    DistinguishedGraph g = build_graph(sw, blocks, genus);
                    if (validate(g).ok() && is_realizable(g).overall) {
                      SurfaceInvariants inv = orientability_and_genus(g);
                      bool keep = true;
                      if (params.require_orientable && !inv.orientable) {
                        keep = false;
                      }
                      if (keep && params.require_connected &&
                          !complex_connected(g)) {
                        keep = false;
                      }
                      if (keep) store.add(g, inv);
                    }
                  }

                  // next genus tuple, mixed radix
                  int i = 0;
                  while (i < nblocks) {
                    if (++genus[i] <= params.max_patch_genus) break;
                    genus[i] = 0;
                    ++i;
                  }
                  if (i == nblocks) break;
                }
              });
            };

            // assign per-vertex bijections arrivals -> departures
            auto assign = [&](auto&& self, int v) -> void {
              if (v == nverts) {
                on_sigma();
                return;
              }
              if (arr[v].empty()) {
                self(self, v + 1);
                return;
              }
              std::vector<int> perm = dep[v];
              std::sort(perm.begin(), perm.end());
              do {
                for (std::size_t i = 0; i < arr[v].size(); ++i) {
                  succ[arr[v][i]] = perm[i];
                }
                self(self, v + 1);
              } while (std::next_permutation(perm.begin(), perm.end()));
            };
            assign(assign, 0);
          }
        }
      }
    }
  }

  std::vector<CensusEntry> out;
  for (auto& [code, bucket] : store.by_code) {
    CensusEntry e;
    e.representative = std::move(bucket.rep);
    e.code = CanonicalCode{code};
    e.invariants = bucket.inv;
    e.class_size = bucket.count;
    out.push_back(std::move(e));
  }
  return out;
}

// ---- mutation ----

namespace {

void require_realizable_input(const DistinguishedGraph& g) {
  if (!validate(g).ok() || !is_realizable(g).overall) {
    throw ContractError("mutate: input must be structurally valid and pass "
                        "the realizability conditions");
  }
}

VertexId arrival_vertex(const DistinguishedGraph& g, const Letter& l) {
  const Edge* e = find_edge(g, l.edge);
  EdgeEnd end = arrival_end(l);
  return end.end == EndKind::Tail ? e->tail : e->head;
}

// Rotation-independent fingerprint of a graph's boundary words, for
// collapsing rechained duplicates that differ only by cycle start points.
std::string word_structure_key(const DistinguishedGraph& h) {
  std::vector<std::string> keys;
  for (const Patch& p : h.patches) {
    for (const Word& w : p.boundary) {
      std::string best;
      const std::size_t len = w.letters.size();
      for (std::size_t r = 0; r < len; ++r) {
        std::string cur;
        for (std::size_t k = 0; k < len; ++k) {
          const Letter& l = w.letters[(r + k) % len];
          cur += l.exponent > 0 ? '+' : '-';
          cur += l.edge.value;
          cur += '.';
        }
        if (best.empty() || cur < best) best = std::move(cur);
      }
      keys.push_back(std::move(best));
    }
  }
  std::sort(keys.begin(), keys.end());
  std::string out;
  for (const std::string& k : keys) {
    out += k;
    out += '/';
  }
  return out;
}

std::vector<EdgeId> fresh_edge_ids(const DistinguishedGraph& g, int count) {
  std::set<std::string> taken;
  for (const Edge& e : g.edges) taken.insert(e.id.value);
  std::vector<EdgeId> out;
  for (int n = 0; static_cast<int>(out.size()) < count; ++n) {
    std::string cand = "w" + std::to_string(n);
    if (!taken.count(cand)) out.push_back(EdgeId{cand});
  }
  return out;
}

// Word structures regenerable from g's own letters: keep every edge's two
// occurrence exponents, rechain arrivals to departures every possible way,
// and pack all resulting words into one genus-0 patch. The link verdict only
// depends on the words, so this is a complete search for link-breaking
// rewirings of g.
std::vector<DistinguishedGraph> rechained_variants(const DistinguishedGraph& g) {
  struct Token {
    EdgeId edge;
    int exponent;
  };
  std::vector<Token> tokens;
  for (const Patch& p : g.patches) {
    for (const Word& w : p.boundary) {
      for (const Letter& l : w.letters) tokens.push_back({l.edge, l.exponent});
    }
  }
  std::map<VertexId, std::vector<int>> arr, dep;
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    Letter l{tokens[t].edge, tokens[t].exponent};
    const Edge* e = find_edge(g, l.edge);
    EdgeEnd a = arrival_end(l), d = departure_end(l);
    arr[a.end == EndKind::Tail ? e->tail : e->head].push_back(
        static_cast<int>(t));
    dep[d.end == EndKind::Tail ? e->tail : e->head].push_back(
        static_cast<int>(t));
  }
  std::vector<VertexId> vorder;
  for (const auto& [v, list] : arr) vorder.push_back(v);

  std::vector<DistinguishedGraph> out;
  std::set<std::string> seen;
  std::vector<int> succ(tokens.size(), -1);

  auto emit = [&] {
    std::vector<bool> visited(tokens.size(), false);
    std::vector<Word> words;
    for (std::size_t t0 = 0; t0 < tokens.size(); ++t0) {
      if (visited[t0]) continue;
      Word w;
      int t = static_cast<int>(t0);
      do {
        visited[t] = true;
        w.letters.push_back(Letter{tokens[t].edge, tokens[t].exponent});
        t = succ[t];
      } while (t != static_cast<int>(t0));
      words.push_back(std::move(w));
    }
    DistinguishedGraph h;
    h.vertices = g.vertices;
    h.edges = g.edges;
    Patch p;
    p.genus = 0;
    p.boundary = std::move(words);
    h.patches.push_back(std::move(p));
    normalize(h);
    std::string key = word_structure_key(h);
    if (seen.insert(key).second) out.push_back(std::move(h));
  };

  auto assign = [&](auto&& self, std::size_t vi) -> void {
    if (vi == vorder.size()) {
      emit();
      return;
    }
    const auto& a = arr.at(vorder[vi]);
    auto dit = dep.find(vorder[vi]);
    if (dit == dep.end() || dit->second.size() != a.size()) return;
    std::vector<int> perm = dit->second;
    std::sort(perm.begin(), perm.end());
    do {
      for (std::size_t i = 0; i < a.size(); ++i) succ[a[i]] = perm[i];
      self(self, vi + 1);
    } while (std::next_permutation(perm.begin(), perm.end()));
  };
  assign(assign, 0);
  return out;
}

}  // namespace

std::vector<DistinguishedGraph> mutate(const DistinguishedGraph& g,
                                       MutationTarget target) {
  require_realizable_input(g);
  std::vector<DistinguishedGraph> out;

  auto consider = [&](DistinguishedGraph cand,
                      const std::function<bool(const DistinguishedGraph&)>&
                          breaks_target) {
    normalize(cand);
    if (!validate(cand).ok()) return;
    if (breaks_target(cand)) out.push_back(std::move(cand));
  };

  switch (target) {
    case MutationTarget::ConditionA: {
      auto fails_a = [](const DistinguishedGraph& h) {
        return check_condition_a(h).failed();
      };
      for (std::size_t pi = 0; pi < g.patches.size(); ++pi) {
        for (std::size_t wi = 0; wi < g.patches[pi].boundary.size(); ++wi) {
          const Word& w = g.patches[pi].boundary[wi];
          if (w.letters.size() >= 2) {
            for (std::size_t li = 0; li < w.letters.size(); ++li) {
              DistinguishedGraph h = g;
              auto& letters = h.patches[pi].boundary[wi].letters;
              letters.erase(letters.begin() + static_cast<long>(li));
              consider(std::move(h), fails_a);
            }
          }
          if (g.patches[pi].boundary.size() >= 2) {
            DistinguishedGraph h = g;
            auto& boundary = h.patches[pi].boundary;
            boundary.erase(boundary.begin() + static_cast<long>(wi));
            consider(std::move(h), fails_a);
          }
        }
      }
      break;
    }

    case MutationTarget::LinkConnected: {
      auto breaks_link = [](const DistinguishedGraph& h) {
        return check_condition_a(h).passed() &&
               check_link_connected(h).failed();
      };
      for (DistinguishedGraph& h : rechained_variants(g)) {
        consider(std::move(h), breaks_link);
      }
      break;
    }

    case MutationTarget::ConditionB: {
      auto breaks_b = [](const DistinguishedGraph& h) {
        return check_condition_a(h).passed() &&
               check_link_connected(h).passed() &&
               check_condition_b(h).failed();
      };
      // Splice freshly minted loops into a word right after a letter arriving
      // at the chosen vertex; one loop lifts a four-valent vertex to six,
      // loop vertices need two.
      for (const VertexId& v : g.vertices) {
        const int extra   = degree(g, v) == 4 ? 1 : 2;
        const auto fresh  = fresh_edge_ids(g, extra);
        for (std::size_t pi = 0; pi < g.patches.size(); ++pi) {
          for (std::size_t wi = 0; wi < g.patches[pi].boundary.size(); ++wi) {
            const Word& w = g.patches[pi].boundary[wi];
            for (std::size_t li = 0; li < w.letters.size(); ++li) {
              if (arrival_vertex(g, w.letters[li]) != v) continue;
              DistinguishedGraph h = g;
              std::vector<Letter> inserted;
              for (const EdgeId& id : fresh) {
                h.edges.push_back(Edge{id, v, v, CircleFamily::Unstable});
                inserted.push_back(Letter{id, +1});
                inserted.push_back(Letter{id, -1});
              }
              auto& letters = h.patches[pi].boundary[wi].letters;
              letters.insert(letters.begin() + static_cast<long>(li) + 1,
                             inserted.begin(), inserted.end());
              consider(std::move(h), breaks_b);
            }
          }
        }
      }
      break;
    }

    case MutationTarget::ConditionC: {
      auto breaks_c = [](const DistinguishedGraph& h) {
        return check_condition_a(h).passed() &&
               check_link_connected(h).passed() &&
               check_condition_c(h).failed();
      };
      for (std::size_t pi = 0; pi < g.patches.size(); ++pi) {
        for (std::size_t wi = 0; wi < g.patches[pi].boundary.size(); ++wi) {
          const std::size_t len = g.patches[pi].boundary[wi].letters.size();
          for (std::size_t x = 0; x < len; ++x) {
            for (std::size_t y = x + 1; y < len; ++y) {
              DistinguishedGraph h = g;
              auto& letters = h.patches[pi].boundary[wi].letters;
              std::swap(letters[x], letters[y]);
              consider(std::move(h), breaks_c);
            }
          }
        }
      }
      break;
    }

    case MutationTarget::Orientability: {
      auto breaks_orient = [](const DistinguishedGraph& h) {
        return is_realizable(h).overall &&
               !orientability_and_genus(h).orientable;
      };
      for (std::size_t pi = 0; pi < g.patches.size(); ++pi) {
        for (std::size_t wi = 0; wi < g.patches[pi].boundary.size(); ++wi) {
          const std::size_t len = g.patches[pi].boundary[wi].letters.size();
          for (std::size_t li = 0; li < len; ++li) {
            DistinguishedGraph h = g;
            Letter& l = h.patches[pi].boundary[wi].letters[li];
            l.exponent = -l.exponent;
            consider(std::move(h), breaks_orient);
          }
        }
      }
      break;
    }
  }
  return out;
}

// ---- seeded relabeling ----

namespace {

// Explicit Fisher-Yates so the result depends only on the seed, not on any
// library's shuffle or distribution internals.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed ^ 0x9e3779b97f4a7c15ull) {}
  std::uint64_t next() {
    // splitmix64 step
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  std::size_t below(std::size_t n) { return n ? next() % n : 0; }
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }
};

}  // namespace

DistinguishedGraph random_relabel(const DistinguishedGraph& g,
                                  std::uint64_t seed) {
  ValidationReport r = validate(g);
  if (!r.ok()) {
    throw ContractError("random_relabel: input graph is not structurally "
                        "valid (" + r.violations.front().message + ")");
  }
  Rng rng(seed);

  std::vector<VertexId> vids(g.vertices);
  std::sort(vids.begin(), vids.end());
  std::vector<VertexId> vperm = vids;
  rng.shuffle(vperm);
  // Ids are unique and resolved (validated above), so the sorted id list
  // doubles as the permutation lookup table.
  auto vmapped = [&](const VertexId& v) -> const VertexId& {
    return vperm[std::lower_bound(vids.begin(), vids.end(), v) - vids.begin()];
  };

  std::vector<EdgeId> eids;
  eids.reserve(g.edges.size());
  for (const Edge& e : g.edges) eids.push_back(e.id);
  std::sort(eids.begin(), eids.end());
  std::vector<EdgeId> eperm = eids;
  rng.shuffle(eperm);
  auto emapped = [&](const EdgeId& e) -> const EdgeId& {
    return eperm[std::lower_bound(eids.begin(), eids.end(), e) - eids.begin()];
  };

  DistinguishedGraph out;
  for (const VertexId& v : g.vertices) out.vertices.push_back(vmapped(v));
  for (const Edge& e : g.edges) {
    out.edges.push_back(
        Edge{emapped(e.id), vmapped(e.tail), vmapped(e.head), e.family});
  }

  // Patches in original order while consuming randomness, shuffled at the end.
  for (const Patch& p : g.patches) {
    Patch q;
    q.genus = p.genus;
    for (const Word& w : p.boundary) {
      Word nw;
      for (const Letter& l : w.letters) {
        nw.letters.push_back(Letter{emapped(l.edge), l.exponent});
      }
      const std::size_t rot = rng.below(nw.letters.size());
      std::rotate(nw.letters.begin(),
                  nw.letters.begin() + static_cast<long>(rot),
                  nw.letters.end());
      q.boundary.push_back(std::move(nw));
    }
    if (rng.below(2) == 1) {
      for (Word& w : q.boundary) w = reverse_word(w);
    }
    rng.shuffle(q.boundary);
    out.patches.push_back(std::move(q));
  }
  rng.shuffle(out.patches);
  normalize(out);
  return out;
}

}  // namespace dgi
