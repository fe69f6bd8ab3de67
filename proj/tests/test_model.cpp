#include <algorithm>
#include <map>
#include <vector>

#include <doctest.h>

#include "dgi/equivalence.hpp"
#include "dgi/errors.hpp"
#include "dgi/model.hpp"
#include "fixtures.hpp"

using namespace dgi;
using fixtures::E;
using fixtures::V;
using fixtures::patch;
using fixtures::word;

namespace {

bool has_violation(const ValidationReport& r, ViolationKind k) {
  return std::any_of(r.violations.begin(), r.violations.end(),
                     [k](const Violation& v) { return v.kind == k; });
}

// Two disjoint one-loop components; every word chains fine but the glued
// complex falls apart.
DistinguishedGraph disconnected_pair() {
  DistinguishedGraph g;
  g.vertices = {V("P"), V("Q")};
  g.edges = {{E("u"), V("P"), V("P"), CircleFamily::Unstable},
             {E("v"), V("Q"), V("Q"), CircleFamily::Stable}};
  g.patches = {patch(0, {word({{E("u"), 1}})}),
               patch(0, {word({{E("u"), -1}})}),
               patch(0, {word({{E("v"), 1}})}),
               patch(0, {word({{E("v"), -1}})})};
  return g;
}

}  // namespace

TEST_CASE("fixtures validate cleanly") {
  for (const DistinguishedGraph& g :
       {fixtures::fix_a(), fixtures::fix_b(), fixtures::fix_c(),
        fixtures::fix_d()}) {
    const ValidationReport r = validate(g);
    CHECK(r.ok());
    CHECK(r.violations.empty());
  }
}

TEST_CASE("duplicate ids are reported") {
  DistinguishedGraph g = fixtures::fix_a();
  g.vertices.push_back(V("P"));
  ValidationReport r = validate(g);
  CHECK_FALSE(r.ok());
  CHECK(has_violation(r, ViolationKind::DuplicateVertexId));

  g = fixtures::fix_a();
  g.edges.push_back(g.edges[0]);
  r = validate(g);
  CHECK_FALSE(r.ok());
  CHECK(has_violation(r, ViolationKind::DuplicateEdgeId));
}

TEST_CASE("dangling references are reported") {
  DistinguishedGraph g = fixtures::fix_a();
  g.edges[0].head = V("missing");
  ValidationReport r = validate(g);
  CHECK_FALSE(r.ok());
  CHECK(has_violation(r, ViolationKind::DanglingEndpoint));

  g = fixtures::fix_a();
  g.patches[0].boundary[0].letters[0].edge = E("ghost");
  r = validate(g);
  CHECK_FALSE(r.ok());
  CHECK(has_violation(r, ViolationKind::DanglingEdgeReference));
}

TEST_CASE("degenerate pieces are reported") {
  DistinguishedGraph g = fixtures::fix_a();
  g.edges.clear();
  g.patches.clear();
  ValidationReport r = validate(g);
  CHECK_FALSE(r.ok());
  CHECK(has_violation(r, ViolationKind::NoEdges));

  g = fixtures::fix_a();
  g.patches.push_back(Patch{});
  r = validate(g);
  CHECK_FALSE(r.ok());
  CHECK(has_violation(r, ViolationKind::EmptyPatch));

  g = fixtures::fix_a();
  g.patches[0].boundary.push_back(Word{});
  r = validate(g);
  CHECK_FALSE(r.ok());
  CHECK(has_violation(r, ViolationKind::EmptyWord));
}

TEST_CASE("broken chaining is reported") {
  // Loops at two different vertices cannot follow each other in one word.
  DistinguishedGraph g;
  g.vertices = {V("P"), V("Q")};
  g.edges = {{E("u"), V("P"), V("P"), CircleFamily::Unstable},
             {E("v"), V("Q"), V("Q"), CircleFamily::Stable}};
  g.patches = {patch(0, {word({{E("u"), 1}, {E("v"), 1}})})};
  const ValidationReport r = validate(g);
  CHECK_FALSE(r.ok());
  CHECK(has_violation(r, ViolationKind::BrokenChaining));
}

TEST_CASE("chaining respects exponents") {
  // tail->head edge between distinct vertices: e followed by e^-1 chains
  // (arrive head, depart head), e followed by e does not.
  DistinguishedGraph g;
  g.vertices = {V("P"), V("Q")};
  g.edges = {{E("e"), V("P"), V("Q"), CircleFamily::Unstable},
             {E("f"), V("P"), V("Q"), CircleFamily::Stable}};
  g.patches = {patch(0, {word({{E("e"), 1}, {E("f"), -1}})})};
  CHECK(validate(g).ok());

  g.patches = {patch(0, {word({{E("e"), 1}, {E("f"), 1}})})};
  const ValidationReport r = validate(g);
  CHECK_FALSE(r.ok());
  CHECK(has_violation(r, ViolationKind::BrokenChaining));
}

TEST_CASE("disconnected complexes are reported") {
  const DistinguishedGraph g = disconnected_pair();
  const ValidationReport r = validate(g);
  CHECK_FALSE(r.ok());
  CHECK(has_violation(r, ViolationKind::DisconnectedComplex));
  CHECK_FALSE(complex_connected(g));

  // fix_b is connected only through its two-word patch.
  CHECK(complex_connected(fixtures::fix_b()));
}

TEST_CASE("decision procedures reject exactly the graphs validate rejects") {
  // The deciders re-derive the validity verdict internally; this pins the two
  // code paths to the same answer for every violation kind.
  std::vector<DistinguishedGraph> bad;

  DistinguishedGraph g = fixtures::fix_a();
  g.vertices.push_back(V("P"));
  bad.push_back(g);

  g = fixtures::fix_a();
  g.edges.push_back(g.edges[0]);
  bad.push_back(g);

  g = fixtures::fix_a();
  g.edges[0].tail = V("nowhere");
  bad.push_back(g);

  g = fixtures::fix_a();
  g.patches[0].boundary[0].letters[2].edge = E("ghost");
  bad.push_back(g);

  g = fixtures::fix_a();
  g.edges.clear();
  g.patches.clear();
  bad.push_back(g);

  g = fixtures::fix_a();
  g.patches.push_back(Patch{});
  bad.push_back(g);

  g = fixtures::fix_a();
  g.patches[0].boundary.push_back(Word{});
  bad.push_back(g);

  g = fixtures::fix_a();
  g.patches[0].boundary[0].letters[1].exponent = -1;  // breaks chaining
  bad.push_back(g);

  bad.push_back(disconnected_pair());

  const DistinguishedGraph ok = fixtures::fix_a();
  for (const DistinguishedGraph& b : bad) {
    CAPTURE(validate(b).violations.front().message);
    CHECK_FALSE(validate(b).ok());
    CHECK_THROWS_AS((void)are_equivalent(b, ok), ContractError);
    CHECK_THROWS_AS((void)are_equivalent(ok, b), ContractError);
    CHECK_THROWS_AS((void)canonical_code(b), ContractError);
    CHECK_THROWS_AS(
        enumerate_isomorphisms(b, ok, [](const GraphIsomorphism&) {
          return true;
        }),
        ContractError);
  }
}

TEST_CASE("degree counts loops twice") {
  const DistinguishedGraph a = fixtures::fix_a();
  CHECK(degree(a, V("P")) == 4);
  const DistinguishedGraph b = fixtures::fix_b();
  CHECK(degree(b, V("P")) == 2);
  CHECK(degree(b, V("Q")) == 2);
  CHECK_THROWS_AS((void)degree(b, V("R")), ContractError);
}

TEST_CASE("degrees sum to twice the edge count") {
  for (const DistinguishedGraph& g :
       {fixtures::fix_a(), fixtures::fix_b(), fixtures::fix_c(),
        fixtures::fix_d()}) {
    int total = 0;
    for (const VertexId& v : g.vertices) total += degree(g, v);
    CHECK(total == 2 * static_cast<int>(g.edges.size()));
  }
}

TEST_CASE("corners enumerate consecutive end pairs") {
  const DistinguishedGraph d = fixtures::fix_d();
  const std::vector<Corner> cs = corners(d);
  REQUIRE(cs.size() == total_letter_count(d));
  REQUIRE(cs.size() == 4);

  // Word (u u^-1 v v^-1) at P: u arrives at its head and u^-1 departs from
  // the head, giving a same-edge corner; likewise for v; the remaining two
  // corners join the tails of u and v.
  const Corner uu{V("P"),
                  EdgeEnd{E("u"), EndKind::Head},
                  EdgeEnd{E("u"), EndKind::Head}};
  const Corner vv{V("P"),
                  EdgeEnd{E("v"), EndKind::Head},
                  EdgeEnd{E("v"), EndKind::Head}};
  const Corner uv{V("P"),
                  EdgeEnd{E("u"), EndKind::Tail},
                  EdgeEnd{E("v"), EndKind::Tail}};
  CHECK(std::count(cs.begin(), cs.end(), uu) == 1);
  CHECK(std::count(cs.begin(), cs.end(), vv) == 1);
  CHECK(std::count(cs.begin(), cs.end(), uv) == 2);
  CHECK(std::is_sorted(cs.begin(), cs.end()));

  CHECK(corners(fixtures::fix_a()).size() == 4);
  CHECK(corners(fixtures::fix_b()).size() == 4);
}

TEST_CASE("corner ends are stored in normalized order") {
  for (const Corner& c : corners(fixtures::fix_c())) {
    CHECK_FALSE(c.second < c.first);
  }
}

TEST_CASE("departure and arrival ends follow the exponent") {
  CHECK(departure_end(Letter{E("e"), 1}).kind == EndKind::Tail);
  CHECK(arrival_end(Letter{E("e"), 1}).kind == EndKind::Head);
  CHECK(departure_end(Letter{E("e"), -1}).kind == EndKind::Head);
  CHECK(arrival_end(Letter{E("e"), -1}).kind == EndKind::Tail);
}

TEST_CASE("normalize sorts vertices and edges by id") {
  DistinguishedGraph g = fixtures::fix_b();
  std::swap(g.vertices[0], g.vertices[1]);
  std::swap(g.edges[0], g.edges[1]);
  normalize(g);
  CHECK(g.vertices == std::vector<VertexId>{V("P"), V("Q")});
  CHECK(g.edges[0].id == E("u"));
  CHECK(g.edges[1].id == E("v"));
  CHECK(g == fixtures::fix_b());
}

TEST_CASE("lookup helpers") {
  const DistinguishedGraph g = fixtures::fix_a();
  CHECK(has_vertex(g, V("P")));
  CHECK_FALSE(has_vertex(g, V("X")));
  const Edge* e = find_edge(g, E("v"));
  REQUIRE(e != nullptr);
  CHECK(e->family == CircleFamily::Stable);
  CHECK(find_edge(g, E("zz")) == nullptr);
  CHECK(total_letter_count(g) == 4);
}
