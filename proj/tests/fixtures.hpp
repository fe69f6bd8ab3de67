#pragma once

// In-memory twins of tests/fixtures/*.dgf plus file-loading helpers. The
// builders are spelled out by hand so model-level tests do not depend on the
// parser being correct.

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>

#include "dgi/dgf.hpp"
#include "dgi/model.hpp"

namespace fixtures {

inline std::string path(const std::string& name) {
  return std::string(DGI_FIXTURE_DIR) + "/" + name;
}

inline std::string slurp(const std::string& name) {
  std::ifstream in(path(name), std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture: " + name);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline dgi::dgf::Document load(const std::string& name) {
  return dgi::dgf::parse(slurp(name));
}

inline dgi::VertexId V(const char* s) { return dgi::VertexId{s}; }
inline dgi::EdgeId E(const char* s) { return dgi::EdgeId{s}; }

inline dgi::Word word(std::initializer_list<dgi::Letter> ls) {
  dgi::Word w;
  w.letters = ls;
  return w;
}

inline dgi::Patch patch(int genus, std::initializer_list<dgi::Word> ws) {
  dgi::Patch p;
  p.genus = genus;
  p.boundary = ws;
  return p;
}

// Torus diagram: one saddle, one unstable and one stable loop crossing once.
inline dgi::DistinguishedGraph fix_a() {
  dgi::DistinguishedGraph g;
  g.vertices = {V("P")};
  g.edges = {{E("u"), V("P"), V("P"), dgi::CircleFamily::Unstable},
             {E("v"), V("P"), V("P"), dgi::CircleFamily::Stable}};
  g.patches = {patch(0, {word({{E("u"), 1}, {E("v"), 1},
                               {E("u"), -1}, {E("v"), -1}})})};
  return g;
}

// Sphere diagram: two saddles joined through three patches, one of which has
// a two-word boundary.
inline dgi::DistinguishedGraph fix_b() {
  dgi::DistinguishedGraph g;
  g.vertices = {V("P"), V("Q")};
  g.edges = {{E("u"), V("P"), V("P"), dgi::CircleFamily::Unstable},
             {E("v"), V("Q"), V("Q"), dgi::CircleFamily::Stable}};
  g.patches = {patch(0, {word({{E("u"), 1}})}),
               patch(0, {word({{E("v"), 1}})}),
               patch(0, {word({{E("u"), -1}}), word({{E("v"), -1}})})};
  return g;
}

// Klein-bottle variant of fix_a: one exponent flipped, so the side pairing
// reverses orientation.
inline dgi::DistinguishedGraph fix_c() {
  dgi::DistinguishedGraph g;
  g.vertices = {V("P")};
  g.edges = {{E("u"), V("P"), V("P"), dgi::CircleFamily::Unstable},
             {E("v"), V("P"), V("P"), dgi::CircleFamily::Stable}};
  g.patches = {patch(0, {word({{E("u"), 1}, {E("v"), 1},
                               {E("u"), 1}, {E("v"), -1}})})};
  return g;
}

// Sphere-like word with two U-turns; the corner condition rejects it.
inline dgi::DistinguishedGraph fix_d() {
  dgi::DistinguishedGraph g;
  g.vertices = {V("P")};
  g.edges = {{E("u"), V("P"), V("P"), dgi::CircleFamily::Unstable},
             {E("v"), V("P"), V("P"), dgi::CircleFamily::Stable}};
  g.patches = {patch(0, {word({{E("u"), 1}, {E("u"), -1},
                               {E("v"), 1}, {E("v"), -1}})})};
  return g;
}

}  // namespace fixtures
