#pragma once

// DGF: the line-oriented text format for distinguished graphs.
//
//   # comment to end of line
//   vertices
//   P
//   edges
//   u U P P            <- id family tail head, family U or V
//   patches
//   genus 0: (u v u^-1 v^-1) (v)
//   inner              <- optional self-map, used by conjugacy checks
//   v: P->P
//   e: u->u^-1
//
// Sections appear in that order; edges/patches/inner may be omitted when
// empty. IDs match [A-Za-z0-9_.]+. Parsing checks references, duplicates and
// the inner bijection, and reports 1-based line/column positions; structural
// validation of the resulting graph is a separate step (dgi::validate).

#include <optional>
#include <string>

#include "dgi/equivalence.hpp"
#include "dgi/model.hpp"

namespace dgi::dgf {

struct Document {
  DistinguishedGraph graph;
  std::optional<GraphIsomorphism> inner;
};

// Throws ParseError. The returned graph is normalized but not validated.
Document parse(const std::string& text);

std::string serialize(const DistinguishedGraph& g);
std::string serialize(const Document& doc);

std::string format_word(const Word& w);

}  // namespace dgi::dgf
