#include "dgi/jsonio.hpp"

#include <string>

namespace dgi::jsonio {

namespace {

std::string letter_str(const Letter& l) {
  return l.exponent < 0 ? l.edge.value + "^-1" : l.edge.value;
}

std::string end_str(const EdgeEnd& e) {
  return e.edge.value + (e.end == EndKind::Tail ? ":tail" : ":head");
}

json corner_json(const Corner& c) {
  return json{{"at", c.at.value},
              {"first", end_str(c.first)},
              {"second", end_str(c.second)}};
}

template <class Offender, class Fn>
json verdict_json(const Verdict<Offender>& v, Fn&& offender_json) {
  json offs = json::array();
  for (const Offender& o : v.offenders) offs.push_back(offender_json(o));
  return json{{"state", verdict_state_name(v.state)}, {"offenders", offs}};
}

}  // namespace

json graph_json(const DistinguishedGraph& g) {
  json vertices = json::array();
  for (const VertexId& v : g.vertices) vertices.push_back(v.value);

  json edges = json::array();
  for (const Edge& e : g.edges) {
    edges.push_back(json{{"id", e.id.value},
                         {"family", std::string(1, family_letter(e.family))},
                         {"tail", e.tail.value},
                         {"head", e.head.value}});
  }

  json patches = json::array();
  for (const Patch& p : g.patches) {
    json words = json::array();
    for (const Word& w : p.boundary) {
      json letters = json::array();
      for (const Letter& l : w.letters) letters.push_back(letter_str(l));
      words.push_back(letters);
    }
    patches.push_back(json{{"genus", p.genus}, {"words", words}});
  }

  return json{
      {"vertices", vertices}, {"edges", edges}, {"patches", patches}};
}

json validation_json(const ValidationReport& report) {
  json violations = json::array();
  for (const Violation& v : report.violations) {
    violations.push_back(
        json{{"kind", violation_kind_name(v.kind)}, {"message", v.message}});
  }
  return json{{"ok", report.ok()}, {"violations", violations}};
}

json realizability_json(const RealizabilityReport& report) {
  auto id_value = [](const auto& id) { return id.value; };
  return json{
      {"conditionA", verdict_json(report.condition_a, id_value)},
      {"linkConnected", verdict_json(report.link_connected, id_value)},
      {"conditionB", verdict_json(report.condition_b, id_value)},
      {"conditionC", verdict_json(report.condition_c, corner_json)},
      {"overall", report.overall}};
}

json invariants_json(const SurfaceInvariants& inv) {
  json j{{"eulerCharacteristic", inv.euler_characteristic},
         {"orientable", inv.orientable}};
  if (inv.genus) {
    j["genus"] = *inv.genus;
  } else {
    j["genus"] = nullptr;
  }
  return j;
}

json isomorphism_json(const GraphIsomorphism& iso) {
  json vmap = json::object();
  for (const auto& [from, to] : iso.vertex_map) vmap[from.value] = to.value;
  json emap = json::object();
  for (const auto& [from, to] : iso.edge_map) {
    emap[from.value] = json{{"edge", to.edge.value}, {"sign", to.sign}};
  }
  return json{{"vertexMap", vmap}, {"edgeMap", emap}};
}

json witness_json(const EquivalenceWitness& witness) {
  json pairing = json::array();
  for (const PatchPair& p : witness.patch_pairing) {
    pairing.push_back(
        json{{"from", p.from},
             {"to", p.to},
             {"flag", p.flag == PairFlag::Equivalent ? "equivalent"
                                                     : "reverse"}});
  }
  return json{{"isomorphism", isomorphism_json(witness.iso)},
              {"patchPairing", pairing},
              {"orientationPreserving", witness.orientation_preserving}};
}

json census_json(const EnumerationParams& params,
                 const std::vector<CensusEntry>& entries) {
  json jentries = json::array();
  for (const CensusEntry& e : entries) {
    jentries.push_back(json{{"code", e.code.bytes},
                            {"classSize", e.class_size},
                            {"invariants", invariants_json(e.invariants)},
                            {"representative", graph_json(e.representative)}});
  }
  return json{{"params",
               json{{"maxEdges", params.max_edges},
                    {"requireOrientable", params.require_orientable},
                    {"requireConnected", params.require_connected},
                    {"maxPatchGenus", params.max_patch_genus}}},
              {"classCount", entries.size()},
              {"entries", jentries}};
}

}  // namespace dgi::jsonio
