// dgi: command line front end for distinguished-graph invariants.
//
// Exit codes, uniformly: 0 affirmative result, 1 well-formed negative result
// (not equivalent, not realizable, not conjugate, no surface), 2 parse or
// validation or usage error, 3 resource cap exceeded.

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dgi/dgf.hpp"
#include "dgi/enumeration.hpp"
#include "dgi/equivalence.hpp"
#include "dgi/errors.hpp"
#include "dgi/jsonio.hpp"
#include "dgi/model.hpp"
#include "dgi/realizability.hpp"

namespace {

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitError = 2;
constexpr int kExitResource = 3;

struct InputError {
  int code;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open '" << path << "'\n";
    throw InputError{kExitError};
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

dgi::dgf::Document load_document(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return dgi::dgf::parse(text);
  } catch (const dgi::ParseError& e) {
    std::cerr << path << ":" << e.line() << ":" << e.column()
              << ": error: " << e.what() << "\n";
    throw InputError{kExitError};
  }
}

// Parse and insist on structural validity; most commands need both.
dgi::dgf::Document load_valid(const std::string& path) {
  dgi::dgf::Document doc = load_document(path);
  dgi::ValidationReport report = dgi::validate(doc.graph);
  if (!report.ok()) {
    std::cerr << path << ": structurally invalid:\n";
    for (const dgi::Violation& v : report.violations) {
      std::cerr << "  [" << dgi::violation_kind_name(v.kind) << "] "
                << v.message << "\n";
    }
    throw InputError{kExitError};
  }
  return doc;
}

// Connectivity of the bare graph (vertices and edges only). Validation only
// requires the glued complex to be connected, which is weaker: patches can
// bridge components, as the disjoint-circles fixtures do.
bool bare_graph_connected(const dgi::DistinguishedGraph& g) {
  if (g.vertices.empty()) return true;
  std::map<dgi::VertexId, int> idx;
  for (const auto& v : g.vertices) idx.emplace(v, static_cast<int>(idx.size()));
  std::vector<int> parent(idx.size());
  for (std::size_t i = 0; i < parent.size(); ++i) {
    parent[i] = static_cast<int>(i);
  }
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const dgi::Edge& e : g.edges) {
    parent[find(idx.at(e.tail))] = find(idx.at(e.head));
  }
  const int root = find(0);
  for (std::size_t i = 1; i < parent.size(); ++i) {
    if (find(static_cast<int>(i)) != root) return false;
  }
  return true;
}

void print_verdict_line(const char* label, dgi::VerdictState state,
                        const std::string& offenders) {
  std::cout << "  " << label << ": " << dgi::verdict_state_name(state);
  if (!offenders.empty()) std::cout << " (" << offenders << ")";
  std::cout << "\n";
}

template <class Offender, class Fn>
std::string join_offenders(const std::vector<Offender>& offs, Fn&& str) {
  std::string out;
  for (const Offender& o : offs) {
    if (!out.empty()) out += ", ";
    out += str(o);
  }
  return out;
}

void print_witness(const dgi::EquivalenceWitness& w) {
  std::cout << "vertex map:\n";
  for (const auto& [from, to] : w.iso.vertex_map) {
    std::cout << "  " << from.value << " -> " << to.value << "\n";
  }
  std::cout << "edge map:\n";
  for (const auto& [from, to] : w.iso.edge_map) {
    std::cout << "  " << from.value << " -> " << to.edge.value
              << (to.sign < 0 ? "^-1" : "") << "\n";
  }
  std::cout << "patch pairing:\n";
  for (const dgi::PatchPair& p : w.patch_pairing) {
    std::cout << "  #" << p.from << " -> #" << p.to << " ("
              << (p.flag == dgi::PairFlag::Equivalent ? "equivalent"
                                                      : "reverse")
              << ")\n";
  }
  std::cout << "orientation preserving: "
            << (w.orientation_preserving ? "yes" : "no") << "\n";
}

int cmd_validate(const std::string& path, bool json_out) {
  dgi::dgf::Document doc = load_document(path);
  dgi::ValidationReport report = dgi::validate(doc.graph);
  if (json_out) {
    std::cout << dgi::jsonio::validation_json(report).dump(2) << "\n";
  } else if (report.ok()) {
    std::cout << "valid\n";
  } else {
    for (const dgi::Violation& v : report.violations) {
      std::cout << "[" << dgi::violation_kind_name(v.kind) << "] " << v.message
                << "\n";
    }
  }
  return report.ok() ? kExitYes : kExitError;
}

int cmd_check(const std::string& path, bool strict_orientable,
              bool strict_connected, bool json_out) {
  dgi::dgf::Document doc = load_valid(path);
  dgi::RealizabilityReport report = dgi::is_realizable(doc.graph);

  bool pass = report.overall;
  bool orientable_known = false, orientable = false;
  if (report.condition_a.passed()) {
    orientable = dgi::orientability_and_genus(doc.graph).orientable;
    orientable_known = true;
  }
  bool strict_orientable_fail =
      strict_orientable && (!orientable_known || !orientable);
  bool strict_connected_fail =
      strict_connected && !bare_graph_connected(doc.graph);
  pass = pass && !strict_orientable_fail && !strict_connected_fail;

  if (json_out) {
    dgi::jsonio::json j = dgi::jsonio::realizability_json(report);
    if (strict_orientable) {
      j["strictOrientable"] = orientable_known && orientable;
    }
    if (strict_connected) {
      j["strictConnected"] = !strict_connected_fail;
    }
    j["pass"] = pass;
    std::cout << j.dump(2) << "\n";
  } else {
    auto id_str = [](const auto& id) { return id.value; };
    auto corner_str = [](const dgi::Corner& c) {
      auto end_str = [](const dgi::EdgeEnd& e) {
        return e.edge.value +
               (e.end == dgi::EndKind::Tail ? ":tail" : ":head");
      };
      return c.at.value + "[" + end_str(c.first) + "," + end_str(c.second) +
             "]";
    };
    print_verdict_line("condition (a)", report.condition_a.state,
                       join_offenders(report.condition_a.offenders, id_str));
    print_verdict_line("link connected", report.link_connected.state,
                       join_offenders(report.link_connected.offenders, id_str));
    print_verdict_line("condition (b)", report.condition_b.state,
                       join_offenders(report.condition_b.offenders, id_str));
    print_verdict_line("condition (c)", report.condition_c.state,
                       join_offenders(report.condition_c.offenders, corner_str));
    if (strict_orientable) {
      std::cout << "  orientable (strict): "
                << (strict_orientable_fail ? "fail" : "pass") << "\n";
    }
    if (strict_connected) {
      std::cout << "  graph connected (strict): "
                << (strict_connected_fail ? "fail" : "pass") << "\n";
    }
    std::cout << (pass ? "realizable" : "not realizable") << "\n";
  }
  return pass ? kExitYes : kExitNo;
}

int cmd_invariants(const std::string& path, bool json_out) {
  dgi::dgf::Document doc = load_valid(path);
  dgi::SurfaceInvariants inv;
  try {
    inv = dgi::orientability_and_genus(doc.graph);
  } catch (const dgi::NonSurfaceError& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return kExitNo;
  }
  const auto& g = doc.graph;
  if (json_out) {
    dgi::jsonio::json j = dgi::jsonio::invariants_json(inv);
    j["vertexCount"] = g.vertices.size();
    j["edgeCount"] = g.edges.size();
    j["patchCount"] = g.patches.size();
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "euler characteristic: " << inv.euler_characteristic << "\n"
              << "orientable: " << (inv.orientable ? "yes" : "no") << "\n";
    if (inv.genus) {
      std::cout << "genus: " << *inv.genus << "\n";
    } else {
      std::cout << "genus: undefined\n";
    }
    std::cout << "vertices: " << g.vertices.size()
              << ", edges: " << g.edges.size()
              << ", patches: " << g.patches.size() << "\n";
  }
  return kExitYes;
}

int cmd_equiv(const std::string& path1, const std::string& path2,
              bool oriented, bool json_out) {
  dgi::dgf::Document d1 = load_valid(path1);
  dgi::dgf::Document d2 = load_valid(path2);
  const auto mode = oriented ? dgi::WitnessMode::OrientationPreserving
                             : dgi::WitnessMode::AllowPatchReversal;
  auto witness =
      dgi::are_equivalent(d1.graph, d2.graph, mode, dgi::limits_from_env());
  if (json_out) {
    dgi::jsonio::json j;
    j["equivalent"] = witness.has_value();
    if (witness) j["witness"] = dgi::jsonio::witness_json(*witness);
    std::cout << j.dump(2) << "\n";
  } else if (witness) {
    std::cout << "equivalent\n";
    print_witness(*witness);
  } else {
    std::cout << "not equivalent\n";
  }
  return witness ? kExitYes : kExitNo;
}

int cmd_conjugate(const std::string& path1, const std::string& path2,
                  bool json_out) {
  dgi::dgf::Document d1 = load_valid(path1);
  dgi::dgf::Document d2 = load_valid(path2);
  for (const auto* p : {&d1, &d2}) {
    if (!p->inner) {
      std::cerr << (p == &d1 ? path1 : path2)
                << ": no 'inner' section; conjugacy needs one in each file\n";
      return kExitError;
    }
  }
  std::optional<dgi::EquivalenceWitness> witness;
  try {
    witness = dgi::are_conjugate(d1.graph, *d1.inner, d2.graph, *d2.inner,
                                 dgi::WitnessMode::AllowPatchReversal,
                                 dgi::limits_from_env());
  } catch (const dgi::ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  if (json_out) {
    dgi::jsonio::json j;
    j["conjugate"] = witness.has_value();
    if (witness) j["witness"] = dgi::jsonio::witness_json(*witness);
    std::cout << j.dump(2) << "\n";
  } else if (witness) {
    std::cout << "conjugate\n";
    print_witness(*witness);
  } else {
    std::cout << "not conjugate\n";
  }
  return witness ? kExitYes : kExitNo;
}

int cmd_canon(const std::string& path, bool json_out) {
  dgi::dgf::Document doc = load_valid(path);
  dgi::CanonicalCode code =
      dgi::canonical_code(doc.graph, dgi::limits_from_env());
  if (json_out) {
    dgi::jsonio::json j;
    j["code"] = code.bytes;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << code.bytes << "\n";
  }
  return kExitYes;
}

int cmd_enum(int max_edges, bool orientable, bool connected, int max_genus,
             const std::string& json_path) {
  dgi::EnumerationParams params;
  params.max_edges = max_edges;
  params.require_orientable = orientable;
  params.require_connected = connected;
  params.max_patch_genus = max_genus;
  auto entries = dgi::enumerate_census(params, dgi::limits_from_env());
  if (!json_path.empty()) {
    std::ofstream out(json_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write '" << json_path << "'\n";
      return kExitError;
    }
    out << dgi::jsonio::census_json(params, entries).dump(2) << "\n";
  }
  std::cout << entries.size() << " classes\n";
  for (const dgi::CensusEntry& e : entries) {
    std::cout << "  [" << e.class_size << "x] chi="
              << e.invariants.euler_characteristic
              << (e.invariants.orientable ? " orientable" : " non-orientable");
    if (e.invariants.genus) std::cout << " genus=" << *e.invariants.genus;
    std::cout << "  " << e.code.bytes << "\n";
  }
  return kExitYes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distinguished-graph invariants of gradient-like dynamics"};
  app.require_subcommand(1);

  std::string file1, file2, json_path;
  bool json_out = false;
  bool strict_orientable = false, strict_connected = false, oriented = false;
  bool enum_orientable = false, enum_connected = false;
  int max_edges = 1, max_genus = 0;

  auto* validate_cmd = app.add_subcommand("validate", "structural validation");
  validate_cmd->add_option("file", file1)->required();
  validate_cmd->add_flag("--json", json_out);

  auto* check_cmd = app.add_subcommand("check", "realizability conditions");
  check_cmd->add_option("file", file1)->required();
  check_cmd->add_flag("--strict-orientable", strict_orientable,
                      "also require an orientable glued surface");
  check_cmd->add_flag("--strict-connected", strict_connected,
                      "also require the bare graph to be connected");
  check_cmd->add_flag("--json", json_out);

  auto* inv_cmd = app.add_subcommand("invariants", "surface invariants");
  inv_cmd->add_option("file", file1)->required();
  inv_cmd->add_flag("--json", json_out);

  auto* equiv_cmd = app.add_subcommand("equiv", "decide equivalence");
  equiv_cmd->add_option("file1", file1)->required();
  equiv_cmd->add_option("file2", file2)->required();
  equiv_cmd->add_flag("--oriented", oriented,
                      "orientation-preserving equivalence only");
  equiv_cmd->add_flag("--json", json_out);

  auto* conj_cmd = app.add_subcommand("conjugate", "decide conjugacy");
  conj_cmd->add_option("file1", file1)->required();
  conj_cmd->add_option("file2", file2)->required();
  conj_cmd->add_flag("--json", json_out);

  auto* canon_cmd = app.add_subcommand("canon", "canonical code");
  canon_cmd->add_option("file", file1)->required();
  canon_cmd->add_flag("--json", json_out);

  auto* enum_cmd = app.add_subcommand("enum", "census of small graphs");
  enum_cmd->add_option("--max-edges", max_edges, "edge count cap")
      ->required()
      ->check(CLI::PositiveNumber);
  enum_cmd->add_flag("--orientable", enum_orientable,
                     "keep orientable classes only");
  enum_cmd->add_flag("--connected", enum_connected,
                     "keep connected complexes only");
  enum_cmd->add_option("--max-genus", max_genus, "per-patch genus cap")
      ->check(CLI::NonNegativeNumber);
  enum_cmd->add_option("--json", json_path, "write the census as JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitError;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(file1, json_out);
    if (check_cmd->parsed()) {
      return cmd_check(file1, strict_orientable, strict_connected, json_out);
    }
    if (inv_cmd->parsed()) return cmd_invariants(file1, json_out);
    if (equiv_cmd->parsed()) {
      return cmd_equiv(file1, file2, oriented, json_out);
    }
    if (conj_cmd->parsed()) return cmd_conjugate(file1, file2, json_out);
    if (canon_cmd->parsed()) return cmd_canon(file1, json_out);
    if (enum_cmd->parsed()) {
      return cmd_enum(max_edges, enum_orientable, enum_connected, max_genus,
                      json_path);
    }
  } catch (const InputError& e) {
    return e.code;
  } catch (const dgi::ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitResource;
  } catch (const dgi::ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
