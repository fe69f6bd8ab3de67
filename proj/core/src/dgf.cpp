#include "dgi/dgf.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dgi/errors.hpp"

namespace dgi::dgf {

namespace {

bool is_id_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

// One source line with a cursor; all errors carry 1-based line/column.
struct Line {
  std::string text;
  int number = 0;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, number, static_cast<int>(pos) + 1);
  }
  void skip_ws() {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
  }
  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }
  char peek() const { return pos < text.size() ? text[pos] : '\0'; }
  void expect(char c, const std::string& what) {
    skip_ws();
    if (peek() != c) fail("expected '" + std::string(1, c) + "' " + what);
    ++pos;
  }
  std::string read_id(const std::string& what) {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && is_id_char(text[pos])) ++pos;
    if (pos == start) fail("expected " + what);
    return text.substr(start, pos - start);
  }
  int read_nonneg(const std::string& what) {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
    if (pos == start) fail("expected " + what);
    try {
      return std::stoi(text.substr(start, pos - start));
    } catch (const std::out_of_range&) {
      pos = start;
      fail("number out of range");
    }
  }
  void expect_end() {
    if (!at_end()) fail("unexpected trailing text");
  }
  // `id` or `id^-1`; `^1` tolerated on input.
  std::pair<std::string, int> read_signed_id(const std::string& what) {
    std::string id = read_id(what);
    int sign = +1;
    if (peek() == '^') {
      ++pos;
      if (peek() == '-') {
        ++pos;
        sign = -1;
      }
      if (peek() != '1') fail("malformed exponent, expected 1 or -1");
      ++pos;
      if (pos < text.size() && is_id_char(text[pos])) {
        fail("malformed exponent, expected 1 or -1");
      }
    }
    return {id, sign};
  }
};

enum class Section { None, Vertices, Edges, Patches, Inner };

struct Parser {
  Document doc;
  std::set<std::string> vertex_ids;
  std::set<std::string> edge_ids;
  Section section = Section::None;
  int inner_header_line = 0;
  std::map<std::string, std::pair<std::string, int>> inner_v, inner_e;

  void vertex_line(Line& ln) {
    std::string id = ln.read_id("a vertex id");
    ln.expect_end();
    if (!vertex_ids.insert(id).second) {
      ln.fail("duplicate vertex id '" + id + "'");
    }
    doc.graph.vertices.push_back(VertexId{id});
  }

  void edge_line(Line& ln) {
    std::string id = ln.read_id("an edge id");
    ln.skip_ws();
    std::size_t fam_col = ln.pos;
    std::string fam = ln.read_id("an edge family (U or V)");
    std::string tail = ln.read_id("a tail vertex id");
    std::string head = ln.read_id("a head vertex id");
    ln.expect_end();
    if (!edge_ids.insert(id).second) {
      ln.fail("duplicate edge id '" + id + "'");
    }
    CircleFamily family;
    if (fam == "U") {
      family = CircleFamily::Unstable;
    } else if (fam == "V") {
      family = CircleFamily::Stable;
    } else {
      ln.pos = fam_col;
      ln.fail("unknown edge family '" + fam + "', expected U or V");
    }
    for (const std::string* v : {&tail, &head}) {
      if (!vertex_ids.count(*v)) {
        ln.fail("edge endpoint references unknown vertex '" + *v + "'");
      }
    }
    doc.graph.edges.push_back(
        Edge{EdgeId{id}, VertexId{tail}, VertexId{head}, family});
  }

  void patch_line(Line& ln) {
    ln.skip_ws();
    std::string kw = ln.read_id("the keyword 'genus'");
    if (kw != "genus") ln.fail("patch lines start with 'genus'");
    Patch p;
    p.genus = ln.read_nonneg("a nonnegative genus");
    ln.expect(':', "after the genus");
    while (!ln.at_end()) {
      ln.expect('(', "to open a boundary word");
      Word w;
      while (true) {
        ln.skip_ws();
        if (ln.peek() == ')') {
          ++ln.pos;
          break;
        }
        if (ln.peek() == '\0') ln.fail("unterminated boundary word");
        auto [id, sign] = ln.read_signed_id("an edge letter");
        if (!edge_ids.count(id)) {
          ln.fail("word letter references unknown edge '" + id + "'");
        }
        w.letters.push_back(Letter{EdgeId{id}, sign});
      }
      p.boundary.push_back(std::move(w));
    }
    doc.graph.patches.push_back(std::move(p));
  }

  void inner_line(Line& ln) {
    ln.skip_ws();
    std::size_t kind_col = ln.pos;
    std::string kind = ln.read_id("'v' or 'e'");
    ln.expect(':', "after the map kind");
    if (kind == "v") {
      std::string from = ln.read_id("a vertex id");
      ln.expect('-', "in '->'");
      ln.expect('>', "in '->'");
      std::string to = ln.read_id("a vertex id");
      ln.expect_end();
      for (const std::string* v : {&from, &to}) {
        if (!vertex_ids.count(*v)) {
          ln.fail("inner map references unknown vertex '" + *v + "'");
        }
      }
      if (!inner_v.emplace(from, std::make_pair(to, +1)).second) {
        ln.fail("vertex '" + from + "' mapped twice in inner section");
      }
    } else if (kind == "e") {
      std::string from = ln.read_id("an edge id");
      ln.expect('-', "in '->'");
      ln.expect('>', "in '->'");
      auto [to, sign] = ln.read_signed_id("an edge id");
      ln.expect_end();
      for (const std::string* e : {&from, &to}) {
        if (!edge_ids.count(*e)) {
          ln.fail("inner map references unknown edge '" + *e + "'");
        }
      }
      if (!inner_e.emplace(from, std::make_pair(to, sign)).second) {
        ln.fail("edge '" + from + "' mapped twice in inner section");
      }
    } else {
      ln.pos = kind_col;
      ln.fail("inner lines start with 'v:' or 'e:'");
    }
  }

  void finish_inner() {
    if (section != Section::Inner) return;
    GraphIsomorphism iso;
    std::set<std::string> v_images, e_images;
    for (const std::string& v : vertex_ids) {
      auto it = inner_v.find(v);
      if (it == inner_v.end()) {
        throw ParseError("inner section does not map vertex '" + v + "'",
                         inner_header_line, 1);
      }
      if (!v_images.insert(it->second.first).second) {
        throw ParseError("inner section maps two vertices to '" +
                             it->second.first + "'",
                         inner_header_line, 1);
      }
      iso.vertex_map.emplace(VertexId{v}, VertexId{it->second.first});
    }
    for (const std::string& e : edge_ids) {
      auto it = inner_e.find(e);
      if (it == inner_e.end()) {
        throw ParseError("inner section does not map edge '" + e + "'",
                         inner_header_line, 1);
      }
      if (!e_images.insert(it->second.first).second) {
        throw ParseError("inner section maps two edges to '" +
                             it->second.first + "'",
                         inner_header_line, 1);
      }
      iso.edge_map.emplace(
          EdgeId{e}, SignedEdge{EdgeId{it->second.first}, it->second.second});
    }
    doc.inner = std::move(iso);
  }
};

}  // namespace

Document parse(const std::string& text) {
  Parser parser;
  std::istringstream stream(text);
  std::string raw;
  int number = 0;
  while (std::getline(stream, raw)) {
    ++number;
    // comments run to end of line; positions before '#' stay correct
    std::string body = raw.substr(0, raw.find('#'));
    Line probe{body, number, 0};
    if (probe.at_end()) continue;

    // section headers are a bare keyword on their own line
    std::size_t start = probe.pos;
    std::string word;
    while (start + word.size() < body.size() &&
           is_id_char(body[start + word.size()])) {
      word += body[start + word.size()];
    }
    Line rest{body, number, start + word.size()};
    static const std::map<std::string, Section> kSections = {
        {"vertices", Section::Vertices},
        {"edges", Section::Edges},
        {"patches", Section::Patches},
        {"inner", Section::Inner}};
    auto sec = kSections.find(word);
    if (sec != kSections.end() && rest.at_end()) {
      if (sec->second <= parser.section) {
        Line here{body, number, start};
        here.fail("section '" + word + "' out of order");
      }
      parser.section = sec->second;
      if (sec->second == Section::Inner) parser.inner_header_line = number;
      continue;
    }

    Line ln{body, number, start};
    switch (parser.section) {
      case Section::None:
        ln.fail("expected a 'vertices' section before content");
      case Section::Vertices:
        parser.vertex_line(ln);
        break;
      case Section::Edges:
        parser.edge_line(ln);
        break;
      case Section::Patches:
        parser.patch_line(ln);
        break;
      case Section::Inner:
        parser.inner_line(ln);
        break;
    }
  }
  parser.finish_inner();
  normalize(parser.doc.graph);
  return std::move(parser.doc);
}

std::string format_word(const Word& w) {
  std::string out = "(";
  bool first = true;
  for (const Letter& l : w.letters) {
    if (!first) out += ' ';
    first = false;
    out += l.edge.value;
    if (l.exponent < 0) out += "^-1";
  }
  out += ')';
  return out;
}

std::string serialize(const DistinguishedGraph& g) {
  std::string out = "vertices\n";
  for (const VertexId& v : g.vertices) {
    out += v.value;
    out += '\n';
  }
  if (!g.edges.empty()) {
    out += "edges\n";
    for (const Edge& e : g.edges) {
      out += e.id.value;
      out += ' ';
      out += family_letter(e.family);
      out += ' ';
      out += e.tail.value;
      out += ' ';
      out += e.head.value;
      out += '\n';
    }
  }
  if (!g.patches.empty()) {
    out += "patches\n";
    for (const Patch& p : g.patches) {
      out += "genus " + std::to_string(p.genus) + ":";
      for (const Word& w : p.boundary) {
        out += ' ';
        out += format_word(w);
      }
      out += '\n';
    }
  }
  return out;
}

std::string serialize(const Document& doc) {
  std::string out = serialize(doc.graph);
  if (doc.inner) {
    out += "inner\n";
    for (const auto& [from, to] : doc.inner->vertex_map) {
      out += "v: " + from.value + "->" + to.value + "\n";
    }
    for (const auto& [from, to] : doc.inner->edge_map) {
      out += "e: " + from.value + "->" + to.edge.value +
             (to.sign < 0 ? "^-1" : "") + "\n";
    }
  }
  return out;
}

}  // namespace dgi::dgf
