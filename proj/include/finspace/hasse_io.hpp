#pragma once

#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "finspace/poset.hpp"

namespace finspace {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

namespace detail {

inline bool valid_label(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (std::isspace(static_cast<unsigned char>(c)) || c == '<' || c == '#') return false;
  return true;
}

inline std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else if (c == '<') {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
      out.emplace_back("<");
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

}  // namespace detail

/// Parses the Hasse text format:
///   a < b          one relation (chains `a < b < c` are accepted too)
///   point x        declares a point, needed for isolated points
///   # comment
/// Elements are numbered in order of first appearance. Cycles are allowed and
/// produce a non-antisymmetric preorder; `a < a` is rejected.
inline Preorder parse_hasse(std::string_view text) {
  std::vector<std::string> labels;
  std::map<std::string, Element, std::less<>> index;
  std::vector<std::pair<Element, Element>> rel;
  auto intern = [&](const std::string& l, int line) {
    if (!detail::valid_label(l)) throw ParseError(line, "invalid label '" + l + "'");
    auto it = index.find(l);
    if (it != index.end()) return it->second;
    if (static_cast<int>(labels.size()) >= kMaxElements)
      throw CapacityError("poset exceeds " + std::to_string(kMaxElements) + " elements");
    Element id = static_cast<Element>(labels.size());
    labels.push_back(l);
    index.emplace(l, id);
    return id;
  };

  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tok = detail::split_ws(line);
    if (tok.empty()) continue;
    if (tok[0] == "point" && (tok.size() == 1 || tok[1] != "<")) {
      if (tok.size() != 2) throw ParseError(lineno, "expected 'point <label>'");
      intern(tok[1], lineno);
      continue;
    }
    if (tok.size() < 3 || tok.size() % 2 == 0) throw ParseError(lineno, "expected 'a < b'");
    for (std::size_t i = 1; i < tok.size(); i += 2)
      if (tok[i] != "<") throw ParseError(lineno, "expected '<' between labels");
    for (std::size_t i = 0; i + 2 < tok.size(); i += 2) {
      if (tok[i] == "<" || tok[i + 2] == "<") throw ParseError(lineno, "missing label");
      if (tok[i] == tok[i + 2]) throw ParseError(lineno, "relation '" + tok[i] + " < " + tok[i] + "' is not strict");
      Element a = intern(tok[i], lineno);
      Element b = intern(tok[i + 2], lineno);
      rel.emplace_back(a, b);
    }
  }
  return Preorder::from_relations(std::move(labels), rel);
}

enum class PointDeclarations { Isolated, All };

/// Writes cover relations sorted by (lower, upper) element id. With
/// PointDeclarations::All every element is declared first, so parsing the
/// output reproduces the element numbering exactly.
inline std::string write_hasse(const Poset& p, PointDeclarations decl = PointDeclarations::Isolated) {
  std::string out;
  for (int x = 0; x < p.size(); ++x) {
    bool isolated = p.hat_c(x).empty();
    if (decl == PointDeclarations::All || isolated) out += "point " + p.label(x) + "\n";
  }
  for (auto [x, y] : p.covers()) out += p.label(x) + " < " + p.label(y) + "\n";
  return out;
}

/// Graphviz rendering of the Hasse diagram (upper elements drawn on top).
inline std::string write_dot(const Poset& p) {
  std::string out = "digraph hasse {\n  rankdir=BT;\n";
  for (int x = 0; x < p.size(); ++x) out += "  n" + std::to_string(x) + " [label=\"" + p.label(x) + "\"];\n";
  for (auto [x, y] : p.covers()) out += "  n" + std::to_string(x) + " -> n" + std::to_string(y) + ";\n";
  return out + "}\n";
}

}  // namespace finspace
