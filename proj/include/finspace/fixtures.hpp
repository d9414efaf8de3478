#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "finspace/poset.hpp"

namespace finspace {

struct Fixture {
  std::string name;
  std::string description;
  Poset space;
};

namespace detail {

inline std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, sep))
    if (auto t = trim(part); !t.empty()) out.push_back(t);
  return out;
}

/// `labels` fixes the element order; `relations` is a ';'-separated list of
/// "x,y < u,v" items, each meaning every left label lies below every right one.
inline Poset compact_poset(const std::string& labels, const std::string& relations) {
  std::vector<std::string> names = split_on(labels, ' ');
  auto id = [&](const std::string& l) -> Element {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == l) return static_cast<Element>(i);
    throw InvariantError("fixture label '" + l + "' not declared");
  };
  std::vector<std::pair<Element, Element>> rel;
  for (const auto& item : split_on(relations, ';')) {
    auto sides = split_on(item, '<');
    if (sides.size() != 2) throw InvariantError("bad fixture relation '" + item + "'");
    for (const auto& lo : split_on(sides[0], ','))
      for (const auto& hi : split_on(sides[1], ',')) rel.emplace_back(id(lo), id(hi));
  }
  return Poset::from_relations(names, rel);
}

inline std::string indexed(char c, int n) {
  std::string out;
  for (int i = 0; i < n; ++i) out += std::string(out.empty() ? "" : " ") + c + std::to_string(i);
  return out;
}

}  // namespace detail

/// Every named space used by the tests and the `fixtures` command.
inline std::vector<Fixture> all_fixtures() {
  using detail::compact_poset;
  using detail::indexed;
  std::vector<Fixture> out;
  auto add = [&](std::string name, std::string desc, Poset p) {
    out.push_back({std::move(name), std::move(desc), std::move(p)});
  };

  for (int n = 2; n <= 8; ++n)
    add("s1_" + std::to_string(n), "minimal finite model of the circle with " + std::to_string(2 * n) + " points",
        s1_n(n));
  add("chain5", "five-point chain", chain_poset(5));

  // Connected spaces with at most four points.
  add("t1_1_point", "one point", chain_poset(1));
  add("t1_2_chain", "two-point chain", chain_poset(2));
  add("t1_3_chain", "three-point chain", chain_poset(3));
  add("t1_3_lambda", "two points below one", compact_poset("a b c", "b,c < a"));
  add("t1_3_vee", "one point below two", compact_poset("a b c", "a < b,c"));
  add("t1_4_chain", "four-point chain", chain_poset(4));
  add("t1_4_diamond", "bottom, two middles, top", compact_poset("a b c d", "d < b,c; b,c < a"));
  add("t1_4_chain_plus_leaf", "chain c<b<a with d<a", compact_poset("a b c d", "c < b; b < a; d < a"));
  add("t1_4_claw_top", "c,d below b below a", compact_poset("a b c d", "c,d < b; b < a"));
  add("t1_4_three_below", "b,c,d below a", compact_poset("a b c d", "b,c,d < a"));
  add("t1_4_chain_plus_top", "a<b<c with a<d", compact_poset("a b c d", "a < b; b < c; a < d"));
  add("t1_4_claw_bottom", "a below b below c,d", compact_poset("a b c d", "a < b; b < c,d"));
  add("t1_4_n", "the N poset", compact_poset("a b c d", "a < c; b < c,d"));
  add("t1_4_circle", "two points below two points", compact_poset("a b c d", "a,b < c,d"));
  add("t1_4_three_above", "a below b,c,d", compact_poset("a b c d", "a < b,c,d"));

  add("33circle", "three maximal, three minimal points forming a circle",
      compact_poset(indexed('a', 3) + " " + indexed('b', 3), "b0 < a2,a1; b2 < a1,a0; b1 < a0,a2"));
  add("figmis3mpis4_a", "three maximal over four minimal points, first bipartite graph",
      compact_poset(indexed('a', 3) + " " + indexed('b', 4), "b0 < a0,a1,a2; b1 < a0,a1; b3 < a1,a2; b2 < a2,a0"));
  add("figmis3mpis4_b", "three maximal over four minimal points, second bipartite graph",
      compact_poset(indexed('a', 3) + " " + indexed('b', 4), "b0 < a0,a1; b1 < a1,a0; b2 < a0,a2; b3 < a1,a2"));

  add("s12x4", "12 points, wedge of five circles",
      compact_poset(indexed('a', 4) + " " + indexed('b', 4) + " " + indexed('c', 4),
                    "b0 < a0; b1 < a1; b2 < a2; b3 < a3; c0 < b0; c1 < b1; c2 < b2; c3 < b3;"
                    "b1 < a0; b0 < a1; b3 < a2; b2 < a3; c0 < b3; c3 < b0; c1 < b2; c2 < b1"));

  const std::string l3333_114 = indexed('a', 3) + " " + indexed('b', 6) + " " + indexed('c', 3);
  add("fig_3333_114c", "12 points, wedge of three 2-spheres",
      compact_poset(l3333_114,
                    "b0 < a2,a1; b2 < a1,a0; b1 < a0,a2;"
                    "c2 < b0; c1 < b0; c1 < b2; c0 < b2; c0 < b4; c2 < b4;"
                    "b3 < a1; c1 < b3; c1 < b5; b5 < a1; b4 < b3; b3 < b1; b4 < b5; b5 < b1"));

  add("fig_3333_15d", "12 points with a four-level middle",
      compact_poset(indexed('a', 3) + " " + indexed('b', 3) + " c " + indexed('c', 3) + " d1 d2",
                    "b0 < a2,a1; b2 < a1,a0; b1 < a0,a2;"
                    "c2 < b0; c1 < b0; c1 < d2; c0 < d2; c0 < d1; c2 < d1;"
                    "d2 < b1; c < b1; d1 < c; d1 < b2; c1 < c; c < a1; c1 < b2; d2 < a1"));

  const std::string l3333_1 = indexed('a', 3) + " " + indexed('b', 3) + " " + indexed('c', 3) + " " + indexed('d', 3);
  const std::string top3333_1 = "b0 < a2,a1; b1 < a2,a0; b2 < a0,a1; c2 < d0,d1; c0 < d1,d2; c1 < d2,d0;";
  add("fig_3333_1e", "12 points, weakly a 3-sphere",
      compact_poset(l3333_1, top3333_1 + "d0,d1,d2 < b0,b1,b2"));
  add("fig_3333_1c", "12 points, wedge of three 2-spheres",
      compact_poset(l3333_1, top3333_1 +
                                 "d0 < b1; d1 < b0; d1 < b1; d1 < b2; d2 < b1; d0 < a1; c1 < b0; d2 < a1; c1 < b2"));

  const std::string l114 = indexed('a', 3) + " " + indexed('b', 6) + " " + indexed('c', 3);
  const std::string top114 = "b0 < a0,a1; b1 < a1,a0; b2 < a0,a2; b3 < a1,a2;";
  add("fig_114np4_a", "12 points, one maximal point over the body",
      compact_poset(l114, top114 + "c0 < b4,b5; c1 < b4,b5; c0 < b2; c1 < b3; c2 < b2,b3"));
  add("fig_114np4_b", "12 points, second arrangement",
      compact_poset(l114, top114 + "c0 < b5,b2,b4; c1 < b5,b3,b4; c2 < b3,b2,b4"));
  const std::string rel114c =
      "b0 < a0,a1,a2; b1 < a0,a1; b3 < a1,a2; b2 < a2,a0; c0,c1,c2 < b4; c0 < b5,b2; c1 < b5,b3; c2 < b3,b2";
  add("fig_114np4_c", "12 points, third arrangement", compact_poset(l114, rel114c));
  add("fig_l6mn3mp4_c_c", "completion of the third arrangement",
      compact_poset(l114, rel114c + "; b5 < b0; b5 < b1; b4 < b1; b4 < a2; c2 < b0"));

  add("fig_rmv_up_down", "removing an up and a down beat point at once changes the homotopy type",
      compact_poset("c0 c1 a b d0 d1", "c0,c1 < a; a < b; b < d0,d1"));
  return out;
}

inline std::optional<Fixture> find_fixture(const std::string& name) {
  for (auto& f : all_fixtures())
    if (f.name == name) return f;
  return std::nullopt;
}

}  // namespace finspace
