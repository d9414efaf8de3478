#pragma once

#include <algorithm>
#include <cctype>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "finspace/homology.hpp"

namespace finspace {

/// Symbolic wedge of suspensions: Point, Sphere(n), Susp(k, e),
/// Wedge(e1, ..., en), and Leaf(i) standing for the i-th child space of a
/// certificate (Leaf(-1) is an unresolved space).
struct WedgeExpr {
  enum class Kind { Point, Sphere, Susp, Wedge, Leaf };

  Kind kind = Kind::Point;
  int n = 0;  // sphere dimension, suspension count or leaf index
  std::vector<WedgeExpr> kids;

  static WedgeExpr point() { return {}; }
  static WedgeExpr sphere(int dim) {
    if (dim < 0) throw InvariantError("sphere dimension must be non-negative");
    return {Kind::Sphere, dim, {}};
  }
  static WedgeExpr leaf(int index) { return {Kind::Leaf, index, {}}; }
  static WedgeExpr susp(int k, WedgeExpr e) {
    if (k < 0) throw InvariantError("suspension count must be non-negative");
    return {Kind::Susp, k, {std::move(e)}};
  }
  static WedgeExpr wedge(std::vector<WedgeExpr> parts) { return {Kind::Wedge, 0, std::move(parts)}; }
  static WedgeExpr spheres(int dim, long count) {
    std::vector<WedgeExpr> parts(static_cast<std::size_t>(count), sphere(dim));
    return wedge(std::move(parts));
  }

  bool is_resolved() const {
    if (kind == Kind::Leaf) return false;
    return std::all_of(kids.begin(), kids.end(), [](const WedgeExpr& k) { return k.is_resolved(); });
  }

  friend bool operator==(const WedgeExpr&, const WedgeExpr&) = default;
};

namespace detail {

inline bool sphere_order(const WedgeExpr& a, const WedgeExpr& b) {
  auto key = [](const WedgeExpr& e) {
    return e.kind == WedgeExpr::Kind::Sphere ? std::pair{0, e.n} : std::pair{1, 0};
  };
  return key(a) < key(b);
}

inline void flatten_into(WedgeExpr&& e, std::vector<WedgeExpr>& out) {
  if (e.kind == WedgeExpr::Kind::Wedge) {
    for (auto& k : e.kids) flatten_into(std::move(k), out);
  } else if (e.kind != WedgeExpr::Kind::Point) {
    out.push_back(std::move(e));
  }
}

}  // namespace detail

/// Normal form: Susp(0, e) = e, Susp(k, S^n) = S^{n+k}, Susp(k, point) =
/// point, nested suspensions merge, suspension distributes over wedges,
/// wedges flatten and drop points, a one-term wedge is its term and an empty
/// wedge is a point. Spheres in a wedge are sorted by dimension and precede
/// any leaves, which keep their relative order.
inline WedgeExpr normalize(WedgeExpr e) {
  using K = WedgeExpr::Kind;
  switch (e.kind) {
    case K::Point:
    case K::Sphere:
    case K::Leaf: return e;
    case K::Susp: {
      WedgeExpr inner = normalize(std::move(e.kids[0]));
      const int k = e.n;
      if (k == 0) return inner;
      switch (inner.kind) {
        case K::Point: return inner;
        case K::Sphere: return WedgeExpr::sphere(inner.n + k);
        case K::Susp: return WedgeExpr::susp(inner.n + k, std::move(inner.kids[0]));
        case K::Wedge: {
          std::vector<WedgeExpr> parts;
          for (auto& p : inner.kids) parts.push_back(normalize(WedgeExpr::susp(k, std::move(p))));
          return normalize(WedgeExpr::wedge(std::move(parts)));
        }
        case K::Leaf: return WedgeExpr::susp(k, std::move(inner));
      }
      return inner;
    }
    case K::Wedge: {
      std::vector<WedgeExpr> parts;
      for (auto& k : e.kids) detail::flatten_into(normalize(std::move(k)), parts);
      std::stable_sort(parts.begin(), parts.end(), detail::sphere_order);
      if (parts.empty()) return WedgeExpr::point();
      if (parts.size() == 1) return std::move(parts[0]);
      return WedgeExpr::wedge(std::move(parts));
    }
  }
  return e;
}

/// Replaces Leaf(i) by `children[i]` and normalizes.
inline WedgeExpr substitute(const WedgeExpr& e, const std::vector<WedgeExpr>& children) {
  if (e.kind == WedgeExpr::Kind::Leaf) {
    if (e.n < 0 || e.n >= static_cast<int>(children.size())) return e;
    return children[e.n];
  }
  WedgeExpr out = e;
  for (auto& k : out.kids) k = substitute(k, children);
  return normalize(std::move(out));
}

/// Leaf indices in order of occurrence.
inline void collect_leaves(const WedgeExpr& e, std::vector<int>& out) {
  if (e.kind == WedgeExpr::Kind::Leaf) out.push_back(e.n);
  for (const auto& k : e.kids) collect_leaves(k, out);
}

/// Text grammar: point | S<n> | susp^<k>(<expr>) | wedge(<expr>, ...) |
/// poset[<i>] (a child space) | poset (an unresolved space).
inline std::string to_text(const WedgeExpr& e) {
  using K = WedgeExpr::Kind;
  switch (e.kind) {
    case K::Point: return "point";
    case K::Sphere: return "S" + std::to_string(e.n);
    case K::Leaf: return e.n < 0 ? "poset" : "poset[" + std::to_string(e.n) + "]";
    case K::Susp: return "susp^" + std::to_string(e.n) + "(" + to_text(e.kids[0]) + ")";
    case K::Wedge: {
      std::string out = "wedge(";
      for (std::size_t i = 0; i < e.kids.size(); ++i) out += (i ? ", " : "") + to_text(e.kids[i]);
      return out + ")";
    }
  }
  return "?";
}

class WedgeParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

class WedgeParser {
 public:
  explicit WedgeParser(std::string_view s) : s_(s) {}

  WedgeExpr parse_all() {
    WedgeExpr e = parse();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw WedgeParseError("wedge expression, offset " + std::to_string(pos_) + ": " + what);
  }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(std::string_view tok) {
    skip_ws();
    if (s_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  void expect(std::string_view tok) {
    if (!eat(tok)) fail("expected '" + std::string(tok) + "'");
  }
  int number() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_ || pos_ - start > 6) fail("expected a number");
    return std::stoi(std::string(s_.substr(start, pos_ - start)));
  }

  WedgeExpr parse() {
    if (eat("point")) return WedgeExpr::point();
    if (eat("poset")) {
      if (eat("[")) {
        int i = number();
        expect("]");
        return WedgeExpr::leaf(i);
      }
      return WedgeExpr::leaf(-1);
    }
    if (eat("susp^")) {
      int k = number();
      expect("(");
      WedgeExpr inner = parse();
      expect(")");
      return WedgeExpr::susp(k, std::move(inner));
    }
    if (eat("wedge")) {
      expect("(");
      std::vector<WedgeExpr> parts;
      if (!eat(")")) {
        do parts.push_back(parse());
        while (eat(","));
        expect(")");
      }
      return WedgeExpr::wedge(std::move(parts));
    }
    if (eat("S")) return WedgeExpr::sphere(number());
    fail("unexpected token");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline WedgeExpr parse_wedge(std::string_view text) { return detail::WedgeParser(text).parse_all(); }

/// Reduced homology of a wedge expression. Leaves are resolved through
/// `leaf_homology`; without it any leaf is an error.
inline HomologyProfile wedge_homology(const WedgeExpr& e,
                                      const std::function<HomologyProfile(int)>& leaf_homology = {}) {
  using K = WedgeExpr::Kind;
  switch (e.kind) {
    case K::Point: return {};
    case K::Sphere: return HomologyProfile::sphere(e.n);
    case K::Susp: return wedge_homology(e.kids[0], leaf_homology).shifted(e.n);
    case K::Wedge: {
      HomologyProfile out;
      for (const auto& k : e.kids) out += wedge_homology(k, leaf_homology);
      return out;
    }
    case K::Leaf:
      if (!leaf_homology || e.n < 0) throw InvariantError("unresolved leaf in wedge expression");
      return leaf_homology(e.n);
  }
  return {};
}

/// Smallest sphere dimension occurring in a resolved expression, or -1 if
/// the expression is a point.
inline int min_sphere_dimension(const WedgeExpr& e) {
  WedgeExpr n = normalize(e);
  if (n.kind == WedgeExpr::Kind::Sphere) return n.n;
  int best = -1;
  for (const auto& k : n.kids) {
    int d = min_sphere_dimension(k);
    if (d >= 0 && (best < 0 || d < best)) best = d;
  }
  return best;
}

}  // namespace finspace
