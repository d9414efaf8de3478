#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "finspace/element_set.hpp"

namespace finspace {

/// Raised when a relation or a derived object breaks one of the order
/// invariants (reflexivity, transitivity, antisymmetry, label uniqueness).
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string unique_label(std::string base, const std::set<std::string>& taken) {
  while (taken.count(base)) base += '\'';
  return base;
}

inline std::vector<std::string> default_labels(int n) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

}  // namespace detail

/// A finite preorder (= finite topological space). `up(x)` is the set of
/// elements y with x <= y; the relation is always reflexive and transitive.
class Preorder {
 public:
  Preorder() = default;

  /// Builds the reflexive-transitive closure of `relations`, where each pair
  /// (x, y) asserts x <= y.
  static Preorder from_relations(std::vector<std::string> labels,
                                 const std::vector<std::pair<Element, Element>>& relations) {
    Preorder p;
    p.init(std::move(labels));
    for (auto [x, y] : relations) {
      p.check_index(x);
      p.check_index(y);
      p.up_[x].insert(y);
    }
    p.close();
    return p;
  }

  int size() const { return static_cast<int>(labels_.size()); }
  bool empty() const { return labels_.empty(); }
  const std::string& label(Element x) const { return labels_.at(static_cast<std::size_t>(x)); }
  const std::vector<std::string>& labels() const { return labels_; }

  std::optional<Element> find(std::string_view label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == label) return static_cast<Element>(i);
    return std::nullopt;
  }
  Element index_of(std::string_view label) const {
    auto x = find(label);
    if (!x) throw InvariantError("unknown element '" + std::string(label) + "'");
    return *x;
  }

  bool leq(Element x, Element y) const { return up_[x].contains(y); }
  bool less(Element x, Element y) const { return x != y && up_[x].contains(y); }
  bool comparable(Element x, Element y) const { return leq(x, y) || leq(y, x); }

  /// U_a: everything below or equal to a.
  const ElementSet& down(Element a) const { return down_.at(static_cast<std::size_t>(a)); }
  /// F_a: everything above or equal to a.
  const ElementSet& up(Element a) const { return up_.at(static_cast<std::size_t>(a)); }

  ElementSet all() const { return ElementSet::range(size()); }

  bool is_antisymmetric() const {
    for (int x = 0; x < size(); ++x)
      if ((up_[x] & down_[x]) != ElementSet::single(x)) return false;
    return true;
  }

  friend bool operator==(const Preorder&, const Preorder&) = default;

 protected:
  void init(std::vector<std::string> labels) {
    if (static_cast<int>(labels.size()) > kMaxElements)
      throw CapacityError("poset exceeds " + std::to_string(kMaxElements) + " elements");
    std::set<std::string> seen;
    for (const auto& l : labels) {
      if (l.empty()) throw InvariantError("empty element label");
      if (!seen.insert(l).second) throw InvariantError("duplicate element label '" + l + "'");
    }
    labels_ = std::move(labels);
    up_.assign(labels_.size(), ElementSet{});
    down_.assign(labels_.size(), ElementSet{});
    for (int x = 0; x < size(); ++x) up_[x].insert(x);
  }

  void check_index(Element x) const {
    if (x < 0 || x >= size()) throw InvariantError("element index out of range");
  }

  void close() {
    const int n = size();
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        if (up_[i].contains(k)) up_[i] |= up_[k];
    rebuild_down();
  }

  void rebuild_down() {
    const int n = size();
    for (auto& d : down_) d = ElementSet{};
    for (int x = 0; x < n; ++x) up_[x].for_each([&](Element y) { down_[y].insert(x); });
  }

  std::vector<std::string> labels_;
  std::vector<ElementSet> up_;
  std::vector<ElementSet> down_;
};

/// A finite poset (= finite T0 space).
class Poset : public Preorder {
 public:
  Poset() = default;

  /// Accepts a preorder only if it is antisymmetric.
  explicit Poset(Preorder p) : Preorder(std::move(p)) {
    if (!is_antisymmetric()) throw InvariantError("relation is not antisymmetric");
  }

  static Poset from_relations(std::vector<std::string> labels,
                              const std::vector<std::pair<Element, Element>>& relations) {
    return Poset(Preorder::from_relations(std::move(labels), relations));
  }

  /// Unlabelled construction; labels become "0", "1", ...
  static Poset from_relations(int n, const std::vector<std::pair<Element, Element>>& relations) {
    return from_relations(detail::default_labels(n), relations);
  }

  /// Builds a poset from rows that are already reflexive and transitive.
  /// Closure is still recomputed so the invariant never depends on the caller.
  static Poset from_up_sets(std::vector<std::string> labels, const std::vector<ElementSet>& up) {
    Poset p;
    p.init(std::move(labels));
    for (int x = 0; x < p.size(); ++x) p.up_[x] |= up[static_cast<std::size_t>(x)];
    p.close();
    if (!p.is_antisymmetric()) throw InvariantError("relation is not antisymmetric");
    return p;
  }

  ElementSet hat_down(Element a) const { return down(a) - ElementSet::single(a); }
  ElementSet hat_up(Element a) const { return up(a) - ElementSet::single(a); }
  ElementSet c_set(Element a) const { return down(a) | up(a); }
  ElementSet hat_c(Element a) const { return c_set(a) - ElementSet::single(a); }

  /// Elements covered by x (maximal elements of the strict down set).
  ElementSet lower_covers(Element x) const {
    ElementSet below = hat_down(x);
    ElementSet out;
    below.for_each([&](Element y) {
      if ((hat_up(y) & below).empty()) out.insert(y);
    });
    return out;
  }
  ElementSet upper_covers(Element x) const {
    ElementSet above = hat_up(x);
    ElementSet out;
    above.for_each([&](Element y) {
      if ((hat_down(y) & above).empty()) out.insert(y);
    });
    return out;
  }

  /// Cover relations (x, y) with x covered by y, sorted.
  std::vector<std::pair<Element, Element>> covers() const {
    std::vector<std::pair<Element, Element>> out;
    for (int y = 0; y < size(); ++y) lower_covers(y).for_each([&](Element x) { out.emplace_back(x, y); });
    std::sort(out.begin(), out.end());
    return out;
  }

  ElementSet maximal(const ElementSet& s) const {
    ElementSet out;
    s.for_each([&](Element x) {
      if ((hat_up(x) & s).empty()) out.insert(x);
    });
    return out;
  }
  ElementSet minimal(const ElementSet& s) const {
    ElementSet out;
    s.for_each([&](Element x) {
      if ((hat_down(x) & s).empty()) out.insert(x);
    });
    return out;
  }
  ElementSet maximal() const { return maximal(all()); }
  ElementSet minimal() const { return minimal(all()); }
  /// X - mxl(X) - mnl(X).
  ElementSet body() const { return all() - maximal() - minimal(); }

  ElementSet down_closure(const ElementSet& s) const {
    ElementSet out;
    s.for_each([&](Element x) { out |= down(x); });
    return out;
  }
  ElementSet up_closure(const ElementSet& s) const {
    ElementSet out;
    s.for_each([&](Element x) { out |= up(x); });
    return out;
  }
  bool is_down_set(const ElementSet& s) const { return down_closure(s) == s; }
  bool is_up_set(const ElementSet& s) const { return up_closure(s) == s; }

  /// Subspace on `s`; the i-th element of the result is the i-th member of s.
  Poset induced(const ElementSet& s) const {
    std::vector<Element> members = s.members();
    std::vector<int> pos(static_cast<std::size_t>(size()), -1);
    for (std::size_t i = 0; i < members.size(); ++i) pos[members[i]] = static_cast<int>(i);
    std::vector<std::string> labels;
    labels.reserve(members.size());
    std::vector<ElementSet> rows(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
      labels.push_back(label(members[i]));
      (up(members[i]) & s).for_each([&](Element y) { rows[i].insert(pos[y]); });
    }
    return from_closed_rows(std::move(labels), std::move(rows));
  }

  Poset without(Element x) const { return induced(all() - ElementSet::single(x)); }

  Poset opposite() const {
    Poset p;
    p.labels_ = labels_;
    p.up_ = down_;
    p.down_ = up_;
    return p;
  }

  /// Connected components of the comparability graph restricted to s.
  std::vector<ElementSet> components(const ElementSet& s) const {
    std::vector<ElementSet> out;
    ElementSet left = s;
    while (!left.empty()) {
      ElementSet comp = ElementSet::single(left.first());
      ElementSet frontier = comp;
      while (!frontier.empty()) {
        ElementSet grow;
        frontier.for_each([&](Element x) { grow |= c_set(x); });
        grow &= s;
        frontier = grow - comp;
        comp |= grow;
      }
      out.push_back(comp);
      left -= comp;
    }
    return out;
  }
  std::vector<ElementSet> components() const { return components(all()); }
  bool is_connected() const { return !empty() && components().size() == 1; }

  /// Elements ordered so that x < y implies x comes first.
  std::vector<Element> linear_extension() const {
    std::vector<Element> order(static_cast<std::size_t>(size()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Element a, Element b) { return down(a).size() < down(b).size(); });
    return order;
  }

  /// Length of the longest chain inside s; -1 for the empty set.
  int height(const ElementSet& s) const {
    std::vector<int> len(static_cast<std::size_t>(size()), -1);
    int best = -1;
    for (Element x : linear_extension()) {
      if (!s.contains(x)) continue;
      int l = 0;
      (hat_down(x) & s).for_each([&](Element y) { l = std::max(l, len[y] + 1); });
      len[x] = l;
      best = std::max(best, l);
    }
    return best;
  }
  int height() const { return height(all()); }

  bool is_chain(const ElementSet& s) const {
    bool ok = true;
    s.for_each([&](Element x) {
      if (!(s - c_set(x)).empty()) ok = false;
    });
    return ok;
  }
  bool is_antichain(const ElementSet& s) const {
    bool ok = true;
    s.for_each([&](Element x) {
      if ((hat_c(x) & s).intersects(s)) ok = false;
    });
    return ok;
  }

  /// True iff some element of a is comparable with some element of b.
  bool comparable(const ElementSet& a, const ElementSet& b) const {
    bool found = false;
    a.for_each([&](Element x) {
      if (!found && c_set(x).intersects(b)) found = true;
    });
    return found;
  }
  using Preorder::comparable;

  std::optional<Element> maximum(const ElementSet& s) const {
    ElementSet m = maximal(s);
    if (m.size() == 1 && (down(m.first()) & s) == s) return m.first();
    return std::nullopt;
  }
  std::optional<Element> minimum(const ElementSet& s) const {
    ElementSet m = minimal(s);
    if (m.size() == 1 && (up(m.first()) & s) == s) return m.first();
    return std::nullopt;
  }

  friend bool operator==(const Poset&, const Poset&) = default;

 private:
  friend Poset t0_quotient(const Preorder&);

  static Poset from_closed_rows(std::vector<std::string> labels, std::vector<ElementSet> rows) {
    Poset p;
    p.init(std::move(labels));
    p.up_ = std::move(rows);
    p.rebuild_down();
    return p;
  }
};

/// Maximal T0 quotient: x ~ y iff x <= y and y <= x. Class labels join the
/// member labels with '~'; representatives are ordered by smallest member.
inline Poset t0_quotient(const Preorder& p) {
  const int n = p.size();
  std::vector<int> cls(static_cast<std::size_t>(n), -1);
  std::vector<std::vector<Element>> members;
  for (int x = 0; x < n; ++x) {
    if (cls[x] >= 0) continue;
    int id = static_cast<int>(members.size());
    members.emplace_back();
    (p.up(x) & p.down(x)).for_each([&](Element y) {
      cls[y] = id;
      members.back().push_back(y);
    });
  }
  std::vector<std::string> labels;
  std::vector<std::pair<Element, Element>> rel;
  for (const auto& m : members) {
    std::string l;
    for (std::size_t i = 0; i < m.size(); ++i) l += (i ? "~" : "") + p.label(m[i]);
    labels.push_back(std::move(l));
  }
  for (int x = 0; x < n; ++x)
    p.up(x).for_each([&](Element y) {
      if (cls[x] != cls[y]) rel.emplace_back(cls[x], cls[y]);
    });
  return Poset::from_relations(std::move(labels), rel);
}

inline Poset chain_poset(int n) {
  std::vector<std::pair<Element, Element>> rel;
  for (int i = 0; i + 1 < n; ++i) rel.emplace_back(i, i + 1);
  return Poset::from_relations(n, rel);
}

inline Poset antichain_poset(int n) { return Poset::from_relations(n, {}); }

/// S^1_n: maxima a_0..a_{n-1}, minima b_0..b_{n-1}, b_i < a_i and b_i < a_{i+1}.
inline Poset s1_n(int n) {
  if (n < 2) throw InvariantError("s1_n requires n >= 2");
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back("a" + std::to_string(i));
  for (int i = 0; i < n; ++i) labels.push_back("b" + std::to_string(i));
  std::vector<std::pair<Element, Element>> rel;
  for (int i = 0; i < n; ++i) {
    rel.emplace_back(n + i, i);
    rel.emplace_back(n + i, (i + 1) % n);
  }
  return Poset::from_relations(std::move(labels), rel);
}

/// k-fold non-Hausdorff suspension: each step places two new incomparable
/// points above everything.
inline Poset nh_suspension(const Poset& p, int k = 1) {
  if (k < 0) throw InvariantError("suspension count must be non-negative");
  Poset cur = p;
  for (int step = 0; step < k; ++step) {
    const int n = cur.size();
    std::set<std::string> taken(cur.labels().begin(), cur.labels().end());
    std::vector<std::string> labels = cur.labels();
    std::string top = detail::unique_label("s" + std::to_string(step) + "+", taken);
    taken.insert(top);
    std::string bottom = detail::unique_label("s" + std::to_string(step) + "-", taken);
    labels.push_back(top);
    labels.push_back(bottom);
    std::vector<ElementSet> up(static_cast<std::size_t>(n + 2));
    for (int x = 0; x < n; ++x) {
      up[x] = cur.up(x);
      up[x].insert(n);
      up[x].insert(n + 1);
    }
    up[n].insert(n);
    up[n + 1].insert(n + 1);
    cur = Poset::from_up_sets(std::move(labels), up);
  }
  return cur;
}

/// Disjoint union; labels of the second operand are made unique if needed.
inline Poset disjoint_union(const Poset& a, const Poset& b) {
  std::set<std::string> taken(a.labels().begin(), a.labels().end());
  std::vector<std::string> labels = a.labels();
  for (const auto& l : b.labels()) {
    std::string u = detail::unique_label(l, taken);
    taken.insert(u);
    labels.push_back(u);
  }
  std::vector<ElementSet> up(labels.size());
  for (int x = 0; x < a.size(); ++x) up[x] = a.up(x);
  for (int x = 0; x < b.size(); ++x)
    b.up(x).for_each([&](Element y) { up[a.size() + x].insert(a.size() + y); });
  return Poset::from_up_sets(std::move(labels), up);
}

/// I(A, B) = {(a, b) in A x B : a <= b}, ordered as a subposet of X^o x X.
struct IntervalPoset {
  Poset poset;
  std::vector<std::pair<Element, Element>> pairs;  // back-map into the parent
};

inline IntervalPoset interval_poset(const Poset& x, const ElementSet& a, const ElementSet& b) {
  IntervalPoset out;
  a.for_each([&](Element u) {
    (x.up(u) & b).for_each([&](Element v) { out.pairs.emplace_back(u, v); });
  });
  if (static_cast<int>(out.pairs.size()) > kMaxElements)
    throw CapacityError("interval poset exceeds the supported poset size");
  std::vector<std::string> labels;
  for (auto [u, v] : out.pairs) labels.push_back("(" + x.label(u) + "," + x.label(v) + ")");
  const std::size_t m = out.pairs.size();
  std::vector<ElementSet> up(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (x.leq(out.pairs[j].first, out.pairs[i].first) && x.leq(out.pairs[i].second, out.pairs[j].second))
        up[i].insert(static_cast<Element>(j));
  out.poset = Poset::from_up_sets(std::move(labels), up);
  return out;
}

/// Nonempty chains of a parent poset ordered by inclusion.
struct ChainPoset {
  std::vector<ElementSet> chains;  // each chain as a set of parent elements

  std::size_t size() const { return chains.size(); }
  bool leq(std::size_t i, std::size_t j) const { return chains[i].subset_of(chains[j]); }

  /// Materializes the chain poset as an ordinary Poset (labels "{x,y,...}").
  Poset to_poset(const Poset& parent) const {
    if (chains.size() > static_cast<std::size_t>(kMaxElements))
      throw CapacityError("chain poset exceeds the supported poset size");
    std::vector<std::string> labels;
    for (const auto& c : chains) {
      std::string l = "{";
      bool first = true;
      c.for_each([&](Element x) {
        l += (first ? "" : ",") + parent.label(x);
        first = false;
      });
      labels.push_back(l + "}");
    }
    std::vector<ElementSet> up(chains.size());
    for (std::size_t i = 0; i < chains.size(); ++i)
      for (std::size_t j = 0; j < chains.size(); ++j)
        if (leq(i, j)) up[i].insert(static_cast<Element>(j));
    return Poset::from_up_sets(std::move(labels), up);
  }
};

inline constexpr std::size_t kDefaultChainCap = std::size_t{1} << 18;

/// All nonempty chains contained in `within`, in a deterministic order
/// (by size, then lexicographically by bitset).
inline std::vector<ElementSet> enumerate_chains(const Poset& p, const ElementSet& within,
                                                std::size_t cap = kDefaultChainCap) {
  std::vector<ElementSet> out;
  std::vector<Element> order = p.linear_extension();
  std::vector<int> rank(static_cast<std::size_t>(p.size()));
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<int>(i);
  // Depth-first extension upward along the linear extension.
  struct Frame {
    ElementSet chain;
    Element top;
  };
  std::vector<Frame> stack;
  for (Element x : order)
    if (within.contains(x)) stack.push_back({ElementSet::single(x), x});
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    out.push_back(f.chain);
    if (out.size() > cap) throw CapacityError("chain count exceeds the configured cap");
    (p.hat_up(f.top) & within).for_each([&](Element y) {
      ElementSet c = f.chain;
      c.insert(y);
      stack.push_back({c, y});
    });
  }
  std::sort(out.begin(), out.end(), [](const ElementSet& a, const ElementSet& b) {
    int sa = a.size(), sb = b.size();
    if (sa != sb) return sa < sb;
    return a.members() < b.members();
  });
  return out;
}

/// Sd(X): the poset of nonempty chains of X.
inline ChainPoset barycentric_subdivision(const Poset& p, std::size_t cap = kDefaultChainCap) {
  return ChainPoset{enumerate_chains(p, p.all(), cap)};
}

/// ex(A) = {sigma in Sd(X) : sigma meets A}, an up set of Sd(X).
inline ChainPoset ex_subposet(const Poset& p, const ElementSet& a, std::size_t cap = kDefaultChainCap) {
  ChainPoset sd = barycentric_subdivision(p, cap);
  ChainPoset out;
  for (const auto& c : sd.chains)
    if (c.intersects(a)) out.chains.push_back(c);
  return out;
}

}  // namespace finspace
