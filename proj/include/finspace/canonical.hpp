#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "finspace/poset.hpp"

namespace finspace {

/// Byte string identifying a poset up to isomorphism: the element count,
/// then the relation matrix rows in canonical order, packed as bits.
using CanonicalForm = std::string;

struct CanonicalLabeling {
  CanonicalForm form;
  std::vector<Element> order;  // order[i] = element at canonical position i
};

namespace detail {

class Canonizer {
 public:
  Canonizer(const Poset& p, const std::vector<int>* marks) : p_(p), n_(p.size()) {
    std::vector<int> col(static_cast<std::size_t>(n_), 0);
    // Initial invariants: mark, |U_x|, |F_x|, longest chain below and above.
    std::vector<int> below(static_cast<std::size_t>(n_), 0), above(static_cast<std::size_t>(n_), 0);
    auto ext = p.linear_extension();
    for (Element x : ext)
      p.hat_down(x).for_each([&](Element y) { below[x] = std::max(below[x], below[y] + 1); });
    for (auto it = ext.rbegin(); it != ext.rend(); ++it)
      p.hat_up(*it).for_each([&](Element y) { above[*it] = std::max(above[*it], above[y] + 1); });
    std::vector<std::vector<int>> sig(static_cast<std::size_t>(n_));
    for (int x = 0; x < n_; ++x)
      sig[x] = {marks ? (*marks)[x] : 0, p.down(x).size(), p.up(x).size(), below[x], above[x]};
    rank_by(sig, col);
    root_ = col;
    twin_.assign(static_cast<std::size_t>(n_), -1);
    for (int x = 0; x < n_; ++x)
      for (int y = 0; y < x && twin_[x] < 0; ++y)
        if (sig[x] == sig[y] && !p.comparable(x, y) &&
            (p.hat_down(x) - ElementSet::single(y)) == (p.hat_down(y) - ElementSet::single(x)) &&
            (p.hat_up(x) - ElementSet::single(y)) == (p.hat_up(y) - ElementSet::single(x)))
          twin_[x] = twin_[y] >= 0 ? twin_[y] : y;
    orbit_.resize(static_cast<std::size_t>(n_));
    std::iota(orbit_.begin(), orbit_.end(), 0);
  }

  CanonicalLabeling run() {
    std::vector<int> col = root_;
    refine(col);
    search(col, 0);
    return {best_form_, best_order_};
  }

 private:
  static int rank_by(const std::vector<std::vector<int>>& sig, std::vector<int>& col) {
    const std::size_t n = sig.size();
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return sig[a] < sig[b]; });
    int c = -1;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == 0 || sig[idx[i]] != sig[idx[i - 1]]) ++c;
      col[idx[i]] = c;
    }
    return c + 1;
  }

  static int count_colors(const std::vector<int>& col) {
    int m = -1;
    for (int c : col) m = std::max(m, c);
    return m + 1;
  }

  void refine(std::vector<int>& col) const {
    int cells = count_colors(col);
    std::vector<std::vector<int>> sig(static_cast<std::size_t>(n_));
    while (true) {
      for (int x = 0; x < n_; ++x) {
        auto& s = sig[x];
        s.clear();
        s.push_back(col[x]);
        std::size_t mid = 0;
        p_.hat_down(x).for_each([&](Element y) { s.push_back(col[y]); });
        mid = s.size();
        std::sort(s.begin() + 1, s.begin() + static_cast<long>(mid));
        s.push_back(-1);
        p_.hat_up(x).for_each([&](Element y) { s.push_back(col[y]); });
        std::sort(s.begin() + static_cast<long>(mid) + 1, s.end());
      }
      int next = rank_by(sig, col);
      if (next == cells) return;
      cells = next;
    }
  }

  CanonicalForm form_of(const std::vector<int>& col, std::vector<Element>& order) const {
    order.assign(static_cast<std::size_t>(n_), 0);
    for (int x = 0; x < n_; ++x) order[col[x]] = x;
    CanonicalForm f;
    f.push_back(static_cast<char>(n_ & 0xff));
    unsigned char byte = 0;
    int bit = 0;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        byte = static_cast<unsigned char>(byte << 1 | (p_.leq(order[i], order[j]) ? 1 : 0));
        if (++bit == 8) {
          f.push_back(static_cast<char>(byte));
          byte = 0;
          bit = 0;
        }
      }
    if (bit) f.push_back(static_cast<char>(byte << (8 - bit)));
    return f;
  }

  int find(int x) {
    while (orbit_[x] != x) x = orbit_[x] = orbit_[orbit_[x]];
    return x;
  }

  void search(const std::vector<int>& col, int depth) {
    const int cells = count_colors(col);
    if (cells == n_) {
      std::vector<Element> order;
      CanonicalForm f = form_of(col, order);
      if (best_order_.empty() || f > best_form_) {
        best_form_ = std::move(f);
        best_order_ = std::move(order);
      } else if (f == best_form_) {
        // order -> best_order_ is an automorphism.
        for (int i = 0; i < n_; ++i) {
          int a = find(order[i]), b = find(best_order_[i]);
          if (a != b) orbit_[std::max(a, b)] = std::min(a, b);
        }
      }
      return;
    }
    // First non-singleton cell (smallest color).
    std::vector<int> size(static_cast<std::size_t>(cells), 0);
    for (int c : col) ++size[c];
    int target = 0;
    while (size[target] < 2) ++target;
    std::vector<int> tried_twins;
    std::vector<int> tried;
    for (int v = 0; v < n_; ++v) {
      if (col[v] != target) continue;
      int tw = twin_[v] >= 0 ? twin_[v] : v;
      bool skip = false;
      for (int t : tried_twins)
        if (t == tw) skip = true;
      if (depth == 0)
        for (int u : tried)
          if (find(u) == find(v)) skip = true;
      if (skip) continue;
      tried_twins.push_back(tw);
      tried.push_back(v);
      std::vector<int> next(static_cast<std::size_t>(n_));
      for (int x = 0; x < n_; ++x) next[x] = 2 * col[x] + (col[x] == target && x != v ? 1 : 0);
      refine(next);
      search(next, depth + 1);
    }
  }

  const Poset& p_;
  int n_;
  std::vector<int> root_;
  std::vector<int> twin_;
  std::vector<int> orbit_;
  CanonicalForm best_form_;
  std::vector<Element> best_order_;
};

}  // namespace detail

/// Canonical labeling by colour refinement (mark, |U|, |F|, levels, then
/// neighbour colour multisets) and individualization search, with twin and
/// root-orbit pruning. `marks`, when given, must be preserved by isomorphisms.
inline CanonicalLabeling canonical_labeling(const Poset& p, const std::vector<int>* marks = nullptr) {
  if (p.empty()) return {CanonicalForm(1, '\0'), {}};
  return detail::Canonizer(p, marks).run();
}

inline CanonicalForm canonical_form(const Poset& p) { return canonical_labeling(p).form; }

inline bool isomorphic(const Poset& a, const Poset& b) {
  return a.size() == b.size() && canonical_form(a) == canonical_form(b);
}

/// Poset rebuilt from its canonical form (labels "0", "1", ...).
inline Poset poset_from_form(const CanonicalForm& f) {
  const int n = static_cast<unsigned char>(f.at(0));
  std::vector<std::pair<Element, Element>> rel;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int bit = i * n + j;
      auto byte = static_cast<unsigned char>(f.at(1 + bit / 8));
      if (i != j && (byte >> (7 - bit % 8) & 1U)) rel.emplace_back(i, j);
    }
  return Poset::from_relations(n, rel);
}

}  // namespace finspace
