#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "finspace/poset.hpp"

namespace finspace {

using Simplex = std::vector<int>;

/// Abstract simplicial complex storing every simplex explicitly.
/// `simplices(d)` lists the d-simplices as sorted vertex tuples, sorted
/// lexicographically.
class SimplicialComplex {
 public:
  SimplicialComplex() = default;

  /// Closes `generators` under taking nonempty faces.
  SimplicialComplex(std::vector<std::string> vertex_labels, const std::vector<Simplex>& generators)
      : labels_(std::move(vertex_labels)) {
    const int nv = static_cast<int>(labels_.size());
    std::vector<Simplex> all;
    for (Simplex s : generators) {
      std::sort(s.begin(), s.end());
      if (s.empty() || std::adjacent_find(s.begin(), s.end()) != s.end())
        throw InvariantError("simplex must be nonempty and duplicate-free");
      if (s.front() < 0 || s.back() >= nv) throw InvariantError("simplex vertex out of range");
      if (s.size() > 30) throw CapacityError("simplex dimension too large to close under faces");
      const std::size_t k = s.size();
      for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << k); ++mask) {
        Simplex f;
        for (std::size_t i = 0; i < k; ++i)
          if (mask >> i & 1U) f.push_back(s[i]);
        all.push_back(std::move(f));
      }
    }
    assign(std::move(all));
  }

  int vertex_count() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  int dimension() const { return static_cast<int>(by_dim_.size()) - 1; }
  const std::vector<Simplex>& simplices(int d) const {
    static const std::vector<Simplex> none;
    return d >= 0 && d <= dimension() ? by_dim_[static_cast<std::size_t>(d)] : none;
  }
  std::size_t simplex_count() const {
    std::size_t c = 0;
    for (const auto& v : by_dim_) c += v.size();
    return c;
  }

  bool contains(const Simplex& s) const {
    int d = static_cast<int>(s.size()) - 1;
    const auto& v = simplices(d);
    return std::binary_search(v.begin(), v.end(), s);
  }

  /// Index of `s` within simplices(dim s), or -1.
  long index_of(const Simplex& s) const {
    int d = static_cast<int>(s.size()) - 1;
    const auto& v = simplices(d);
    auto it = std::lower_bound(v.begin(), v.end(), s);
    return it != v.end() && *it == s ? static_cast<long>(it - v.begin()) : -1;
  }

  bool has_vertex(int v) const { return contains(Simplex{v}); }

  /// st(v) = {sigma in K : sigma u {v} in K}.
  SimplicialComplex star(int v) const {
    check_vertex(v);
    return filter([&](const Simplex& s) { return contains(with_vertex(s, v)); });
  }
  /// K \ {v}: simplices not containing v.
  SimplicialComplex deletion(int v) const {
    check_vertex(v);
    return filter([&](const Simplex& s) { return !std::binary_search(s.begin(), s.end(), v); });
  }
  /// lk(v) = st(v) n (K \ {v}).
  SimplicialComplex link(int v) const {
    check_vertex(v);
    return filter([&](const Simplex& s) {
      return !std::binary_search(s.begin(), s.end(), v) && contains(with_vertex(s, v));
    });
  }

  long euler_characteristic() const {
    long chi = 0;
    for (int d = 0; d <= dimension(); ++d) chi += (d % 2 == 0 ? 1 : -1) * static_cast<long>(simplices(d).size());
    return chi;
  }

  /// Number of connected components among vertices that occur in K.
  int components() const {
    std::vector<int> parent(static_cast<std::size_t>(vertex_count()));
    for (int i = 0; i < vertex_count(); ++i) parent[i] = i;
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto& e : simplices(1)) parent[find(e[0])] = find(e[1]);
    int c = 0;
    for (const auto& v : simplices(0))
      if (find(v[0]) == v[0]) ++c;
    return c;
  }

  /// One simplex per line, labels separated by spaces, by dimension.
  std::string to_text() const {
    std::string out;
    for (int d = 0; d <= dimension(); ++d)
      for (const auto& s : simplices(d)) {
        for (std::size_t i = 0; i < s.size(); ++i) out += (i ? " " : "") + labels_[s[i]];
        out += '\n';
      }
    return out;
  }

  friend bool operator==(const SimplicialComplex& a, const SimplicialComplex& b) {
    return a.by_dim_ == b.by_dim_;
  }

  /// Builds directly from a face-closed family (no closure pass).
  static SimplicialComplex from_closed(std::vector<std::string> labels, std::vector<Simplex> simplices) {
    SimplicialComplex k;
    k.labels_ = std::move(labels);
    k.assign(std::move(simplices));
    return k;
  }

 private:
  static Simplex with_vertex(Simplex s, int v) {
    auto it = std::lower_bound(s.begin(), s.end(), v);
    if (it == s.end() || *it != v) s.insert(it, v);
    return s;
  }

  void check_vertex(int v) const {
    if (!has_vertex(v)) throw InvariantError("unknown vertex " + std::to_string(v));
  }

  template <class Pred>
  SimplicialComplex filter(Pred keep) const {
    std::vector<Simplex> out;
    for (const auto& level : by_dim_)
      for (const auto& s : level)
        if (keep(s)) out.push_back(s);
    return from_closed(labels_, std::move(out));
  }

  void assign(std::vector<Simplex> all) {
    by_dim_.clear();
    for (auto& s : all) {
      std::size_t d = s.size() - 1;
      if (by_dim_.size() <= d) by_dim_.resize(d + 1);
      by_dim_[d].push_back(std::move(s));
    }
    for (auto& level : by_dim_) {
      std::sort(level.begin(), level.end());
      level.erase(std::unique(level.begin(), level.end()), level.end());
    }
  }

  std::vector<std::string> labels_;
  std::vector<std::vector<Simplex>> by_dim_;
};

/// K(X): simplices are the nonempty chains, vertices are element ids.
inline SimplicialComplex order_complex(const Poset& p, std::size_t cap = kDefaultChainCap) {
  std::vector<Simplex> simplices;
  for (const auto& c : enumerate_chains(p, p.all(), cap)) simplices.push_back(c.members());
  return SimplicialComplex::from_closed(p.labels(), std::move(simplices));
}

}  // namespace finspace
