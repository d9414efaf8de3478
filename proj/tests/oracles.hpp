#pragma once

// Independent reference implementations used only by the tests. Nothing in
// here calls into the library beyond reading a poset's order relation.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "finspace/poset.hpp"

namespace oracle {

using boost::multiprecision::cpp_int;
using Dense = std::vector<std::vector<cpp_int>>;

/// Random poset on n points: a random DAG on 0..n-1 (edges i -> j for i < j
/// with the given probability), transitively closed, then randomly relabeled.
inline finspace::Poset random_poset(std::mt19937_64& rng, int n, double density) {
  std::bernoulli_distribution coin(density);
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::pair<int, int>> rel;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng)) rel.emplace_back(perm[i], perm[j]);
  return finspace::Poset::from_relations(n, rel);
}

inline finspace::Poset random_connected_poset(std::mt19937_64& rng, int n, double density) {
  while (true) {
    auto p = random_poset(rng, n, density);
    if (p.is_connected()) return p;
  }
}

/// Rank over Q by fraction-free (Bareiss) elimination.
inline std::size_t bareiss_rank(Dense a) {
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  std::size_t rank = 0;
  cpp_int prev = 1;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      for (std::size_t k = c + 1; k < cols; ++k) a[r][k] = (a[rank][c] * a[r][k] - a[r][c] * a[rank][k]) / prev;
      a[r][c] = 0;
    }
    prev = a[rank][c];
    ++rank;
  }
  return rank;
}

/// Determinant of a square matrix by fraction-free elimination.
inline cpp_int bareiss_det(Dense a) {
  const std::size_t n = a.size();
  cpp_int prev = 1;
  int sign = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(a[piv], a[c]);
      sign = -sign;
    }
    for (std::size_t r = c + 1; r < n; ++r) {
      for (std::size_t k = c + 1; k < n; ++k) a[r][k] = (a[c][c] * a[r][k] - a[r][c] * a[c][k]) / prev;
      a[r][c] = 0;
    }
    prev = a[c][c];
  }
  return n == 0 ? cpp_int(1) : sign * a[n - 1][n - 1];
}

/// Rank over F_p.
inline std::size_t rank_mod_p(const Dense& m, std::int64_t p) {
  std::vector<std::vector<std::int64_t>> a;
  for (const auto& row : m) {
    std::vector<std::int64_t> r;
    for (const auto& v : row) r.push_back(static_cast<std::int64_t>(((v % p) + p) % p));
    a.push_back(std::move(r));
  }
  auto inv = [p](std::int64_t x) {
    std::int64_t r = 1, e = p - 2;
    while (e) {
      if (e & 1) r = r * x % p;
      x = x * x % p;
      e >>= 1;
    }
    return r;
  };
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[rank]);
    const std::int64_t iv = inv(a[rank][c]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || a[r][c] == 0) continue;
      const std::int64_t f = a[r][c] * iv % p;
      for (std::size_t k = c; k < cols; ++k) a[r][k] = ((a[r][k] - f * a[rank][k]) % p + p) % p;
    }
    ++rank;
  }
  return rank;
}

/// Nonempty chains of p, found by testing every subset (n <= 16).
inline std::vector<std::vector<int>> brute_chains(const finspace::Poset& p) {
  const int n = p.size();
  std::vector<std::vector<int>> out;
  for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
    std::vector<int> s;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1U) s.push_back(i);
    bool chain = true;
    for (std::size_t i = 0; i < s.size() && chain; ++i)
      for (std::size_t j = i + 1; j < s.size() && chain; ++j) chain = p.comparable(s[i], s[j]);
    if (chain) out.push_back(std::move(s));
  }
  return out;
}

/// Reduced Betti numbers and, per degree, the primes p (from `primes`) that
/// occur as torsion, from dense boundary matrices of the order complex.
struct BruteHomology {
  std::vector<long> betti;
  std::vector<std::set<std::int64_t>> torsion_primes;
};

inline BruteHomology brute_homology(const finspace::Poset& p, const std::vector<std::int64_t>& primes = {2, 3, 5}) {
  auto chains = brute_chains(p);
  std::size_t top = 0;
  for (const auto& c : chains) top = std::max(top, c.size());
  std::vector<std::vector<std::vector<int>>> by_dim(top);
  for (auto& c : chains) by_dim[c.size() - 1].push_back(c);
  for (auto& v : by_dim) std::sort(v.begin(), v.end());
  // Boundary d_k : C_k -> C_{k-1}, with d_0 the augmentation to Z.
  auto boundary = [&](std::size_t k) {
    const auto& src = by_dim[k];
    std::size_t rows = k == 0 ? 1 : by_dim[k - 1].size();
    Dense m(rows, std::vector<cpp_int>(src.size(), 0));
    for (std::size_t j = 0; j < src.size(); ++j) {
      if (k == 0) {
        m[0][j] = 1;
        continue;
      }
      for (std::size_t i = 0; i < src[j].size(); ++i) {
        auto face = src[j];
        face.erase(face.begin() + static_cast<long>(i));
        auto it = std::lower_bound(by_dim[k - 1].begin(), by_dim[k - 1].end(), face);
        m[static_cast<std::size_t>(it - by_dim[k - 1].begin())][j] = (i % 2 == 0) ? 1 : -1;
      }
    }
    return m;
  };
  std::vector<std::size_t> rank_q(top + 1, 0);
  std::vector<std::vector<std::size_t>> rank_p(primes.size(), std::vector<std::size_t>(top + 1, 0));
  for (std::size_t k = 0; k < top; ++k) {
    Dense m = boundary(k);
    rank_q[k] = bareiss_rank(m);
    for (std::size_t i = 0; i < primes.size(); ++i) rank_p[i][k] = rank_mod_p(m, primes[i]);
  }
  BruteHomology h;
  for (std::size_t k = 0; k < top; ++k) {
    long b = static_cast<long>(by_dim[k].size()) - static_cast<long>(rank_q[k]) - static_cast<long>(rank_q[k + 1]);
    h.betti.push_back(b);
    std::set<std::int64_t> tp;
    // p-torsion in H_k iff rank of d_{k+1} drops modulo p.
    for (std::size_t i = 0; i < primes.size(); ++i)
      if (rank_p[i][k + 1] < rank_q[k + 1]) tp.insert(primes[i]);
    h.torsion_primes.push_back(tp);
  }
  while (!h.betti.empty() && h.betti.back() == 0 && h.torsion_primes.back().empty()) {
    h.betti.pop_back();
    h.torsion_primes.pop_back();
  }
  return h;
}

/// Isomorphism by trying every bijection (n <= 8).
inline bool brute_isomorphic(const finspace::Poset& a, const finspace::Poset& b) {
  if (a.size() != b.size()) return false;
  const int n = a.size();
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      for (int j = 0; j < n && ok; ++j) ok = a.leq(i, j) == b.leq(perm[i], perm[j]);
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

/// Isomorphism classes of posets on n points (n <= 6), found by listing every
/// naturally labeled strict order (i < j only) and keeping the smallest
/// relation matrix over all relabelings. Returns {all, connected}.
inline std::pair<long, long> brute_class_counts(int n) {
  std::vector<std::pair<int, int>> slots;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) slots.emplace_back(i, j);
  std::set<std::uint64_t> all, connected;
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.size()); ++mask) {
    std::vector<std::vector<bool>> lt(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n)));
    for (std::size_t s = 0; s < slots.size(); ++s)
      if (mask >> s & 1U) lt[slots[s].first][slots[s].second] = true;
    bool transitive = true;
    for (int i = 0; i < n && transitive; ++i)
      for (int j = 0; j < n && transitive; ++j)
        for (int k = 0; k < n && transitive; ++k)
          if (lt[i][j] && lt[j][k] && !lt[i][k]) transitive = false;
    if (!transitive) continue;
    std::iota(perm.begin(), perm.end(), 0);
    std::uint64_t best = ~std::uint64_t{0};
    do {
      std::uint64_t code = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) code = code << 1 | (lt[perm[i]][perm[j]] ? 1U : 0U);
      best = std::min(best, code);
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (!all.insert(best).second) continue;
    // Connectivity of the comparability graph.
    std::vector<int> comp(static_cast<std::size_t>(n));
    std::iota(comp.begin(), comp.end(), 0);
    std::function<int(int)> find = [&](int x) { return comp[x] == x ? x : comp[x] = find(comp[x]); };
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (lt[i][j]) comp[find(i)] = find(j);
    int roots = 0;
    for (int i = 0; i < n; ++i) roots += find(i) == i;
    if (roots == 1) connected.insert(best);
  }
  return {static_cast<long>(all.size()), static_cast<long>(connected.size())};
}

}  // namespace oracle
