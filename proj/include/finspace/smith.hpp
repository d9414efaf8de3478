#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace finspace {

using BigInt = boost::multiprecision::cpp_int;

/// Sparse integer matrix given by its nonzero entries (duplicates are summed).
struct IntMatrix {
  struct Entry {
    int row;
    int col;
    std::int64_t value;
  };

  int rows = 0;
  int cols = 0;
  std::vector<Entry> entries;

  static IntMatrix dense(const std::vector<std::vector<std::int64_t>>& m) {
    IntMatrix out;
    out.rows = static_cast<int>(m.size());
    out.cols = m.empty() ? 0 : static_cast<int>(m[0].size());
    for (int r = 0; r < out.rows; ++r)
      for (int c = 0; c < out.cols; ++c)
        if (m[r][c] != 0) out.entries.push_back({r, c, m[r][c]});
    return out;
  }
};

struct SmithResult {
  /// Nonzero diagonal entries d_1 | d_2 | ... | d_r, all positive.
  std::vector<BigInt> invariants;
  /// True if the int64 pass overflowed and the arbitrary-precision pass ran.
  bool used_bigint = false;

  std::size_t rank() const { return invariants.size(); }
  /// Invariant factors greater than one.
  std::vector<BigInt> torsion() const {
    std::vector<BigInt> out;
    for (const auto& d : invariants)
      if (d > 1) out.push_back(d);
    return out;
  }
};

namespace detail {

struct SmithOverflow {};

inline std::int64_t checked_sub_mul(std::int64_t a, std::int64_t f, std::int64_t b) {
  std::int64_t prod = 0;
  std::int64_t out = 0;
  if (__builtin_mul_overflow(f, b, &prod) || __builtin_sub_overflow(a, prod, &out)) throw SmithOverflow{};
  constexpr std::int64_t kLimit = std::int64_t{1} << 62;
  if (out > kLimit || out < -kLimit) throw SmithOverflow{};
  return out;
}
inline BigInt checked_sub_mul(const BigInt& a, const BigInt& f, const BigInt& b) { return a - f * b; }

inline std::int64_t abs_value(std::int64_t v) { return v < 0 ? -v : v; }
inline BigInt abs_value(const BigInt& v) { return v < 0 ? BigInt(-v) : v; }

template <class T>
class SmithEliminator {
 public:
  using Row = std::vector<std::pair<int, T>>;

  SmithEliminator(const IntMatrix& m) : rows_(static_cast<std::size_t>(m.rows)), col_rows_(static_cast<std::size_t>(m.cols)),
                                        row_alive_(static_cast<std::size_t>(m.rows), 1),
                                        col_alive_(static_cast<std::size_t>(m.cols), 1) {
    std::vector<IntMatrix::Entry> es = m.entries;
    std::sort(es.begin(), es.end(), [](const auto& a, const auto& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    for (const auto& e : es) {
      if (e.row < 0 || e.row >= m.rows || e.col < 0 || e.col >= m.cols)
        throw std::out_of_range("matrix entry out of range");
      Row& r = rows_[e.row];
      if (!r.empty() && r.back().first == e.col) {
        r.back().second = checked_sub_mul(r.back().second, T(-1), T(e.value));
      } else {
        r.emplace_back(e.col, T(e.value));
      }
    }
    for (int r = 0; r < m.rows; ++r) {
      Row& row = rows_[r];
      row.erase(std::remove_if(row.begin(), row.end(), [](const auto& p) { return p.second == 0; }), row.end());
      for (const auto& [c, v] : row) col_rows_[c].push_back(r);
    }
  }

  std::vector<T> run() {
    std::vector<T> diag;
    int p = 0;
    int q = 0;
    while (find_pivot(p, q)) {
      T d = get(p, q);
      while (true) {
        // Clear column q with row operations.
        bool remainder = false;
        for (int r : live_rows_of(q)) {
          if (r == p) continue;
          T f = get(r, q) / d;
          if (f != 0) axpy(r, f, p);
          if (get(r, q) != 0) remainder = true;
        }
        if (remainder) {
          for (int r : live_rows_of(q))
            if (abs_value(get(r, q)) < abs_value(d)) d = get(r, q), p = r;
          continue;
        }
        // Column q is now zero outside row p, so a column operation only
        // changes row p: reduce its entries modulo d.
        Row& row = rows_[p];
        bool row_rem = false;
        for (auto& [c, v] : row) {
          if (c == q) continue;
          v = v - (v / d) * d;
          if (v != 0) row_rem = true;
        }
        row.erase(std::remove_if(row.begin(), row.end(), [](const auto& e) { return e.second == 0; }), row.end());
        if (!row_rem) break;
        for (const auto& [c, v] : row)
          if (c != q && abs_value(v) < abs_value(d)) d = v, q = c;
      }
      diag.push_back(abs_value(d));
      row_alive_[p] = 0;
      col_alive_[q] = 0;
      rows_[p].clear();
    }
    return diag;
  }

 private:
  T get(int r, int c) const {
    const Row& row = rows_[r];
    auto it = std::lower_bound(row.begin(), row.end(), c, [](const auto& e, int col) { return e.first < col; });
    return it != row.end() && it->first == c ? it->second : T(0);
  }

  std::vector<int> live_rows_of(int c) {
    std::vector<int>& cand = col_rows_[c];
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    cand.erase(std::remove_if(cand.begin(), cand.end(), [&](int r) { return !row_alive_[r] || get(r, c) == 0; }),
               cand.end());
    return cand;
  }

  // row_r -= f * row_p
  void axpy(int r, const T& f, int p) {
    const Row& src = rows_[p];
    Row& dst = rows_[r];
    Row out;
    out.reserve(dst.size() + src.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < dst.size() || j < src.size()) {
      if (j == src.size() || (i < dst.size() && dst[i].first < src[j].first)) {
        out.push_back(dst[i++]);
      } else if (i == dst.size() || src[j].first < dst[i].first) {
        T v = checked_sub_mul(T(0), f, src[j].second);
        out.emplace_back(src[j].first, v);
        col_rows_[src[j].first].push_back(r);
        ++j;
      } else {
        T v = checked_sub_mul(dst[i].second, f, src[j].second);
        if (v != 0) out.emplace_back(dst[i].first, v);
        ++i;
        ++j;
      }
    }
    dst = std::move(out);
  }

  // Smallest absolute value; ties broken by leftmost column, then top row.
  bool find_pivot(int& p, int& q) {
    bool found = false;
    T best = 0;
    for (int c = 0; c < static_cast<int>(col_rows_.size()); ++c) {
      if (!col_alive_[c]) continue;
      for (int r : live_rows_of(c)) {
        T a = abs_value(get(r, c));
        if (!found || a < best) {
          found = true;
          best = a;
          p = r;
          q = c;
          if (best == 1) return true;
        }
      }
      if (col_rows_[c].empty()) col_alive_[c] = 0;
    }
    return found;
  }

  std::vector<Row> rows_;
  std::vector<std::vector<int>> col_rows_;
  std::vector<char> row_alive_;
  std::vector<char> col_alive_;
};

inline std::vector<BigInt> divisibility_chain(std::vector<BigInt> d) {
  std::sort(d.begin(), d.end());
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] == 1) continue;
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      BigInt g = boost::multiprecision::gcd(d[i], d[j]);
      BigInt l = d[i] / g * d[j];
      d[i] = g;
      d[j] = l;
    }
  }
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace detail

/// Smith normal form invariants of an integer matrix. Runs in int64 with
/// overflow detection and repeats in arbitrary precision on overflow.
inline SmithResult smith_normal_form(const IntMatrix& m) {
  SmithResult out;
  std::vector<BigInt> diag;
  try {
    detail::SmithEliminator<std::int64_t> e(m);
    for (std::int64_t v : e.run()) diag.emplace_back(v);
  } catch (const detail::SmithOverflow&) {
    diag.clear();
    out.used_bigint = true;
    detail::SmithEliminator<BigInt> e(m);
    diag = e.run();
  }
  out.invariants = detail::divisibility_chain(std::move(diag));
  return out;
}

/// Forces the arbitrary-precision path (used to cross-check the fast path).
inline SmithResult smith_normal_form_bigint(const IntMatrix& m) {
  SmithResult out;
  out.used_bigint = true;
  detail::SmithEliminator<BigInt> e(m);
  out.invariants = detail::divisibility_chain(e.run());
  return out;
}

}  // namespace finspace
