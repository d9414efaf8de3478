#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"

#include "finspace/poset.hpp"
#include "finspace/simplicial.hpp"
#include "finspace/smith.hpp"

namespace finspace {

/// Reduced integral homology: per dimension a Betti number and the torsion
/// coefficients (> 1). Trailing zero dimensions are trimmed, so a
/// homologically trivial space has no dims at all.
struct HomologyProfile {
  struct Dim {
    long betti = 0;
    std::vector<BigInt> torsion;
    friend bool operator==(const Dim&, const Dim&) = default;
  };

  std::vector<Dim> dims;
  bool reduced = true;

  long betti(int d) const { return d >= 0 && d < static_cast<int>(dims.size()) ? dims[d].betti : 0; }
  std::vector<BigInt> torsion(int d) const {
    return d >= 0 && d < static_cast<int>(dims.size()) ? dims[d].torsion : std::vector<BigInt>{};
  }
  bool is_trivial() const { return dims.empty(); }
  bool torsion_free() const {
    for (const auto& d : dims)
      if (!d.torsion.empty()) return false;
    return true;
  }
  long total_betti() const {
    long s = 0;
    for (const auto& d : dims) s += d.betti;
    return s;
  }
  /// Alternating sum of Betti numbers of the reduced profile (= chi - 1).
  long reduced_euler() const {
    long s = 0;
    for (std::size_t d = 0; d < dims.size(); ++d) s += (d % 2 == 0 ? 1 : -1) * dims[d].betti;
    return s;
  }

  void trim() {
    while (!dims.empty() && dims.back().betti == 0 && dims.back().torsion.empty()) dims.pop_back();
    for (auto& d : dims) std::sort(d.torsion.begin(), d.torsion.end());
  }

  /// Profile shifted up by k dimensions (reduced homology of a k-fold suspension).
  HomologyProfile shifted(int k) const {
    HomologyProfile out = *this;
    if (!out.dims.empty()) out.dims.insert(out.dims.begin(), static_cast<std::size_t>(k), Dim{});
    return out;
  }

  static HomologyProfile sphere(int n) {
    HomologyProfile out;
    out.dims.resize(static_cast<std::size_t>(n) + 1);
    out.dims[n].betti = 1;
    return out;
  }

  /// Direct sum (reduced homology of a wedge).
  HomologyProfile& operator+=(const HomologyProfile& o) {
    if (dims.size() < o.dims.size()) dims.resize(o.dims.size());
    for (std::size_t d = 0; d < o.dims.size(); ++d) {
      dims[d].betti += o.dims[d].betti;
      dims[d].torsion.insert(dims[d].torsion.end(), o.dims[d].torsion.begin(), o.dims[d].torsion.end());
    }
    trim();
    return *this;
  }

  friend bool operator==(const HomologyProfile&, const HomologyProfile&) = default;

  nlohmann::json to_json() const {
    nlohmann::json out;
    out["reduced"] = reduced;
    out["dims"] = nlohmann::json::array();
    for (const auto& d : dims) {
      nlohmann::json t = nlohmann::json::array();
      for (const auto& v : d.torsion) {
        if (v <= std::numeric_limits<std::int64_t>::max())
          t.push_back(static_cast<std::int64_t>(v));
        else
          t.push_back(v.str());
      }
      out["dims"].push_back({{"betti", d.betti}, {"torsion", t}});
    }
    return out;
  }

  static HomologyProfile from_json(const nlohmann::json& j) {
    HomologyProfile out;
    out.reduced = j.at("reduced").get<bool>();
    for (const auto& d : j.at("dims")) {
      Dim dim;
      dim.betti = d.at("betti").get<long>();
      for (const auto& t : d.at("torsion"))
        dim.torsion.push_back(t.is_string() ? BigInt(t.get<std::string>()) : BigInt(t.get<std::int64_t>()));
      out.dims.push_back(std::move(dim));
    }
    out.trim();
    return out;
  }

  /// Compact text form, e.g. "H1=Z^5" or "H2=Z^3 H1=Z/2"; "0" when trivial.
  std::string to_text() const {
    std::string out;
    for (std::size_t d = 0; d < dims.size(); ++d) {
      if (dims[d].betti == 0 && dims[d].torsion.empty()) continue;
      std::string term;
      if (dims[d].betti > 0) term = dims[d].betti == 1 ? "Z" : "Z^" + std::to_string(dims[d].betti);
      for (const auto& t : dims[d].torsion) term += (term.empty() ? "" : "+") + ("Z/" + t.str());
      out += (out.empty() ? "" : " ") + ("H" + std::to_string(d) + "=" + term);
    }
    return out.empty() ? "0" : out;
  }
};

/// Signed boundary matrices; `d[k]` maps k-simplices to (k-1)-simplices
/// (rows are faces). `d[0]` is unused.
struct ChainBoundary {
  std::vector<IntMatrix> d;
};

inline IntMatrix boundary_matrix(const SimplicialComplex& k, int dim) {
  IntMatrix m;
  m.rows = static_cast<int>(k.simplices(dim - 1).size());
  m.cols = static_cast<int>(k.simplices(dim).size());
  const auto& cells = k.simplices(dim);
  for (int c = 0; c < m.cols; ++c) {
    const Simplex& s = cells[c];
    for (std::size_t i = 0; i < s.size(); ++i) {
      Simplex face = s;
      face.erase(face.begin() + static_cast<long>(i));
      long r = k.index_of(face);
      if (r < 0) throw InvariantError("complex is not closed under faces");
      m.entries.push_back({static_cast<int>(r), c, i % 2 == 0 ? 1 : -1});
    }
  }
  return m;
}

inline ChainBoundary boundary_matrices(const SimplicialComplex& k) {
  ChainBoundary out;
  out.d.resize(static_cast<std::size_t>(std::max(k.dimension(), 0)) + 1);
  for (int dim = 1; dim <= k.dimension(); ++dim) out.d[dim] = boundary_matrix(k, dim);
  return out;
}

namespace detail {

/// Assembles a reduced profile from cell counts and the SNF of each boundary.
inline HomologyProfile assemble_profile(const std::vector<std::size_t>& cells, const std::vector<SmithResult>& snf) {
  if (cells.empty() || cells[0] == 0) throw InvariantError("reduced homology of the empty space is not represented");
  const std::size_t top = cells.size() - 1;
  HomologyProfile out;
  out.dims.resize(top + 1);
  for (std::size_t d = 0; d <= top; ++d) {
    long rank_in = d == 0 ? 1 : static_cast<long>(snf[d].rank());
    long rank_out = d + 1 <= top ? static_cast<long>(snf[d + 1].rank()) : 0;
    out.dims[d].betti = static_cast<long>(cells[d]) - rank_in - rank_out;
    if (d + 1 <= top) out.dims[d].torsion = snf[d + 1].torsion();
  }
  out.trim();
  return out;
}

}  // namespace detail

inline HomologyProfile reduced_homology(const SimplicialComplex& k) {
  std::vector<std::size_t> cells;
  for (int d = 0; d <= k.dimension(); ++d) cells.push_back(k.simplices(d).size());
  std::vector<SmithResult> snf(cells.size());
  for (int d = 1; d <= k.dimension(); ++d) snf[d] = smith_normal_form(boundary_matrix(k, d));
  return detail::assemble_profile(cells, snf);
}

/// Reduced homology of K(X), computed directly from chains as bitsets.
inline HomologyProfile reduced_homology(const Poset& p, std::size_t cap = kDefaultChainCap) {
  std::vector<ElementSet> chains = enumerate_chains(p, p.all(), cap);
  std::vector<std::vector<ElementSet>> by_dim;
  for (const auto& c : chains) {
    std::size_t d = static_cast<std::size_t>(c.size()) - 1;
    if (by_dim.size() <= d) by_dim.resize(d + 1);
    by_dim[d].push_back(c);
  }
  for (auto& level : by_dim) std::sort(level.begin(), level.end());
  std::vector<std::size_t> cells;
  for (const auto& level : by_dim) cells.push_back(level.size());
  std::vector<SmithResult> snf(by_dim.size());
  for (std::size_t d = 1; d < by_dim.size(); ++d) {
    IntMatrix m;
    m.rows = static_cast<int>(by_dim[d - 1].size());
    m.cols = static_cast<int>(by_dim[d].size());
    const auto& faces = by_dim[d - 1];
    for (int c = 0; c < m.cols; ++c) {
      const ElementSet& s = by_dim[d][c];
      int i = 0;
      s.for_each([&](Element x) {
        ElementSet f = s;
        f.erase(x);
        auto it = std::lower_bound(faces.begin(), faces.end(), f);
        m.entries.push_back({static_cast<int>(it - faces.begin()), c, i % 2 == 0 ? 1 : -1});
        ++i;
      });
    }
    snf[d] = smith_normal_form(m);
  }
  return detail::assemble_profile(cells, snf);
}

}  // namespace finspace
