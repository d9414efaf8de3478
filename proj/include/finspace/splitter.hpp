#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"

#include "finspace/homology.hpp"
#include "finspace/poset.hpp"
#include "finspace/reduction.hpp"
#include "finspace/wedge.hpp"

namespace finspace {

enum class SplitStatus { Ok, Partial, Failed };

inline std::string_view to_string(SplitStatus s) {
  switch (s) {
    case SplitStatus::Ok: return "ok";
    case SplitStatus::Partial: return "partial";
    case SplitStatus::Failed: return "failed";
  }
  return "?";
}

/// One node of a splitting derivation. `templ` is a wedge expression whose
/// leaves poset[i] stand for children[i]; `wedge` is the template with every
/// child replaced by its own resolved wedge.
struct Certificate {
  Preorder space;
  std::string rule;
  nlohmann::json evidence = nlohmann::json::object();
  WedgeExpr templ;
  std::vector<std::shared_ptr<const Certificate>> children;
  WedgeExpr wedge;
  SplitStatus status = SplitStatus::Failed;
};

using CertificatePtr = std::shared_ptr<const Certificate>;

namespace rule {
inline constexpr const char* kT0 = "R-T0";
inline constexpr const char* kPoint = "R-point";
inline constexpr const char* kCore = "R-core";
inline constexpr const char* kHeight1 = "R-height1";
inline constexpr const char* kM2 = "R-m2";
inline constexpr const char* kUa = "R-Ua";
inline constexpr const char* kWeakGammaMax = "R-weak-gamma-max";
inline constexpr const char* kUaFb = "R-UaFb";
inline constexpr const char* kTrivialUnionPair = "R-trivial-union-pair";
inline constexpr const char* kGammaSimplyConnected = "R-gamma-simply-connected";
inline constexpr const char* kGammaConnectivity = "R-gamma-connectivity";
inline constexpr const char* kSuspensionPoset = "R-suspension-poset";
inline constexpr const char* kInterval = "R-interval";
inline constexpr const char* kOpposite = "R-opposite";
inline constexpr const char* kNone = "none";
}  // namespace rule

struct SplitOptions {
  int fuel = 64;                      // rule applications per path; intervals cost 2
  std::size_t max_nodes = 100000;     // search nodes per split call
  bool allow_opposite = true;
  int gamma_depth = 1;
};

// ---------------------------------------------------------------------------
// Triviality certificates for pieces

inline bool has_max_or_min(const Poset& p, const ElementSet& s) {
  return p.maximum(s).has_value() || p.minimum(s).has_value();
}

/// Sound check that the subspace s is homotopically trivial: single points,
/// spaces with a maximum or minimum, the reduction procedure, and unions
/// D' u U_p of trivial down sets with trivial intersection (dually for up
/// sets), since such a union is weakly equivalent to the suspension of the
/// intersection.
inline bool certified_trivial(const Poset& p, const ElementSet& s, int gamma_depth = 1) {
  if (s.empty()) return false;
  if (s.size() == 1 || has_max_or_min(p, s)) return true;
  if (p.components(s).size() > 1) return false;
  if (homotopic_triviality(p, s, gamma_depth).verdict == Triviality::Trivial) return true;
  auto try_union = [&](const ElementSet& tops, bool down) {
    bool ok = false;
    tops.for_each([&](Element t) {
      if (ok) return;
      ElementSet rest = tops - ElementSet::single(t);
      ElementSet d = down ? p.down_closure(rest) & s : p.up_closure(rest) & s;
      ElementSet single = down ? p.down(t) & s : p.up(t) & s;
      if ((d | single) != s) return;
      if (certified_trivial(p, d, gamma_depth) && certified_trivial(p, d & single, gamma_depth)) ok = true;
    });
    return ok;
  };
  ElementSet tops = p.maximal(s);
  if (tops.size() >= 2 && try_union(tops, true)) return true;
  ElementSet bottoms = p.minimal(s);
  if (bottoms.size() >= 2 && try_union(bottoms, false)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Template construction

class TemplateBuilder {
 public:
  WedgeExpr leaf(Poset p) {
    children_.push_back(std::move(p));
    return WedgeExpr::leaf(static_cast<int>(children_.size()) - 1);
  }

  /// k-fold suspension of the subspace s of `parent` (k >= 1). The empty set
  /// gives S^{k-1}; a disconnected s gives the wedge of the suspended
  /// components and (components - 1) copies of S^k. Components with a
  /// maximum or minimum are contractible and contribute nothing.
  WedgeExpr suspended(const Poset& parent, const ElementSet& s, int k) {
    if (s.empty()) return WedgeExpr::sphere(k - 1);
    std::vector<ElementSet> comps = parent.components(s);
    std::vector<WedgeExpr> parts;
    for (const auto& c : comps)
      if (!has_max_or_min(parent, c)) parts.push_back(WedgeExpr::susp(k, leaf(parent.induced(c))));
    for (std::size_t i = 1; i < comps.size(); ++i) parts.push_back(WedgeExpr::sphere(k));
    return WedgeExpr::wedge(std::move(parts));
  }
  WedgeExpr suspended(const Poset& p, int k) { return suspended(p, p.all(), k); }

  std::vector<Poset>& children() { return children_; }

 private:
  std::vector<Poset> children_;
};

struct Expansion {
  std::optional<std::string> error;
  WedgeExpr templ;
  std::vector<Poset> children;
  int fuel_cost = 1;
  bool size_exempt = false;  // children may be as large as the parent
};

inline Expansion expansion_error(std::string what) {
  Expansion e;
  e.error = std::move(what);
  return e;
}

// ---------------------------------------------------------------------------
// Families of trivial pieces: X = (A_1 u ... u A_l) u (B_1 u ... u B_m)

enum class PieceForm { Contractible, DownPoint, PointUp, DownDown, UpUp, Union, Interval, IntervalSwapped };

inline std::string_view to_string(PieceForm f) {
  switch (f) {
    case PieceForm::Contractible: return "contractible";
    case PieceForm::DownPoint: return "down-point";
    case PieceForm::PointUp: return "point-up";
    case PieceForm::DownDown: return "down-down";
    case PieceForm::UpUp: return "up-up";
    case PieceForm::Union: return "union";
    case PieceForm::Interval: return "interval";
    case PieceForm::IntervalSwapped: return "interval-swapped";
  }
  return "?";
}

inline std::optional<PieceForm> piece_form_from_string(std::string_view s) {
  for (auto f : {PieceForm::Contractible, PieceForm::DownPoint, PieceForm::PointUp, PieceForm::DownDown,
                 PieceForm::UpUp, PieceForm::Union, PieceForm::Interval, PieceForm::IntervalSwapped})
    if (to_string(f) == s) return f;
  return std::nullopt;
}

struct FamilySplit {
  struct Pair {
    int i;
    int j;
    PieceForm form;
  };
  std::vector<ElementSet> a;
  std::vector<ElementSet> b;
  std::vector<Pair> pairs;
  long circles = 0;
};

inline bool form_applicable(const Poset& x, const ElementSet& a, const ElementSet& b, PieceForm f) {
  const bool a_down = x.is_down_set(a), a_up = x.is_up_set(a);
  const bool b_down = x.is_down_set(b), b_up = x.is_up_set(b);
  const bool a_one = a.size() == 1, b_one = b.size() == 1;
  switch (f) {
    case PieceForm::Contractible: return a_one && b_one;
    case PieceForm::DownPoint: return (a_down && b_one) || (b_down && a_one);
    case PieceForm::PointUp: return (a_one && b_up) || (b_one && a_up);
    case PieceForm::DownDown: return a_down && b_down;
    case PieceForm::UpUp: return a_up && b_up;
    case PieceForm::Union: return (a | b) != x.all();
    case PieceForm::Interval: return a_down || b_up;
    case PieceForm::IntervalSwapped: return b_down || a_up;
  }
  return false;
}

inline std::optional<PieceForm> preferred_form(const Poset& x, const ElementSet& a, const ElementSet& b) {
  for (auto f : {PieceForm::Contractible, PieceForm::DownPoint, PieceForm::PointUp, PieceForm::DownDown,
                 PieceForm::UpUp, PieceForm::Union, PieceForm::Interval, PieceForm::IntervalSwapped})
    if (form_applicable(x, a, b, f)) return f;
  return std::nullopt;
}

/// Template for one comparable pair, a space weakly equivalent to
/// S(ex A n ex B) ~ A u B.
inline WedgeExpr piece_template(const Poset& x, const ElementSet& a, const ElementSet& b, PieceForm f,
                                TemplateBuilder& tb) {
  const bool a_down = x.is_down_set(a), a_up = x.is_up_set(a);
  switch (f) {
    case PieceForm::Contractible: return WedgeExpr::point();
    case PieceForm::DownPoint: {
      bool a_is_down = a_down && b.size() == 1;
      const ElementSet& d = a_is_down ? a : b;
      Element s = (a_is_down ? b : a).first();
      return tb.suspended(x, d & x.down(s), 1);
    }
    case PieceForm::PointUp: {
      bool b_is_up = a.size() == 1 && x.is_up_set(b);
      const ElementSet& u = b_is_up ? b : a;
      Element s = (b_is_up ? a : b).first();
      return tb.suspended(x, u & x.up(s), 1);
    }
    case PieceForm::DownDown:
    case PieceForm::UpUp: return tb.suspended(x, a & b, 1);
    case PieceForm::Union: return tb.leaf(x.induced(a | b));
    case PieceForm::Interval: return tb.suspended(interval_poset(x, a, b).poset, 1);
    case PieceForm::IntervalSwapped: return tb.suspended(interval_poset(x, b, a).poset, 1);
  }
  (void)a_up;
  return WedgeExpr::point();
}

/// Checks every hypothesis of the suspension-poset splitting and builds the
/// template: wedge of the pieces of comparable pairs and
/// (#pairs - l - m + 1) circles.
inline Expansion expand_families(const Poset& x, const FamilySplit& f, int gamma_depth) {
  if (f.a.empty() || f.b.empty()) return expansion_error("empty family");
  ElementSet cover;
  for (const auto* fam : {&f.a, &f.b})
    for (std::size_t i = 0; i < fam->size(); ++i) {
      const ElementSet& s = (*fam)[i];
      if (s.empty()) return expansion_error("empty piece");
      if (!s.subset_of(x.all())) return expansion_error("piece outside the space");
      for (std::size_t j = i + 1; j < fam->size(); ++j)
        if (x.comparable(s, (*fam)[j])) return expansion_error("pieces of one family are comparable");
      cover |= s;
    }
  if (cover != x.all()) return expansion_error("families do not cover the space");
  for (const auto* fam : {&f.a, &f.b})
    for (const auto& s : *fam)
      if (!certified_trivial(x, s, gamma_depth)) return expansion_error("piece is not certified trivial");

  std::vector<std::pair<int, int>> expected;
  for (int i = 0; i < static_cast<int>(f.a.size()); ++i)
    for (int j = 0; j < static_cast<int>(f.b.size()); ++j)
      if (x.comparable(f.a[i], f.b[j])) expected.emplace_back(i, j);
  if (expected.size() != f.pairs.size()) return expansion_error("comparable pairs do not match");
  for (std::size_t k = 0; k < expected.size(); ++k)
    if (expected[k] != std::pair{f.pairs[k].i, f.pairs[k].j}) return expansion_error("comparable pairs do not match");
  long circles = static_cast<long>(expected.size()) - static_cast<long>(f.a.size()) -
                 static_cast<long>(f.b.size()) + 1;
  if (circles < 0) return expansion_error("negative circle count");
  if (circles != f.circles) return expansion_error("circle count does not match");

  Expansion e;
  TemplateBuilder tb;
  std::vector<WedgeExpr> parts;
  for (const auto& p : f.pairs) {
    if (!form_applicable(x, f.a[p.i], f.b[p.j], p.form)) return expansion_error("piece form not applicable");
    if (p.form == PieceForm::Interval || p.form == PieceForm::IntervalSwapped) {
      e.fuel_cost = 2;
      e.size_exempt = true;
    }
    parts.push_back(piece_template(x, f.a[p.i], f.b[p.j], p.form, tb));
  }
  parts.push_back(WedgeExpr::spheres(1, circles));
  e.templ = normalize(WedgeExpr::wedge(std::move(parts)));
  e.children = std::move(tb.children());
  return e;
}

/// Fills in comparable pairs with preferred forms and the circle count.
inline std::optional<FamilySplit> plan_families(const Poset& x, std::vector<ElementSet> a, std::vector<ElementSet> b) {
  FamilySplit f;
  f.a = std::move(a);
  f.b = std::move(b);
  for (int i = 0; i < static_cast<int>(f.a.size()); ++i)
    for (int j = 0; j < static_cast<int>(f.b.size()); ++j)
      if (x.comparable(f.a[i], f.b[j])) {
        auto form = preferred_form(x, f.a[i], f.b[j]);
        if (!form) return std::nullopt;
        f.pairs.push_back({i, j, *form});
      }
  f.circles = static_cast<long>(f.pairs.size()) - static_cast<long>(f.a.size()) - static_cast<long>(f.b.size()) + 1;
  if (f.circles < 0) return std::nullopt;
  return f;
}

inline nlohmann::json set_to_json(const ElementSet& s) { return s.members(); }

inline ElementSet set_from_json(const nlohmann::json& j) {
  ElementSet s;
  for (const auto& v : j) s.insert(v.get<int>());
  return s;
}

inline void families_to_json(const FamilySplit& f, nlohmann::json& ev) {
  ev["A"] = nlohmann::json::array();
  ev["B"] = nlohmann::json::array();
  for (const auto& s : f.a) ev["A"].push_back(set_to_json(s));
  for (const auto& s : f.b) ev["B"].push_back(set_to_json(s));
  ev["pairs"] = nlohmann::json::array();
  for (const auto& p : f.pairs) ev["pairs"].push_back({p.i, p.j, std::string(to_string(p.form))});
  ev["circles"] = f.circles;
}

inline FamilySplit families_from_json(const nlohmann::json& ev) {
  FamilySplit f;
  for (const auto& s : ev.at("A")) f.a.push_back(set_from_json(s));
  for (const auto& s : ev.at("B")) f.b.push_back(set_from_json(s));
  for (const auto& p : ev.at("pairs")) {
    auto form = piece_form_from_string(p.at(2).get<std::string>());
    if (!form) throw InvariantError("unknown piece form");
    int i = p.at(0).get<int>(), j = p.at(1).get<int>();
    if (i < 0 || j < 0 || i >= static_cast<int>(f.a.size()) || j >= static_cast<int>(f.b.size()))
      throw InvariantError("pair index out of range");
    f.pairs.push_back({i, j, *form});
  }
  f.circles = ev.at("circles").get<long>();
  return f;
}

// Prescribed families of the two corollaries.

/// X = U_a u mxl u mnl: A = {U_a} + singletons of mnl - U_a, B = singletons of mxl - U_a.
inline std::pair<std::vector<ElementSet>, std::vector<ElementSet>> ua_families(const Poset& x, Element a) {
  std::vector<ElementSet> fa{x.down(a)}, fb;
  (x.minimal() - x.down(a)).for_each([&](Element y) { fa.push_back(ElementSet::single(y)); });
  (x.maximal() - x.down(a)).for_each([&](Element y) { fb.push_back(ElementSet::single(y)); });
  return {fa, fb};
}

/// X = U_a u F_b u mxl u mnl: A = {U_a} + singletons of mnl - U_a - {b},
/// B = {F_b} + singletons of mxl - F_b - {a}.
inline std::pair<std::vector<ElementSet>, std::vector<ElementSet>> uafb_families(const Poset& x, Element a,
                                                                               Element b) {
  std::vector<ElementSet> fa{x.down(a)}, fb{x.up(b)};
  (x.minimal() - x.down(a) - ElementSet::single(b)).for_each([&](Element y) { fa.push_back(ElementSet::single(y)); });
  (x.maximal() - x.up(b) - ElementSet::single(a)).for_each([&](Element y) { fb.push_back(ElementSet::single(y)); });
  return {fa, fb};
}

inline bool ua_cover(const Poset& x, Element a) {
  return (x.all() - x.down(a) - x.maximal() - x.minimal()).empty();
}
inline bool uafb_cover(const Poset& x, Element a, Element b) {
  return (x.all() - x.down(a) - x.up(b) - x.maximal() - x.minimal()).empty();
}

// ---------------------------------------------------------------------------
// Rule expansion: shared by the search and by certificate validation

namespace detail {

inline Element ev_element(const nlohmann::json& ev, const char* key, const Poset& x) {
  Element e = ev.at(key).get<int>();
  if (e < 0 || e >= x.size()) throw InvariantError(std::string("evidence element '") + key + "' out of range");
  return e;
}

inline long comparability_edges(const Poset& x) {
  long e = 0;
  for (int v = 0; v < x.size(); ++v) e += x.hat_up(v).size();
  return e;
}

}  // namespace detail

/// Re-derives the children and template of a rule application from the space
/// and the recorded evidence, checking every side condition on the way.
inline Expansion expand_rule(const Preorder& space, const std::string& name, const nlohmann::json& ev,
                             const SplitOptions& opt) {
  try {
    if (name == rule::kT0) {
      if (space.is_antisymmetric()) return expansion_error("space is already T0");
      Expansion e;
      e.children.push_back(t0_quotient(space));
      e.templ = WedgeExpr::leaf(0);
      return e;
    }
    if (!space.is_antisymmetric()) return expansion_error("space is not T0");
    const Poset x(space);
    if (name == rule::kPoint) {
      if (x.size() != 1) return expansion_error("space is not a single point");
      return Expansion{};
    }
    if (name == rule::kCore) {
      ReductionTrace t{x.all(), {}, x.all()};
      for (const auto& st : ev.at("trace")) {
        auto kind = reduction_kind_from_string(st.at("kind").get<std::string>());
        if (!kind) return expansion_error("unknown reduction kind");
        Element r = st.at("remove").get<int>();
        if (r < 0 || r >= x.size()) return expansion_error("removed element out of range");
        t.steps.push_back({r, *kind});
        t.remaining.erase(r);
      }
      if (t.steps.empty()) return expansion_error("empty reduction");
      if (auto err = check_trace(x, t, opt.gamma_depth)) return expansion_error(*err);
      Expansion e;
      e.children.push_back(x.induced(t.remaining));
      e.templ = WedgeExpr::leaf(0);
      return e;
    }
    if (!x.is_connected()) return expansion_error("space is not connected");
    if (name == rule::kHeight1) {
      if (x.height() > 1) return expansion_error("height exceeds 1");
      long v = x.size(), edges = detail::comparability_edges(x);
      if (ev.at("vertices").get<long>() != v || ev.at("edges").get<long>() != edges)
        return expansion_error("vertex or edge count does not match");
      Expansion e;
      e.templ = normalize(WedgeExpr::spheres(1, edges - v + 1));
      return e;
    }
    if (name == rule::kM2) {
      Element a = detail::ev_element(ev, "a", x), b = detail::ev_element(ev, "b", x);
      if (x.maximal() != ElementSet::of({a, b}) || a == b) return expansion_error("maximal elements are not {a, b}");
      Expansion e;
      TemplateBuilder tb;
      e.templ = normalize(tb.suspended(x, x.down(a) & x.down(b), 1));
      e.children = std::move(tb.children());
      return e;
    }
    if (name == rule::kUa || name == rule::kUaFb || name == rule::kSuspensionPoset) {
      FamilySplit f = families_from_json(ev);
      if (name == rule::kUa) {
        Element a = detail::ev_element(ev, "a", x);
        if (!ua_cover(x, a)) return expansion_error("X != U_a u mxl u mnl");
        auto [fa, fb] = ua_families(x, a);
        if (fa != f.a || fb != f.b) return expansion_error("families differ from the prescribed ones");
      } else if (name == rule::kUaFb) {
        Element a = detail::ev_element(ev, "a", x), b = detail::ev_element(ev, "b", x);
        if (!uafb_cover(x, a, b)) return expansion_error("X != U_a u F_b u mxl u mnl");
        auto [fa, fb] = uafb_families(x, a, b);
        if (fa != f.a || fb != f.b) return expansion_error("families differ from the prescribed ones");
      }
      return expand_families(x, f, opt.gamma_depth);
    }
    if (name == rule::kWeakGammaMax) {
      Element a = detail::ev_element(ev, "a", x);
      if (!x.maximal().contains(a)) return expansion_error("a is not maximal");
      ElementSet rest = x.all() - ElementSet::single(a);
      if (x.components(rest).size() != 1) return expansion_error("X - {a} is not connected");
      auto comps = x.components(x.hat_down(a));
      if (comps.empty()) return expansion_error("U^_a is empty");
      for (const auto& c : comps)
        if (!certified_trivial(x, c, opt.gamma_depth)) return expansion_error("component of U^_a not certified trivial");
      long n = static_cast<long>(comps.size()) - 1;
      if (ev.at("n").get<long>() != n) return expansion_error("circle count does not match");
      Expansion e;
      TemplateBuilder tb;
      e.templ = normalize(WedgeExpr::wedge({tb.leaf(x.induced(rest)), WedgeExpr::spheres(1, n)}));
      e.children = std::move(tb.children());
      return e;
    }
    if (name == rule::kTrivialUnionPair || name == rule::kGammaSimplyConnected) {
      Element a0 = detail::ev_element(ev, "a0", x), a1 = detail::ev_element(ev, "a1", x),
              a2 = detail::ev_element(ev, "a2", x);
      if (x.maximal() != ElementSet::of({a0, a1, a2}) || x.maximal().size() != 3)
        return expansion_error("maximal elements are not {a0, a1, a2}");
      Expansion e;
      TemplateBuilder tb;
      if (name == rule::kTrivialUnionPair) {
        if (!certified_trivial(x, x.down(a0) & x.down(a2), opt.gamma_depth))
          return expansion_error("U_a0 n U_a2 is not certified trivial");
        e.templ = normalize(tb.suspended(x, x.down(a1) & (x.down(a0) | x.down(a2)), 1));
      } else {
        ElementSet rest = x.all() - ElementSet::single(a2);
        if ((x.down(a0) | x.down(a1)) != rest) return expansion_error("X - {a2} != U_a0 u U_a1");
        ElementSet meet = x.down(a0) & x.down(a1);
        if (meet.empty() || x.components(meet).size() != 1) return expansion_error("U_a0 n U_a1 is not connected");
        ElementSet hat = x.hat_down(a2);
        if (x.height(core_set(x, hat)) > 1) return expansion_error("core of U^_a2 has height above 1");
        e.templ = normalize(WedgeExpr::wedge({tb.leaf(x.induced(rest)), tb.suspended(x, hat, 1)}));
      }
      e.children = std::move(tb.children());
      return e;
    }
    if (name == rule::kGammaConnectivity) {
      Element v = detail::ev_element(ev, "x", x);
      int dim = ev.at("dim").get<int>();
      ElementSet rest = x.all() - ElementSet::single(v);
      if (x.components(rest).size() != 1) return expansion_error("X - {x} is not connected");
      ElementSet hat = x.hat_c(v);
      if (dim < 0 || x.height(core_set(x, hat)) > dim) return expansion_error("core of C^_x exceeds the dimension bound");
      Expansion e;
      TemplateBuilder tb;
      e.templ = normalize(WedgeExpr::wedge({tb.leaf(x.induced(rest)), tb.suspended(x, hat, 1)}));
      e.children = std::move(tb.children());
      return e;
    }
    if (name == rule::kInterval) {
      Element a = detail::ev_element(ev, "a", x), b = detail::ev_element(ev, "b", x);
      if ((x.down(a) | x.up(b)) != x.all()) return expansion_error("X != U_a u F_b");
      if (!x.comparable(x.down(a), x.up(b))) return expansion_error("U_a and F_b are incomparable");
      Expansion e;
      TemplateBuilder tb;
      e.templ = normalize(tb.suspended(interval_poset(x, x.down(a), x.up(b)).poset, 1));
      e.children = std::move(tb.children());
      e.fuel_cost = 2;
      e.size_exempt = true;
      return e;
    }
    if (name == rule::kOpposite) {
      Expansion e;
      e.children.push_back(x.opposite());
      e.templ = WedgeExpr::leaf(0);
      e.size_exempt = true;
      return e;
    }
    return expansion_error("unknown rule '" + name + "'");
  } catch (const nlohmann::json::exception& ex) {
    return expansion_error(std::string("malformed evidence: ") + ex.what());
  } catch (const std::exception& ex) {
    return expansion_error(ex.what());
  }
}

/// Extra condition of R-gamma-connectivity: the child X - {x} resolved to a
/// wedge of spheres of dimension > dim (or a point).
inline bool connectivity_condition_holds(const Certificate& c) {
  if (c.rule != rule::kGammaConnectivity || c.children.empty()) return true;
  const Certificate& child = *c.children[0];
  if (child.status != SplitStatus::Ok) return false;
  int dim = c.evidence.at("dim").get<int>();
  int low = min_sphere_dimension(child.wedge);
  return low < 0 || low > dim;
}

// ---------------------------------------------------------------------------
// Search

class Splitter {
 public:
  explicit Splitter(SplitOptions opt = {}) : opt_(opt) {}

  /// Splits a connected finite space. Failures are reported in the returned
  /// certificate (status Failed or Partial), never thrown.
  CertificatePtr split(const Preorder& p) {
    nodes_ = 0;
    if (p.empty()) return fail_node(p, "empty space");
    if (!p.is_antisymmetric()) {
      auto c = attempt(p, rule::kT0, nlohmann::json::object(), opt_.fuel, false);
      if (c) return c;
      return fail_node(p, "T0 quotient failed");
    }
    return run(Poset(p), opt_.fuel, false);
  }

  std::size_t nodes_visited() const { return nodes_; }

 private:
  struct Memo {
    CertificatePtr cert;
    int fuel;
  };

  static std::string key_of(const Poset& x, bool flag) {
    std::string k(flag ? "o" : "-");
    for (const auto& l : x.labels()) k += l + '\x1f';
    for (int v = 0; v < x.size(); ++v)
      for (auto w : x.up(v).words()) k.append(reinterpret_cast<const char*>(&w), sizeof w);
    return k;
  }

  CertificatePtr fail_node(const Preorder& p, const std::string& reason) {
    auto c = std::make_shared<Certificate>();
    c->space = p;
    c->rule = rule::kNone;
    c->evidence = {{"reason", reason}};
    c->templ = WedgeExpr::leaf(-1);
    c->wedge = WedgeExpr::leaf(-1);
    c->status = SplitStatus::Failed;
    return c;
  }

  CertificatePtr attempt(const Preorder& space, const char* name, nlohmann::json ev, int fuel, bool child_flag) {
    Expansion e = expand_rule(space, name, ev, opt_);
    if (e.error) return nullptr;
    auto c = std::make_shared<Certificate>();
    c->space = space;
    c->rule = name;
    c->evidence = std::move(ev);
    c->templ = e.templ;
    std::vector<WedgeExpr> resolved;
    c->status = SplitStatus::Ok;
    for (auto& child : e.children) {
      CertificatePtr cc = run(child, fuel - e.fuel_cost, child_flag);
      if (cc->status != SplitStatus::Ok) c->status = SplitStatus::Partial;
      resolved.push_back(cc->status == SplitStatus::Ok ? cc->wedge : WedgeExpr::leaf(-1));
      c->children.push_back(std::move(cc));
      if (c->status != SplitStatus::Ok && abort_on_failure_) break;
    }
    if (c->status == SplitStatus::Ok) {
      c->wedge = substitute(c->templ, resolved);
      if (!connectivity_condition_holds(*c)) return nullptr;
    } else {
      if (c->children.size() < e.children.size()) {
        c->wedge = WedgeExpr::leaf(-1);
        return c;
      }
      c->wedge = substitute(c->templ, resolved);
    }
    return c;
  }

  CertificatePtr run(const Poset& x, int fuel, bool tried_opposite) {
    const std::string key = key_of(x, tried_opposite);
    if (auto it = memo_.find(key); it != memo_.end()) {
      if (it->second.cert->status == SplitStatus::Ok || fuel <= it->second.fuel) return it->second.cert;
    }
    CertificatePtr c = search(x, fuel, tried_opposite);
    memo_[key] = Memo{c, fuel};
    return c;
  }

  CertificatePtr search(const Poset& x, int fuel, bool tried_opposite) {
    using nlohmann::json;
    if (x.size() == 1) return attempt(x, rule::kPoint, json::object(), fuel, false);
    if (fuel <= 0) return fail_node(x, "fuel exhausted");
    if (++nodes_ > opt_.max_nodes) return fail_node(x, "search budget exhausted");
    if (!x.is_connected()) return fail_node(x, "space is not connected");

    // Committed reductions.
    {
      ReductionTrace t = core_trace(x, x.all());
      if (t.steps.empty()) {
        for (Element v = 0; v < x.size() && t.steps.empty(); ++v)
          if (auto k = weak_point_kind(x, x.all(), v)) t.steps.push_back({v, *k});
        for (Element v = 0; v < x.size() && t.steps.empty(); ++v)
          if (is_gamma_point(x, x.all(), v, opt_.gamma_depth)) t.steps.push_back({v, ReductionKind::Gamma});
      }
      if (!t.steps.empty()) {
        json trace = json::array();
        for (const auto& st : t.steps) trace.push_back({{"remove", st.element}, {"kind", std::string(to_string(st.kind))}});
        if (auto c = attempt(x, rule::kCore, json{{"trace", trace}}, fuel, false)) return c;
      }
    }
    if (x.height() <= 1) {
      long v = x.size(), e = detail::comparability_edges(x);
      if (auto c = attempt(x, rule::kHeight1, json{{"vertices", v}, {"edges", e}}, fuel, false)) return c;
    }
    const ElementSet mxl = x.maximal(), mnl = x.minimal();
    if (mxl.size() == 2) {
      auto m = mxl.members();
      if (auto c = attempt(x, rule::kM2, json{{"a", m[0]}, {"b", m[1]}}, fuel, false)) return c;
    }

    CertificatePtr partial;
    auto consider = [&](CertificatePtr c) {
      if (!c) return false;
      if (c->status == SplitStatus::Ok) return true;
      if (!partial && c->children.size() > 0) {
        partial = c;
        abort_on_failure_ = true;
      }
      return false;
    };
    struct AbortReset {
      bool& flag;
      bool saved;
      ~AbortReset() { flag = saved; }
    } reset{abort_on_failure_, abort_on_failure_};

    // R-Ua
    for (Element a = 0; a < x.size(); ++a) {
      if (!ua_cover(x, a) || mnl.contains(a)) continue;
      auto [fa, fb] = ua_families(x, a);
      auto f = plan_families(x, fa, fb);
      if (!f) continue;
      json ev{{"a", a}};
      families_to_json(*f, ev);
      auto c = attempt(x, rule::kUa, ev, fuel, false);
      if (consider(c)) return c;
    }
    // R-weak-gamma-max
    for (Element a = mxl.first(); a >= 0; a = mxl.next(a)) {
      ElementSet rest = x.all() - ElementSet::single(a);
      if (x.components(rest).size() != 1) continue;
      auto comps = x.components(x.hat_down(a));
      if (comps.size() < 2) continue;
      bool ok = std::all_of(comps.begin(), comps.end(),
                            [&](const ElementSet& s) { return certified_trivial(x, s, opt_.gamma_depth); });
      if (!ok) continue;
      auto c = attempt(x, rule::kWeakGammaMax, json{{"a", a}, {"n", static_cast<long>(comps.size()) - 1}}, fuel, false);
      if (consider(c)) return c;
    }
    // R-UaFb (the exhaustive (a, b) scan); proper covers first.
    for (int pass = 0; pass < 2; ++pass)
      for (Element a = 0; a < x.size(); ++a)
        for (Element b = 0; b < x.size(); ++b) {
          if (mnl.contains(a) || mxl.contains(b) || !uafb_cover(x, a, b)) continue;
          bool proper = (x.down(a) | x.up(b)) != x.all();
          if (proper != (pass == 0)) continue;
          auto [fa, fb] = uafb_families(x, a, b);
          auto f = plan_families(x, fa, fb);
          if (!f) continue;
          json ev{{"a", a}, {"b", b}};
          families_to_json(*f, ev);
          auto c = attempt(x, rule::kUaFb, ev, fuel, false);
          if (consider(c)) return c;
        }
    if (mxl.size() == 3) {
      auto m = mxl.members();
      const int perms[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
      for (const auto& pr : perms) {
        Element a0 = m[pr[0]], a1 = m[pr[1]], a2 = m[pr[2]];
        if (!certified_trivial(x, x.down(a0) & x.down(a2), opt_.gamma_depth)) continue;
        auto c = attempt(x, rule::kTrivialUnionPair, json{{"a0", a0}, {"a1", a1}, {"a2", a2}}, fuel, false);
        if (consider(c)) return c;
      }
      for (const auto& pr : perms) {
        Element a0 = m[pr[0]], a1 = m[pr[1]], a2 = m[pr[2]];
        auto c = attempt(x, rule::kGammaSimplyConnected, json{{"a0", a0}, {"a1", a1}, {"a2", a2}}, fuel, false);
        if (consider(c)) return c;
      }
    }
    // R-gamma-connectivity
    for (Element v = 0; v < x.size(); ++v) {
      ElementSet rest = x.all() - ElementSet::single(v);
      if (x.components(rest).size() != 1) continue;
      int dim = x.height(core_set(x, x.hat_c(v)));
      if (dim < 0) continue;
      auto c = attempt(x, rule::kGammaConnectivity, json{{"x", v}, {"dim", dim}}, fuel, false);
      if (consider(c)) return c;
    }
    // R-suspension-poset over bipartitions of the maximal (or minimal) elements.
    for (int side = 0; side < 2; ++side) {
      auto ext = (side == 0 ? mxl : mnl).members();
      const int k = static_cast<int>(ext.size());
      if (k < 2 || k > 12) continue;
      for (std::uint32_t mask = 1; mask < (1U << (k - 1)); ++mask) {
        ElementSet p, q;
        for (int i = 0; i < k; ++i) ((mask >> i & 1U) ? p : q).insert(ext[i]);
        ElementSet dp = side == 0 ? x.down_closure(p) : x.up_closure(p);
        ElementSet dq = side == 0 ? x.down_closure(q) : x.up_closure(q);
        if (!certified_trivial(x, dp, opt_.gamma_depth) || !certified_trivial(x, dq, opt_.gamma_depth)) continue;
        auto f = plan_families(x, {dp}, {dq});
        if (!f) continue;
        json ev = json::object();
        families_to_json(*f, ev);
        auto c = attempt(x, rule::kSuspensionPoset, ev, fuel, false);
        if (consider(c)) return c;
      }
    }
    // R-interval
    for (Element a = 0; a < x.size(); ++a)
      for (Element b = 0; b < x.size(); ++b) {
        if ((x.down(a) | x.up(b)) != x.all() || !x.comparable(x.down(a), x.up(b))) continue;
        auto c = attempt(x, rule::kInterval, json{{"a", a}, {"b", b}}, fuel, false);
        if (consider(c)) return c;
      }
    if (opt_.allow_opposite && !tried_opposite) {
      auto c = attempt(x, rule::kOpposite, json::object(), fuel, true);
      if (consider(c)) return c;
    }
    if (partial) return partial;
    return fail_node(x, "no rule applies");
  }

  SplitOptions opt_;
  std::size_t nodes_ = 0;
  bool abort_on_failure_ = false;
  std::unordered_map<std::string, Memo> memo_;
};

inline CertificatePtr split(const Preorder& p, const SplitOptions& opt = {}) { return Splitter(opt).split(p); }

/// Spaces of all failed leaves (the irreducible residue).
inline void collect_residue(const CertificatePtr& c, std::vector<Preorder>& out) {
  if (c->status == SplitStatus::Failed) {
    out.push_back(c->space);
    return;
  }
  for (const auto& ch : c->children)
    if (ch->status != SplitStatus::Ok) collect_residue(ch, out);
}

// ---------------------------------------------------------------------------
// Validation

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> reasons;  // "<path>: <name>[: detail]"

  void reject(const std::string& path, const std::string& what) {
    ok = false;
    reasons.push_back(path + ": " + what);
  }
  bool has_reason(std::string_view name) const {
    for (const auto& r : reasons)
      if (r.find(name) != std::string::npos) return true;
    return false;
  }
};

namespace detail {

inline HomologyProfile space_homology(const Preorder& p) {
  return p.is_antisymmetric() ? reduced_homology(Poset(p)) : reduced_homology(t0_quotient(p));
}

inline void validate_node(const Certificate& c, const std::string& path, const SplitOptions& opt,
                          ValidationReport& rep) {
  if (c.status != SplitStatus::Ok || !c.wedge.is_resolved()) {
    rep.reject(path, "unresolved: status " + std::string(to_string(c.status)));
    return;
  }
  // Independent homology check first.
  try {
    if (space_homology(c.space) != wedge_homology(c.wedge)) rep.reject(path, "homology-mismatch");
  } catch (const std::exception& ex) {
    rep.reject(path, std::string("homology-mismatch: ") + ex.what());
  }
  Expansion e = expand_rule(c.space, c.rule, c.evidence, opt);
  if (e.error) {
    rep.reject(path, "side-condition:" + c.rule + ": " + *e.error);
  } else {
    if (e.children.size() != c.children.size()) {
      rep.reject(path, "child-count-mismatch");
    } else {
      for (std::size_t i = 0; i < e.children.size(); ++i)
        if (!(static_cast<const Preorder&>(e.children[i]) == c.children[i]->space))
          rep.reject(path, "child-space-mismatch: child " + std::to_string(i));
    }
    if (!(normalize(c.templ) == e.templ)) rep.reject(path, "template-mismatch");
    if (!e.size_exempt && c.rule != rule::kT0)
      for (const auto& ch : c.children)
        if (ch->space.size() >= c.space.size()) rep.reject(path, "descent-violation");
  }
  if (!connectivity_condition_holds(c)) rep.reject(path, "side-condition:" + c.rule + ": child is not connected enough");
  std::vector<WedgeExpr> resolved;
  for (const auto& ch : c.children) resolved.push_back(ch->wedge);
  if (!(substitute(c.templ, resolved) == normalize(c.wedge))) rep.reject(path, "wedge-mismatch");
  for (std::size_t i = 0; i < c.children.size(); ++i)
    validate_node(*c.children[i], path + "/" + std::to_string(i), opt, rep);
}

}  // namespace detail

/// Re-verifies a certificate from scratch: every node's reduced homology is
/// recomputed from its space and compared with its wedge, every side
/// condition is re-derived from the recorded evidence, and the children and
/// template must be exactly those the rule prescribes.
inline ValidationReport validate_certificate(const Certificate& c, const SplitOptions& opt = {}) {
  ValidationReport rep;
  detail::validate_node(c, "root", opt, rep);
  return rep;
}

// ---------------------------------------------------------------------------
// Counting tables

struct AlphaBetaGamma {
  std::vector<int> alpha;  // |mxl n F_x|
  std::vector<int> beta;   // |mnl n U_x|
  std::vector<int> gamma;  // |U_a n mxl(B)| for maximal a, 0 elsewhere
  long incidence = 0;      // |I(mxl(B), mxl(X))|
};

inline AlphaBetaGamma alpha_beta_gamma(const Poset& x) {
  AlphaBetaGamma t;
  const ElementSet mxl = x.maximal(), mnl = x.minimal();
  const ElementSet body = x.all() - mxl - mnl;
  const ElementSet body_max = x.maximal(body);
  for (int v = 0; v < x.size(); ++v) {
    t.alpha.push_back((mxl & x.up(v)).size());
    t.beta.push_back((mnl & x.down(v)).size());
    t.gamma.push_back(mxl.contains(v) ? (x.down(v) & body_max).size() : 0);
  }
  body_max.for_each([&](Element b) { t.incidence += (x.up(b) & mxl).size(); });
  return t;
}

/// r = sum over the body of (m - alpha_x)(n - beta_x).
inline long r_count(const Poset& x) {
  const ElementSet mxl = x.maximal(), mnl = x.minimal();
  const ElementSet body = x.all() - mxl - mnl;
  auto t = alpha_beta_gamma(x);
  long r = 0;
  body.for_each([&](Element v) {
    r += static_cast<long>(mxl.size() - t.alpha[v]) * (mnl.size() - t.beta[v]);
  });
  return r;
}

/// First (a, b) in mxl x mnl with X = U_a u F_b u mxl u mnl.
inline std::optional<std::pair<Element, Element>> find_uafb_cover(const Poset& x) {
  const ElementSet mxl = x.maximal(), mnl = x.minimal();
  for (Element a = mxl.first(); a >= 0; a = mxl.next(a))
    for (Element b = mnl.first(); b >= 0; b = mnl.next(b))
      if (uafb_cover(x, a, b)) return std::pair{a, b};
  return std::nullopt;
}

}  // namespace finspace
