#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "finspace/homology.hpp"
#include "finspace/poset.hpp"

namespace finspace {

enum class ReductionKind { DownBeat, UpBeat, DownWeak, UpWeak, Weak, Gamma };

inline std::string_view to_string(ReductionKind k) {
  switch (k) {
    case ReductionKind::DownBeat: return "down-beat";
    case ReductionKind::UpBeat: return "up-beat";
    case ReductionKind::DownWeak: return "down-weak";
    case ReductionKind::UpWeak: return "up-weak";
    case ReductionKind::Weak: return "weak";
    case ReductionKind::Gamma: return "gamma";
  }
  return "?";
}

inline std::optional<ReductionKind> reduction_kind_from_string(std::string_view s) {
  for (auto k : {ReductionKind::DownBeat, ReductionKind::UpBeat, ReductionKind::DownWeak, ReductionKind::UpWeak,
                 ReductionKind::Weak, ReductionKind::Gamma})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

struct ReductionStep {
  Element element;  // index in the poset the trace was computed on
  ReductionKind kind;
  friend bool operator==(const ReductionStep&, const ReductionStep&) = default;
};

/// Removal sequence applied to a subset of a poset. `remaining` is the final
/// subset, always expressed in the original numbering.
struct ReductionTrace {
  ElementSet start;
  std::vector<ReductionStep> steps;
  ElementSet remaining;
};

// --- relative checks on a subset S of p (order inherited from p) ---

inline bool is_down_beat(const Poset& p, const ElementSet& s, Element x) {
  return p.maximal(p.hat_down(x) & s).size() == 1;
}
inline bool is_up_beat(const Poset& p, const ElementSet& s, Element x) {
  return p.minimal(p.hat_up(x) & s).size() == 1;
}

inline ElementSet down_beat_points(const Poset& p, const ElementSet& s) {
  ElementSet out;
  s.for_each([&](Element x) {
    if (is_down_beat(p, s, x)) out.insert(x);
  });
  return out;
}
inline ElementSet up_beat_points(const Poset& p, const ElementSet& s) {
  ElementSet out;
  s.for_each([&](Element x) {
    if (is_up_beat(p, s, x)) out.insert(x);
  });
  return out;
}
inline ElementSet down_beat_points(const Poset& p) { return down_beat_points(p, p.all()); }
inline ElementSet up_beat_points(const Poset& p) { return up_beat_points(p, p.all()); }

/// Removes every down beat point at once. Up and down beat points are never
/// removed in the same batch.
inline Poset remove_all_down_beat_points(const Poset& p) { return p.induced(p.all() - down_beat_points(p)); }
inline Poset remove_all_up_beat_points(const Poset& p) { return p.induced(p.all() - up_beat_points(p)); }

/// Beat-point reduction of the subspace s: repeatedly removes the beat point
/// with the smallest id.
inline ReductionTrace core_trace(const Poset& p, const ElementSet& s) {
  ReductionTrace t{s, {}, s};
  bool changed = true;
  while (changed) {
    changed = false;
    for (Element x = t.remaining.first(); x >= 0; x = t.remaining.next(x)) {
      std::optional<ReductionKind> kind;
      if (is_down_beat(p, t.remaining, x))
        kind = ReductionKind::DownBeat;
      else if (is_up_beat(p, t.remaining, x))
        kind = ReductionKind::UpBeat;
      if (kind) {
        t.steps.push_back({x, *kind});
        t.remaining.erase(x);
        changed = true;
        break;
      }
    }
  }
  return t;
}

inline ElementSet core_set(const Poset& p, const ElementSet& s) { return core_trace(p, s).remaining; }

/// Contractibility of the subspace s: its core is a single point.
inline bool is_contractible(const Poset& p, const ElementSet& s) { return core_set(p, s).size() == 1; }

struct CoreResult {
  Poset core;
  ReductionTrace trace;
};

inline CoreResult core(const Poset& p) {
  ReductionTrace t = core_trace(p, p.all());
  return {p.induced(t.remaining), std::move(t)};
}

/// Kind of weak point x is within s, if any.
inline std::optional<ReductionKind> weak_point_kind(const Poset& p, const ElementSet& s, Element x) {
  ElementSet below = p.hat_down(x) & s;
  ElementSet above = p.hat_up(x) & s;
  if (!below.empty() && is_contractible(p, below)) return ReductionKind::DownWeak;
  if (!above.empty() && is_contractible(p, above)) return ReductionKind::UpWeak;
  if (is_contractible(p, below | above)) return ReductionKind::Weak;
  return std::nullopt;
}

/// x is a weak point iff the core of C^_x is a single point.
inline ElementSet weak_points(const Poset& p, const ElementSet& s) {
  ElementSet out;
  s.for_each([&](Element x) {
    if (is_contractible(p, p.hat_c(x) & s)) out.insert(x);
  });
  return out;
}
inline ElementSet weak_points(const Poset& p) { return weak_points(p, p.all()); }

enum class Triviality { Trivial, NonTrivial, Unknown };

inline std::string_view to_string(Triviality t) {
  switch (t) {
    case Triviality::Trivial: return "trivial";
    case Triviality::NonTrivial: return "non-trivial";
    case Triviality::Unknown: return "unknown";
  }
  return "?";
}

struct TrivialityResult {
  Triviality verdict = Triviality::Unknown;
  ReductionTrace trace;  // witness for Trivial: remaining is a single point
  std::optional<HomologyProfile> homology;  // witness for NonTrivial
};

inline TrivialityResult homotopic_triviality(const Poset& p, const ElementSet& s, int gamma_depth = 1);

/// True iff x is a gamma point of s, i.e. C^_x (within s) is certified trivial.
inline bool is_gamma_point(const Poset& p, const ElementSet& s, Element x, int gamma_depth) {
  ElementSet c = p.hat_c(x) & s;
  if (c.empty()) return false;
  return homotopic_triviality(p, c, gamma_depth - 1).verdict == Triviality::Trivial;
}

/// Sound three-valued test: removes beat points, then weak points, then
/// gamma points (nesting bounded by gamma_depth) and falls back to homology.
inline TrivialityResult homotopic_triviality(const Poset& p, const ElementSet& s, int gamma_depth) {
  TrivialityResult res;
  res.trace = ReductionTrace{s, {}, s};
  ReductionTrace& t = res.trace;
  while (true) {
    if (t.remaining.size() == 1) {
      res.verdict = Triviality::Trivial;
      return res;
    }
    if (t.remaining.empty()) break;
    std::optional<ReductionStep> step;
    for (Element x = t.remaining.first(); x >= 0 && !step; x = t.remaining.next(x)) {
      if (is_down_beat(p, t.remaining, x))
        step = ReductionStep{x, ReductionKind::DownBeat};
      else if (is_up_beat(p, t.remaining, x))
        step = ReductionStep{x, ReductionKind::UpBeat};
    }
    for (Element x = t.remaining.first(); x >= 0 && !step; x = t.remaining.next(x))
      if (auto k = weak_point_kind(p, t.remaining, x)) step = ReductionStep{x, *k};
    if (gamma_depth > 0)
      for (Element x = t.remaining.first(); x >= 0 && !step; x = t.remaining.next(x))
        if (is_gamma_point(p, t.remaining, x, gamma_depth)) step = ReductionStep{x, ReductionKind::Gamma};
    if (!step) break;
    t.steps.push_back(*step);
    t.remaining.erase(step->element);
  }
  if (t.remaining.empty()) {
    res.verdict = Triviality::NonTrivial;
    return res;
  }
  if (p.components(t.remaining).size() > 1) {
    res.verdict = Triviality::NonTrivial;
    return res;
  }
  res.homology = reduced_homology(p.induced(t.remaining));
  res.verdict = res.homology->is_trivial() ? Triviality::Unknown : Triviality::NonTrivial;
  return res;
}

inline TrivialityResult is_homotopically_trivial(const Poset& p) { return homotopic_triviality(p, p.all()); }

/// Replays a trace, checking each step's precondition on the intermediate
/// subspace. Returns an error description, or nullopt when valid.
inline std::optional<std::string> check_trace(const Poset& p, const ReductionTrace& t, int gamma_depth = 1) {
  ElementSet cur = t.start;
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const auto& st = t.steps[i];
    std::string where = "step " + std::to_string(i);
    if (st.element < 0 || st.element >= p.size() || !cur.contains(st.element))
      return where + ": element not present";
    bool ok = false;
    const Element x = st.element;
    switch (st.kind) {
      case ReductionKind::DownBeat: ok = is_down_beat(p, cur, x); break;
      case ReductionKind::UpBeat: ok = is_up_beat(p, cur, x); break;
      case ReductionKind::DownWeak: ok = is_contractible(p, p.hat_down(x) & cur); break;
      case ReductionKind::UpWeak: ok = is_contractible(p, p.hat_up(x) & cur); break;
      case ReductionKind::Weak: ok = is_contractible(p, p.hat_c(x) & cur); break;
      case ReductionKind::Gamma: ok = is_gamma_point(p, cur, x, gamma_depth); break;
    }
    if (!ok) return where + ": " + std::string(to_string(st.kind)) + " condition fails";
    cur.erase(x);
  }
  if (cur != t.remaining) return std::string("final subset does not match");
  return std::nullopt;
}

}  // namespace finspace
