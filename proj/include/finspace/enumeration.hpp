#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "json.hpp"

#include "finspace/canonical.hpp"
#include "finspace/certificate_json.hpp"
#include "finspace/hasse_io.hpp"
#include "finspace/splitter.hpp"

namespace finspace {

inline constexpr int kDefaultMaxEnumeration = 10;
inline constexpr int kLongRunMaxEnumeration = 12;

// ---------------------------------------------------------------------------
// Generation by canonical augmentation: a child adds one new maximal element
// above a down set of its parent. It is kept iff the new element lies in the
// automorphism orbit of the child's canonical deletion point (the maximal
// element placed last by the canonical labeling), and isomorphic siblings
// are merged by canonical form.

namespace detail {

inline void for_each_down_set(const Poset& p, const std::function<void(const ElementSet&)>& fn) {
  const auto ext = p.linear_extension();
  ElementSet cur;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == ext.size()) {
      fn(cur);
      return;
    }
    const Element e = ext[i];
    rec(i + 1);
    if (p.hat_down(e) <= cur) {
      cur.insert(e);
      rec(i + 1);
      cur.erase(e);
    }
  };
  rec(0);
}

inline Element deletion_point(const Poset& c, const CanonicalLabeling& lab) {
  const ElementSet mx = c.maximal();
  for (auto it = lab.order.rbegin(); it != lab.order.rend(); ++it)
    if (mx.contains(*it)) return *it;
  return lab.order.back();
}

inline bool same_orbit(const Poset& c, Element a, Element b) {
  if (a == b) return true;
  if (c.down(a).size() != c.down(b).size() || c.up(a).size() != c.up(b).size()) return false;
  std::vector<int> ma(static_cast<std::size_t>(c.size()), 0), mb = ma;
  ma[a] = 1;
  mb[b] = 1;
  return canonical_labeling(c, &ma).form == canonical_labeling(c, &mb).form;
}

}  // namespace detail

/// Canonical children of p, one per isomorphism class, in a fixed order.
inline std::vector<Poset> canonical_children(const Poset& p) {
  const int n = p.size();
  if (n + 1 > 255) throw CapacityError("enumeration supports at most 255 points");
  std::vector<Poset> out;
  std::unordered_set<CanonicalForm> seen;
  auto labels = detail::default_labels(n + 1);
  detail::for_each_down_set(p, [&](const ElementSet& d) {
    std::vector<ElementSet> up(static_cast<std::size_t>(n + 1));
    for (int y = 0; y < n; ++y) up[y] = p.up(y);
    d.for_each([&](Element y) { up[y].insert(n); });
    up[n] = ElementSet::single(n);
    Poset c = Poset::from_up_sets(labels, up);
    CanonicalLabeling lab = canonical_labeling(c);
    if (!detail::same_orbit(c, n, detail::deletion_point(c, lab))) return;
    if (!seen.insert(lab.form).second) return;
    out.push_back(std::move(c));
  });
  return out;
}

/// Depth-first generation of every poset with 1 <= |X| <= max_n, one per
/// isomorphism class, connected or not.
inline void for_each_poset(int max_n, const std::function<void(const Poset&)>& fn) {
  std::function<void(const Poset&)> rec = [&](const Poset& p) {
    fn(p);
    if (p.size() < max_n)
      for (const auto& c : canonical_children(p)) rec(c);
  };
  if (max_n >= 1) rec(antichain_poset(1));
}

/// All connected posets on exactly n points up to isomorphism.
inline std::vector<Poset> enumerate_connected_posets(int n) {
  if (n < 1 || n > kLongRunMaxEnumeration) throw InvariantError("n must lie in [1, 12]");
  std::vector<Poset> out;
  for_each_poset(n, [&](const Poset& p) {
    if (p.size() == n && p.is_connected()) out.push_back(p);
  });
  return out;
}

/// Class counts per size (index k = size k, index 0 unused), all and connected.
struct ClassCounts {
  std::vector<long> all;
  std::vector<long> connected;
};

inline ClassCounts count_classes(int max_n) {
  ClassCounts c{std::vector<long>(static_cast<std::size_t>(max_n + 1), 0),
                std::vector<long>(static_cast<std::size_t>(max_n + 1), 0)};
  for_each_poset(max_n, [&](const Poset& p) {
    ++c.all[p.size()];
    if (p.is_connected()) ++c.connected[p.size()];
  });
  return c;
}

// ---------------------------------------------------------------------------
// Theorem sweep

struct SweepFailure {
  int n = 0;
  long index = 0;  // position among the connected n-point classes, in generation order
  Poset space;
  std::string reason;
  std::vector<Preorder> residue;
};

struct SweepRow {
  int n = 0;
  long total = 0;
  long successes = 0;
  long failures = 0;
  long torsion = 0;
  double cpu_seconds = 0;
  std::map<std::string, long> root_rules;
};

struct SweepReport {
  int max_n = 0;
  int fuel = 0;
  std::vector<SweepRow> rows;  // rows[k - 1] describes size k
  std::vector<SweepFailure> failures;
  std::vector<Poset> torsion_spaces;
  double wall_seconds = 0;
  bool complete = false;

  long total() const {
    long t = 0;
    for (const auto& r : rows) t += r.total;
    return t;
  }
  long successes() const {
    long t = 0;
    for (const auto& r : rows) t += r.successes;
    return t;
  }
};

struct SweepOptions {
  int max_n = 6;
  int fuel = SplitOptions{}.fuel;
  int jobs = 1;
  bool long_run = false;
  std::optional<std::filesystem::path> checkpoint;
  long checkpoint_every = 1000000;  // classes between checkpoint writes
  std::optional<long> stop_after;   // merge at most this many subtrees, then stop
  std::function<void(const std::string&)> progress;
};

namespace detail {

struct SweepPart {
  std::vector<SweepRow> rows;
  std::vector<SweepFailure> failures;  // index is local to the part
  std::vector<Poset> torsion;
  long classes = 0;
};

inline void sweep_one(const Poset& p, const SplitOptions& sopt, SweepPart& part) {
  const auto t0 = std::chrono::steady_clock::now();
  SweepRow& row = part.rows[p.size() - 1];
  const long index = row.total++;
  ++part.classes;
  CertificatePtr c = split(p, sopt);
  std::string reason;
  if (c->status != SplitStatus::Ok) {
    reason = std::string("split ") + std::string(to_string(c->status));
  } else {
    ValidationReport v = validate_certificate(*c, sopt);
    if (!v.ok) reason = "validation: " + v.reasons.front();
  }
  if (reason.empty()) {
    ++row.successes;
    ++row.root_rules[c->rule];
  } else {
    ++row.failures;
    SweepFailure f{p.size(), index, p, reason, {}};
    collect_residue(c, f.residue);
    part.failures.push_back(std::move(f));
  }
  if (!reduced_homology(p).torsion_free()) {
    ++row.torsion;
    part.torsion.push_back(p);
  }
  row.cpu_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline void merge_part(SweepReport& r, SweepPart&& part) {
  for (auto& f : part.failures) {
    f.index += r.rows[f.n - 1].total;
    r.failures.push_back(std::move(f));
  }
  for (std::size_t k = 0; k < part.rows.size(); ++k) {
    SweepRow& d = r.rows[k];
    const SweepRow& s = part.rows[k];
    d.total += s.total;
    d.successes += s.successes;
    d.failures += s.failures;
    d.torsion += s.torsion;
    d.cpu_seconds += s.cpu_seconds;
    for (const auto& [rule, cnt] : s.root_rules) d.root_rules[rule] += cnt;
  }
  for (auto& t : part.torsion) r.torsion_spaces.push_back(std::move(t));
}

inline int split_level(int max_n) { return std::clamp(max_n - 3, 1, 6); }

}  // namespace detail

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json sweep_report_to_json(const SweepReport& r, bool timing) {
  using nlohmann::json;
  json j;
  j["max_n"] = r.max_n;
  j["fuel"] = r.fuel;
  j["complete"] = r.complete;
  j["rows"] = json::array();
  for (const auto& row : r.rows) {
    json jr{{"n", row.n},
            {"total", row.total},
            {"successes", row.successes},
            {"failures", row.failures},
            {"torsion", row.torsion},
            {"root_rules", row.root_rules}};
    if (timing) jr["cpu_seconds"] = row.cpu_seconds;
    j["rows"].push_back(jr);
  }
  j["failures"] = json::array();
  for (const auto& f : r.failures) {
    json jf{{"n", f.n}, {"index", f.index}, {"reason", f.reason}, {"space", write_hasse(f.space, PointDeclarations::All)}};
    jf["residue"] = json::array();
    for (const auto& s : f.residue) jf["residue"].push_back(detail::write_preorder(s));
    j["failures"].push_back(jf);
  }
  j["torsion_spaces"] = json::array();
  for (const auto& t : r.torsion_spaces) j["torsion_spaces"].push_back(write_hasse(t, PointDeclarations::All));
  if (timing) j["wall_seconds"] = r.wall_seconds;
  return j;
}

inline SweepReport sweep_report_from_json(const nlohmann::json& j) {
  SweepReport r;
  r.max_n = j.at("max_n").get<int>();
  r.fuel = j.at("fuel").get<int>();
  r.complete = j.at("complete").get<bool>();
  for (const auto& jr : j.at("rows")) {
    SweepRow row;
    row.n = jr.at("n").get<int>();
    row.total = jr.at("total").get<long>();
    row.successes = jr.at("successes").get<long>();
    row.failures = jr.at("failures").get<long>();
    row.torsion = jr.at("torsion").get<long>();
    row.root_rules = jr.at("root_rules").get<std::map<std::string, long>>();
    if (jr.contains("cpu_seconds")) row.cpu_seconds = jr["cpu_seconds"].get<double>();
    r.rows.push_back(std::move(row));
  }
  for (const auto& jf : j.at("failures")) {
    SweepFailure f;
    f.n = jf.at("n").get<int>();
    f.index = jf.at("index").get<long>();
    f.reason = jf.at("reason").get<std::string>();
    f.space = Poset(parse_hasse(jf.at("space").get<std::string>()));
    for (const auto& s : jf.at("residue")) f.residue.push_back(parse_hasse(s.get<std::string>()));
    r.failures.push_back(std::move(f));
  }
  for (const auto& t : j.at("torsion_spaces")) r.torsion_spaces.push_back(Poset(parse_hasse(t.get<std::string>())));
  if (j.contains("wall_seconds")) r.wall_seconds = j["wall_seconds"].get<double>();
  return r;
}

/// Checkpoint file, version 1:
///   {"format": "finspace-sweep-checkpoint", "version": 1, "max_n": K,
///    "fuel": F, "split_level": L, "tasks": T, "next_task": i,
///    "report": <sweep report with timing>}
/// Tasks are the subtrees below the L-point posets in generation order;
/// posets with at most L points are folded in before task 0. A resumed run
/// skips tasks below next_task.
inline constexpr int kCheckpointVersion = 1;

// ---------------------------------------------------------------------------

/// Splits and validates every connected poset with at most max_n points.
/// Work is partitioned by generation subtree; subtree results are merged in
/// subtree order, so the report does not depend on the number of jobs.
inline SweepReport verify_theorem(const SweepOptions& opt) {
  const int limit = opt.long_run ? kLongRunMaxEnumeration : kDefaultMaxEnumeration;
  if (opt.max_n < 1 || opt.max_n > limit)
    throw InvariantError("max-n must lie in [1, " + std::to_string(limit) + "]" +
                         (opt.long_run ? "" : "; larger sweeps need the long-run flag"));
  const auto start = std::chrono::steady_clock::now();
  SplitOptions sopt;
  sopt.fuel = opt.fuel;
  const int level = detail::split_level(opt.max_n);

  SweepReport report;
  report.max_n = opt.max_n;
  report.fuel = opt.fuel;
  report.rows.resize(static_cast<std::size_t>(opt.max_n));
  for (int k = 1; k <= opt.max_n; ++k) report.rows[k - 1].n = k;

  auto empty_part = [&] {
    detail::SweepPart part;
    part.rows.resize(static_cast<std::size_t>(opt.max_n));
    for (int k = 1; k <= opt.max_n; ++k) part.rows[k - 1].n = k;
    return part;
  };

  // Frontier: everything up to `level` points, sequentially.
  std::vector<Poset> frontier;
  detail::SweepPart head = empty_part();
  for_each_poset(std::min(level, opt.max_n), [&](const Poset& p) {
    if (p.is_connected()) detail::sweep_one(p, sopt, head);
    if (p.size() == level && level < opt.max_n) frontier.push_back(p);
  });
  const long tasks = static_cast<long>(frontier.size());

  long next_task = 0;
  bool resumed = false;
  if (opt.checkpoint && std::filesystem::exists(*opt.checkpoint)) {
    std::ifstream in(*opt.checkpoint);
    auto j = nlohmann::json::parse(in);
    if (j.value("format", "") != "finspace-sweep-checkpoint" || j.value("version", 0) != kCheckpointVersion)
      throw InvariantError("unsupported checkpoint file");
    if (j.at("max_n") != opt.max_n || j.at("fuel") != opt.fuel || j.at("split_level") != level ||
        j.at("tasks") != tasks)
      throw InvariantError("checkpoint does not match the requested sweep");
    report = sweep_report_from_json(j.at("report"));
    next_task = j.at("next_task").get<long>();
    resumed = true;
  }
  if (!resumed) detail::merge_part(report, std::move(head));

  auto write_checkpoint = [&](long next) {
    if (!opt.checkpoint) return;
    nlohmann::json j{{"format", "finspace-sweep-checkpoint"},
                     {"version", kCheckpointVersion},
                     {"max_n", opt.max_n},
                     {"fuel", opt.fuel},
                     {"split_level", level},
                     {"tasks", tasks},
                     {"next_task", next}};
    j["report"] = sweep_report_to_json(report, true);
    const auto tmp = opt.checkpoint->string() + ".tmp";
    {
      std::ofstream out(tmp);
      out << j.dump() << '\n';
    }
    std::filesystem::rename(tmp, *opt.checkpoint);
  };

  // Subtrees in parallel; merged strictly in task order.
  std::vector<std::optional<detail::SweepPart>> done(static_cast<std::size_t>(tasks));
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<long> cursor{next_task};
  auto worker = [&] {
    while (true) {
      const long t = cursor.fetch_add(1);
      if (t >= tasks) return;
      detail::SweepPart part = empty_part();
      std::function<void(const Poset&)> rec = [&](const Poset& p) {
        for (const auto& c : canonical_children(p)) {
          if (c.is_connected()) detail::sweep_one(c, sopt, part);
          if (c.size() < opt.max_n) rec(c);
        }
      };
      rec(frontier[t]);
      {
        std::lock_guard<std::mutex> lock(mu);
        done[t] = std::move(part);
      }
      cv.notify_all();
    }
  };
  const int jobs = std::max(1, opt.jobs);
  std::vector<std::thread> pool;
  for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
  long since_checkpoint = 0;
  long stopped_at = tasks;
  for (long t = next_task; t < tasks; ++t) {
    detail::SweepPart part;
    {
      std::unique_lock<std::mutex> lock(mu);
      cv.wait(lock, [&] { return done[t].has_value(); });
      part = std::move(*done[t]);
      done[t].reset();
    }
    since_checkpoint += part.classes;
    detail::merge_part(report, std::move(part));
    if (since_checkpoint >= opt.checkpoint_every) {
      write_checkpoint(t + 1);
      since_checkpoint = 0;
    }
    if (opt.progress && (t + 1) % 16 == 0)
      opt.progress("subtree " + std::to_string(t + 1) + "/" + std::to_string(tasks));
    if (opt.stop_after && t + 1 < tasks && t + 1 - next_task >= *opt.stop_after) {
      stopped_at = t + 1;
      cursor.store(tasks);
      break;
    }
  }
  for (auto& th : pool) th.join();
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.complete = stopped_at == tasks;
  write_checkpoint(stopped_at);
  return report;
}

/// Writes <dir>/n<k>-<index>.hasse for each failed space and
/// <dir>/n<k>-<index>.residue-<j>.hasse for each irreducible residue.
inline std::vector<std::filesystem::path> dump_failures(const SweepReport& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> files;
  for (const auto& f : r.failures) {
    const std::string stem = "n" + std::to_string(f.n) + "-" + std::to_string(f.index);
    auto path = dir / (stem + ".hasse");
    std::ofstream(path) << "# " << f.reason << "\n" << write_hasse(f.space);
    files.push_back(path);
    for (std::size_t i = 0; i < f.residue.size(); ++i) {
      auto rp = dir / (stem + ".residue-" + std::to_string(i) + ".hasse");
      std::ofstream(rp) << detail::write_preorder(f.residue[i]);
      files.push_back(rp);
    }
  }
  return files;
}

}  // namespace finspace
