// finspace: command-line front end for the finite-space toolkit.
//
// Exit codes: 0 success, 1 parse or usage error, 2 invariant violation,
// 3 split failure (the irreducible residue is written to stderr, or for
// verify, to --dump-failures).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "finspace/finspace.hpp"

namespace fs = finspace;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SplitFailure {};

std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::Preorder load(const std::string& path) { return fs::parse_hasse(read_input(path)); }

// Commands other than split work on the T0 quotient.
fs::Poset load_poset(const std::string& path) {
  fs::Preorder p = load(path);
  return p.is_antisymmetric() ? fs::Poset(std::move(p)) : fs::t0_quotient(p);
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

int cmd_core(const std::string& file, bool as_json) {
  fs::Poset p = load_poset(file);
  fs::CoreResult r = fs::core(p);
  if (as_json) {
    json trace = json::array();
    for (const auto& st : r.trace.steps)
      trace.push_back({{"remove", p.label(st.element)}, {"kind", std::string(fs::to_string(st.kind))}});
    emit({{"trace", trace}, {"core", fs::write_hasse(r.core, fs::PointDeclarations::All)}, {"size", r.core.size()}});
  } else {
    // Trace as JSON lines, then the core as Hasse text.
    for (const auto& st : r.trace.steps)
      std::cout << json{{"remove", p.label(st.element)}, {"kind", std::string(fs::to_string(st.kind))}}.dump() << '\n';
    std::cout << "# core: " << r.core.size() << (r.core.size() == 1 ? " point\n" : " points\n")
              << fs::write_hasse(r.core, fs::PointDeclarations::All);
  }
  return 0;
}

int cmd_homology(const std::string& file, bool as_json) {
  fs::HomologyProfile h = fs::reduced_homology(load_poset(file));
  if (as_json)
    emit(h.to_json());
  else
    std::cout << h.to_text() << '\n';
  return 0;
}

void print_tree(const fs::Certificate& c, int depth) {
  std::cout << std::string(static_cast<std::size_t>(2 * depth), ' ') << c.rule << " [" << c.space.size() << " points] "
            << fs::to_string(c.status) << " -> " << fs::to_text(c.wedge) << '\n';
  for (const auto& ch : c.children) print_tree(*ch, depth + 1);
}

int cmd_split(const std::string& file, bool as_json, int fuel) {
  fs::Preorder p = load(file);
  if (p.empty()) throw fs::InvariantError("empty space");
  fs::SplitOptions opt;
  opt.fuel = fuel;
  std::vector<fs::CertificatePtr> certs;
  // Disconnected input: one certificate per component of the T0 quotient.
  if (p.is_antisymmetric() && !fs::Poset(p).is_connected()) {
    fs::Poset x(p);
    for (const auto& comp : x.components()) certs.push_back(fs::split(x.induced(comp), opt));
  } else {
    certs.push_back(fs::split(p, opt));
  }
  bool ok = true;
  std::vector<fs::Preorder> residue;
  for (const auto& c : certs) {
    if (c->status != fs::SplitStatus::Ok) ok = false;
    fs::collect_residue(c, residue);
  }
  if (as_json) {
    if (certs.size() == 1) {
      emit(fs::certificate_to_json(*certs[0]));
    } else {
      json arr = json::array();
      for (const auto& c : certs) arr.push_back(fs::certificate_to_json(*c));
      emit({{"components", arr}});
    }
  } else {
    for (const auto& c : certs) print_tree(*c, 0);
  }
  if (!ok) {
    for (const auto& r : residue) std::cerr << "# residue (" << r.size() << " points)\n" << fs::detail::write_preorder(r);
    throw SplitFailure{};
  }
  return 0;
}

int cmd_interval(const std::string& file, const std::string& a, const std::string& b, bool as_json) {
  fs::Poset p = load_poset(file);
  for (const auto& l : {a, b})
    if (!p.find(l)) throw UsageError("no element labelled '" + l + "'");
  fs::Element ea = p.index_of(a), eb = p.index_of(b);
  fs::IntervalPoset ip = fs::interval_poset(p, p.down(ea), p.up(eb));
  if (ip.poset.empty()) throw fs::InvariantError("interval poset is empty");
  std::string text = fs::write_hasse(ip.poset, fs::PointDeclarations::All);
  if (as_json) {
    json pairs = json::array();
    for (auto [u, v] : ip.pairs) pairs.push_back({p.label(u), p.label(v)});
    emit({{"pairs", pairs}, {"space", text}});
  } else {
    std::cout << text;
  }
  return 0;
}

int cmd_suspend(const std::string& file, int k, bool as_json) {
  fs::Poset s = fs::nh_suspension(load_poset(file), k);
  std::string text = fs::write_hasse(s, fs::PointDeclarations::All);
  if (as_json)
    emit({{"space", text}, {"size", s.size()}});
  else
    std::cout << text;
  return 0;
}

int cmd_export(const std::string& file, bool as_json, bool dot) {
  fs::Poset p = load_poset(file);
  if (dot) {
    std::cout << fs::write_dot(p);
    return 0;
  }
  fs::SimplicialComplex k = fs::order_complex(p);
  if (as_json) {
    json simplices = json::array();
    for (int d = 0; d <= k.dimension(); ++d)
      for (const auto& s : k.simplices(d)) simplices.push_back(s);
    emit({{"vertices", k.labels()}, {"dimension", k.dimension()}, {"simplices", simplices}});
  } else {
    std::cout << k.to_text();
  }
  return 0;
}

int cmd_verify(const fs::SweepOptions& opt, bool as_json, const std::string& out, const std::string& dump,
               bool timing) {
  fs::SweepOptions o = opt;
  o.progress = [](const std::string& s) { std::cerr << s << '\n'; };
  fs::SweepReport r = fs::verify_theorem(o);
  json j = fs::sweep_report_to_json(r, timing);
  if (!out.empty()) std::ofstream(out) << j.dump(2) << '\n';
  if (!dump.empty()) fs::dump_failures(r, dump);
  std::cerr << "wall time " << r.wall_seconds << " s\n";
  if (as_json) {
    emit(j);
  } else {
    std::cout << "n  connected  split+validated  failures  torsion\n";
    for (const auto& row : r.rows)
      std::cout << row.n << "  " << row.total << "  " << row.successes << "  " << row.failures << "  " << row.torsion
                << '\n';
    std::cout << "coverage " << r.successes() << "/" << r.total() << '\n';
  }
  return r.failures.empty() ? 0 : 3;
}

int cmd_fixtures(const std::string& dir, bool as_json) {
  std::filesystem::create_directories(dir);
  json list = json::array();
  for (const auto& f : fs::all_fixtures()) {
    auto path = std::filesystem::path(dir) / (f.name + ".hasse");
    std::ofstream(path) << "# " << f.description << '\n' << fs::write_hasse(f.space, fs::PointDeclarations::All);
    list.push_back({{"name", f.name}, {"file", path.string()}, {"size", f.space.size()}});
    if (!as_json) std::cout << path.string() << '\n';
  }
  if (as_json) emit({{"fixtures", list}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finspace: finite topological spaces, homology and wedge-of-spheres certificates"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "text";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));

  std::string file;
  auto* core = app.add_subcommand("core", "Stong core with its removal trace");
  core->add_option("FILE", file, "Hasse file ('-' for stdin)")->required();
  auto* hom = app.add_subcommand("homology", "Reduced integral homology");
  hom->add_option("FILE", file, "Hasse file")->required();

  int fuel = fs::SplitOptions{}.fuel;
  auto* spl = app.add_subcommand("split", "Wedge-of-spheres certificate");
  spl->add_option("FILE", file, "Hasse file")->required();
  spl->add_option("--fuel", fuel, "Rule budget per path")->check(CLI::PositiveNumber);

  std::string la, lb;
  auto* itv = app.add_subcommand("interval", "Interval poset I(U_a, F_b)");
  itv->add_option("FILE", file, "Hasse file")->required();
  itv->add_option("a", la, "Label of a")->required();
  itv->add_option("b", lb, "Label of b")->required();

  int k = 1;
  auto* sus = app.add_subcommand("suspend", "k-fold non-Hausdorff suspension");
  sus->add_option("FILE", file, "Hasse file")->required();
  sus->add_option("-k", k, "Number of suspensions")->check(CLI::NonNegativeNumber);

  bool dot = false;
  auto* exp = app.add_subcommand("export-complex", "Order complex (or Hasse DOT with --dot)");
  exp->add_option("FILE", file, "Hasse file")->required();
  exp->add_flag("--dot", dot, "Write the Hasse diagram as DOT instead");

  fs::SweepOptions sweep;
  std::string out, dump, checkpoint;
  bool timing = false;
  auto* ver = app.add_subcommand("verify", "Split and validate every connected poset up to --max-n points");
  ver->add_option("--max-n", sweep.max_n, "Largest size")->check(CLI::PositiveNumber);
  ver->add_option("--fuel", sweep.fuel, "Rule budget per path")->check(CLI::PositiveNumber);
  ver->add_option("--jobs", sweep.jobs, "Worker threads")->check(CLI::PositiveNumber);
  ver->add_option("--out", out, "Write the JSON report here");
  ver->add_option("--dump-failures", dump, "Directory for failed spaces and residues");
  ver->add_flag("--long-run", sweep.long_run, "Allow sizes 11 and 12");
  ver->add_option("--checkpoint", checkpoint, "Checkpoint file (resumed if present)");
  ver->add_flag("--timing", timing, "Include timings in the report");

  std::string dir;
  auto* fix = app.add_subcommand("fixtures", "Write every named space to a directory");
  fix->add_option("DIR", dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  const bool as_json = format == "json";
  try {
    if (*core) return cmd_core(file, as_json);
    if (*hom) return cmd_homology(file, as_json);
    if (*spl) return cmd_split(file, as_json, fuel);
    if (*itv) return cmd_interval(file, la, lb, as_json);
    if (*sus) return cmd_suspend(file, k, as_json);
    if (*exp) return cmd_export(file, as_json, dot);
    if (*ver) {
      if (!checkpoint.empty()) sweep.checkpoint = checkpoint;
      return cmd_verify(sweep, as_json, out, dump, timing);
    }
    if (*fix) return cmd_fixtures(dir, as_json);
  } catch (const SplitFailure&) {
    return 3;
  } catch (const fs::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 1;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
