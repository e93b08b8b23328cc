// Command-line front end for the opposition-diagram toolkit.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "oppdiag/coxeter.hpp"
#include "oppdiag/diagrams.hpp"
#include "oppdiag/engine.hpp"
#include "oppdiag/geometry.hpp"

namespace {

using namespace oppdiag;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    if (!item.empty()) out.push_back(std::stoi(item));
  }
  std::sort(out.begin(), out.end());
  return out;
}

GraphAutomorphism parse_cycles(const CoxeterGraph& g, const std::string& s) {
  if (s.empty() || s == "id")
    return GraphAutomorphism::identity_on(g.nodes());
  std::map<int, int> m;
  for (int v : g.nodes()) m[v] = v;
  std::size_t pos = 0;
  while (pos < s.size()) {
    if (s[pos] != '(')
      throw std::invalid_argument("bad cycle notation: " + s);
    auto close = s.find(')', pos);
    if (close == std::string::npos)
      throw std::invalid_argument("unbalanced cycle: " + s);
    auto cycle = parse_int_list(s.substr(pos + 1, close - pos - 1));
    // parse_int_list sorts; re-extract in written order instead.
    cycle.clear();
    std::istringstream is(s.substr(pos + 1, close - pos - 1));
    std::string item;
    while (std::getline(is, item, ',')) cycle.push_back(std::stoi(item));
    for (std::size_t i = 0; i < cycle.size(); ++i)
      m[cycle[i]] = cycle[(i + 1) % cycle.size()];
    pos = close + 1;
  }
  return GraphAutomorphism(m);
}

/// "<family><rank>@<q>" with family A (projective) or B/C (symplectic polar).
FlagGeometry parse_geometry_spec(const std::string& spec) {
  auto at = spec.find('@');
  if (at == std::string::npos || at < 2)
    throw std::invalid_argument("geometry spec must look like A3@2");
  char family = spec[0];
  int rank = std::stoi(spec.substr(1, at - 1));
  int q = std::stoi(spec.substr(at + 1));
  if (family == 'A')
    return FlagGeometry::build(GeometryKind::projective, rank + 1, q);
  if (family == 'B' || family == 'C')
    return FlagGeometry::build(GeometryKind::symplectic_polar, rank, q);
  throw std::invalid_argument("geometry family must be A or B");
}

GraphAutomorphism pi_for(const CoxeterGraph& g, const std::string& type,
                         const std::string& cls) {
  if (cls == "id") return GraphAutomorphism::identity_on(g.nodes());
  PiClass pc = cls == "op2" ? PiClass::order2 : PiClass::order3;
  if (cls != "op2" && cls != "tri3")
    throw std::invalid_argument("--auto must be id, op2 or tri3");
  std::string family =
      type.rfind("I2", 0) == 0 ? std::string("I2") : type.substr(0, 1);
  int n;
  if (family == "I2")
    n = std::stoi(type.substr(3, type.size() - 4));  // I2(m)
  else
    n = std::stoi(type.substr(1));
  return table_pi(family, n, pc);
}

struct Output {
  std::string path;
  std::ostringstream machine;
  void flush() {
    if (path.empty()) return;
    std::ofstream out(path);
    out << machine.str();
  }
};

int cmd_diagrams_enumerate(const std::string& type, const std::string& cls,
                           Output& out) {
  CoxeterGraph g = parse_coxeter_graph(type);
  GraphAutomorphism pi = pi_for(g, type, cls);
  auto families = enumerate_admissible(g, pi);
  for (const auto& J : families) {
    OppositionDiagram d{g, J, pi};
    std::cout << d.render() << "\n";
    out.machine << type << " " << cls << " circled=";
    for (std::size_t i = 0; i < J.size(); ++i)
      out.machine << (i ? "," : "") << J[i];
    out.machine << "\n";
  }
  std::cout << families.size() << " admissible diagram(s)\n";
  return 0;
}

int cmd_diagrams_check(const std::string& graph_file,
                       const std::string& circled, const std::string& cycles) {
  CoxeterGraph g = parse_coxeter_graph(slurp(graph_file));
  OppositionDiagram d{g, parse_int_list(circled), parse_cycles(g, cycles)};
  bool ok = is_admissible(d);
  std::cout << d.render() << "\n"
            << (ok ? "admissible" : "not admissible") << "\n";
  return ok ? 0 : 1;
}

int cmd_verify_tables(int max_rank, Output& out) {
  TableReport report = verify_tables(max_rank);
  for (const auto& e : report.entries) {
    std::cout << e.type << " pi=" << e.pi << " enumerated=" << e.enumerated
              << " expected=" << e.expected << " "
              << (e.pass ? "PASS" : "FAIL") << "\n";
    out.machine << e.type << " " << e.pi << " " << e.enumerated << " "
                << e.expected << " " << (e.pass ? "pass" : "fail") << "\n";
  }
  std::cout << (report.all_pass ? "all tables reproduced"
                                : "table verification FAILED")
            << "\n";
  return report.all_pass ? 0 : 1;
}

int cmd_displacement(const std::string& type, const std::string& circled) {
  CoxeterGraph g = parse_coxeter_graph(type);
  std::cout << displacement(g, parse_int_list(circled)) << "\n";
  return 0;
}

int cmd_geometry_build(const std::string& kind, int n, int q) {
  GeometryKind k = kind == "projective" ? GeometryKind::projective
                                        : GeometryKind::symplectic_polar;
  FlagGeometry geom = FlagGeometry::build(k, n, q);
  std::cout << "rank " << geom.rank() << ", q=" << geom.q() << "\n";
  for (int t = 1; t <= geom.rank(); ++t)
    std::cout << "type " << t << ": " << geom.vertices(t).size()
              << " vertices\n";
  std::cout << geom.num_chambers() << " chambers\n";
  return 0;
}

int cmd_geometry_analyze(const std::string& spec, const std::string& auto_file,
                         int threads, Output& out) {
  FlagGeometry geom = parse_geometry_spec(spec);
  BuildingView view(geom, threads);
  GeometryAutomorphism theta = parse_automorphism_file(geom, slurp(auto_file));
  AnalysisReport r = analyze(view, theta);
  std::cout << r.render(spec) << "\n";
  for (const auto& v : r.violations) std::cout << "violation: " << v << "\n";
  out.machine << r.machine_record();
  return r.invariants_ok ? 0 : 1;
}

int cmd_search_exceptional(const std::string& spec, const std::string& kind,
                           int threads, Output& out) {
  FlagGeometry geom = parse_geometry_spec(spec);
  BuildingView view(geom, threads);
  bool dualities = kind == "duality";
  auto found = find_exceptional_domestic(view, dualities, threads);
  auto classes = conjugacy_classes(view, found);
  std::cout << found.size() << " exceptional domestic " << kind
            << (found.size() == 1 ? "" : "s") << ", " << classes.size()
            << " conjugacy class(es)\n";
  for (const auto& cls : classes) {
    int order = automorphism_order(view, found[cls[0]]);
    std::cout << "class of size " << cls.size() << ", order " << order << "\n";
    out.machine << "class size=" << cls.size() << " order=" << order << "\n";
  }
  return 0;
}

int cmd_sample(const std::string& spec, int count, uint64_t seed,
               const std::string& kind, int threads, Output& out) {
  FlagGeometry geom = parse_geometry_spec(spec);
  BuildingView view(geom, threads);
  bool duality = kind == "duality";
  std::vector<AnalysisReport> reports(count);
  parallel_for(count, threads, [&](int i) {
    GeometryAutomorphism theta =
        random_automorphism(geom, seed + static_cast<uint64_t>(i), duality);
    reports[i] = analyze(view, theta);
  });
  int capped = 0, domestic = 0, ok = 0;
  std::map<std::string, int> tally;
  for (const auto& r : reports) {
    capped += r.capped;
    domestic += r.domestic;
    ok += r.invariants_ok;
    std::ostringstream k;
    for (std::size_t i = 0; i < r.type.size(); ++i)
      k << (i ? "," : "") << r.type[i];
    ++tally["{" + k.str() + "}"];
    out.machine << r.machine_record() << "---\n";
  }
  std::cout << count << " sampled " << kind << "s: " << capped << " capped, "
            << domestic << " domestic, " << ok << " invariant-clean\n";
  for (const auto& [t, c] : tally)
    std::cout << "type " << t << ": " << c << "\n";
  return ok == count ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"opposition diagrams of spherical buildings"};
  app.require_subcommand(1);
  std::string out_path;
  int threads = 0;
  app.add_option("--out", out_path, "machine-readable output file");
  app.add_option("--threads", threads, "worker threads (0 = all)");

  auto* diagrams = app.add_subcommand("diagrams", "diagram enumeration");
  diagrams->require_subcommand(1);
  std::string type = "A3", autocls = "id", graph_file, circled, cycles;
  int max_rank = 7;
  auto* denum = diagrams->add_subcommand("enumerate");
  denum->add_option("--type", type)->required();
  denum->add_option("--auto", autocls);
  auto* dcheck = diagrams->add_subcommand("check");
  dcheck->add_option("--graph", graph_file)->required();
  dcheck->add_option("--circled", circled);
  dcheck->add_option("--auto", cycles);
  auto* dverify = diagrams->add_subcommand("verify-tables");
  dverify->add_option("--max-rank", max_rank);

  std::string disp_type, disp_circled;
  auto* disp = app.add_subcommand("displacement");
  disp->add_option("--type", disp_type)->required();
  disp->add_option("--circled", disp_circled);

  auto* geometry = app.add_subcommand("geometry", "finite geometry analysis");
  geometry->require_subcommand(1);
  std::string gkind = "projective", gspec, auto_file, akind = "collineation";
  int gn = 3, gq = 2, count = 100;
  uint64_t seed = 1;
  auto* gbuild = geometry->add_subcommand("build");
  gbuild->add_option("--kind", gkind);
  gbuild->add_option("--n", gn)->required();
  gbuild->add_option("--q", gq)->required();
  auto* ganalyze = geometry->add_subcommand("analyze");
  ganalyze->add_option("--geom", gspec)->required();
  ganalyze->add_option("--auto-file", auto_file)->required();
  auto* gsearch = geometry->add_subcommand("search-exceptional");
  gsearch->add_option("--geom", gspec)->required();
  gsearch->add_option("--kind", akind);
  auto* gsample = geometry->add_subcommand("sample");
  gsample->add_option("--geom", gspec)->required();
  gsample->add_option("--count", count);
  gsample->add_option("--seed", seed);
  gsample->add_option("--kind", akind);

  CLI11_PARSE(app, argc, argv);

  Output out;
  out.path = out_path;
  int code = 2;
  try {
    if (denum->parsed()) code = cmd_diagrams_enumerate(type, autocls, out);
    else if (dcheck->parsed()) code = cmd_diagrams_check(graph_file, circled, cycles);
    else if (dverify->parsed()) code = cmd_verify_tables(max_rank, out);
    else if (disp->parsed()) code = cmd_displacement(disp_type, disp_circled);
    else if (gbuild->parsed()) code = cmd_geometry_build(gkind, gn, gq);
    else if (ganalyze->parsed())
      code = cmd_geometry_analyze(gspec, auto_file, threads, out);
    else if (gsearch->parsed())
      code = cmd_search_exceptional(gspec, akind, threads, out);
    else if (gsample->parsed())
      code = cmd_sample(gspec, count, seed, akind, threads, out);
  } catch (const oppdiag::CapacityError& e) {
    std::cerr << "capacity: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  out.flush();
  return code;
}
