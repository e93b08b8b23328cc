#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <set>

#include "doctest.h"
#include "oppdiag/diagrams.hpp"

using namespace oppdiag;

namespace {
using Sets = std::set<std::vector<int>>;

Sets enumerate(const std::string& type, PiClass cls) {
  CoxeterGraph g = parse_coxeter_graph(type);
  GraphAutomorphism pi =
      cls == PiClass::identity
          ? GraphAutomorphism::identity_on(g.nodes())
          : table_pi(type.substr(0, type.rfind("I2", 0) == 0 ? 2 : 1),
                     type.rfind("I2", 0) == 0
                         ? std::stoi(type.substr(3, type.size() - 4))
                         : std::stoi(type.substr(1)),
                     cls);
  auto v = enumerate_admissible(g, pi);
  return Sets(v.begin(), v.end());
}
}  // namespace

TEST_CASE("stable partition") {
  CoxeterGraph g = parse_coxeter_graph("A4");
  GraphAutomorphism flip = table_pi("A", 4, PiClass::order2);
  auto blocks = stable_partition(g.nodes(), flip);
  CHECK(blocks.size() == 2);  // {1,4}, {2,3}
  auto id_blocks =
      stable_partition(g.nodes(), GraphAutomorphism::identity_on(g.nodes()));
  CHECK(id_blocks.size() == 4);
}

TEST_CASE("admissibility base cases") {
  CoxeterGraph a1 = parse_coxeter_graph("A1");
  GraphAutomorphism id = GraphAutomorphism::identity_on(a1.nodes());
  CHECK(is_admissible({a1, {}, id}));
  CHECK(is_admissible({a1, {1}, id}));
}

TEST_CASE("axiom 1: nontrivial pi needs nonempty J") {
  CoxeterGraph g = parse_coxeter_graph("A3");
  GraphAutomorphism flip = table_pi("A", 3, PiClass::order2);
  CHECK_FALSE(is_admissible({g, {}, flip}));
  CHECK(is_admissible({g, {}, GraphAutomorphism::identity_on(g.nodes())}));
}

TEST_CASE("axiom 2: J closed under w0 and pi") {
  CoxeterGraph g = parse_coxeter_graph("A3");
  GraphAutomorphism id = GraphAutomorphism::identity_on(g.nodes());
  // {1} is not closed under w0 (op swaps 1 and 3).
  CHECK_FALSE(is_admissible({g, {1}, id}));
  CHECK(is_admissible({g, {1, 3}, id}));
}

TEST_CASE("known exact enumerations") {
  CHECK(enumerate("A2", PiClass::identity) == Sets{{}, {1, 2}});
  CHECK(enumerate("A3", PiClass::identity) == Sets{{}, {1, 3}, {1, 2, 3}});
  CHECK(enumerate("A5", PiClass::identity) ==
        Sets{{}, {1, 5}, {1, 2, 4, 5}, {1, 2, 3, 4, 5}});
  CHECK(enumerate("E7", PiClass::identity) ==
        Sets{{},
             {1},
             {1, 6},
             {1, 6, 7},
             {1, 3, 4, 6},
             {1, 2, 3, 4, 5, 6, 7}});
  CHECK(enumerate("E8", PiClass::identity) ==
        Sets{{}, {8}, {1, 8}, {1, 6, 7, 8}, {1, 2, 3, 4, 5, 6, 7, 8}});
  CHECK(enumerate("E6", PiClass::order2) ==
        Sets{{1, 6}, {1, 2, 3, 4, 5, 6}});
  CHECK(enumerate("H3", PiClass::identity) == Sets{{}, {2}, {1, 2, 3}});
  CHECK(enumerate("H4", PiClass::identity) == Sets{{}, {1}, {1, 2, 3, 4}});
  CHECK(enumerate("D4", PiClass::order3) ==
        Sets{{1, 3, 4}, {1, 2, 3, 4}});
  CHECK(enumerate("I2(5)", PiClass::identity) == Sets{{}, {1, 2}});
  CHECK(enumerate("I2(5)", PiClass::order2) == Sets{{1, 2}});
}

TEST_CASE("memoized equals unmemoized") {
  for (const std::string& type : {"A4", "B4", "D4", "F4", "H3", "I2(8)"}) {
    CoxeterGraph g = parse_coxeter_graph(type);
    for (const auto& pi : graph_automorphisms(g)) {
      // all J candidates: subsets of nodes
      const auto& nodes = g.nodes();
      for (uint32_t m = 0; m < (1u << nodes.size()); ++m) {
        std::vector<int> J;
        for (std::size_t i = 0; i < nodes.size(); ++i)
          if (m & (1u << i)) J.push_back(nodes[i]);
        OppositionDiagram d{g, J, pi};
        CHECK(is_admissible(d) == is_admissible_unmemoized(d));
      }
    }
  }
}

TEST_CASE("displacement") {
  CoxeterGraph e7 = parse_coxeter_graph("E7");
  GraphAutomorphism id = GraphAutomorphism::identity_on(e7.nodes());
  std::set<int> spectrum;
  for (const auto& J : enumerate_admissible(e7, id))
    spectrum.insert(displacement(e7, J));
  CHECK(spectrum == std::set<int>{0, 33, 50, 51, 60, 63});

  CoxeterGraph a3 = parse_coxeter_graph("A3");
  CHECK(displacement(a3, {2}) == 4);  // 6 - l(w_{1,3}) = 6 - 2
  CHECK(displacement(a3, {}) == 0);
  CHECK(displacement(a3, {1, 2, 3}) == 6);
}

TEST_CASE("residue automorphism") {
  // E7, K = {1}: residue is of type D6 on {2,...,7}; pi_K must be a graph
  // automorphism of the residue.
  CoxeterGraph e7 = parse_coxeter_graph("E7");
  GraphAutomorphism id = GraphAutomorphism::identity_on(e7.nodes());
  GraphAutomorphism piK = residue_automorphism(e7, {1}, id);
  CHECK(piK.domain() == std::vector<int>{2, 3, 4, 5, 6, 7});
  CHECK(piK.compose(piK).is_identity());

  // A3, K = {1,3}: residue is the middle node; only the identity exists.
  CoxeterGraph a3 = parse_coxeter_graph("A3");
  GraphAutomorphism a3id = GraphAutomorphism::identity_on(a3.nodes());
  CHECK(residue_automorphism(a3, {1, 3}, a3id).is_identity());
}

TEST_CASE("expansion under graph automorphisms") {
  // F4 with identity pi: the raw enumeration contains both {1} and {4};
  // the printed family lists only {1}, the bond-reversing symmetry adds {4}.
  CoxeterGraph f4 = parse_coxeter_graph("F4");
  GraphAutomorphism id = GraphAutomorphism::identity_on(f4.nodes());
  auto enumerated = enumerate_admissible(f4, id);
  Sets raw(enumerated.begin(), enumerated.end());
  CHECK(raw.count({1}) == 1);
  CHECK(raw.count({4}) == 1);
  auto expanded = expand_families(f4, id, table_families("F", 4, PiClass::identity));
  CHECK(Sets(expanded.begin(), expanded.end()) == raw);
}

TEST_CASE("verify_tables end to end") {
  TableReport r = verify_tables(5);
  CHECK(r.all_pass);
  int e7 = 0, e8 = 0, e6op = 0, d4tri = 0, h3 = 0, h4 = 0;
  for (const auto& e : r.entries) {
    CHECK(e.pass);
    if (e.type == "E7") e7 = e.enumerated;
    if (e.type == "E8") e8 = e.enumerated;
    if (e.type == "E6" && e.pi != "id") e6op = e.enumerated;
    if (e.type == "D4" && e.pi.find("(1,3,4)") != std::string::npos)
      d4tri = e.enumerated;
    if (e.type == "H3") h3 = e.enumerated;
    if (e.type == "H4") h4 = e.enumerated;
  }
  CHECK(e7 == 6);
  CHECK(e8 == 5);
  CHECK(e6op == 2);
  CHECK(d4tri == 2);
  CHECK(h3 == 3);
  CHECK(h4 == 3);
}

TEST_CASE("diagram rendering") {
  CoxeterGraph g = parse_coxeter_graph("A3");
  OppositionDiagram d{g, {1, 3},
                      GraphAutomorphism::identity_on(g.nodes())};
  std::string s = d.render();
  CHECK(s.find("[1]") != std::string::npos);
  CHECK(s.find("[3]") != std::string::npos);
  CHECK(s.find("[2]") == std::string::npos);
}
