#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <set>

#include "doctest.h"
#include "oppdiag/coxeter.hpp"
#include "oracle.hpp"

using namespace oppdiag;

TEST_CASE("named graph parsing") {
  CHECK(parse_coxeter_graph("A5").rank() == 5);
  CHECK(parse_coxeter_graph("E7").rank() == 7);
  CHECK(parse_coxeter_graph("I2(7)").rank() == 2);
  CHECK(parse_coxeter_graph("A2xA1").rank() == 3);

  CoxeterGraph b3 = parse_coxeter_graph("B3");
  CHECK(b3.bond(1, 2) == 3);
  CHECK(b3.bond(2, 3) == 4);
  CHECK(b3.bond(1, 3) == 2);

  CoxeterGraph e7 = parse_coxeter_graph("E7");
  CHECK(e7.bond(2, 4) == 3);
  CHECK(e7.bond(1, 2) == 2);
  CHECK(e7.bond(3, 4) == 3);

  CoxeterGraph h3 = parse_coxeter_graph("H3");
  CHECK(h3.bond(2, 3) == 5);
  CHECK(h3.bond(1, 2) == 3);
}

TEST_CASE("line format parsing") {
  CoxeterGraph g = parse_coxeter_graph(
      "# comment\nnode 1\nnode 2\nnode 3\nbond 1 2 3\nbond 2 3 4\n");
  CHECK(g.rank() == 3);
  CHECK(g.bond(2, 3) == 4);
  CHECK_THROWS_AS(parse_coxeter_graph("node 1\nfrob 2\n"),
                  std::invalid_argument);
}

TEST_CASE("non-spherical graphs are rejected") {
  // Affine A2 tilde: triangle of bonds 3, infinite group.
  CHECK_THROWS_AS(parse_coxeter_graph(
                      "node 1\nnode 2\nnode 3\nbond 1 2 3\nbond 2 3 "
                      "3\nbond 1 3 3\n"),
                  std::invalid_argument);
}

TEST_CASE("positive root counts") {
  auto count = [](const std::string& t) {
    CoxeterGraph g = parse_coxeter_graph(t);
    return positive_root_count(g, g.nodes());
  };
  CHECK(count("A3") == 6);
  CHECK(count("B3") == 9);
  CHECK(count("D4") == 12);
  CHECK(count("E6") == 36);
  CHECK(count("E7") == 63);
  CHECK(count("E8") == 120);
  CHECK(count("F4") == 24);
  CHECK(count("H3") == 15);
  CHECK(count("H4") == 60);
  CHECK(count("I2(5)") == 5);
  CHECK(count("A2xA1") == 4);
}

TEST_CASE("longest element") {
  for (const std::string& t : {"A3", "B3", "H3", "I2(6)", "D4"}) {
    CoxeterGraph g = parse_coxeter_graph(t);
    auto rs = root_system(g);
    WeylElement w0 = longest_element(rs, g.nodes());
    CHECK(w0.length() == positive_root_count(g, g.nodes()));
    CHECK((w0 * w0).is_identity());
  }
}

TEST_CASE("Cayley matrix oracle agreement") {
  // Independent group order / longest length via reflection matrices.
  struct Row {
    std::string type;
    std::vector<std::vector<int>> m;
    long long order;
    int l;
  };
  std::vector<Row> rows = {
      {"A3", oracle::chain_matrix(3, 3), 24, 6},
      {"B3", oracle::chain_matrix(3, 4), 48, 9},
      {"H3", oracle::chain_matrix(3, 5), 120, 15},
      {"I2(5)", oracle::chain_matrix(2, 5), 10, 5},
  };
  for (const auto& row : rows) {
    auto facts = oracle::cayley_bfs(row.m);
    CHECK(facts.order == row.order);
    CHECK(facts.longest_length == row.l);
    CoxeterGraph g = parse_coxeter_graph(row.type);
    auto rs = root_system(g);
    CHECK(longest_element(rs, g.nodes()).length() == facts.longest_length);
    CHECK(static_cast<long long>(enumerate_parabolic(rs, g.nodes()).size()) ==
          facts.order);
  }
}

TEST_CASE("opposition involution") {
  auto op = [](const std::string& t) {
    CoxeterGraph g = parse_coxeter_graph(t);
    return opposition_involution(g, g.nodes());
  };
  CHECK(op("A3").cycle_notation() == "(1,3)");
  CHECK(op("B3").is_identity());
  CHECK(op("D4").is_identity());
  CHECK(op("D5").cycle_notation() == "(4,5)");
  CHECK(op("E6").cycle_notation() == "(1,6)(3,5)");
  CHECK(op("E7").is_identity());
  CHECK(op("F4").is_identity());
  CHECK(op("H3").is_identity());
  CHECK(op("I2(5)").cycle_notation() == "(1,2)");
  CHECK(op("I2(6)").is_identity());
}

TEST_CASE("Weyl element arithmetic") {
  CoxeterGraph g = parse_coxeter_graph("B3");
  auto rs = root_system(g);
  WeylElement e = WeylElement::identity(rs);
  WeylElement s1 = e.times_generator(1);
  WeylElement s2 = e.times_generator(2);
  CHECK(s1.length() == 1);
  CHECK((s1 * s1).is_identity());
  // braid: s1 s2 s1 = s2 s1 s2 (m = 3)
  CHECK(s1 * s2 * s1 == s2 * s1 * s2);
  WeylElement w = s1 * s2;
  CHECK(w.inverse() * w == e);
  CHECK(w.length() == 2);
  CHECK(e.generator_times(2) * e.generator_times(1) == s2 * s1);
}

TEST_CASE("parabolic enumeration and double cosets") {
  CoxeterGraph g = parse_coxeter_graph("A3");
  auto rs = root_system(g);
  CHECK(enumerate_parabolic(rs, {1, 2}).size() == 6);
  CHECK(enumerate_parabolic(rs, {}).size() == 1);
  CHECK_THROWS_AS(enumerate_parabolic(rs, g.nodes(), 10), CapacityError);

  WeylElement w0 = longest_element(rs, g.nodes());
  WeylElement e = WeylElement::identity(rs);
  // Empty parabolics: only w0 itself.
  CHECK(double_coset_contains_w0(rs, {}, {}, w0));
  CHECK_FALSE(double_coset_contains_w0(rs, {}, {}, e));
  // Full parabolics: every w.
  CHECK(double_coset_contains_w0(rs, g.nodes(), g.nodes(), e));
  // W_{1,2} w0 W_{1,2} contains w0 but not e.
  CHECK(double_coset_contains_w0(rs, {1, 2}, {1, 2}, w0));
  CHECK_FALSE(double_coset_contains_w0(rs, {1, 2}, {1, 2}, e));
  // Exhaustive sanity against explicit coset expansion.
  auto wl = enumerate_parabolic(rs, {1});
  auto wr = enumerate_parabolic(rs, {2, 3});
  for (const auto& w : enumerate_parabolic(rs, g.nodes())) {
    bool expect = false;
    for (const auto& u : wl)
      for (const auto& v : wr)
        if (u * w * v == w0) expect = true;
    CHECK(double_coset_contains_w0(rs, {1}, {2, 3}, w) == expect);
  }
}

TEST_CASE("graph automorphism algebra") {
  GraphAutomorphism a(std::map<int, int>{{1, 3}, {2, 2}, {3, 1}});
  CHECK(a.order() == 2);
  CHECK(a.compose(a).is_identity());
  CHECK(a.inverse() == a);
  CHECK(a(1) == 3);
  GraphAutomorphism b(std::map<int, int>{{1, 2}, {2, 3}, {3, 1}});
  CHECK(b.order() == 3);
  CHECK(b.compose(b.inverse()).is_identity());
  // compose = this after other
  CHECK(a.compose(b)(1) == a(b(1)));
}
