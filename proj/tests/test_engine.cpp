#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <deque>
#include <set>

#include "doctest.h"
#include "oppdiag/engine.hpp"

using namespace oppdiag;

namespace {

Flag vertex_flag(int type, int id) {
  Flag f;
  f.parts.emplace_back(type, id);
  return f;
}

GeometryAutomorphism fano_polarity_like_duality() {
  // any fixed duality of PG(2,2)
  return GeometryAutomorphism{true, identity_matrix(3), {}};
}

/// Independent chamber-graph BFS distance (ignores types).
std::vector<int> graph_distances(const FlagGeometry& g, int from) {
  std::vector<int> dist(g.num_chambers(), -1);
  std::deque<int> queue{from};
  dist[from] = 0;
  while (!queue.empty()) {
    int c = queue.front();
    queue.pop_front();
    for (int t = 1; t <= g.rank(); ++t)
      for (int e : g.adjacent(c, t))
        if (dist[e] < 0) {
          dist[e] = dist[c] + 1;
          queue.push_back(e);
        }
  }
  return dist;
}

}  // namespace

TEST_CASE("Weyl group table") {
  WeylGroupTable a3 = build_weyl_table(parse_coxeter_graph("A3"));
  CHECK(a3.elements.size() == 24);
  CHECK(a3.lengths[a3.w0_id] == 6);
  WeylGroupTable b3 = build_weyl_table(parse_coxeter_graph("B3"));
  CHECK(b3.elements.size() == 48);
  CHECK(b3.lengths[b3.w0_id] == 9);

  // mult agrees with element multiplication, exhaustively on A3
  for (int a = 0; a < 24; ++a)
    for (int b = 0; b < 24; ++b)
      CHECK(a3.mult(a, b) ==
            a3.id_of(a3.elements[a] * a3.elements[b]));
  // inverse table
  for (int a = 0; a < 24; ++a)
    CHECK(a3.mult(a, a3.inv[a]) == a3.identity_id);
  // parabolic longest elements
  CHECK(a3.lengths[a3.longest_in(0b101)] == 2);  // W_{1,3}
  CHECK(a3.lengths[a3.longest_in(0b111)] == 6);
  CHECK(a3.longest_in(0) == a3.identity_id);
}

TEST_CASE("Weyl distances") {
  FlagGeometry fano = FlagGeometry::build(GeometryKind::projective, 3, 2);
  BuildingView b(fano);
  const int n = fano.num_chambers();
  for (int c = 0; c < n; ++c) {
    CHECK(b.delta(c, c) == b.weyl().identity_id);
    auto dist = graph_distances(fano, c);
    for (int d = 0; d < n; ++d) {
      // gallery metric and delta-inversion
      CHECK(b.length(b.delta(c, d)) == dist[d]);
      CHECK(b.delta(d, c) == b.weyl().inv[b.delta(c, d)]);
    }
  }
  // s-adjacency gives the simple reflection
  for (int t = 1; t <= 2; ++t)
    for (int e : fano.adjacent(0, t))
      CHECK(b.delta(0, e) == b.weyl().times_gen(b.weyl().identity_id, t));
}

TEST_CASE("type A closed form agrees with BFS") {
  FlagGeometry g = FlagGeometry::build(GeometryKind::projective, 4, 2);
  BuildingView b(g);
  const int base = 0;
  for (int d = 0; d < g.num_chambers(); ++d) {
    CHECK(b.weyl_distance_typeA(base, d) == b.delta(base, d));
    CHECK(b.weyl_distance_typeA(d, base) == b.delta(d, base));
  }
}

TEST_CASE("generic opposition agrees with direct on small buildings") {
  for (const auto& geom :
       {FlagGeometry::build(GeometryKind::projective, 3, 2),
        FlagGeometry::build(GeometryKind::symplectic_polar, 2, 2)}) {
    BuildingView b(geom);
    // all pairs of vertex flags of op-compatible types
    for (int t = 1; t <= geom.rank(); ++t) {
      int u = b.op_type(t);
      for (int i = 0; i < static_cast<int>(geom.vertices(t).size()); ++i)
        for (int j = 0; j < static_cast<int>(geom.vertices(u).size()); ++j) {
          Flag a = vertex_flag(t, i), c = vertex_flag(u, j);
          CHECK(is_opposite_direct(geom, a, c) == b.is_opposite_generic(a, c));
        }
    }
    // all chamber pairs
    for (int c = 0; c < geom.num_chambers(); ++c)
      for (int d = 0; d < geom.num_chambers(); ++d)
        CHECK((b.delta(c, d) == b.w0()) ==
              b.coset_contains_w0(0, 0, b.delta(c, d)));
  }
}

TEST_CASE("projection") {
  FlagGeometry g = FlagGeometry::build(GeometryKind::projective, 3, 2);
  BuildingView b(g);
  for (int c = 0; c < g.num_chambers(); ++c) {
    Flag alpha = vertex_flag(1, g.chamber(c)[0]);
    CHECK(b.projection(alpha, c) == c);  // c is in Res(alpha)
  }
  // projection lands in the residue and minimizes distance
  Flag alpha = vertex_flag(2, 0);
  for (int c = 0; c < g.num_chambers(); ++c) {
    int p = b.projection(alpha, c);
    CHECK(g.chamber(p)[1] == 0);
    for (int r : b.residue_chambers(alpha))
      CHECK(b.length(b.delta(r, c)) >= b.length(b.delta(p, c)));
  }
}

TEST_CASE("identity analysis") {
  FlagGeometry g = FlagGeometry::build(GeometryKind::projective, 3, 2);
  BuildingView b(g);
  AnalysisReport r = analyze(b, {false, identity_matrix(3), {}});
  CHECK(r.trivial);
  CHECK(r.type.empty());
  CHECK(r.capped);
  CHECK(r.domestic);
  CHECK(r.measured_displacement == 0);
  CHECK(r.invariants_ok);
}

TEST_CASE("symplectic polarity of PG(3,2)") {
  FlagGeometry g = FlagGeometry::build(GeometryKind::projective, 4, 2);
  BuildingView b(g);
  GeometryAutomorphism theta = symplectic_polarity(4, 2);
  VertexMap vm = vertex_map(g, theta);
  auto cmap = chamber_map(g, vm);
  AnalysisReport r = analyze(b, theta);
  CHECK(r.type == std::vector<int>{2});
  CHECK(r.capped);
  CHECK(r.domestic);
  CHECK(r.measured_displacement == 4);
  CHECK(r.formula_displacement == 4);
  CHECK(r.invariants_ok);
  CHECK(is_J_domestic(b, vm, cmap, {1}));
  CHECK(is_J_domestic(b, vm, cmap, {3}));
  CHECK_FALSE(is_J_domestic(b, vm, cmap, {2}));
}

TEST_CASE("Fano exceptional duality") {
  FlagGeometry g = FlagGeometry::build(GeometryKind::projective, 3, 2);
  BuildingView b(g);
  auto found = find_exceptional_domestic(b, true);
  REQUIRE(!found.empty());
  auto classes = conjugacy_classes(b, found);
  CHECK(classes.size() == 1);
  for (const auto& theta : found) {
    CHECK(automorphism_order(b, theta) == 8);
    AnalysisReport r = analyze(b, theta);
    CHECK(r.type == std::vector<int>{1, 2});
    CHECK_FALSE(r.capped);
    CHECK(r.domestic);
    VertexMap vm = vertex_map(g, theta);
    CHECK(non_domestic_vertices(b, vm, 1).size() == 2);
    CHECK(non_domestic_vertices(b, vm, 2).size() == 2);
  }
}

TEST_CASE("J-domesticity input validation") {
  FlagGeometry g = FlagGeometry::build(GeometryKind::projective, 3, 2);
  BuildingView b(g);
  GeometryAutomorphism coll{false, identity_matrix(3), {}};
  VertexMap vm = vertex_map(g, coll);
  auto cmap = chamber_map(g, vm);
  // for a collineation of A2, w0 o pi swaps 1 and 2: {1} is not stable
  CHECK_THROWS_AS(is_J_domestic(b, vm, cmap, {1}), std::invalid_argument);
  CHECK_NOTHROW(is_J_domestic(b, vm, cmap, {1, 2}));
}

TEST_CASE("Lemma 1.4: J-domestic implies domestic, over all Fano correlations") {
  FlagGeometry g = FlagGeometry::build(GeometryKind::projective, 3, 2);
  BuildingView b(g);
  for (bool dual : {false, true}) {
    for (const auto& theta : enumerate_automorphisms(g, dual)) {
      VertexMap vm = vertex_map(g, theta);
      auto cmap = chamber_map(g, vm);
      GraphAutomorphism w0pi =
          opposition_involution(b.graph(), b.graph().nodes())
              .compose(vm.diagram_automorphism());
      for (const auto& block : stable_partition(b.graph().nodes(), w0pi)) {
        if (static_cast<int>(block.size()) == b.rank()) continue;
        if (is_J_domestic(b, vm, cmap, block)) CHECK(is_domestic(b, cmap));
      }
    }
  }
}

TEST_CASE("analysis reports render deterministically") {
  FlagGeometry g = FlagGeometry::build(GeometryKind::projective, 4, 2);
  BuildingView b(g);
  AnalysisReport r = analyze(b, symplectic_polarity(4, 2));
  CHECK(r.render("A3@2") ==
        "A3@2 pi=(1,3) circled=[2] capped=yes domestic=yes disp=4");
  CHECK(r.machine_record() == analyze(b, symplectic_polarity(4, 2)).machine_record());
}

TEST_CASE("parallel_for") {
  std::vector<int> hits(1000, 0);
  parallel_for(1000, 4, [&](int i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(
      parallel_for(10, 4, [](int) { throw std::runtime_error("boom"); }),
      std::runtime_error);
}
