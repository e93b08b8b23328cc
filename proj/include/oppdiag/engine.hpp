#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "oppdiag/diagrams.hpp"
#include "oppdiag/geometry.hpp"

namespace oppdiag {

/// Run f(0..n-1) on a pool of worker threads (0 = hardware concurrency).
void parallel_for(int n, int threads, const std::function<void(int)>& f);

/// The full Weyl group of a small spherical Coxeter graph, interned by id.
struct WeylGroupTable {
  CoxeterGraph graph;
  std::vector<int> gens;                    // node labels, sorted
  std::vector<WeylElement> elements;        // id -> element
  std::vector<std::vector<uint16_t>> right; // right[id][gen index] = id of w*s
  std::vector<uint16_t> lengths;
  std::vector<uint16_t> inv;
  uint16_t identity_id = 0;
  uint16_t w0_id = 0;

  int gen_index(int node) const;
  int times_gen(int id, int node) const { return right[id][gen_index(node)]; }
  int mult(int a, int b) const;  // id of elements[a]*elements[b]
  int id_of(const WeylElement& w) const;

  /// Longest element of the standard parabolic W_L, L as a bitmask over
  /// gens (bit i = gens[i]).
  int longest_in(uint32_t mask) const;

 private:
  std::map<std::vector<int32_t>, int> index_;
  mutable std::unique_ptr<std::mutex> mutex_ = std::make_unique<std::mutex>();
  mutable std::unordered_map<uint32_t, int> longest_cache_;
  friend WeylGroupTable build_weyl_table(const CoxeterGraph&);
};

WeylGroupTable build_weyl_table(const CoxeterGraph& g);

/// Chamber-system view of a FlagGeometry with a full Weyl-distance table.
class BuildingView {
 public:
  explicit BuildingView(const FlagGeometry& geom, int threads = 0);

  const FlagGeometry& geom() const { return *geom_; }
  const CoxeterGraph& graph() const { return graph_; }
  const WeylGroupTable& weyl() const { return weyl_; }
  int rank() const { return rank_; }
  int w0() const { return weyl_.w0_id; }
  int length(int id) const { return weyl_.lengths[id]; }

  /// delta(C, D) as an id into weyl().elements.
  int delta(int c, int d) const {
    return delta_[static_cast<std::size_t>(c) * num_chambers_ + d];
  }
  const WeylElement& weyl_distance(int c, int d) const {
    return weyl_.elements[delta(c, d)];
  }

  /// Type-A closed form for delta via intersection dimensions (cross-check).
  int weyl_distance_typeA(int c, int d) const;

  uint32_t mask_of(const std::vector<int>& types) const;
  uint32_t full_mask() const { return (1u << rank_) - 1; }
  std::vector<int> types_of(uint32_t mask) const;
  int op_type(int t) const { return op_(t); }
  uint32_t op_mask(uint32_t mask) const;

  /// Is w0 in W_L * w * W_M (L, M masks of node labels)? Cached per (L, M).
  bool coset_contains_w0(uint32_t L, uint32_t M, int w_id) const;

  /// Generic (double coset) opposition test on flags.
  bool is_opposite_generic(const Flag& a, const Flag& b) const;

  /// Chambers containing the flag.
  std::vector<int> residue_chambers(const Flag& alpha) const;

  /// proj_alpha(B): unique chamber of Res(alpha) at minimal gallery distance
  /// from B. Throws logic_error when the minimizer is not unique.
  int projection(const Flag& alpha, int b) const;

 private:
  const FlagGeometry* geom_;
  CoxeterGraph graph_;
  WeylGroupTable weyl_;
  GraphAutomorphism op_;
  int rank_;
  std::size_t num_chambers_;
  std::vector<uint16_t> delta_;
  mutable std::mutex coset_mutex_;
  mutable std::map<std::pair<uint32_t, uint32_t>, std::vector<char>>
      coset_cache_;
};

struct AnalysisOptions {
  bool check_invariants = true;  // Prop 1.7/1.8, Lemma 1.2/2.4, Theorem 1.1
  int sample_cap = 64;           // residues/subflags sampled per witness
  uint64_t max_steps = 1000000000ull;
};

struct AnalysisReport {
  std::string automorphism;
  GraphAutomorphism pi;               // induced diagram automorphism
  std::vector<std::vector<int>> blocks;  // stable partition of w0 o pi
  std::vector<long long> block_hits;  // type-K simplices in Opp, per block
  std::vector<int> type;              // Type(theta), sorted
  bool trivial = false;
  bool capped = false;
  bool domestic = false;
  int measured_displacement = 0;
  int formula_displacement = 0;
  bool diagram_admissible = false;
  bool invariants_ok = true;
  std::vector<std::string> violations;

  std::string render(const std::string& graph_name) const;
  std::string machine_record() const;  // flat key=value lines
};

/// The image chamber permutation of theta.
std::vector<int> chamber_action(const BuildingView& b,
                                const GeometryAutomorphism& theta);

std::vector<int> opposition_type(const BuildingView& b, const VertexMap& vm,
                                 const std::vector<int>& cmap);
OppositionDiagram opposition_diagram(const BuildingView& b,
                                     const GeometryAutomorphism& theta);

bool is_J_domestic(const BuildingView& b, const VertexMap& vm,
                   const std::vector<int>& cmap, const std::vector<int>& J);
bool is_domestic(const BuildingView& b, const std::vector<int>& cmap);
bool is_capped(const BuildingView& b, const VertexMap& vm,
               const std::vector<int>& cmap);

int measured_displacement(const BuildingView& b, const std::vector<int>& cmap);

/// Full analysis of one automorphism (predicates + invariant suite).
AnalysisReport analyze(const BuildingView& b, const GeometryAutomorphism& theta,
                       const AnalysisOptions& opts = {});

/// Domestic automorphisms with full opposition diagram (Type = S).
std::vector<GeometryAutomorphism> find_exceptional_domestic(
    const BuildingView& b, bool dualities, int threads = 0);

/// Partition chamber permutations into conjugacy classes under the full
/// correlation group of the geometry (collineations, plus dualities when the
/// geometry admits them).
std::vector<std::vector<int>> conjugacy_classes(
    const BuildingView& b, const std::vector<GeometryAutomorphism>& list);

/// Order of theta as a permutation of chambers.
int automorphism_order(const BuildingView& b, const GeometryAutomorphism& theta);

/// Vertices of the given type mapped to an opposite vertex.
std::vector<int> non_domestic_vertices(const BuildingView& b,
                                       const VertexMap& vm, int type);

}  // namespace oppdiag
