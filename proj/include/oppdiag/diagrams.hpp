#pragma once

#include <string>
#include <vector>

#include "oppdiag/coxeter.hpp"

namespace oppdiag {

/// Triple (Gamma, J, pi). Admissibility is a predicate, not an invariant.
struct OppositionDiagram {
  CoxeterGraph graph;
  std::vector<int> circled;  // J, sorted
  GraphAutomorphism autom;   // pi, defined on all nodes

  std::string render() const;  // plain text, circled nodes bracketed
};

/// Minimal subsets of `domain` invariant under `f` (the orbit partition).
std::vector<std::vector<int>> stable_partition(const std::vector<int>& domain,
                                               const GraphAutomorphism& f);

/// The automorphism w_{S\K} o w_0 o pi of the residue graph Gamma_{S\K}.
/// K must be stable under w_0 o pi.
GraphAutomorphism residue_automorphism(const CoxeterGraph& g,
                                       const std::vector<int>& K,
                                       const GraphAutomorphism& pi);

/// Recursive admissibility axioms; memoized and thread safe.
bool is_admissible(const OppositionDiagram& d);

/// Same, without the memo table (reference path for testing the memo).
bool is_admissible_unmemoized(const OppositionDiagram& d);

/// All admissible J for (g, pi), sorted by (size, lexicographic).
/// Candidates are unions of blocks of the (w_0 o pi) stable partition.
std::vector<std::vector<int>> enumerate_admissible(const CoxeterGraph& g,
                                                   const GraphAutomorphism& pi);

/// disp from a diagram: |Phi^+(W)| - |Phi^+(W_{S\J})|.
int displacement(const CoxeterGraph& g, const std::vector<int>& J);

enum class PiClass { identity, order2, order3 };

/// The canonical automorphism of the named type for a pi-class
/// (A/E6: end-for-end flip; D: (n-1,n); D4 order 3: (1,3,4); F4: (1,4)(2,3);
/// I2: swap). Throws for undefined combinations.
GraphAutomorphism table_pi(const std::string& family, int n, PiClass cls);

/// Closed-form diagram families as printed, for the named irreducible types.
/// `family` is one of "A","B","D","E","F","H","I2"; n is the rank (the bond
/// label m for I2). Families are up to graph automorphism; see
/// expand_families.
std::vector<std::vector<int>> table_families(const std::string& family, int n,
                                             PiClass cls);

/// All graph automorphisms of g (brute force; desk-scale ranks).
std::vector<GraphAutomorphism> graph_automorphisms(const CoxeterGraph& g);

/// Closes each family set under the automorphisms of g commuting with pi.
std::vector<std::vector<int>> expand_families(
    const CoxeterGraph& g, const GraphAutomorphism& pi,
    const std::vector<std::vector<int>>& families);

struct TableReportEntry {
  std::string type;
  std::string pi;
  bool pass = false;
  int enumerated = 0;
  int expected = 0;
};

struct TableReport {
  std::vector<TableReportEntry> entries;
  bool all_pass = true;
};

/// Set-equality check of enumerate_admissible against the expanded
/// closed-form families, for every irreducible type and pi-class in range.
/// A/B ranks run up to max_rank, D from 4 to max_rank; the exceptional,
/// dihedral (m = 3..8) and H types are always included.
TableReport verify_tables(int max_rank);

}  // namespace oppdiag
