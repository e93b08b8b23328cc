#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace oppdiag {

/// Raised when an enumeration would exceed a desk-scale guardrail.
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Labeled Coxeter graph: nodes carry small integer type labels
/// (Bourbaki numbering for the named irreducibles), bonds carry m >= 3.
/// An absent bond means m = 2 (commuting generators).
class CoxeterGraph {
 public:
  CoxeterGraph() = default;
  CoxeterGraph(std::vector<int> nodes, std::map<std::pair<int, int>, int> bonds);

  const std::vector<int>& nodes() const { return nodes_; }
  int rank() const { return static_cast<int>(nodes_.size()); }
  bool has_node(int s) const;
  int bond(int a, int b) const;  // 2 when no edge
  const std::map<std::pair<int, int>, int>& bonds() const { return bonds_; }

  CoxeterGraph induced(const std::vector<int>& keep) const;
  std::vector<std::vector<int>> components() const;

  /// Canonical text key, usable as a memo key.
  std::string key() const;

  bool operator==(const CoxeterGraph& o) const {
    return nodes_ == o.nodes_ && bonds_ == o.bonds_;
  }

 private:
  std::vector<int> nodes_;                     // sorted, unique
  std::map<std::pair<int, int>, int> bonds_;   // (a<b) -> m
};

/// Parses a compact type string ("A5", "B3", "E7", "I2(7)", "A2xA1") or the
/// line-based format (`node <label>` / `bond <a> <b> <m>` lines, `#` comments).
CoxeterGraph parse_coxeter_graph(const std::string& spec);

/// Finite root list of a spherical Coxeter graph, realized in the standard
/// geometric representation. Roots are closed under the simple reflections;
/// coordinates are deduplicated at 1e-9, which separates all orbits at the
/// ranks handled here.
class RootSystem {
 public:
  explicit RootSystem(const CoxeterGraph& g);

  const CoxeterGraph& graph() const { return graph_; }
  int rank() const { return static_cast<int>(node_index_.size()); }
  int size() const { return static_cast<int>(negate_.size()); }
  int num_positive() const { return size() / 2; }

  int simple_root(int node) const;        // root index of alpha_s
  int node_position(int node) const;      // 0-based position of a node label
  int reflect(int node, int root) const;  // index of s_node(root)
  int negate(int root) const { return negate_[root]; }
  bool positive(int root) const { return positive_[root]; }

 private:
  CoxeterGraph graph_;
  std::map<int, int> node_index_;
  std::vector<std::vector<int>> action_;  // [node position][root] -> root
  std::vector<int> negate_;
  std::vector<bool> positive_;
};

/// Shared, cached root system per graph. Thread safe.
std::shared_ptr<const RootSystem> root_system(const CoxeterGraph& g);

/// Element of the Weyl group, stored as its permutation of the root list.
class WeylElement {
 public:
  static WeylElement identity(std::shared_ptr<const RootSystem> rs);

  const std::shared_ptr<const RootSystem>& roots() const { return rs_; }
  int length() const { return length_; }
  bool is_identity() const;
  int map_root(int root) const { return perm_[root]; }

  WeylElement times_generator(int node) const;  // w * s
  WeylElement generator_times(int node) const;  // s * w
  WeylElement operator*(const WeylElement& o) const;  // (w*v)(a) = w(v(a))
  WeylElement inverse() const;

  bool operator==(const WeylElement& o) const { return perm_ == o.perm_; }
  bool operator!=(const WeylElement& o) const { return perm_ != o.perm_; }
  bool operator<(const WeylElement& o) const { return perm_ < o.perm_; }
  const std::vector<int32_t>& perm() const { return perm_; }

 private:
  WeylElement(std::shared_ptr<const RootSystem> rs, std::vector<int32_t> perm);
  std::shared_ptr<const RootSystem> rs_;
  std::vector<int32_t> perm_;
  int length_;
};

/// Bond-preserving bijection of a node subset.
class GraphAutomorphism {
 public:
  GraphAutomorphism() = default;
  explicit GraphAutomorphism(std::map<int, int> mapping);
  static GraphAutomorphism identity_on(const std::vector<int>& domain);

  std::vector<int> domain() const;
  int operator()(int s) const;
  bool is_identity() const;
  int order() const;

  /// this after other; domains must match.
  GraphAutomorphism compose(const GraphAutomorphism& other) const;
  GraphAutomorphism inverse() const;
  GraphAutomorphism restrict(const std::vector<int>& sub) const;

  bool operator==(const GraphAutomorphism& o) const { return map_ == o.map_; }
  std::string cycle_notation() const;  // e.g. "(1,3,4)" or "id"

 private:
  std::map<int, int> map_;
};

/// |Phi^+(W_J)|, by reflection closure over the induced subgraph.
int positive_root_count(const CoxeterGraph& g, const std::vector<int>& J);

/// Longest element of the standard parabolic W_J, inside the ambient root
/// system. Greedy: append the lowest-labeled generator that increases length.
WeylElement longest_element(const std::shared_ptr<const RootSystem>& rs,
                            const std::vector<int>& J);

/// Diagram automorphism s -> t of J induced by w_J via w_J(alpha_s) = -alpha_t.
GraphAutomorphism opposition_involution(const CoxeterGraph& g,
                                        const std::vector<int>& J);

/// Whether w0 lies in W_L * w * W_R. Decided by reducing w to its minimal
/// double-coset representative and enumerating the (capped) parabolics.
bool double_coset_contains_w0(const std::shared_ptr<const RootSystem>& rs,
                              const std::vector<int>& L,
                              const std::vector<int>& R, const WeylElement& w);

/// All elements of the parabolic W_J. Throws CapacityError beyond `cap`.
std::vector<WeylElement> enumerate_parabolic(
    const std::shared_ptr<const RootSystem>& rs, const std::vector<int>& J,
    std::size_t cap = 1000000);

}  // namespace oppdiag
