#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "oppdiag/coxeter.hpp"

namespace oppdiag {

/// GF(q) for q in {2, 3}.
class Gf {
 public:
  explicit Gf(int q);
  int q() const { return q_; }
  int add(int a, int b) const { return (a + b) % q_; }
  int sub(int a, int b) const { return (a - b + q_) % q_; }
  int mul(int a, int b) const { return (a * b) % q_; }
  int neg(int a) const { return (q_ - a) % q_; }
  int inv(int a) const;

 private:
  int q_;
};

using Row = std::vector<uint8_t>;
using Matrix = std::vector<Row>;

Matrix identity_matrix(int n);
Matrix matmul(const Gf& f, const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
std::optional<Matrix> inverse_matrix(const Gf& f, const Matrix& a);
/// Reduced row echelon form; returns the nonzero rows.
Matrix rref(const Gf& f, Matrix rows);

/// Subspace of GF(q)^d in reduced row echelon canonical form.
/// Equality of subspaces is byte equality of the canonical basis.
struct Subspace {
  int ambient = 0;
  Matrix rows;  // RREF, no zero rows

  int dim() const { return static_cast<int>(rows.size()); }
  uint64_t key() const;  // packed canonical key (ambient <= 6, q <= 3)
  bool operator==(const Subspace& o) const {
    return ambient == o.ambient && rows == o.rows;
  }
  static Subspace span(const Gf& f, int ambient, Matrix vectors);
  bool contains(const Gf& f, const Row& v) const;
  bool contains_subspace(const Gf& f, const Subspace& u) const;
};

Subspace intersect(const Gf& f, const Subspace& a, const Subspace& b);
/// perp of U with respect to bilinear form B: {v : v B u^T = 0 for u in U}.
Subspace perp(const Gf& f, const Matrix& form, const Subspace& u);

/// Flag = chain of nested subspaces, stored as (type, vertex id) pairs
/// sorted by type. Type t vertices are the t-dimensional subspaces.
struct Flag {
  std::vector<std::pair<int, int>> parts;
  std::vector<int> type_set() const;
  bool operator==(const Flag& o) const { return parts == o.parts; }
};

enum class GeometryKind { projective, symplectic_polar };

/// A fully enumerated small building: PG(n-1, q) or the rank-n/2 symplectic
/// polar space over GF(2), as a chamber system with typed vertices.
class FlagGeometry {
 public:
  /// For projective geometries n is the ambient vector dimension (building
  /// type A_{n-1}); for symplectic-polar n is the rank (ambient dim 2n).
  static FlagGeometry build(GeometryKind kind, int n, int q);

  GeometryKind kind() const { return kind_; }
  int ambient() const { return ambient_; }
  int q() const { return field_.q(); }
  const Gf& field() const { return field_; }
  int rank() const { return rank_; }
  const Matrix& form() const { return form_; }  // polar only

  const std::vector<Subspace>& vertices(int type) const {
    return vertices_[type - 1];
  }
  int vertex_id(int type, const Subspace& s) const;
  int num_chambers() const { return static_cast<int>(chambers_.size()); }
  /// Chamber c as vertex ids, position t-1 holds the type-t vertex.
  const std::vector<int>& chamber(int c) const { return chambers_[c]; }
  int chamber_id(const std::vector<int>& vertex_ids) const;
  /// Chambers s-adjacent to c (excluding c itself).
  const std::vector<int>& adjacent(int c, int type) const {
    return adjacency_[c][type - 1];
  }

  /// vertex of type t1 contained in vertex of type t2 (t1 < t2); cached.
  bool incident(int t1, int id1, int t2, int id2) const;
  const std::vector<int>& chambers_through(int type, int id) const;
  int some_chamber_containing(const Flag& flag) const;

  /// Building type: A_{n-1} (nodes 1..n-1) or B_rank (nodes 1..rank).
  CoxeterGraph coxeter_graph() const;

  /// All flags of the given type set, in deterministic order. The visitor
  /// returns false to stop early; the function returns false if stopped.
  bool for_each_flag(const std::vector<int>& types,
                     const std::function<bool(const Flag&)>& visit) const;
  long long count_flags(const std::vector<int>& types) const;

 private:
  FlagGeometry(GeometryKind kind, int n, int q);
  void enumerate_vertices();
  void enumerate_chambers();

  GeometryKind kind_;
  int ambient_;
  Gf field_;
  int rank_;
  Matrix form_;
  std::vector<std::vector<Subspace>> vertices_;
  std::vector<std::unordered_map<uint64_t, int>> vertex_index_;
  std::vector<std::vector<int>> chambers_;
  std::unordered_map<uint64_t, int> chamber_index_;
  std::vector<std::vector<std::vector<int>>> adjacency_;
  std::vector<std::vector<std::vector<int>>> chambers_through_;
  // incidence_[t1-1][t2-1][id1*n2+id2], built lazily
  mutable std::vector<std::vector<std::vector<char>>> incidence_;
};

/// Collineation or duality, represented by (g, B): collineations act by
/// U -> Ug; dualities by U -> perp_B(Ug). Every duality of these geometries
/// over GF(2), GF(3) arises this way (no field automorphisms).
struct GeometryAutomorphism {
  bool duality = false;
  Matrix g;
  Matrix form_b;  // duality perp form; identity dot product by default

  std::string describe() const;
};

/// Validates invertibility (and form preservation for polar geometries).
void validate_automorphism(const FlagGeometry& geom,
                           const GeometryAutomorphism& a);

Subspace apply_subspace(const FlagGeometry& geom, const GeometryAutomorphism& a,
                        const Subspace& u);
Flag apply(const FlagGeometry& geom, const GeometryAutomorphism& a,
           const Flag& flag);

/// Precomputed action on the vertex lists: image[type-1][id] = image id
/// (the image type is `type` for collineations and n-type for dualities).
struct VertexMap {
  bool duality = false;
  int rank = 0;
  std::vector<std::vector<int>> image;
  int image_type(int type) const { return duality ? rank + 1 - type : type; }
  std::pair<int, int> map_vertex(int type, int id) const {
    return {image_type(type), image[type - 1][id]};
  }
  Flag map_flag(const Flag& f) const;
  GraphAutomorphism diagram_automorphism() const;  // pi_theta on 1..rank
};
VertexMap vertex_map(const FlagGeometry& geom, const GeometryAutomorphism& a);

/// Chamber permutation induced by an automorphism (duality included).
std::vector<int> chamber_map(const FlagGeometry& geom, const VertexMap& vm);

/// Direct opposition criterion. Requires tau(b) = tau(a)^op.
/// Projective: complementary-dimension members intersect trivially.
/// Polar: U cap perp(W) = 0 and W cap perp(U) = 0 for matched members.
bool is_opposite_direct(const FlagGeometry& geom, const Flag& a, const Flag& b);

/// The symplectic polarity of PG(n-1, q): g = identity, B = standard
/// alternating block form. n must be even.
GeometryAutomorphism symplectic_polarity(int n, int q);

/// All automorphisms of the given kind, deterministically ordered.
/// Projective collineations are PGL(n, q) (scalar matrices deduplicated);
/// polar collineations preserve the form. Throws CapacityError when the
/// group order would exceed 10^7.
std::vector<GeometryAutomorphism> enumerate_automorphisms(
    const FlagGeometry& geom, bool dualities);

/// Deterministic pseudo-random automorphism (products of elementary
/// matrices; symplectic transvections in the polar case).
GeometryAutomorphism random_automorphism(const FlagGeometry& geom,
                                         uint64_t seed, bool duality);

/// Parses the automorphism file format:
///   geometry <projective|polar> n=<n> q=<q>
///   kind <collineation|duality>
///   [form <n*n entries>]
///   matrix
///   <n rows of entries>
GeometryAutomorphism parse_automorphism_file(const FlagGeometry& geom,
                                             const std::string& text);

}  // namespace oppdiag
