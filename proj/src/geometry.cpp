#include "oppdiag/geometry.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace oppdiag {

Gf::Gf(int q) : q_(q) {
  if (q != 2 && q != 3) throw std::invalid_argument("field order must be 2 or 3");
}

int Gf::inv(int a) const {
  if (a % q_ == 0) throw std::invalid_argument("inverting zero");
  return a == 1 ? 1 : q_ - 1;  // q in {2,3}: 2^-1 = 2 mod 3
}

Matrix identity_matrix(int n) {
  Matrix m(n, Row(n, 0));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

Matrix matmul(const Gf& f, const Matrix& a, const Matrix& b) {
  const int n = static_cast<int>(a.size());
  const int k = static_cast<int>(b.size());
  const int m = static_cast<int>(b[0].size());
  Matrix c(n, Row(m, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j)
      if (a[i][j])
        for (int l = 0; l < m; ++l)
          c[i][l] = f.add(c[i][l], f.mul(a[i][j], b[j][l]));
  return c;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a[0].size(), Row(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
  return t;
}

Matrix rref(const Gf& f, Matrix rows) {
  if (rows.empty()) return rows;
  const int m = static_cast<int>(rows[0].size());
  int pivot_row = 0;
  for (int col = 0; col < m && pivot_row < static_cast<int>(rows.size());
       ++col) {
    int sel = -1;
    for (int r = pivot_row; r < static_cast<int>(rows.size()); ++r)
      if (rows[r][col]) {
        sel = r;
        break;
      }
    if (sel < 0) continue;
    std::swap(rows[pivot_row], rows[sel]);
    int piv_inv = f.inv(rows[pivot_row][col]);
    for (int j = 0; j < m; ++j)
      rows[pivot_row][j] = f.mul(rows[pivot_row][j], piv_inv);
    for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
      if (r == pivot_row || !rows[r][col]) continue;
      int c = rows[r][col];
      for (int j = 0; j < m; ++j)
        rows[r][j] = f.sub(rows[r][j], f.mul(c, rows[pivot_row][j]));
    }
    ++pivot_row;
  }
  rows.resize(pivot_row);
  return rows;
}

std::optional<Matrix> inverse_matrix(const Gf& f, const Matrix& a) {
  const int n = static_cast<int>(a.size());
  Matrix aug(n, Row(2 * n, 0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug[i][j] = a[i][j];
    aug[i][n + i] = 1;
  }
  aug = rref(f, std::move(aug));
  if (static_cast<int>(aug.size()) < n) return std::nullopt;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (aug[i][j] != (i == j ? 1 : 0)) return std::nullopt;
  Matrix inv(n, Row(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  return inv;
}

uint64_t Subspace::key() const {
  uint64_t k = static_cast<uint64_t>(rows.size());
  for (const auto& row : rows) {
    uint64_t code = 0;
    for (uint8_t x : row) code = code * 3 + x;
    k = (k << 10) | code;
  }
  return k;
}

Subspace Subspace::span(const Gf& f, int ambient, Matrix vectors) {
  return Subspace{ambient, rref(f, std::move(vectors))};
}

bool Subspace::contains(const Gf& f, const Row& v) const {
  Row r = v;
  for (const auto& basis : rows) {
    int lead = 0;
    while (lead < ambient && !basis[lead]) ++lead;
    if (lead < ambient && r[lead]) {
      int c = r[lead];  // basis row has pivot 1
      for (int j = 0; j < ambient; ++j) r[j] = f.sub(r[j], f.mul(c, basis[j]));
    }
  }
  return std::all_of(r.begin(), r.end(), [](uint8_t x) { return x == 0; });
}

bool Subspace::contains_subspace(const Gf& f, const Subspace& u) const {
  for (const auto& r : u.rows)
    if (!contains(f, r)) return false;
  return true;
}

Subspace intersect(const Gf& f, const Subspace& a, const Subspace& b) {
  // Zassenhaus-free route: intersect = perp of (perp(a) U perp(b)) under the
  // dot product; small dimensions make this cheap.
  Matrix dot = identity_matrix(a.ambient);
  Subspace pa = perp(f, dot, a);
  Subspace pb = perp(f, dot, b);
  Matrix joint = pa.rows;
  joint.insert(joint.end(), pb.rows.begin(), pb.rows.end());
  return perp(f, dot, Subspace::span(f, a.ambient, std::move(joint)));
}

Subspace perp(const Gf& f, const Matrix& form, const Subspace& u) {
  const int n = u.ambient;
  // Solve v * form * u_i^T = 0 for all basis rows u_i: nullspace of
  // M = form * u^T (as column constraints), i.e. rows v with v M = 0.
  Matrix constraints;  // each row: coefficients of one linear condition on v
  for (const auto& basis : u.rows) {
    Row c(n, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        c[i] = f.add(c[i], f.mul(form[i][j], basis[j]));
    constraints.push_back(std::move(c));
  }
  Matrix reduced = rref(f, std::move(constraints));
  // Nullspace basis of the reduced constraint system.
  std::vector<int> pivots;
  std::vector<bool> is_pivot(n, false);
  for (const auto& row : reduced) {
    int lead = 0;
    while (lead < n && !row[lead]) ++lead;
    pivots.push_back(lead);
    is_pivot[lead] = true;
  }
  Matrix null_basis;
  for (int free_col = 0; free_col < n; ++free_col) {
    if (is_pivot[free_col]) continue;
    Row v(n, 0);
    v[free_col] = 1;
    for (std::size_t r = 0; r < reduced.size(); ++r)
      v[pivots[r]] = f.neg(reduced[r][free_col]);
    null_basis.push_back(std::move(v));
  }
  return Subspace::span(f, n, std::move(null_basis));
}

std::vector<int> Flag::type_set() const {
  std::vector<int> t;
  for (const auto& [type, id] : parts) t.push_back(type);
  return t;
}

// ---------------------------------------------------------------------------
// FlagGeometry

FlagGeometry::FlagGeometry(GeometryKind kind, int n, int q)
    : kind_(kind),
      ambient_(kind == GeometryKind::projective ? n : 2 * n),
      field_(q),
      rank_(kind == GeometryKind::projective ? n - 1 : n) {
  if (kind == GeometryKind::projective) {
    if (n < 2 || n > 5) throw std::invalid_argument("projective n must be 2..5");
  } else {
    if (n < 2 || n > 3)
      throw std::invalid_argument("symplectic-polar rank must be 2 or 3");
    if (q != 2) throw std::invalid_argument("symplectic-polar requires q = 2");
    form_.assign(ambient_, Row(ambient_, 0));
    for (int i = 0; i < n; ++i) {
      form_[2 * i][2 * i + 1] = 1;
      form_[2 * i + 1][2 * i] = static_cast<uint8_t>(field_.neg(1));
    }
  }
}

FlagGeometry FlagGeometry::build(GeometryKind kind, int n, int q) {
  FlagGeometry g(kind, n, q);
  g.enumerate_vertices();
  g.enumerate_chambers();
  return g;
}

void FlagGeometry::enumerate_vertices() {
  const int n = ambient_;
  const int q = field_.q();
  vertices_.resize(rank_);
  vertex_index_.resize(rank_);

  auto isotropic_pair = [&](const Row& a, const Row& b) {
    int v = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        v = field_.add(v, field_.mul(field_.mul(a[i], form_[i][j]), b[j]));
    return v == 0;
  };

  // Type 1: one-dimensional subspaces.
  long long total = 1;
  for (int i = 0; i < n; ++i) total *= q;
  for (long long code = 1; code < total; ++code) {
    Row v(n);
    long long c = code;
    for (int i = n - 1; i >= 0; --i) {
      v[i] = static_cast<uint8_t>(c % q);
      c /= q;
    }
    Subspace s = Subspace::span(field_, n, {v});
    if (vertex_index_[0].count(s.key())) continue;
    vertex_index_[0][s.key()] = static_cast<int>(vertices_[0].size());
    vertices_[0].push_back(std::move(s));
  }

  // Higher types: extend by points (kept isotropic in the polar case).
  for (int t = 2; t <= rank_; ++t) {
    for (const auto& u : vertices_[t - 2]) {
      for (const auto& p : vertices_[0]) {
        const Row& v = p.rows[0];
        if (u.contains(field_, v)) continue;
        if (kind_ == GeometryKind::symplectic_polar) {
          bool ok = isotropic_pair(v, v);
          for (const auto& basis : u.rows)
            if (!isotropic_pair(basis, v)) ok = false;
          if (!ok) continue;
        }
        Matrix rows = u.rows;
        rows.push_back(v);
        Subspace s = Subspace::span(field_, n, std::move(rows));
        if (vertex_index_[t - 1].count(s.key())) continue;
        vertex_index_[t - 1][s.key()] = static_cast<int>(vertices_[t - 1].size());
        vertices_[t - 1].push_back(std::move(s));
      }
    }
  }
}

namespace {
uint64_t chamber_key(const std::vector<int>& ids) {
  uint64_t k = 0;
  for (int id : ids) k = k * 100000 + static_cast<uint64_t>(id) + 1;
  return k;
}
}  // namespace

void FlagGeometry::enumerate_chambers() {
  // Build chains greedily type by type.
  std::vector<std::vector<int>> partial{{}};
  for (int t = 1; t <= rank_; ++t) {
    std::vector<std::vector<int>> next;
    for (const auto& chain : partial) {
      for (int id = 0; id < static_cast<int>(vertices_[t - 1].size()); ++id) {
        if (!chain.empty()) {
          const Subspace& prev = vertices_[t - 2][chain.back()];
          if (!vertices_[t - 1][id].contains_subspace(field_, prev)) continue;
        }
        auto c = chain;
        c.push_back(id);
        next.push_back(std::move(c));
      }
    }
    partial = std::move(next);
    if (partial.size() > 1000000u)
      throw CapacityError("geometry exceeds the chamber guardrail");
  }
  chambers_ = std::move(partial);
  for (int c = 0; c < static_cast<int>(chambers_.size()); ++c)
    chamber_index_[chamber_key(chambers_[c])] = c;

  adjacency_.assign(chambers_.size(),
                    std::vector<std::vector<int>>(rank_));
  chambers_through_.assign(rank_, {});
  for (int t = 1; t <= rank_; ++t)
    chambers_through_[t - 1].resize(vertices_[t - 1].size());
  std::unordered_map<uint64_t, std::vector<int>> panels;
  for (int c = 0; c < static_cast<int>(chambers_.size()); ++c) {
    for (int t = 1; t <= rank_; ++t) {
      chambers_through_[t - 1][chambers_[c][t - 1]].push_back(c);
      auto ids = chambers_[c];
      ids[t - 1] = -1;
      uint64_t key = chamber_key(ids) ^ (static_cast<uint64_t>(t) << 58);
      panels[key].push_back(c);
    }
  }
  for (int c = 0; c < static_cast<int>(chambers_.size()); ++c) {
    for (int t = 1; t <= rank_; ++t) {
      auto ids = chambers_[c];
      ids[t - 1] = -1;
      uint64_t key = chamber_key(ids) ^ (static_cast<uint64_t>(t) << 58);
      for (int other : panels.at(key))
        if (other != c) adjacency_[c][t - 1].push_back(other);
    }
  }
}

int FlagGeometry::vertex_id(int type, const Subspace& s) const {
  auto it = vertex_index_[type - 1].find(s.key());
  if (it == vertex_index_[type - 1].end())
    throw std::invalid_argument("subspace is not a vertex of this geometry");
  return it->second;
}

int FlagGeometry::chamber_id(const std::vector<int>& vertex_ids) const {
  auto it = chamber_index_.find(chamber_key(vertex_ids));
  if (it == chamber_index_.end())
    throw std::invalid_argument("not a chamber of this geometry");
  return it->second;
}

bool FlagGeometry::incident(int t1, int id1, int t2, int id2) const {
  if (t1 == t2) return id1 == id2;
  if (t1 > t2) return incident(t2, id2, t1, id1);
  if (incidence_.empty())
    incidence_.assign(rank_, std::vector<std::vector<char>>(rank_));
  auto& table = incidence_[t1 - 1][t2 - 1];
  if (table.empty()) {
    const auto& small = vertices_[t1 - 1];
    const auto& large = vertices_[t2 - 1];
    table.assign(small.size() * large.size(), 0);
    for (std::size_t i = 0; i < small.size(); ++i)
      for (std::size_t j = 0; j < large.size(); ++j)
        table[i * large.size() + j] =
            large[j].contains_subspace(field_, small[i]) ? 1 : 0;
  }
  return table[static_cast<std::size_t>(id1) * vertices_[t2 - 1].size() + id2];
}

const std::vector<int>& FlagGeometry::chambers_through(int type, int id) const {
  return chambers_through_[type - 1][id];
}

int FlagGeometry::some_chamber_containing(const Flag& flag) const {
  if (flag.parts.empty()) return 0;
  const auto& candidates =
      chambers_through(flag.parts[0].first, flag.parts[0].second);
  for (int c : candidates) {
    bool ok = true;
    for (const auto& [t, id] : flag.parts)
      if (chambers_[c][t - 1] != id) ok = false;
    if (ok) return c;
  }
  throw std::logic_error("no chamber contains the flag");
}

CoxeterGraph FlagGeometry::coxeter_graph() const {
  std::vector<int> nodes;
  std::map<std::pair<int, int>, int> bonds;
  for (int i = 1; i <= rank_; ++i) nodes.push_back(i);
  for (int i = 1; i < rank_; ++i) bonds[{i, i + 1}] = 3;
  if (kind_ == GeometryKind::symplectic_polar)
    bonds[{rank_ - 1, rank_}] = 4;
  return CoxeterGraph(nodes, bonds);
}

bool FlagGeometry::for_each_flag(
    const std::vector<int>& types,
    const std::function<bool(const Flag&)>& visit) const {
  std::vector<int> ts = types;
  std::sort(ts.begin(), ts.end());
  Flag flag;
  std::function<bool(std::size_t)> rec = [&](std::size_t pos) {
    if (pos == ts.size()) return visit(flag);
    int t = ts[pos];
    for (int id = 0; id < static_cast<int>(vertices_[t - 1].size()); ++id) {
      if (!flag.parts.empty()) {
        auto [pt, pid] = flag.parts.back();
        if (!incident(pt, pid, t, id)) continue;
      }
      flag.parts.emplace_back(t, id);
      bool keep_going = rec(pos + 1);
      flag.parts.pop_back();
      if (!keep_going) return false;
    }
    return true;
  };
  return rec(0);
}

long long FlagGeometry::count_flags(const std::vector<int>& types) const {
  long long n = 0;
  for_each_flag(types, [&](const Flag&) {
    ++n;
    return true;
  });
  return n;
}

// ---------------------------------------------------------------------------
// Automorphisms

std::string GeometryAutomorphism::describe() const {
  std::ostringstream os;
  os << (duality ? "duality" : "collineation") << " g=";
  for (const auto& row : g)
    for (uint8_t x : row) os << static_cast<int>(x);
  return os.str();
}

void validate_automorphism(const FlagGeometry& geom,
                           const GeometryAutomorphism& a) {
  const Gf& f = geom.field();
  if (static_cast<int>(a.g.size()) != geom.ambient())
    throw std::invalid_argument("matrix dimension mismatch");
  if (!inverse_matrix(f, a.g)) throw std::invalid_argument("matrix not invertible");
  if (geom.kind() == GeometryKind::symplectic_polar) {
    if (a.duality)
      throw std::invalid_argument("dualities unsupported for polar geometries");
    Matrix gbgt = matmul(f, matmul(f, a.g, geom.form()), transpose(a.g));
    bool ok = false;
    for (int lambda = 1; lambda < f.q(); ++lambda) {
      bool match = true;
      for (std::size_t i = 0; i < gbgt.size(); ++i)
        for (std::size_t j = 0; j < gbgt.size(); ++j)
          if (gbgt[i][j] != f.mul(lambda, geom.form()[i][j])) match = false;
      if (match) ok = true;
    }
    if (!ok) throw std::invalid_argument("matrix does not preserve the form");
  }
}

Subspace apply_subspace(const FlagGeometry& geom, const GeometryAutomorphism& a,
                        const Subspace& u) {
  const Gf& f = geom.field();
  Matrix rows = u.rows.empty() ? Matrix{} : matmul(f, u.rows, a.g);
  Subspace image = Subspace::span(f, u.ambient, std::move(rows));
  if (!a.duality) return image;
  const Matrix& b =
      a.form_b.empty() ? identity_matrix(u.ambient) : a.form_b;
  return perp(f, b, image);
}

Flag apply(const FlagGeometry& geom, const GeometryAutomorphism& a,
           const Flag& flag) {
  Flag out;
  for (const auto& [t, id] : flag.parts) {
    Subspace image = apply_subspace(geom, a, geom.vertices(t)[id]);
    int it = image.dim();
    out.parts.emplace_back(it, geom.vertex_id(it, image));
  }
  std::sort(out.parts.begin(), out.parts.end());
  return out;
}

Flag VertexMap::map_flag(const Flag& f) const {
  Flag out;
  for (const auto& [t, id] : f.parts) out.parts.push_back(map_vertex(t, id));
  std::sort(out.parts.begin(), out.parts.end());
  return out;
}

GraphAutomorphism VertexMap::diagram_automorphism() const {
  std::map<int, int> m;
  for (int t = 1; t <= rank; ++t) m[t] = image_type(t);
  return GraphAutomorphism(std::move(m));
}

VertexMap vertex_map(const FlagGeometry& geom, const GeometryAutomorphism& a) {
  validate_automorphism(geom, a);
  VertexMap vm;
  vm.duality = a.duality;
  vm.rank = geom.rank();
  vm.image.resize(geom.rank());
  for (int t = 1; t <= geom.rank(); ++t) {
    const auto& verts = geom.vertices(t);
    vm.image[t - 1].resize(verts.size());
    for (std::size_t id = 0; id < verts.size(); ++id) {
      Subspace image = apply_subspace(geom, a, verts[id]);
      vm.image[t - 1][id] = geom.vertex_id(image.dim(), image);
    }
  }
  return vm;
}

std::vector<int> chamber_map(const FlagGeometry& geom, const VertexMap& vm) {
  std::vector<int> out(geom.num_chambers());
  for (int c = 0; c < geom.num_chambers(); ++c) {
    std::vector<int> ids(geom.rank());
    for (int t = 1; t <= geom.rank(); ++t) {
      auto [it, iid] = vm.map_vertex(t, geom.chamber(c)[t - 1]);
      ids[it - 1] = iid;
    }
    out[c] = geom.chamber_id(ids);
  }
  return out;
}

bool is_opposite_direct(const FlagGeometry& geom, const Flag& a,
                        const Flag& b) {
  const Gf& f = geom.field();
  const int n = geom.ambient();
  auto ta = a.type_set();
  auto tb = b.type_set();
  if (geom.kind() == GeometryKind::projective) {
    std::vector<int> expected;
    for (int t : ta) expected.push_back(n - t);
    std::sort(expected.begin(), expected.end());
    if (expected != tb) throw std::invalid_argument("type mismatch");
    for (const auto& [t, id] : a.parts) {
      // matched member of complementary dimension
      for (const auto& [u, uid] : b.parts) {
        if (u != n - t) continue;
        Subspace meet =
            intersect(f, geom.vertices(t)[id], geom.vertices(u)[uid]);
        if (meet.dim() != 0) return false;
      }
    }
    return true;
  }
  if (ta != tb) throw std::invalid_argument("type mismatch");
  for (const auto& [t, id] : a.parts) {
    for (const auto& [u, uid] : b.parts) {
      if (u != t) continue;
      const Subspace& U = geom.vertices(t)[id];
      const Subspace& W = geom.vertices(u)[uid];
      if (intersect(f, U, perp(f, geom.form(), W)).dim() != 0) return false;
      if (intersect(f, W, perp(f, geom.form(), U)).dim() != 0) return false;
    }
  }
  return true;
}

GeometryAutomorphism symplectic_polarity(int n, int q) {
  if (n % 2 != 0)
    throw std::invalid_argument("symplectic polarity needs even dimension");
  Gf f(q);
  Matrix b(n, Row(n, 0));
  for (int i = 0; i < n / 2; ++i) {
    b[2 * i][2 * i + 1] = 1;
    b[2 * i + 1][2 * i] = static_cast<uint8_t>(f.neg(1));
  }
  return GeometryAutomorphism{true, identity_matrix(n), std::move(b)};
}

namespace {

long long pgl_order(int n, int q) {
  long long order = 1;
  long long qn = 1;
  for (int i = 0; i < n; ++i) qn *= q;
  long long qi = 1;
  for (int i = 0; i < n; ++i) {
    order *= (qn - qi);
    qi *= q;
  }
  return order / (q - 1);
}

long long sp_order(int n2, int q) {  // |Sp_{n2}(q)|, n2 = 2m
  int m = n2 / 2;
  long long order = 1;
  long long qm2 = 1;
  for (int i = 0; i < m * m; ++i) qm2 *= q;
  order = qm2;
  long long q2i = 1;
  for (int i = 1; i <= m; ++i) {
    q2i = 1;
    for (int j = 0; j < 2 * i; ++j) q2i *= q;
    order *= (q2i - 1);
  }
  return order;
}

uint64_t gf2_matrix_key(const Matrix& m) {
  uint64_t k = 0;
  for (const auto& row : m)
    for (uint8_t x : row) k = (k << 1) | x;
  return k;
}

std::vector<Matrix> enumerate_symplectic_by_closure(const FlagGeometry& geom) {
  // Symplectic transvections x -> x + B(x, v) v generate Sp; closure BFS.
  const int n = geom.ambient();
  const Gf& f = geom.field();
  std::vector<Matrix> transvections;
  long long total = 1;
  for (int i = 0; i < n; ++i) total *= f.q();
  for (long long code = 1; code < total; ++code) {
    Row v(n);
    long long c = code;
    for (int i = n - 1; i >= 0; --i) {
      v[i] = static_cast<uint8_t>(c % f.q());
      c /= f.q();
    }
    Matrix t = identity_matrix(n);
    for (int i = 0; i < n; ++i) {
      // e_i -> e_i + B(e_i, v) v
      int bv = 0;
      for (int j = 0; j < n; ++j) bv = f.add(bv, f.mul(geom.form()[i][j], v[j]));
      for (int j = 0; j < n; ++j) t[i][j] = f.add(t[i][j], f.mul(bv, v[j]));
    }
    transvections.push_back(std::move(t));
  }
  std::vector<Matrix> group{identity_matrix(n)};
  std::unordered_map<uint64_t, char> seen{{gf2_matrix_key(group[0]), 1}};
  for (std::size_t head = 0; head < group.size(); ++head) {
    for (const auto& t : transvections) {
      Matrix prod = matmul(f, group[head], t);
      uint64_t key = gf2_matrix_key(prod);
      if (seen.emplace(key, 1).second) group.push_back(std::move(prod));
    }
    if (group.size() > 10000000u)
      throw CapacityError("automorphism group exceeds the enumeration cap");
  }
  std::sort(group.begin(), group.end(),
            [](const Matrix& a, const Matrix& b) {
              return gf2_matrix_key(a) < gf2_matrix_key(b);
            });
  return group;
}

}  // namespace

std::vector<GeometryAutomorphism> enumerate_automorphisms(
    const FlagGeometry& geom, bool dualities) {
  const int n = geom.ambient();
  const int q = geom.q();
  const Gf& f = geom.field();
  std::vector<GeometryAutomorphism> out;

  if (geom.kind() == GeometryKind::symplectic_polar) {
    if (dualities)
      throw std::invalid_argument("dualities unsupported for polar geometries");
    if (sp_order(n, q) > 10000000ll)
      throw CapacityError("automorphism group exceeds the enumeration cap");
    long long scan = 1;
    bool scan_feasible = true;
    for (int i = 0; i < n * n && scan_feasible; ++i) {
      scan *= q;
      if (scan > (1ll << 22)) scan_feasible = false;
    }
    std::vector<Matrix> group;
    if (scan_feasible) {
      for (long long code = 0; code < scan; ++code) {
        Matrix m(n, Row(n));
        long long c = code;
        for (int i = n - 1; i >= 0; --i)
          for (int j = n - 1; j >= 0; --j) {
            m[i][j] = static_cast<uint8_t>(c % q);
            c /= q;
          }
        if (!inverse_matrix(f, m)) continue;
        Matrix gbgt = matmul(f, matmul(f, m, geom.form()), transpose(m));
        if (gbgt == geom.form()) group.push_back(std::move(m));
      }
    } else {
      group = enumerate_symplectic_by_closure(geom);
    }
    for (auto& m : group) out.push_back({false, std::move(m), {}});
    return out;
  }

  if (pgl_order(n, q) > 10000000ll)
    throw CapacityError("automorphism group exceeds the enumeration cap");
  long long scan = 1;
  for (int i = 0; i < n * n; ++i) scan *= q;
  for (long long code = 0; code < scan; ++code) {
    Matrix m(n, Row(n));
    long long c = code;
    for (int i = n - 1; i >= 0; --i)
      for (int j = n - 1; j >= 0; --j) {
        m[i][j] = static_cast<uint8_t>(c % q);
        c /= q;
      }
    if (q > 2) {
      // PGL representative: first nonzero entry (row major) equals 1.
      int first = 0;
      for (int i = 0; i < n && !first; ++i)
        for (int j = 0; j < n && !first; ++j) first = m[i][j];
      if (first != 1) continue;
    }
    if (!inverse_matrix(f, m)) continue;
    out.push_back({dualities, std::move(m), {}});
  }
  return out;
}

GeometryAutomorphism random_automorphism(const FlagGeometry& geom,
                                         uint64_t seed, bool duality) {
  const int n = geom.ambient();
  const int q = geom.q();
  const Gf& f = geom.field();
  std::mt19937_64 rng(seed);
  Matrix m = identity_matrix(n);

  if (geom.kind() == GeometryKind::symplectic_polar) {
    if (duality)
      throw std::invalid_argument("dualities unsupported for polar geometries");
    long long total = 1;
    for (int i = 0; i < n; ++i) total *= q;
    for (int step = 0; step < 40; ++step) {
      long long code = 1 + static_cast<long long>(rng() % (total - 1));
      Row v(n);
      long long c = code;
      for (int i = n - 1; i >= 0; --i) {
        v[i] = static_cast<uint8_t>(c % q);
        c /= q;
      }
      Matrix t = identity_matrix(n);
      for (int i = 0; i < n; ++i) {
        int bv = 0;
        for (int j = 0; j < n; ++j)
          bv = f.add(bv, f.mul(geom.form()[i][j], v[j]));
        for (int j = 0; j < n; ++j) t[i][j] = f.add(t[i][j], f.mul(bv, v[j]));
      }
      m = matmul(f, m, t);
    }
    return {false, std::move(m), {}};
  }

  for (int step = 0; step < 40; ++step) {
    int i = static_cast<int>(rng() % n);
    int j = static_cast<int>(rng() % n);
    if (i == j) {
      // scale a row by a unit
      int lambda = 1 + static_cast<int>(rng() % (q - 1));
      for (int col = 0; col < n; ++col) m[i][col] = f.mul(m[i][col], lambda);
    } else {
      int lambda = 1 + static_cast<int>(rng() % (q - 1));
      for (int col = 0; col < n; ++col)
        m[i][col] = f.add(m[i][col], f.mul(lambda, m[j][col]));
    }
  }
  return {duality, std::move(m), {}};
}

GeometryAutomorphism parse_automorphism_file(const FlagGeometry& geom,
                                             const std::string& text) {
  std::istringstream is(text);
  std::string line;
  GeometryAutomorphism a;
  bool have_kind = false, have_matrix = false;
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    if (word == "geometry") {
      std::string kind, nspec, qspec;
      ls >> kind >> nspec >> qspec;
      GeometryKind k = kind == "projective" ? GeometryKind::projective
                                            : GeometryKind::symplectic_polar;
      if (k != geom.kind())
        throw std::invalid_argument("automorphism file geometry kind mismatch");
      int n = std::stoi(nspec.substr(nspec.find('=') + 1));
      int q = std::stoi(qspec.substr(qspec.find('=') + 1));
      int expected_n = geom.kind() == GeometryKind::projective
                           ? geom.ambient()
                           : geom.rank();
      if (n != expected_n || q != geom.q())
        throw std::invalid_argument("automorphism file parameters mismatch");
    } else if (word == "kind") {
      std::string k;
      ls >> k;
      a.duality = (k == "duality");
      have_kind = true;
    } else if (word == "form") {
      const int n = geom.ambient();
      a.form_b.assign(n, Row(n));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          int x;
          if (!(ls >> x)) throw std::invalid_argument("short form line");
          a.form_b[i][j] = static_cast<uint8_t>((x % geom.q() + geom.q()) %
                                                geom.q());
        }
    } else if (word == "matrix") {
      const int n = geom.ambient();
      a.g.assign(n, Row(n));
      for (int i = 0; i < n; ++i) {
        if (!std::getline(is, line))
          throw std::invalid_argument("short matrix block");
        std::istringstream rs(line);
        for (int j = 0; j < n; ++j) {
          int x;
          if (!(rs >> x)) throw std::invalid_argument("short matrix row");
          a.g[i][j] =
              static_cast<uint8_t>((x % geom.q() + geom.q()) % geom.q());
        }
      }
      have_matrix = true;
    } else {
      throw std::invalid_argument("unknown directive: " + word);
    }
  }
  if (!have_kind || !have_matrix)
    throw std::invalid_argument("automorphism file missing kind or matrix");
  validate_automorphism(geom, a);
  return a;
}

}  // namespace oppdiag
