#include "oppdiag/coxeter.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace oppdiag {

namespace {

constexpr int kRootCap = 10000;

std::pair<int, int> ordered(int a, int b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

}  // namespace

CoxeterGraph::CoxeterGraph(std::vector<int> nodes,
                           std::map<std::pair<int, int>, int> bonds)
    : nodes_(std::move(nodes)) {
  std::sort(nodes_.begin(), nodes_.end());
  if (std::adjacent_find(nodes_.begin(), nodes_.end()) != nodes_.end())
    throw std::invalid_argument("duplicate node labels");
  for (auto& [pair, m] : bonds) {
    auto [a, b] = pair;
    if (a == b) throw std::invalid_argument("loop bond");
    if (m < 3) throw std::invalid_argument("bond label < 3");
    if (!has_node(a) || !has_node(b))
      throw std::invalid_argument("bond references unknown node");
    bonds_[ordered(a, b)] = m;
  }
}

bool CoxeterGraph::has_node(int s) const {
  return std::binary_search(nodes_.begin(), nodes_.end(), s);
}

int CoxeterGraph::bond(int a, int b) const {
  auto it = bonds_.find(ordered(a, b));
  return it == bonds_.end() ? 2 : it->second;
}

CoxeterGraph CoxeterGraph::induced(const std::vector<int>& keep) const {
  std::set<int> ks(keep.begin(), keep.end());
  std::vector<int> nodes;
  for (int s : nodes_)
    if (ks.count(s)) nodes.push_back(s);
  std::map<std::pair<int, int>, int> bonds;
  for (const auto& [pair, m] : bonds_)
    if (ks.count(pair.first) && ks.count(pair.second)) bonds[pair] = m;
  return CoxeterGraph(nodes, bonds);
}

std::vector<std::vector<int>> CoxeterGraph::components() const {
  std::set<int> left(nodes_.begin(), nodes_.end());
  std::vector<std::vector<int>> out;
  while (!left.empty()) {
    std::vector<int> comp{*left.begin()};
    left.erase(left.begin());
    for (std::size_t i = 0; i < comp.size(); ++i)
      for (auto it = left.begin(); it != left.end();) {
        if (bond(comp[i], *it) >= 3) {
          comp.push_back(*it);
          it = left.erase(it);
        } else {
          ++it;
        }
      }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

std::string CoxeterGraph::key() const {
  std::ostringstream os;
  for (int s : nodes_) os << s << ',';
  os << ';';
  for (const auto& [pair, m] : bonds_)
    os << pair.first << '-' << pair.second << ':' << m << ',';
  return os.str();
}

namespace {

// Named irreducible with Bourbaki numbering, labels shifted by `offset`.
CoxeterGraph named_graph(const std::string& name, int offset) {
  auto chain = [&](int n, std::map<std::pair<int, int>, int>& bonds) {
    for (int i = 1; i < n; ++i) bonds[{offset + i, offset + i + 1}] = 3;
  };
  std::vector<int> nodes;
  std::map<std::pair<int, int>, int> bonds;
  auto fill_nodes = [&](int n) {
    for (int i = 1; i <= n; ++i) nodes.push_back(offset + i);
  };
  char family = name.empty() ? '?' : name[0];
  std::string rest = name.substr(1);
  if (family == 'I') {
    // I2(m)
    if (rest.size() < 4 || rest.substr(0, 2) != "2(" || rest.back() != ')')
      throw std::invalid_argument("bad dihedral type: " + name);
    int m = std::stoi(rest.substr(2, rest.size() - 3));
    if (m < 3) throw std::invalid_argument("bond label < 3 in " + name);
    fill_nodes(2);
    bonds[{offset + 1, offset + 2}] = m;
    return CoxeterGraph(nodes, bonds);
  }
  int n = 0;
  try {
    n = std::stoi(rest);
  } catch (...) {
    throw std::invalid_argument("unknown type name: " + name);
  }
  switch (family) {
    case 'A':
      if (n < 1) throw std::invalid_argument("bad rank in " + name);
      fill_nodes(n);
      chain(n, bonds);
      break;
    case 'B':
    case 'C':
      if (n < 2) throw std::invalid_argument("bad rank in " + name);
      fill_nodes(n);
      chain(n, bonds);
      bonds[{offset + n - 1, offset + n}] = 4;
      break;
    case 'D':
      if (n < 4) throw std::invalid_argument("bad rank in " + name);
      fill_nodes(n);
      chain(n - 1, bonds);
      bonds.erase({offset + n - 1, offset + n});
      bonds[{offset + n - 2, offset + n - 1}] = 3;
      bonds[{offset + n - 2, offset + n}] = 3;
      break;
    case 'E':
      if (n < 6 || n > 8) throw std::invalid_argument("bad rank in " + name);
      fill_nodes(n);
      bonds[{offset + 1, offset + 3}] = 3;
      bonds[{offset + 2, offset + 4}] = 3;
      for (int i = 3; i < n; ++i) bonds[{offset + i, offset + i + 1}] = 3;
      break;
    case 'F':
      if (n != 4) throw std::invalid_argument("bad rank in " + name);
      fill_nodes(4);
      bonds[{offset + 1, offset + 2}] = 3;
      bonds[{offset + 2, offset + 3}] = 4;
      bonds[{offset + 3, offset + 4}] = 3;
      break;
    case 'H':
      // Convention here: chain 1-2-...-n with the bond 5 on the
      // highest-labeled edge (H3: 1-2-3 with m(2,3)=5).
      if (n != 3 && n != 4) throw std::invalid_argument("bad rank in " + name);
      fill_nodes(n);
      chain(n, bonds);
      bonds[{offset + n - 1, offset + n}] = 5;
      break;
    case 'G':
      if (n != 2) throw std::invalid_argument("bad rank in " + name);
      fill_nodes(2);
      bonds[{offset + 1, offset + 2}] = 6;
      break;
    default:
      throw std::invalid_argument("unknown type name: " + name);
  }
  return CoxeterGraph(nodes, bonds);
}

CoxeterGraph parse_line_format(const std::string& spec) {
  std::vector<int> nodes;
  std::map<std::pair<int, int>, int> bonds;
  std::istringstream is(spec);
  std::string line;
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    if (word == "node") {
      int s;
      if (!(ls >> s)) throw std::invalid_argument("bad node line: " + line);
      nodes.push_back(s);
    } else if (word == "bond") {
      int a, b, m;
      if (!(ls >> a >> b >> m))
        throw std::invalid_argument("bad bond line: " + line);
      bonds[{std::min(a, b), std::max(a, b)}] = m;
    } else {
      throw std::invalid_argument("unknown directive: " + word);
    }
  }
  return CoxeterGraph(nodes, bonds);
}

}  // namespace

CoxeterGraph parse_coxeter_graph(const std::string& spec) {
  if (spec.find("node") != std::string::npos ||
      spec.find('\n') != std::string::npos) {
    CoxeterGraph g = parse_line_format(spec);
    root_system(g);  // validates sphericity eagerly
    return g;
  }
  // Compact form, possibly a product.
  std::vector<int> nodes;
  std::map<std::pair<int, int>, int> bonds;
  std::size_t pos = 0;
  int offset = 0;
  while (pos < spec.size()) {
    auto x = spec.find('x', pos);
    // 'x' inside "I2(..)" cannot occur; labels are digits and parens.
    std::string part = spec.substr(pos, x == std::string::npos ? x : x - pos);
    if (part.empty()) throw std::invalid_argument("empty factor in " + spec);
    CoxeterGraph g = named_graph(part, offset);
    for (int s : g.nodes()) nodes.push_back(s);
    for (const auto& [p, m] : g.bonds()) bonds[p] = m;
    offset = nodes.empty() ? 0 : *std::max_element(nodes.begin(), nodes.end());
    if (x == std::string::npos) break;
    pos = x + 1;
  }
  CoxeterGraph g(nodes, bonds);
  root_system(g);  // validates sphericity eagerly
  return g;
}

// ---------------------------------------------------------------------------
// RootSystem

RootSystem::RootSystem(const CoxeterGraph& g) : graph_(g) {
  const auto& nodes = g.nodes();
  const int n = g.rank();
  for (int i = 0; i < n; ++i) node_index_[nodes[i]] = i;

  // Bilinear form of the geometric representation: B(s,t) = -cos(pi/m_st).
  std::vector<std::vector<double>> B(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    B[i][i] = 1.0;
    for (int j = i + 1; j < n; ++j) {
      int m = g.bond(nodes[i], nodes[j]);
      if (m > 2) B[i][j] = B[j][i] = -std::cos(M_PI / m);
    }
  }

  using Coord = std::vector<double>;
  std::vector<Coord> roots;
  auto quantize = [](const Coord& v) {
    std::string k;
    k.reserve(v.size() * sizeof(int64_t));
    for (double x : v) {
      auto q = static_cast<int64_t>(std::llround(x * 1e9 / 2.0));
      k.append(reinterpret_cast<const char*>(&q), sizeof(q));
    }
    return k;
  };
  auto reflect_coord = [&](int i, const Coord& v) {
    double c = 0;
    for (int j = 0; j < n; ++j) c += v[j] * B[j][i];
    Coord w = v;
    w[i] -= 2 * c;
    return w;
  };

  std::unordered_map<std::string, int> index;
  for (int i = 0; i < n; ++i) {
    Coord e(n, 0.0);
    e[i] = 1.0;
    index[quantize(e)] = i;
    roots.push_back(std::move(e));
  }
  for (std::size_t head = 0; head < roots.size(); ++head) {
    for (int i = 0; i < n; ++i) {
      Coord w = reflect_coord(i, roots[head]);
      auto k = quantize(w);
      if (!index.count(k)) {
        if (static_cast<int>(roots.size()) >= kRootCap)
          throw std::invalid_argument("non-spherical Coxeter graph: " +
                                      g.key());
        index[k] = static_cast<int>(roots.size());
        roots.push_back(std::move(w));
      }
    }
  }

  const int total = static_cast<int>(roots.size());
  action_.assign(n, std::vector<int>(total));
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < total; ++r)
      action_[i][r] = index.at(quantize(reflect_coord(i, roots[r])));
  negate_.resize(total);
  positive_.resize(total);
  for (int r = 0; r < total; ++r) {
    Coord neg(n);
    for (int j = 0; j < n; ++j) neg[j] = -roots[r][j];
    negate_[r] = index.at(quantize(neg));
    positive_[r] = std::all_of(roots[r].begin(), roots[r].end(),
                               [](double x) { return x > -1e-9; });
  }
}

int RootSystem::simple_root(int node) const { return node_index_.at(node); }
int RootSystem::node_position(int node) const { return node_index_.at(node); }
int RootSystem::reflect(int node, int root) const {
  return action_[node_index_.at(node)][root];
}

std::shared_ptr<const RootSystem> root_system(const CoxeterGraph& g) {
  static std::mutex mu;
  static std::unordered_map<std::string, std::shared_ptr<const RootSystem>>
      cache;
  std::lock_guard lock(mu);
  auto& slot = cache[g.key()];
  if (!slot) slot = std::make_shared<RootSystem>(g);
  return slot;
}

// ---------------------------------------------------------------------------
// WeylElement

WeylElement::WeylElement(std::shared_ptr<const RootSystem> rs,
                         std::vector<int32_t> perm)
    : rs_(std::move(rs)), perm_(std::move(perm)) {
  length_ = 0;
  for (int r = 0; r < static_cast<int>(perm_.size()); ++r)
    if (rs_->positive(r) && !rs_->positive(perm_[r])) ++length_;
}

WeylElement WeylElement::identity(std::shared_ptr<const RootSystem> rs) {
  std::vector<int32_t> p(rs->size());
  for (int i = 0; i < static_cast<int>(p.size()); ++i) p[i] = i;
  return WeylElement(std::move(rs), std::move(p));
}

bool WeylElement::is_identity() const { return length_ == 0; }

WeylElement WeylElement::times_generator(int node) const {
  // (w*s)(a) = w(s(a))
  std::vector<int32_t> p(perm_.size());
  for (int r = 0; r < static_cast<int>(p.size()); ++r)
    p[r] = perm_[rs_->reflect(node, r)];
  return WeylElement(rs_, std::move(p));
}

WeylElement WeylElement::generator_times(int node) const {
  std::vector<int32_t> p(perm_.size());
  for (int r = 0; r < static_cast<int>(p.size()); ++r)
    p[r] = rs_->reflect(node, perm_[r]);
  return WeylElement(rs_, std::move(p));
}

WeylElement WeylElement::operator*(const WeylElement& o) const {
  if (rs_ != o.rs_ && !(rs_->graph() == o.rs_->graph()))
    throw std::invalid_argument("mismatched root systems");
  std::vector<int32_t> p(perm_.size());
  for (int r = 0; r < static_cast<int>(p.size()); ++r) p[r] = perm_[o.perm_[r]];
  return WeylElement(rs_, std::move(p));
}

WeylElement WeylElement::inverse() const {
  std::vector<int32_t> p(perm_.size());
  for (int r = 0; r < static_cast<int>(p.size()); ++r) p[perm_[r]] = r;
  return WeylElement(rs_, std::move(p));
}

// ---------------------------------------------------------------------------
// GraphAutomorphism

GraphAutomorphism::GraphAutomorphism(std::map<int, int> mapping)
    : map_(std::move(mapping)) {
  std::set<int> image;
  for (const auto& [s, t] : map_) image.insert(t);
  std::set<int> dom;
  for (const auto& [s, t] : map_) dom.insert(s);
  if (image != dom) throw std::invalid_argument("automorphism is not a bijection");
}

GraphAutomorphism GraphAutomorphism::identity_on(const std::vector<int>& dom) {
  std::map<int, int> m;
  for (int s : dom) m[s] = s;
  return GraphAutomorphism(std::move(m));
}

std::vector<int> GraphAutomorphism::domain() const {
  std::vector<int> d;
  d.reserve(map_.size());
  for (const auto& [s, t] : map_) d.push_back(s);
  return d;
}

int GraphAutomorphism::operator()(int s) const {
  auto it = map_.find(s);
  if (it == map_.end())
    throw std::invalid_argument("node outside automorphism domain");
  return it->second;
}

bool GraphAutomorphism::is_identity() const {
  for (const auto& [s, t] : map_)
    if (s != t) return false;
  return true;
}

int GraphAutomorphism::order() const {
  GraphAutomorphism acc = *this;
  int k = 1;
  while (!acc.is_identity()) {
    acc = compose(acc);
    ++k;
  }
  return k;
}

GraphAutomorphism GraphAutomorphism::compose(
    const GraphAutomorphism& other) const {
  if (domain() != other.domain())
    throw std::invalid_argument("composing automorphisms on different domains");
  std::map<int, int> m;
  for (const auto& [s, t] : other.map_) m[s] = map_.at(t);
  return GraphAutomorphism(std::move(m));
}

GraphAutomorphism GraphAutomorphism::inverse() const {
  std::map<int, int> m;
  for (const auto& [s, t] : map_) m[t] = s;
  return GraphAutomorphism(std::move(m));
}

GraphAutomorphism GraphAutomorphism::restrict(
    const std::vector<int>& sub) const {
  std::map<int, int> m;
  for (int s : sub) m[s] = map_.at(s);
  return GraphAutomorphism(std::move(m));
}

std::string GraphAutomorphism::cycle_notation() const {
  std::set<int> seen;
  std::ostringstream os;
  for (const auto& [s, t] : map_) {
    if (seen.count(s) || s == t) continue;
    os << '(' << s;
    seen.insert(s);
    for (int u = t; u != s; u = map_.at(u)) {
      os << ',' << u;
      seen.insert(u);
    }
    os << ')';
  }
  auto str = os.str();
  return str.empty() ? "id" : str;
}

// ---------------------------------------------------------------------------
// Operations

int positive_root_count(const CoxeterGraph& g, const std::vector<int>& J) {
  if (J.empty()) return 0;
  for (int s : J)
    if (!g.has_node(s)) throw std::invalid_argument("J contains unknown node");
  auto rs = root_system(g.induced(J));
  return rs->num_positive();
}

WeylElement longest_element(const std::shared_ptr<const RootSystem>& rs,
                            const std::vector<int>& J) {
  std::vector<int> js = J;
  std::sort(js.begin(), js.end());
  WeylElement w = WeylElement::identity(rs);
  bool grew = true;
  while (grew) {
    grew = false;
    for (int s : js) {
      // l(ws) > l(w) iff w(alpha_s) is positive
      if (rs->positive(w.map_root(rs->simple_root(s)))) {
        w = w.times_generator(s);
        grew = true;
      }
    }
  }
  return w;
}

GraphAutomorphism opposition_involution(const CoxeterGraph& g,
                                        const std::vector<int>& J) {
  auto rs = root_system(g);
  WeylElement wj = longest_element(rs, J);
  std::map<int, int> m;
  for (int s : J) {
    int image = wj.map_root(rs->simple_root(s));
    int pos_image = rs->negate(image);
    int t = -1;
    for (int u : J)
      if (rs->simple_root(u) == pos_image) t = u;
    if (t < 0) throw std::logic_error("w_J(alpha_s) is not -alpha_t for t in J");
    m[s] = t;
  }
  return GraphAutomorphism(std::move(m));
}

std::vector<WeylElement> enumerate_parabolic(
    const std::shared_ptr<const RootSystem>& rs, const std::vector<int>& J,
    std::size_t cap) {
  std::vector<WeylElement> out{WeylElement::identity(rs)};
  std::set<std::vector<int32_t>> seen{out[0].perm()};
  for (std::size_t head = 0; head < out.size(); ++head) {
    WeylElement w = out[head];
    for (int s : J) {
      WeylElement ws = w.times_generator(s);
      if (seen.insert(ws.perm()).second) {
        if (out.size() >= cap)
          throw CapacityError("parabolic subgroup exceeds enumeration cap");
        out.push_back(std::move(ws));
      }
    }
  }
  return out;
}

bool double_coset_contains_w0(const std::shared_ptr<const RootSystem>& rs,
                              const std::vector<int>& L,
                              const std::vector<int>& R, const WeylElement& w) {
  // Reduce to the minimal double coset representative.
  WeylElement u = w;
  bool reduced = true;
  while (reduced) {
    reduced = false;
    for (int s : L) {
      WeylElement su = u.generator_times(s);
      if (su.length() < u.length()) {
        u = std::move(su);
        reduced = true;
      }
    }
    for (int s : R) {
      WeylElement us = u.times_generator(s);
      if (us.length() < u.length()) {
        u = std::move(us);
        reduced = true;
      }
    }
  }
  WeylElement w0 = longest_element(rs, rs->graph().nodes());
  auto wl = enumerate_parabolic(rs, L);
  auto wr = enumerate_parabolic(rs, R);
  std::set<std::vector<int32_t>> right;
  for (const auto& y : wr) right.insert(y.perm());
  for (const auto& x : wl) {
    // need y with x*u*y = w0, i.e. y = (x*u)^{-1} * w0
    WeylElement y = (x * u).inverse() * w0;
    if (right.count(y.perm())) return true;
  }
  return false;
}

}  // namespace oppdiag
