// Independent reference implementations used only by tests.
//
// The Cayley-graph oracle below builds the Weyl group directly from the
// Coxeter matrix, representing elements as reflection matrices of the
// geometric representation and deduplicating on quantized entries. It shares
// no code with the library's root-permutation machinery.
#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace oracle {

struct GroupFacts {
  long long order;
  int longest_length;  // BFS depth = l(w0)
};

/// coxeter_m[i][j] = m_ij (1 on the diagonal, 2 when commuting).
inline GroupFacts cayley_bfs(const std::vector<std::vector<int>>& coxeter_m,
                             long long cap = 2000000) {
  const int n = static_cast<int>(coxeter_m.size());
  using Mat = std::vector<double>;  // row-major n*n
  auto mul = [&](const Mat& a, const Mat& b) {
    Mat c(n * n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        double v = a[i * n + k];
        if (v == 0.0) continue;
        for (int j = 0; j < n; ++j) c[i * n + j] += v * b[k * n + j];
      }
    return c;
  };
  auto key = [&](const Mat& a) {
    std::string s;
    s.reserve(n * n * 8);
    for (double x : a) {
      auto q = static_cast<int64_t>(std::llround(x * 1e8));
      s.append(reinterpret_cast<const char*>(&q), sizeof(q));
    }
    return s;
  };
  // Simple reflections in the geometric representation:
  // sigma_i(alpha_j) = alpha_j + 2 cos(pi/m_ij) alpha_i  (j != i).
  std::vector<Mat> gens;
  for (int i = 0; i < n; ++i) {
    Mat g(n * n, 0.0);
    for (int j = 0; j < n; ++j) g[j * n + j] = 1.0;
    for (int j = 0; j < n; ++j) {
      if (j == i)
        g[i * n + i] = -1.0;
      else
        g[i * n + j] += 2.0 * std::cos(M_PI / coxeter_m[i][j]);
    }
    gens.push_back(std::move(g));
  }
  Mat id(n * n, 0.0);
  for (int j = 0; j < n; ++j) id[j * n + j] = 1.0;
  std::map<std::string, int> depth{{key(id), 0}};
  std::deque<Mat> queue{id};
  int max_depth = 0;
  long long count = 1;
  while (!queue.empty()) {
    Mat w = std::move(queue.front());
    queue.pop_front();
    int d = depth.at(key(w));
    for (const auto& g : gens) {
      Mat wg = mul(w, g);
      auto k = key(wg);
      if (depth.emplace(k, d + 1).second) {
        max_depth = std::max(max_depth, d + 1);
        ++count;
        if (count > cap) throw std::runtime_error("oracle cap exceeded");
        queue.push_back(std::move(wg));
      }
    }
  }
  return {count, max_depth};
}

inline std::vector<std::vector<int>> chain_matrix(int n, int last_bond) {
  std::vector<std::vector<int>> m(n, std::vector<int>(n, 2));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  for (int i = 0; i + 1 < n; ++i) m[i][i + 1] = m[i + 1][i] = 3;
  if (n >= 2) m[n - 2][n - 1] = m[n - 1][n - 2] = last_bond;
  return m;
}

}  // namespace oracle
