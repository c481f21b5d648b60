#pragma once
// Test-only reference implementations. Nothing here calls into the code
// paths it checks.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <utility>
#include <vector>

#include "neural/graphs.hpp"
#include "neural/rng.hpp"

namespace oracle {

struct Fraction {
  long long num = 0;
  long long den = 1;

  void add(long long n, long long d) {
    num = num * d + n * den;
    den *= d;
    const long long g = std::gcd(std::llabs(num), den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

inline std::vector<std::vector<int>> all_pairs_hops(std::size_t n,
                                                    const std::vector<neural::Edge>& edges) {
  constexpr int kInf = 1 << 20;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, kInf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& e : edges) d[e.a][e.b] = d[e.b][e.a] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  return d;
}

/// Betweenness by explicit enumeration of every shortest s-t path, exact
/// rational arithmetic, unordered pairs counted once.
inline std::vector<Fraction> brute_force_betweenness(std::size_t n,
                                                     const std::vector<neural::Edge>& edges) {
  const auto d = all_pairs_hops(n, edges);
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (const auto& e : edges) adj[e.a][e.b] = adj[e.b][e.a] = true;

  std::vector<Fraction> bc(n);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = s + 1; t < n; ++t) {
      if (d[s][t] >= (1 << 20)) continue;
      long long paths = 0;
      std::vector<long long> through(n, 0);
      std::vector<std::size_t> stack{s};
      // Depth-first walk restricted to geodesic steps.
      auto walk = [&](auto&& self, std::size_t v) -> void {
        if (v == t) {
          ++paths;
          for (std::size_t k = 1; k + 1 < stack.size(); ++k) ++through[stack[k]];
          return;
        }
        for (std::size_t w = 0; w < n; ++w) {
          if (adj[v][w] && d[s][w] == d[s][v] + 1 && d[w][t] == d[s][t] - d[s][w]) {
            stack.push_back(w);
            self(self, w);
            stack.pop_back();
          }
        }
      };
      walk(walk, s);
      for (std::size_t v = 0; v < n; ++v) {
        if (through[v] > 0) bc[v].add(through[v], paths);
      }
    }
  }
  return bc;
}

inline std::size_t argmax_lowest(const std::vector<Fraction>& scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    // a/b > c/d  <=>  a*d > c*b for positive denominators
    if (scores[i].num * scores[best].den > scores[best].num * scores[i].den) best = i;
  }
  return best;
}

/// Random spanning tree plus extra edges with probability p: always connected.
inline std::vector<neural::Edge> connected_graph(neural::SplitMix64& rng, std::size_t n, double p) {
  std::vector<neural::Edge> edges;
  for (std::uint32_t v = 1; v < n; ++v) {
    edges.push_back(neural::Edge::make(v, static_cast<std::uint32_t>(rng.below(v))));
  }
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = a + 1; b < n; ++b)
      if (rng.uniform() < p) edges.push_back(neural::Edge{a, b});
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

/// Erdos-Renyi G(n, p); may be disconnected.
inline std::vector<neural::Edge> random_graph(neural::SplitMix64& rng, std::size_t n, double p) {
  std::vector<neural::Edge> edges;
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = a + 1; b < n; ++b)
      if (rng.uniform() < p) edges.push_back(neural::Edge{a, b});
  return edges;
}

/// Connected component count by union-find.
inline std::size_t components(std::size_t n, const std::vector<neural::Edge>& edges) {
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t count = n;
  for (const auto& e : edges) {
    const auto ra = find(e.a);
    const auto rb = find(e.b);
    if (ra != rb) {
      parent[ra] = rb;
      --count;
    }
  }
  return count;
}

}  // namespace oracle
