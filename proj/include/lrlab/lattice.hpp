#pragma once

#include <algorithm>
#include <cstdint>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace lrlab {

using SiteSet = std::vector<int>;  // sorted, unique site ids

inline SiteSet sorted_unique(SiteSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

inline SiteSet set_union(const SiteSet& a, const SiteSet& b) {
  SiteSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline SiteSet set_intersection(const SiteSet& a, const SiteSet& b) {
  SiteSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline SiteSet set_difference(const SiteSet& a, const SiteSet& b) {
  SiteSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline bool is_subset(const SiteSet& small, const SiteSet& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

inline bool contains(const SiteSet& s, int x) {
  return std::binary_search(s.begin(), s.end(), x);
}

/// Finite metric graph with uniform local dimension q. Immutable after
/// construction; the all-pairs distance table is filled by BFS once.
class SiteGraph {
 public:
  SiteGraph(int n_sites, std::vector<std::pair<int, int>> edges, int q,
            int dim_hint = 1)
      : n_(n_sites), q_(q), dim_hint_(dim_hint) {
    if (n_sites < 1) throw std::invalid_argument("SiteGraph: need at least one site");
    if (q < 2) throw std::invalid_argument("SiteGraph: local dimension q must be >= 2");
    adj_.resize(n_);
    for (auto [a, b] : edges) {
      if (a < 0 || a >= n_ || b < 0 || b >= n_ || a == b)
        throw std::invalid_argument("SiteGraph: invalid edge");
      adj_[a].push_back(b);
      adj_[b].push_back(a);
    }
    compute_distances();
  }

  int size() const { return n_; }
  int q() const { return q_; }
  int dim_hint() const { return dim_hint_; }
  const std::vector<int>& neighbors(int x) const { return adj_[x]; }

  int dist(int x, int y) const { return dist_[static_cast<size_t>(x) * n_ + y]; }

  int diameter() const { return diameter_; }

  SiteSet all_sites() const {
    SiteSet s(n_);
    for (int i = 0; i < n_; ++i) s[i] = i;
    return s;
  }

  /// dist(X, Y) = min over pairs.
  int set_distance(const SiteSet& X, const SiteSet& Y) const {
    if (X.empty() || Y.empty())
      throw std::invalid_argument("set_distance: empty site set");
    int d = diameter_;
    for (int x : X)
      for (int y : Y) d = std::min(d, dist(x, y));
    return d;
  }

  int set_diameter(const SiteSet& Z) const {
    if (Z.empty()) throw std::invalid_argument("set_diameter: empty site set");
    int d = 0;
    for (int x : Z)
      for (int y : Z) d = std::max(d, dist(x, y));
    return d;
  }

  /// X_ell = { x : dist(x, X) <= ell }.
  SiteSet neighborhood(const SiteSet& X, int ell) const {
    SiteSet out;
    for (int z = 0; z < n_; ++z) {
      for (int x : X) {
        if (x < 0 || x >= n_) throw std::invalid_argument("neighborhood: site out of range");
        if (dist(z, x) <= ell) {
          out.push_back(z);
          break;
        }
      }
    }
    return out;
  }

  int ball_size(int x, int r) const {
    int c = 0;
    for (int z = 0; z < n_; ++z)
      if (dist(x, z) <= r) ++c;
    return c;
  }

  /// Smallest kappa with |B_x(r) \ B_x(r-1)| <= kappa r^{D-1} realized on the
  /// finite graph (exact max over centers and radii).
  double surface_regularity_constant(int D) const {
    if (D < 1) throw std::invalid_argument("surface_regularity_constant: D >= 1");
    double kappa = 0.0;
    for (int x = 0; x < n_; ++x) {
      std::vector<int> shell(diameter_ + 1, 0);
      for (int z = 0; z < n_; ++z) ++shell[dist(x, z)];
      for (int r = 1; r <= diameter_; ++r) {
        double rpow = 1.0;
        for (int k = 0; k < D - 1; ++k) rpow *= r;
        kappa = std::max(kappa, shell[r] / rpow);
      }
    }
    return kappa;
  }

 private:
  void compute_distances() {
    dist_.assign(static_cast<size_t>(n_) * n_, -1);
    for (int src = 0; src < n_; ++src) {
      auto* row = &dist_[static_cast<size_t>(src) * n_];
      row[src] = 0;
      std::queue<int> bfs;
      bfs.push(src);
      while (!bfs.empty()) {
        int u = bfs.front();
        bfs.pop();
        for (int v : adj_[u]) {
          if (row[v] < 0) {
            row[v] = row[u] + 1;
            bfs.push(v);
          }
        }
      }
      for (int z = 0; z < n_; ++z) {
        if (row[z] < 0) throw std::invalid_argument("SiteGraph: graph is not connected");
        diameter_ = std::max(diameter_, row[z]);
      }
    }
  }

  int n_;
  int q_;
  int dim_hint_;
  int diameter_ = 0;
  std::vector<std::vector<int>> adj_;
  std::vector<int> dist_;
};

enum class GraphKind { Chain, Box, Torus };

struct GraphSpec {
  GraphKind kind = GraphKind::Chain;
  int D = 1;
  int L = 2;
  int q = 2;
};

/// Hypercubic lattices with L^D sites, row-major coordinate enumeration.
/// Chain is a D=1 box; torus wraps every axis.
inline SiteGraph build_graph(const GraphSpec& spec) {
  if (spec.L < 1) throw std::invalid_argument("build_graph: L >= 1 required");
  if (spec.D < 1) throw std::invalid_argument("build_graph: D >= 1 required");
  if (spec.q < 2) throw std::invalid_argument("build_graph: q >= 2 required");
  int D = spec.kind == GraphKind::Chain ? 1 : spec.D;
  int64_t n = 1;
  for (int k = 0; k < D; ++k) {
    n *= spec.L;
    if (n > (1 << 22)) throw std::invalid_argument("build_graph: lattice too large");
  }
  bool periodic = spec.kind == GraphKind::Torus;
  // site id = row-major index of its coordinate vector
  std::vector<std::pair<int, int>> edges;
  std::vector<int> coord(D, 0);
  for (int64_t id = 0; id < n; ++id) {
    int64_t rest = id;
    for (int k = D - 1; k >= 0; --k) {
      coord[k] = static_cast<int>(rest % spec.L);
      rest /= spec.L;
    }
    for (int k = 0; k < D; ++k) {
      int64_t stride = 1;
      for (int j = k + 1; j < D; ++j) stride *= spec.L;
      if (coord[k] + 1 < spec.L) {
        edges.emplace_back(static_cast<int>(id), static_cast<int>(id + stride));
      } else if (periodic && spec.L > 2) {
        edges.emplace_back(static_cast<int>(id),
                           static_cast<int>(id - stride * (spec.L - 1)));
      }
    }
  }
  if (periodic && spec.L == 2) {
    // L=2 torus coincides with the box; duplicate wrap edges are dropped above.
  }
  return SiteGraph(static_cast<int>(n), std::move(edges), spec.q, D);
}

}  // namespace lrlab
