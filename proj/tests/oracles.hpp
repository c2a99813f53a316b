#ifndef MOSCOLAB_TESTS_ORACLES_HPP
#define MOSCOLAB_TESTS_ORACLES_HPP

// Independent oracles for the test suite. Everything here recomputes
// quantities from first principles (grid search, DFS on raw edge lists)
// so that library results are checked against code that shares nothing
// with the implementation under test.

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <vector>

namespace oracles {

// Two-stage grid minimization of a 1-D objective over [lo, hi]:
// coarse pass, then a fine pass around the best coarse cell. With
// fine = 1e-6 the argmin is located to 1e-6 and, for Lipschitz-plus-
// quadratic objectives, the value to ~1e-12 near the minimum.
inline double grid_min(const std::function<double(double)>& obj, double lo,
                       double hi, double coarse = 1e-3, double fine = 1e-6) {
  double best_z = lo;
  double best = std::numeric_limits<double>::infinity();
  for (double z = lo; z <= hi + 0.5 * coarse; z += coarse) {
    double zc = std::min(z, hi);
    double v = obj(zc);
    if (v < best) {
      best = v;
      best_z = zc;
    }
  }
  double flo = std::max(lo, best_z - 2.0 * coarse);
  double fhi = std::min(hi, best_z + 2.0 * coarse);
  for (double z = flo; z <= fhi + 0.5 * fine; z += fine) {
    double v = obj(std::min(z, hi));
    if (v < best) best = v;
  }
  return best;
}

// Moreau envelope of f(z) = |z| on the line, by grid minimization of
// |z| + (x - z)^2 / (2 lambda). The search interval [x - |x| - 1, x + |x| + 1]
// always brackets the minimizer (it lies between 0 and x).
inline double huber_envelope(double x, double lambda) {
  double r = std::abs(x) + 1.0;
  return grid_min(
      [x, lambda](double z) {
        return std::abs(z) + (x - z) * (x - z) / (2.0 * lambda);
      },
      x - r, x + r);
}

// Closed form of the same envelope, as a second cross-check.
inline double huber_formula(double x, double lambda) {
  double a = std::abs(x);
  if (a <= lambda) return a * a / (2.0 * lambda);
  return a - lambda / 2.0;
}

// ---------------------------------------------------------------------------
// Trees, from the raw edge list

struct Edge {
  int u, v;
  double len;
};

// Position on edge `e`, offset from the u-endpoint.
struct TreePos {
  int edge;
  double offset;
};

// Vertex-to-vertex distance by depth-first search on an adjacency map,
// no precomputed tables.
inline double tree_vertex_distance(const std::vector<Edge>& edges, int a, int b) {
  std::map<int, std::vector<std::pair<int, double>>> adj;
  for (const Edge& e : edges) {
    adj[e.u].push_back({e.v, e.len});
    adj[e.v].push_back({e.u, e.len});
  }
  std::vector<std::pair<int, double>> stack{{a, 0.0}};
  std::map<int, double> dist{{a, 0.0}};
  while (!stack.empty()) {
    auto [v, d] = stack.back();
    stack.pop_back();
    if (v == b) return d;
    for (auto [w, len] : adj[v])
      if (!dist.count(w)) {
        dist[w] = d + len;
        stack.push_back({w, d + len});
      }
  }
  return std::numeric_limits<double>::infinity();
}

// Distance between two edge positions: the best of the four
// endpoint-to-endpoint routes, or the direct offset difference when
// both points share an edge.
inline double tree_distance(const std::vector<Edge>& edges, const TreePos& p,
                            const TreePos& q) {
  if (p.edge == q.edge) return std::abs(p.offset - q.offset);
  const Edge& pe = edges[p.edge];
  const Edge& qe = edges[q.edge];
  double pu = p.offset, pv = pe.len - p.offset;
  double qu = q.offset, qv = qe.len - q.offset;
  double best = std::numeric_limits<double>::infinity();
  for (auto [pc, pd] : {std::pair{pe.u, pu}, std::pair{pe.v, pv}})
    for (auto [qc, qd] : {std::pair{qe.u, qu}, std::pair{qe.v, qv}})
      best = std::min(best, pd + tree_vertex_distance(edges, pc, qc) + qd);
  return best;
}

// Minimax value min_x max_i d(x, p_i)^2 over the whole tree, by a grid
// walk along every edge. Returns the best value found; `step` bounds the
// resolution of the argmin.
inline double tree_minimax_value(const std::vector<Edge>& edges,
                                 const std::vector<TreePos>& pts,
                                 double step = 1e-4) {
  double best = std::numeric_limits<double>::infinity();
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    for (double off = 0.0; off <= edges[e].len + 0.5 * step; off += step) {
      TreePos x{e, std::min(off, edges[e].len)};
      double m = 0.0;
      for (const TreePos& p : pts) {
        double d = tree_distance(edges, x, p);
        m = std::max(m, d * d);
      }
      best = std::min(best, m);
    }
  }
  return best;
}

// Same minimax grid, returning the best position.
inline TreePos tree_minimax_argmin(const std::vector<Edge>& edges,
                                   const std::vector<TreePos>& pts,
                                   double step = 1e-4) {
  TreePos best_pos{0, 0.0};
  double best = std::numeric_limits<double>::infinity();
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    for (double off = 0.0; off <= edges[e].len + 0.5 * step; off += step) {
      TreePos x{e, std::min(off, edges[e].len)};
      double m = 0.0;
      for (const TreePos& p : pts) {
        double d = tree_distance(edges, x, p);
        m = std::max(m, d * d);
      }
      if (m < best) {
        best = m;
        best_pos = x;
      }
    }
  }
  return best_pos;
}

// ---------------------------------------------------------------------------
// Euclidean minimax center by grid refinement (dimension 2)

inline std::vector<double> plane_minimax_center(
    const std::vector<std::vector<double>>& pts, int rounds = 6) {
  double lo0 = pts[0][0], hi0 = pts[0][0], lo1 = pts[0][1], hi1 = pts[0][1];
  for (const auto& p : pts) {
    lo0 = std::min(lo0, p[0]);
    hi0 = std::max(hi0, p[0]);
    lo1 = std::min(lo1, p[1]);
    hi1 = std::max(hi1, p[1]);
  }
  std::vector<double> best_c{0.5 * (lo0 + hi0), 0.5 * (lo1 + hi1)};
  for (int r = 0; r < rounds; ++r) {
    double span0 = (hi0 - lo0) / 40.0, span1 = (hi1 - lo1) / 40.0;
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> next = best_c;
    for (double c0 = lo0; c0 <= hi0 + 0.5 * span0; c0 += span0)
      for (double c1 = lo1; c1 <= hi1 + 0.5 * span1; c1 += span1) {
        double m = 0.0;
        for (const auto& p : pts) {
          double d0 = p[0] - c0, d1 = p[1] - c1;
          m = std::max(m, d0 * d0 + d1 * d1);
        }
        if (m < best) {
          best = m;
          next = {c0, c1};
        }
      }
    best_c = next;
    lo0 = best_c[0] - 2.0 * span0;
    hi0 = best_c[0] + 2.0 * span0;
    lo1 = best_c[1] - 2.0 * span1;
    hi1 = best_c[1] + 2.0 * span1;
  }
  return best_c;
}

// ---------------------------------------------------------------------------
// Hyperboloid distance the textbook way: acosh of the Minkowski pairing.
// Accurate for well-separated points, ill-conditioned near coincidence,
// which is exactly what the library formula is supposed to fix.
inline double hyperboloid_distance_naive(const std::array<double, 3>& a,
                                         const std::array<double, 3>& b) {
  double pairing = a[0] * b[0] - a[1] * b[1] - a[2] * b[2];
  return std::acosh(std::max(1.0, pairing));
}

}  // namespace oracles

#endif
