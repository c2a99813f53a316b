#ifndef MOSCOLAB_SAMPLING_HPP
#define MOSCOLAB_SAMPLING_HPP

// Seeded random points, sets, and catalog functions for the property
// batteries. All draws go through one caller-owned generator.

#include <random>

#include "moscolab/convex.hpp"

namespace moscolab {

using Rng = std::mt19937_64;

// Random point within "radius" R of a natural basepoint of the space.
inline Point random_point(const SpacePtr& space, Rng& rng, double R = 2.0) {
  std::uniform_real_distribution<double> u(-R, R);
  if (auto* e = dynamic_cast<const EuclideanSpace*>(space.get())) {
    std::vector<double> c(e->dim());
    for (double& v : c) v = u(rng);
    return Point(space, std::move(c));
  }
  if (dynamic_cast<const HyperbolicPlane*>(space.get()))
    return hyperbolic_point_xy(space, u(rng), u(rng));
  if (auto* t = dynamic_cast<const MetricTree*>(space.get())) {
    std::uniform_int_distribution<int> pick(0, static_cast<int>(t->edges().size()) - 1);
    int e = pick(rng);
    std::uniform_real_distribution<double> off(0.0, t->edges()[e].length);
    return tree_point(space, e, off(rng));
  }
  auto* p = dynamic_cast<const ProductSpace*>(space.get());
  Point a = random_point(p->left(), rng, R);
  Point b = random_point(p->right(), rng, R);
  return product_point(space, std::move(a), std::move(b));
}

// Random weighted tree with the given number of edges (vertices - 1).
inline SpacePtr random_tree(Rng& rng, int edge_count = 10) {
  std::vector<TreeEdge> edges;
  std::uniform_real_distribution<double> len(0.2, 2.0);
  for (int v = 1; v <= edge_count; ++v) {
    std::uniform_int_distribution<int> parent(0, v - 1);
    edges.push_back({parent(rng), v, len(rng)});
  }
  return make_tree(edge_count + 1, std::move(edges));
}

inline ConvexSet random_convex_set(const SpacePtr& space, Rng& rng, double R = 2.0) {
  std::uniform_int_distribution<int> pick(0, 2);
  switch (pick(rng)) {
    case 0: {
      std::uniform_real_distribution<double> rad(0.1, R);
      return closed_ball(random_point(space, rng, R), rad(rng));
    }
    case 1:
      return geodesic_segment(random_point(space, rng, R),
                              random_point(space, rng, R));
    default:
      return whole_space(space);
  }
}

// Random catalog function; weighted sums appear only when requested since
// they route through the numerical prox.
inline ConvexFunction random_function(const SpacePtr& space, Rng& rng,
                                      bool allow_sums = true, double R = 2.0) {
  std::uniform_int_distribution<int> pick(0, allow_sums ? 5 : 4);
  std::uniform_real_distribution<double> w(0.25, 2.0);
  switch (pick(rng)) {
    case 0: return sq_dist(random_point(space, rng, R), w(rng));
    case 1: return dist_to(random_point(space, rng, R));
    case 2: return indicator(random_convex_set(space, rng, R));
    case 3: return dist_to_set(random_convex_set(space, rng, R));
    case 4: return shifted(sq_dist(random_point(space, rng, R), w(rng)),
                           w(rng) - 1.0);
    default: {
      // At most one term with a restricted domain: two random indicators
      // can have disjoint sets, which would make the sum improper.
      std::vector<std::pair<double, ConvexFunction>> terms;
      std::uniform_int_distribution<int> count(2, 3);
      int m = count(rng);
      bool have_indicator = false;
      for (int i = 0; i < m; ++i) {
        ConvexFunction g = random_function(space, rng, false, R);
        while (have_indicator && std::holds_alternative<FnIndicator>(g.node()))
          g = random_function(space, rng, false, R);
        have_indicator =
            have_indicator || std::holds_alternative<FnIndicator>(g.node());
        terms.emplace_back(w(rng), std::move(g));
      }
      return weighted_sum(std::move(terms));
    }
  }
}

// The spaces every battery runs over: flat, negatively curved, branching,
// and a mixed product.
inline std::vector<SpacePtr> standard_spaces() {
  SpacePtr spider = make_tree(4, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}});
  return {make_euclidean(2), make_hyperbolic2(), spider,
          make_product(make_euclidean(1), spider)};
}

// The 3-leg unit spider used by tree fixtures (hub = vertex 0).
inline SpacePtr spider_tree() {
  return make_tree(4, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}});
}

}  // namespace moscolab

#endif
