#ifndef MOSCOLAB_FIXTURES_HPP
#define MOSCOLAB_FIXTURES_HPP

// Named fixtures shared by the property suites, the bundled scenarios
// and the acceptance runs.

#include "moscolab/mosco_metric.hpp"
#include "moscolab/sampling.hpp"

namespace moscolab::fixtures {

// Shrinking-ball scenario: C_n = B((1/n, 0), 1 + 1/n) -> B(0, 1) in R^2.
inline SpacePtr plane() { return make_euclidean(2); }

inline std::function<ConvexSet(long)> shrinking_ball_sets(const SpacePtr& space) {
  return [space](long n) {
    double inv = 1.0 / static_cast<double>(n);
    return closed_ball(euclidean_point(space, {inv, 0.0}), 1.0 + inv);
  };
}

inline ConvexSet unit_ball(const SpacePtr& space) {
  return closed_ball(euclidean_point(space, {0.0, 0.0}), 1.0);
}

inline FunctionSequence shrinking_ball_seq(const SpacePtr& space) {
  auto sets = shrinking_ball_sets(space);
  return FunctionSequence{[sets](long n) { return indicator(sets(n)); },
                          indicator(unit_ball(space))};
}

// Escaping singleton C_n = {n} in R^1: no pointwise limit of anything.
inline std::function<ConvexSet(long)> escaping_sets(const SpacePtr& line) {
  return [line](long n) {
    return closed_ball(euclidean_point(line, {static_cast<double>(n)}), 0.0);
  };
}

inline FunctionSequence escaping_seq(const SpacePtr& line) {
  auto sets = escaping_sets(line);
  return FunctionSequence{[sets](long n) { return indicator(sets(n)); },
                          std::nullopt};
}

// Alternating-ball falsification fixture: C_n = B((-1)^n e1, 1/2) with the
// (wrong) declared limit B(0, 1/2).
inline FunctionSequence alternating_ball_seq(const SpacePtr& space) {
  return FunctionSequence{
      [space](long n) {
        double c = n % 2 == 0 ? 1.0 : -1.0;
        return indicator(closed_ball(euclidean_point(space, {c, 0.0}), 0.5));
      },
      indicator(closed_ball(euclidean_point(space, {0.0, 0.0}), 0.5))};
}

// f_n = (1/2) d(., 1/n)^2 -> (1/2) d(., 0)^2 in R^1.
inline FunctionSequence drifting_sqdist_seq(const SpacePtr& line) {
  return FunctionSequence{
      [line](long n) {
        return sq_dist(euclidean_point(line, {1.0 / static_cast<double>(n)}));
      },
      sq_dist(euclidean_point(line, {0.0}))};
}

// Alternating pair of distinct functions: never rho-Cauchy.
inline FunctionSequence alternating_function_seq(const SpacePtr& line) {
  ConvexFunction a = sq_dist(euclidean_point(line, {0.0}));
  ConvexFunction b = sq_dist(euclidean_point(line, {1.0}));
  return FunctionSequence{[a, b](long n) { return n % 2 == 0 ? a : b; },
                          std::nullopt};
}

// Alternating spider tips A/B, the tree weak-convergence fixture.
inline PointSequence spider_alternating_tips(const SpacePtr& spider,
                                             const Window& window = Window(1, 16)) {
  return PointSequence{[spider](long n) {
                         return tree_vertex(spider, n % 2 == 0 ? 1 : 2);
                       },
                       window};
}

// Symmetric probe line in R^1, small values first (rho weights decay).
inline ProbeGrid line_probes(const SpacePtr& line, double extent = 1.0,
                             double spacing = 0.25) {
  return ProbeGrid::lattice(line, {-extent}, {extent}, spacing);
}

inline ProbeGrid plane_probes(const SpacePtr& space, double extent = 1.0,
                              double spacing = 0.25) {
  return ProbeGrid::lattice(space, {-extent, -extent}, {extent, extent}, spacing);
}

}  // namespace moscolab::fixtures

#endif
