#ifndef MOSCOLAB_CONVEX_HPP
#define MOSCOLAB_CONVEX_HPP

// Closed catalog of proper convex lsc functions and closed convex sets
// on the supported spaces, with metric projections and exact proximal
// mappings where known.

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "moscolab/space.hpp"

namespace moscolab {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Membership tolerance for indicators: a point within this distance of a
// set counts as inside it.
constexpr double kMembershipTol = 1e-9;

// ---------------------------------------------------------------------------
// Convex closed sets

struct ClosedBall {
  Point center;
  double radius = 0.0;
};

struct GeodesicSegmentSet {
  Point a, b;
};

struct SubtreeSet {
  SpacePtr space;
  std::vector<int> vertices;  // sorted, connected
};

struct HalfspaceSet {  // {x : <normal, x> <= offset}, Euclidean only
  SpacePtr space;
  std::vector<double> normal;
  double offset = 0.0;
};

struct WholeSpaceSet {
  SpacePtr space;
};

class ConvexSet {
 public:
  using Node = std::variant<ClosedBall, GeodesicSegmentSet, SubtreeSet,
                            HalfspaceSet, WholeSpaceSet>;

  explicit ConvexSet(Node node) : node_(std::make_shared<Node>(std::move(node))) {}

  const Node& node() const { return *node_; }

  SpacePtr space() const {
    return std::visit(
        [](const auto& s) -> SpacePtr {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, ClosedBall>) return s.center.space();
          else if constexpr (std::is_same_v<T, GeodesicSegmentSet>) return s.a.space();
          else return s.space;
        },
        *node_);
  }

 private:
  std::shared_ptr<const Node> node_;
};

inline ConvexSet closed_ball(Point center, double radius) {
  if (!(radius >= 0.0)) throw DomainError("ball radius must be >= 0");
  return ConvexSet(ClosedBall{std::move(center), radius});
}

inline ConvexSet geodesic_segment(Point a, Point b) {
  detail::check_same_space(a, b);
  return ConvexSet(GeodesicSegmentSet{std::move(a), std::move(b)});
}

inline ConvexSet subtree(SpacePtr space, std::vector<int> vertices) {
  auto* t = dynamic_cast<const MetricTree*>(space.get());
  if (!t) throw DomainError("subtree sets require a metric tree space");
  if (vertices.empty()) throw ImproperFunction("subtree must be nonempty");
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  std::set<int> members(vertices.begin(), vertices.end());
  for (int v : vertices)
    if (v < 0 || v >= t->vertex_count())
      throw DomainError("subtree vertex out of range");
  // Connectivity: the tree path between any two members must stay inside.
  for (int a : vertices) {
    for (int b : vertices) {
      if (a >= b) continue;
      for (int w : t->vertex_path(a, b))
        if (!members.count(w))
          throw DomainError("subtree vertex set is not connected");
    }
  }
  return ConvexSet(SubtreeSet{std::move(space), std::move(vertices)});
}

inline ConvexSet halfspace(SpacePtr space, std::vector<double> normal, double offset) {
  auto* e = dynamic_cast<const EuclideanSpace*>(space.get());
  if (!e) throw DomainError("halfspaces are Euclidean only");
  if (static_cast<int>(normal.size()) != e->dim())
    throw DomainError("halfspace normal has wrong dimension");
  double nn = 0.0;
  for (double c : normal) nn += c * c;
  if (!(nn > 0.0)) throw DomainError("halfspace normal must be nonzero");
  return ConvexSet(HalfspaceSet{std::move(space), std::move(normal), offset});
}

inline ConvexSet whole_space(SpacePtr space) {
  return ConvexSet(WholeSpaceSet{std::move(space)});
}

// Metric projection onto a closed convex set.
inline Point project(const ConvexSet& C, const Point& x);

namespace detail {

inline Point project_segment(const GeodesicSegmentSet& s, const Point& x) {
  // d(x, gamma(t)) is convex in t; golden-section to machine precision.
  Geodesic g(s.a, s.b);
  double lo = 0.0, hi = 1.0;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double t1 = hi - phi * (hi - lo), t2 = lo + phi * (hi - lo);
  double f1 = distance(x, g(t1)), f2 = distance(x, g(t2));
  for (int i = 0; i < 120 && hi - lo > 1e-15; ++i) {
    if (f1 <= f2) {
      hi = t2;
      t2 = t1;
      f2 = f1;
      t1 = hi - phi * (hi - lo);
      f1 = distance(x, g(t1));
    } else {
      lo = t1;
      t1 = t2;
      f1 = f2;
      t2 = lo + phi * (hi - lo);
      f2 = distance(x, g(t2));
    }
  }
  return g((lo + hi) / 2.0);
}

inline Point project_subtree(const SubtreeSet& s, const Point& x) {
  auto* t = static_cast<const MetricTree*>(s.space.get());
  std::set<int> members(s.vertices.begin(), s.vertices.end());
  const TreeCoord c = x.tree();
  const TreeEdge& e = t->edges()[c.edge];
  if (members.count(e.u) && members.count(e.v)) return x;
  if (members.count(e.u) && c.offset <= 0.0) return x;
  if (members.count(e.v) && c.offset >= e.length) return x;
  // Closest point is the nearest member vertex (edges are in the subtree
  // only when both endpoints are).
  int best = s.vertices.front();
  double best_d = kInf;
  for (int w : s.vertices) {
    double d = distance(x, tree_vertex(s.space, w));
    if (d < best_d) {
      best_d = d;
      best = w;
    }
  }
  return tree_vertex(s.space, best);
}

}  // namespace detail

inline Point project(const ConvexSet& C, const Point& x) {
  return std::visit(
      [&](const auto& s) -> Point {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ClosedBall>) {
          double d = distance(x, s.center);
          if (d <= s.radius) return x;
          return geodesic_point(s.center, x, s.radius / d);
        } else if constexpr (std::is_same_v<T, GeodesicSegmentSet>) {
          return detail::project_segment(s, x);
        } else if constexpr (std::is_same_v<T, SubtreeSet>) {
          return detail::project_subtree(s, x);
        } else if constexpr (std::is_same_v<T, HalfspaceSet>) {
          const auto& a = x.euclidean();
          double dot = 0.0, nn = 0.0;
          for (std::size_t i = 0; i < s.normal.size(); ++i) {
            dot += s.normal[i] * a[i];
            nn += s.normal[i] * s.normal[i];
          }
          double excess = (dot - s.offset) / nn;
          if (excess <= 0.0) return x;
          std::vector<double> c(a);
          for (std::size_t i = 0; i < c.size(); ++i) c[i] -= excess * s.normal[i];
          return euclidean_point(x.space(), std::move(c));
        } else {  // WholeSpaceSet
          return x;
        }
      },
      C.node());
}

inline double set_distance(const ConvexSet& C, const Point& x) {
  return distance(x, project(C, x));
}

inline bool contains(const ConvexSet& C, const Point& x,
                     double tol = kMembershipTol) {
  return set_distance(C, x) <= tol;
}

// ---------------------------------------------------------------------------
// Convex functions

class ConvexFunction;

struct FnSquaredDistance {  // (w/2) d(., p)^2
  Point p;
  double weight = 1.0;
};
struct FnDistanceTo {  // d(., p)
  Point p;
};
struct FnIndicator {  // iota_C
  ConvexSet set;
};
struct FnDistanceToSet {  // d(., C)
  ConvexSet set;
};
struct FnWeightedSum;
struct FnShifted;
struct FnEnvelopeOf;

class ConvexFunction {
 public:
  using Node = std::variant<FnSquaredDistance, FnDistanceTo, FnIndicator,
                            FnDistanceToSet, FnWeightedSum, FnShifted,
                            FnEnvelopeOf>;

  // Bodies live below: the variant must not be instantiated before the
  // recursive alternatives are complete types.
  explicit ConvexFunction(std::shared_ptr<const Node> node);

  const Node& node() const;
  SpacePtr space() const;

 private:
  std::shared_ptr<const Node> node_;
};

struct FnWeightedSum {
  std::vector<std::pair<double, ConvexFunction>> terms;  // weights > 0
};
struct FnShifted {  // f + c
  ConvexFunction inner;
  double c = 0.0;
};
struct FnEnvelopeOf {  // Moreau envelope f_mu
  ConvexFunction inner;
  double mu = 0.0;
};

inline ConvexFunction::ConvexFunction(std::shared_ptr<const Node> node)
    : node_(std::move(node)) {}

inline const ConvexFunction::Node& ConvexFunction::node() const {
  return *node_;
}

namespace detail {
inline ConvexFunction make_fn(ConvexFunction::Node node) {
  return ConvexFunction(
      std::make_shared<const ConvexFunction::Node>(std::move(node)));
}
}  // namespace detail

inline SpacePtr ConvexFunction::space() const {
  return std::visit(
      [](const auto& f) -> SpacePtr {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, FnSquaredDistance>) return f.p.space();
        else if constexpr (std::is_same_v<T, FnDistanceTo>) return f.p.space();
        else if constexpr (std::is_same_v<T, FnIndicator>) return f.set.space();
        else if constexpr (std::is_same_v<T, FnDistanceToSet>) return f.set.space();
        else if constexpr (std::is_same_v<T, FnWeightedSum>)
          return f.terms.front().second.space();
        else
          return f.inner.space();
      },
      *node_);
}

inline ConvexFunction sq_dist(Point p, double weight = 1.0) {
  if (!(weight > 0.0)) throw DomainError("sq_dist weight must be > 0");
  return detail::make_fn(FnSquaredDistance{std::move(p), weight});
}

inline ConvexFunction dist_to(Point p) {
  return detail::make_fn(FnDistanceTo{std::move(p)});
}

inline ConvexFunction indicator(ConvexSet C) {
  return detail::make_fn(FnIndicator{std::move(C)});
}

inline ConvexFunction dist_to_set(ConvexSet C) {
  return detail::make_fn(FnDistanceToSet{std::move(C)});
}

inline ConvexFunction weighted_sum(
    std::vector<std::pair<double, ConvexFunction>> terms) {
  if (terms.empty()) throw DomainError("weighted_sum needs at least one term");
  for (const auto& [w, f] : terms) {
    if (!(w > 0.0)) throw DomainError("weighted_sum weights must be > 0");
    if (!f.space()->same(*terms.front().second.space()))
      throw SpaceMismatch("weighted_sum terms on different spaces");
  }
  return detail::make_fn(FnWeightedSum{std::move(terms)});
}

inline ConvexFunction shifted(ConvexFunction f, double c) {
  return detail::make_fn(FnShifted{std::move(f), c});
}

inline ConvexFunction envelope_of(ConvexFunction f, double mu) {
  if (!(mu > 0.0)) throw DomainError("envelope_of needs mu > 0");
  return detail::make_fn(FnEnvelopeOf{std::move(f), mu});
}

// Extended-real evaluation; EnvelopeOf is resolved numerically, so the
// definition lives with the prox engine (include moscolab/prox.hpp).
double evaluate(const ConvexFunction& f, const Point& x);

// A point where f is finite. The catalog guarantees properness.
inline Point dom_sample(const ConvexFunction& f) {
  return std::visit(
      [](const auto& fn) -> Point {
        using T = std::decay_t<decltype(fn)>;
        if constexpr (std::is_same_v<T, FnSquaredDistance>) return fn.p;
        else if constexpr (std::is_same_v<T, FnDistanceTo>) return fn.p;
        else if constexpr (std::is_same_v<T, FnIndicator> ||
                           std::is_same_v<T, FnDistanceToSet>) {
          return std::visit(
              [](const auto& s) -> Point {
                using S = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<S, ClosedBall>) return s.center;
                else if constexpr (std::is_same_v<S, GeodesicSegmentSet>) return s.a;
                else if constexpr (std::is_same_v<S, SubtreeSet>)
                  return tree_vertex(s.space, s.vertices.front());
                else if constexpr (std::is_same_v<S, HalfspaceSet>) {
                  // Point on the bounding hyperplane: offset * n / |n|^2.
                  double nn = 0.0;
                  for (double c : s.normal) nn += c * c;
                  std::vector<double> p(s.normal);
                  for (double& c : p) c *= s.offset / nn;
                  return euclidean_point(s.space, std::move(p));
                } else {  // WholeSpaceSet: need some point; Euclidean origin
                          // or a descriptor-independent sample.
                  if (auto* e = dynamic_cast<const EuclideanSpace*>(s.space.get()))
                    return euclidean_point(s.space, std::vector<double>(e->dim(), 0.0));
                  if (dynamic_cast<const HyperbolicPlane*>(s.space.get()))
                    return hyperbolic_point_xy(s.space, 0.0, 0.0);
                  if (dynamic_cast<const MetricTree*>(s.space.get()))
                    return tree_vertex(s.space, 0);
                  auto* p = dynamic_cast<const ProductSpace*>(s.space.get());
                  return product_point(
                      s.space, dom_sample(indicator(whole_space(p->left()))),
                      dom_sample(indicator(whole_space(p->right()))));
                }
              },
              fn.set.node());
        } else if constexpr (std::is_same_v<T, FnWeightedSum>) {
          // Each term is finite on its own dom; sums of catalog kinds share
          // the intersection only when indicators agree. Use the first term
          // with a bounded domain, else the first anchor.
          for (const auto& [w, g] : fn.terms) {
            (void)w;
            if (std::holds_alternative<FnIndicator>(g.node()))
              return dom_sample(g);
          }
          return dom_sample(fn.terms.front().second);
        } else if constexpr (std::is_same_v<T, FnShifted>) {
          return dom_sample(fn.inner);
        } else {  // FnEnvelopeOf: finite everywhere
          return dom_sample(fn.inner);
        }
      },
      f.node());
}

// Exact proximal mapping where the catalog knows one; nullopt routes the
// call to the numerical engine.
inline std::optional<Point> exact_prox(const ConvexFunction& f, const Point& x,
                                       double lambda) {
  if (!(lambda > 0.0)) throw DomainError("prox needs lambda > 0");
  return std::visit(
      [&](const auto& fn) -> std::optional<Point> {
        using T = std::decay_t<decltype(fn)>;
        if constexpr (std::is_same_v<T, FnSquaredDistance>) {
          double t = fn.weight * lambda / (1.0 + fn.weight * lambda);
          return geodesic_point(x, fn.p, t);
        } else if constexpr (std::is_same_v<T, FnDistanceTo>) {
          double d = distance(x, fn.p);
          if (d == 0.0) return x;
          return geodesic_point(x, fn.p, std::min(1.0, lambda / d));
        } else if constexpr (std::is_same_v<T, FnIndicator>) {
          return project(fn.set, x);
        } else if constexpr (std::is_same_v<T, FnDistanceToSet>) {
          Point p = project(fn.set, x);
          double d = distance(x, p);
          if (d <= kMembershipTol) return x;
          return geodesic_point(x, p, std::min(1.0, lambda / d));
        } else if constexpr (std::is_same_v<T, FnShifted>) {
          return exact_prox(fn.inner, x, lambda);
        } else {
          // WeightedSum, EnvelopeOf: numerical path.
          return std::nullopt;
        }
      },
      f.node());
}

// (1-t) f(x) + t f(y) - f(gamma(t)); +inf (vacuous) when an endpoint is +inf.
// Defined with the prox engine since evaluation may hit EnvelopeOf.
double convexity_residual(const ConvexFunction& f, const Point& x,
                          const Point& y, double t);

// ---------------------------------------------------------------------------
// Function sequences n |-> f_n, n >= 1

struct FunctionSequence {
  std::function<ConvexFunction(long)> at;
  std::optional<ConvexFunction> limit;

  SpacePtr space() const { return at(1).space(); }
};

}  // namespace moscolab

#endif
