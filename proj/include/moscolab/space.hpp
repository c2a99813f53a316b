#ifndef MOSCOLAB_SPACE_HPP
#define MOSCOLAB_SPACE_HPP

// Concrete Hadamard spaces with exact distances and geodesics:
// Euclidean R^d, the hyperbolic plane (hyperboloid model), weighted
// metric trees, and 2-products of any of these.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <queue>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "moscolab/errors.hpp"

namespace moscolab {

class Space;
using SpacePtr = std::shared_ptr<const Space>;

// Point on a metric tree: position `offset` along edge `edge`, measured
// from the edge's u-endpoint. Vertices are canonicalized, see MetricTree.
struct TreeCoord {
  int edge = 0;
  double offset = 0.0;
};

class Point {
 public:
  using Payload =
      std::variant<std::vector<double>,   // Euclidean coordinates
                   std::array<double, 3>, // hyperboloid (x0, x1, x2)
                   TreeCoord,             // metric tree
                   std::vector<Point>>;   // product components (size 2)

  Point() = default;
  Point(SpacePtr space, Payload payload)
      : space_(std::move(space)), payload_(std::move(payload)) {}

  const SpacePtr& space() const { return space_; }
  const Payload& payload() const { return payload_; }

  const std::vector<double>& euclidean() const {
    return std::get<std::vector<double>>(payload_);
  }
  const std::array<double, 3>& hyperboloid() const {
    return std::get<std::array<double, 3>>(payload_);
  }
  const TreeCoord& tree() const { return std::get<TreeCoord>(payload_); }
  const std::vector<Point>& components() const {
    return std::get<std::vector<Point>>(payload_);
  }

 private:
  SpacePtr space_;
  Payload payload_;
};

class Space : public std::enable_shared_from_this<Space> {
 public:
  virtual ~Space() = default;

  virtual double distance(const Point& x, const Point& y) const = 0;

  // Constant-speed geodesic evaluation, t in [0,1].
  virtual Point geodesic_point(const Point& x, const Point& y, double t) const = 0;

  // Structural equality of descriptors (points loaded from different
  // documents must still compare as living in the same space).
  virtual bool same(const Space& other) const = 0;

  virtual std::string describe() const = 0;
};

namespace detail {

inline void check_same_space(const Point& x, const Point& y) {
  if (x.space().get() == y.space().get() && x.space()) return;
  if (!x.space() || !y.space() || !x.space()->same(*y.space()))
    throw SpaceMismatch("points belong to different spaces");
}

inline void check_unit_interval(double t) {
  if (!(t >= 0.0 && t <= 1.0))
    throw DomainError("geodesic parameter outside [0,1]");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Euclidean R^d

class EuclideanSpace final : public Space {
 public:
  explicit EuclideanSpace(int dim) : dim_(dim) {
    if (dim < 1) throw DomainError("Euclidean dimension must be >= 1");
  }

  int dim() const { return dim_; }

  double distance(const Point& x, const Point& y) const override {
    detail::check_same_space(x, y);
    const auto& a = x.euclidean();
    const auto& b = y.euclidean();
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
  }

  Point geodesic_point(const Point& x, const Point& y, double t) const override {
    detail::check_same_space(x, y);
    detail::check_unit_interval(t);
    const auto& a = x.euclidean();
    const auto& b = y.euclidean();
    std::vector<double> c(dim_);
    for (int i = 0; i < dim_; ++i) c[i] = (1.0 - t) * a[i] + t * b[i];
    return Point(shared_from_this(), std::move(c));
  }

  bool same(const Space& other) const override {
    auto* e = dynamic_cast<const EuclideanSpace*>(&other);
    return e && e->dim_ == dim_;
  }

  std::string describe() const override {
    return "euclidean(" + std::to_string(dim_) + ")";
  }

 private:
  int dim_;
};

inline SpacePtr make_euclidean(int dim) {
  return std::make_shared<EuclideanSpace>(dim);
}

inline Point euclidean_point(const SpacePtr& space, std::vector<double> coords) {
  auto* e = dynamic_cast<const EuclideanSpace*>(space.get());
  if (!e) throw DomainError("euclidean_point: not a Euclidean space");
  if (static_cast<int>(coords.size()) != e->dim())
    throw DomainError("euclidean_point: wrong coordinate count");
  return Point(space, std::move(coords));
}

// ---------------------------------------------------------------------------
// Hyperbolic plane, hyperboloid model
//
// Sheet {x : x0^2 - x1^2 - x2^2 = 1, x0 > 0} with bilinear form
// B(x,y) = x0 y0 - x1 y1 - x2 y2 and d(x,y) = arccosh(B(x,y)).
// The arccosh argument is clamped at 1 to absorb roundoff.

class HyperbolicPlane final : public Space {
 public:
  static constexpr double kSheetTol = 1e-12;

  static double form(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return a[0] * b[0] - a[1] * b[1] - a[2] * b[2];
  }

  static std::array<double, 3> renormalize(std::array<double, 3> v) {
    double q = form(v, v);
    if (!(q > 0.0) || v[0] <= 0.0)
      throw DomainError("hyperboloid point off the upper sheet");
    double s = 1.0 / std::sqrt(q);
    v[0] *= s;
    v[1] *= s;
    v[2] *= s;
    return v;
  }

  double distance(const Point& x, const Point& y) const override {
    detail::check_same_space(x, y);
    // cosh d = B(x,y) = 1 + h with h = -B(x-y, x-y)/2; the difference
    // form avoids the arccosh cancellation near coincident points.
    const auto& a = x.hyperboloid();
    const auto& b = y.hyperboloid();
    double v0 = a[0] - b[0], v1 = a[1] - b[1], v2 = a[2] - b[2];
    double h = 0.5 * (v1 * v1 + v2 * v2 - v0 * v0);
    if (h <= 0.0) return 0.0;
    return std::asinh(std::sqrt(h * (h + 2.0)));
  }

  Point geodesic_point(const Point& x, const Point& y, double t) const override {
    detail::check_same_space(x, y);
    detail::check_unit_interval(t);
    double d = distance(x, y);
    if (d < 1e-15) return x;
    const auto& a = x.hyperboloid();
    const auto& b = y.hyperboloid();
    double sa = std::sinh((1.0 - t) * d) / std::sinh(d);
    double sb = std::sinh(t * d) / std::sinh(d);
    std::array<double, 3> c{sa * a[0] + sb * b[0], sa * a[1] + sb * b[1],
                            sa * a[2] + sb * b[2]};
    return Point(shared_from_this(), renormalize(c));
  }

  bool same(const Space& other) const override {
    return dynamic_cast<const HyperbolicPlane*>(&other) != nullptr;
  }

  std::string describe() const override { return "hyperbolic2"; }
};

inline SpacePtr make_hyperbolic2() { return std::make_shared<HyperbolicPlane>(); }

inline Point hyperbolic_point(const SpacePtr& space, double x0, double x1, double x2) {
  if (!dynamic_cast<const HyperbolicPlane*>(space.get()))
    throw DomainError("hyperbolic_point: not the hyperbolic plane");
  return Point(space, HyperbolicPlane::renormalize({x0, x1, x2}));
}

// Lift plane coordinates (u1,u2) onto the sheet.
inline Point hyperbolic_point_xy(const SpacePtr& space, double u1, double u2) {
  return hyperbolic_point(space, std::sqrt(1.0 + u1 * u1 + u2 * u2), u1, u2);
}

// ---------------------------------------------------------------------------
// Weighted metric tree

struct TreeEdge {
  int u = 0;
  int v = 0;
  double length = 0.0;
};

class MetricTree final : public Space {
 public:
  MetricTree(int vertex_count, std::vector<TreeEdge> edges)
      : nv_(vertex_count), edges_(std::move(edges)) {
    validate();
    build_tables();
  }

  int vertex_count() const { return nv_; }
  const std::vector<TreeEdge>& edges() const { return edges_; }
  const std::vector<int>& incident_edges(int v) const { return incident_[v]; }
  double vertex_distance(int u, int v) const { return vdist_[u][v]; }

  // Shortest path between vertices as a vertex list (inclusive).
  std::vector<int> vertex_path(int u, int v) const {
    std::vector<int> path{u};
    while (u != v) {
      u = next_[u][v];
      path.push_back(u);
    }
    return path;
  }

  int edge_between(int u, int v) const {
    for (int e : incident_[u]) {
      if (edges_[e].u == u && edges_[e].v == v) return e;
      if (edges_[e].v == u && edges_[e].u == v) return e;
    }
    throw DomainError("edge_between: vertices not adjacent");
  }

  // Canonical representation: a point sitting on a vertex is rewritten onto
  // the smallest-id edge incident to that vertex, so equality is exact.
  TreeCoord canonicalize(TreeCoord c) const {
    if (c.edge < 0 || c.edge >= static_cast<int>(edges_.size()))
      throw DomainError("tree point references unknown edge");
    const TreeEdge& e = edges_[c.edge];
    if (c.offset < -kSnapTol || c.offset > e.length + kSnapTol)
      throw DomainError("tree point offset outside its edge");
    c.offset = std::clamp(c.offset, 0.0, e.length);
    if (c.offset <= kSnapTol) return vertex_coord(e.u);
    if (c.offset >= e.length - kSnapTol) return vertex_coord(e.v);
    return c;
  }

  TreeCoord vertex_coord(int w) const {
    int e = incident_[w][0];
    return TreeCoord{e, edges_[e].u == w ? 0.0 : edges_[e].length};
  }

  double distance(const Point& x, const Point& y) const override {
    detail::check_same_space(x, y);
    const TreeCoord a = x.tree();
    const TreeCoord b = y.tree();
    if (a.edge == b.edge) return std::abs(a.offset - b.offset);
    return best_route(a, b).total;
  }

  Point geodesic_point(const Point& x, const Point& y, double t) const override {
    detail::check_same_space(x, y);
    detail::check_unit_interval(t);
    const TreeCoord a = x.tree();
    const TreeCoord b = y.tree();
    if (a.edge == b.edge) {
      TreeCoord c{a.edge, (1.0 - t) * a.offset + t * b.offset};
      return Point(shared_from_this(), canonicalize(c));
    }
    Route r = best_route(a, b);
    double s = t * r.total;
    // Leg 1: within a's edge, toward exit vertex r.p.
    double off_a = exit_offset(a, r.p);
    if (s <= off_a) {
      double off = edges_[a.edge].u == r.p ? a.offset - s : a.offset + s;
      return Point(shared_from_this(), canonicalize({a.edge, off}));
    }
    s -= off_a;
    // Leg 2: along the vertex path r.p .. r.q.
    std::vector<int> path = vertex_path(r.p, r.q);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      int e = edge_between(path[i], path[i + 1]);
      double len = edges_[e].length;
      if (s <= len) {
        double off = edges_[e].u == path[i] ? s : len - s;
        return Point(shared_from_this(), canonicalize({e, off}));
      }
      s -= len;
    }
    // Leg 3: into b's edge from vertex r.q.
    double off = edges_[b.edge].u == r.q ? s : edges_[b.edge].length - s;
    return Point(shared_from_this(), canonicalize({b.edge, off}));
  }

  bool same(const Space& other) const override {
    auto* t = dynamic_cast<const MetricTree*>(&other);
    if (!t || t->nv_ != nv_ || t->edges_.size() != edges_.size()) return false;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      if (t->edges_[i].u != edges_[i].u || t->edges_[i].v != edges_[i].v ||
          t->edges_[i].length != edges_[i].length)
        return false;
    }
    return true;
  }

  std::string describe() const override {
    return "metric_tree(V=" + std::to_string(nv_) +
           ",E=" + std::to_string(edges_.size()) + ")";
  }

 private:
  static constexpr double kSnapTol = 1e-12;

  struct Route {
    int p = 0;   // exit vertex on a's edge
    int q = 0;   // entry vertex on b's edge
    double total = 0.0;
  };

  double exit_offset(const TreeCoord& c, int vertex) const {
    const TreeEdge& e = edges_[c.edge];
    if (vertex == e.u) return c.offset;
    if (vertex == e.v) return e.length - c.offset;
    throw DomainError("exit_offset: vertex not on edge");
  }

  Route best_route(const TreeCoord& a, const TreeCoord& b) const {
    const TreeEdge& ea = edges_[a.edge];
    const TreeEdge& eb = edges_[b.edge];
    Route best;
    best.total = std::numeric_limits<double>::infinity();
    for (int p : {ea.u, ea.v}) {
      for (int q : {eb.u, eb.v}) {
        double total = exit_offset(a, p) + vdist_[p][q] + exit_offset(b, q);
        if (total < best.total) best = Route{p, q, total};
      }
    }
    return best;
  }

  void validate() const {
    if (nv_ < 1) throw DomainError("tree needs at least one vertex");
    if (static_cast<int>(edges_.size()) != nv_ - 1)
      throw DomainError("tree must have exactly V-1 edges");
    for (const TreeEdge& e : edges_) {
      if (e.u < 0 || e.u >= nv_ || e.v < 0 || e.v >= nv_ || e.u == e.v)
        throw DomainError("tree edge endpoints invalid");
      if (!(e.length > 0.0)) throw DomainError("tree edge length must be positive");
    }
  }

  void build_tables() {
    incident_.assign(nv_, {});
    for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
      incident_[edges_[e].u].push_back(e);
      incident_[edges_[e].v].push_back(e);
    }
    for (auto& inc : incident_) std::sort(inc.begin(), inc.end());

    const double inf = std::numeric_limits<double>::infinity();
    vdist_.assign(nv_, std::vector<double>(nv_, inf));
    next_.assign(nv_, std::vector<int>(nv_, -1));
    for (int src = 0; src < nv_; ++src) {
      // BFS from src; paths in a tree are unique.
      std::queue<int> q;
      q.push(src);
      vdist_[src][src] = 0.0;
      std::vector<int> parent(nv_, -1);
      while (!q.empty()) {
        int w = q.front();
        q.pop();
        for (int e : incident_[w]) {
          int other = edges_[e].u == w ? edges_[e].v : edges_[e].u;
          if (other == src || parent[other] != -1 || other == parent[w]) continue;
          parent[other] = w;
          vdist_[src][other] = vdist_[src][w] + edges_[e].length;
          q.push(other);
        }
      }
      for (int dst = 0; dst < nv_; ++dst) {
        if (dst == src) continue;
        if (parent[dst] == -1 && vdist_[src][dst] == inf)
          throw DomainError("tree is not connected");
        // next_[src][dst]: walk back from dst to src, remember the hop.
        int w = dst;
        while (parent[w] != -1 && parent[w] != src) w = parent[w];
        next_[src][dst] = w;
      }
    }
  }

  int nv_;
  std::vector<TreeEdge> edges_;
  std::vector<std::vector<int>> incident_;
  std::vector<std::vector<double>> vdist_;
  std::vector<std::vector<int>> next_;
};

inline SpacePtr make_tree(int vertex_count, std::vector<TreeEdge> edges) {
  return std::make_shared<MetricTree>(vertex_count, std::move(edges));
}

// Document format: {"vertices": [0,1,...], "edges": [[u,v,length], ...]}
inline SpacePtr make_tree_from_json(const nlohmann::json& doc) {
  if (!doc.contains("vertices") || !doc.contains("edges"))
    throw ParseError("tree document needs 'vertices' and 'edges'");
  int nv = static_cast<int>(doc["vertices"].size());
  std::vector<TreeEdge> edges;
  for (const auto& e : doc["edges"]) {
    if (!e.is_array() || e.size() != 3)
      throw ParseError("tree edge must be [u, v, length]");
    edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
  }
  return make_tree(nv, std::move(edges));
}

inline Point tree_point(const SpacePtr& space, int edge, double offset) {
  auto* t = dynamic_cast<const MetricTree*>(space.get());
  if (!t) throw DomainError("tree_point: not a metric tree");
  return Point(space, t->canonicalize({edge, offset}));
}

inline Point tree_vertex(const SpacePtr& space, int vertex) {
  auto* t = dynamic_cast<const MetricTree*>(space.get());
  if (!t) throw DomainError("tree_vertex: not a metric tree");
  if (vertex < 0 || vertex >= t->vertex_count())
    throw DomainError("tree_vertex: no such vertex");
  return Point(space, t->vertex_coord(vertex));
}

// ---------------------------------------------------------------------------
// 2-product: d((a,b),(a',b'))^2 = d(a,a')^2 + d(b,b')^2

class ProductSpace final : public Space {
 public:
  ProductSpace(SpacePtr left, SpacePtr right)
      : left_(std::move(left)), right_(std::move(right)) {
    if (!left_ || !right_) throw DomainError("product space needs two factors");
  }

  const SpacePtr& left() const { return left_; }
  const SpacePtr& right() const { return right_; }

  double distance(const Point& x, const Point& y) const override {
    detail::check_same_space(x, y);
    double dl = left_->distance(x.components()[0], y.components()[0]);
    double dr = right_->distance(x.components()[1], y.components()[1]);
    return std::sqrt(dl * dl + dr * dr);
  }

  Point geodesic_point(const Point& x, const Point& y, double t) const override {
    detail::check_same_space(x, y);
    detail::check_unit_interval(t);
    std::vector<Point> c{
        left_->geodesic_point(x.components()[0], y.components()[0], t),
        right_->geodesic_point(x.components()[1], y.components()[1], t)};
    return Point(shared_from_this(), std::move(c));
  }

  bool same(const Space& other) const override {
    auto* p = dynamic_cast<const ProductSpace*>(&other);
    return p && left_->same(*p->left_) && right_->same(*p->right_);
  }

  std::string describe() const override {
    return "product(" + left_->describe() + "," + right_->describe() + ")";
  }

 private:
  SpacePtr left_;
  SpacePtr right_;
};

inline SpacePtr make_product(SpacePtr left, SpacePtr right) {
  return std::make_shared<ProductSpace>(std::move(left), std::move(right));
}

inline Point product_point(const SpacePtr& space, Point a, Point b) {
  auto* p = dynamic_cast<const ProductSpace*>(space.get());
  if (!p) throw DomainError("product_point: not a product space");
  if (!p->left()->same(*a.space()) || !p->right()->same(*b.space()))
    throw SpaceMismatch("product_point: component spaces do not match");
  return Point(space, std::vector<Point>{std::move(a), std::move(b)});
}

// ---------------------------------------------------------------------------
// Free functions

inline double distance(const Point& x, const Point& y) {
  return x.space()->distance(x, y);
}

class Geodesic {
 public:
  Geodesic(Point a, Point b) : a_(std::move(a)), b_(std::move(b)) {
    detail::check_same_space(a_, b_);
  }
  const Point& a() const { return a_; }
  const Point& b() const { return b_; }
  Point operator()(double t) const {
    return a_.space()->geodesic_point(a_, b_, t);
  }

 private:
  Point a_, b_;
};

inline Point geodesic_point(const Point& x, const Point& y, double t) {
  return x.space()->geodesic_point(x, y, t);
}

// Residual of the four-point nonpositive-curvature inequality:
//   d(x,w)^2 + d(y,v)^2 + 2 d(x,y) d(v,w) - d(x,v)^2 - d(y,w)^2 >= 0.
inline double quadruple_residual(const Point& x, const Point& y, const Point& v,
                                 const Point& w) {
  detail::check_same_space(x, y);
  detail::check_same_space(x, v);
  detail::check_same_space(x, w);
  double dxw = distance(x, w), dyv = distance(y, v);
  double dxy = distance(x, y), dvw = distance(v, w);
  double dxv = distance(x, v), dyw = distance(y, w);
  return dxw * dxw + dyv * dyv + 2.0 * dxy * dvw - dxv * dxv - dyw * dyw;
}

// Weaker form: the product term replaced by d(x,y)^2 + d(v,w)^2.
inline double quadruple_residual_weak(const Point& x, const Point& y,
                                      const Point& v, const Point& w) {
  detail::check_same_space(x, y);
  detail::check_same_space(x, v);
  detail::check_same_space(x, w);
  double dxw = distance(x, w), dyv = distance(y, v);
  double dxy = distance(x, y), dvw = distance(v, w);
  double dxv = distance(x, v), dyw = distance(y, w);
  return dxw * dxw + dyv * dyv + dxy * dxy + dvw * dvw - dxv * dxv - dyw * dyw;
}

inline bool points_equal(const Point& x, const Point& y, double tol = 0.0) {
  return distance(x, y) <= tol;
}

}  // namespace moscolab

#endif
