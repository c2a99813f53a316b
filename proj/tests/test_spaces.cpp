#include <catch2/catch_amalgamated.hpp>

#include "moscolab/moscolab.hpp"
#include "oracles.hpp"

using namespace moscolab;

TEST_CASE("euclidean distance and geodesic match the coordinate formulas") {
  SpacePtr e2 = make_euclidean(2);
  Point a = euclidean_point(e2, {1.0, 2.0});
  Point b = euclidean_point(e2, {4.0, -2.0});
  REQUIRE(distance(a, b) == Catch::Approx(5.0));
  Point m = geodesic_point(a, b, 0.4);
  REQUIRE(m.euclidean()[0] == Catch::Approx(1.0 + 0.4 * 3.0));
  REQUIRE(m.euclidean()[1] == Catch::Approx(2.0 - 0.4 * 4.0));
}

TEST_CASE("metric axioms hold on every standard space") {
  Rng rng(11);
  for (const SpacePtr& space : standard_spaces()) {
    for (int i = 0; i < 200; ++i) {
      Point x = random_point(space, rng);
      Point y = random_point(space, rng);
      Point z = random_point(space, rng);
      double dxy = distance(x, y);
      REQUIRE(dxy >= 0.0);
      REQUIRE(distance(x, x) == 0.0);
      REQUIRE(distance(y, x) == Catch::Approx(dxy).margin(1e-12));
      REQUIRE(distance(x, z) <= dxy + distance(y, z) + 1e-9);
    }
  }
}

TEST_CASE("geodesics have constant speed") {
  Rng rng(12);
  for (const SpacePtr& space : standard_spaces()) {
    for (int i = 0; i < 100; ++i) {
      Point x = random_point(space, rng);
      Point y = random_point(space, rng);
      double d = distance(x, y);
      std::uniform_real_distribution<double> u(0.0, 1.0);
      double s = u(rng), t = u(rng);
      double seg = distance(geodesic_point(x, y, s), geodesic_point(x, y, t));
      REQUIRE(seg == Catch::Approx(std::abs(s - t) * d).margin(1e-9));
    }
  }
}

TEST_CASE("quadruple inequality residual is nonnegative") {
  Rng rng(13);
  for (const SpacePtr& space : standard_spaces()) {
    for (int i = 0; i < 2000; ++i) {
      Point a = random_point(space, rng);
      Point b = random_point(space, rng);
      Point c = random_point(space, rng);
      Point d = random_point(space, rng);
      REQUIRE(quadruple_residual(a, b, c, d) >= -1e-9);
    }
  }
}

TEST_CASE("hyperbolic distance agrees with the acosh pairing away from zero") {
  SpacePtr h = make_hyperbolic2();
  Rng rng(14);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 500; ++i) {
    Point a = hyperbolic_point_xy(h, u(rng), u(rng));
    Point b = hyperbolic_point_xy(h, u(rng), u(rng));
    double d = distance(a, b);
    if (d < 0.1) continue;  // the naive oracle loses digits there
    double naive = oracles::hyperboloid_distance_naive(a.hyperboloid(),
                                                       b.hyperboloid());
    REQUIRE(d == Catch::Approx(naive).epsilon(1e-9));
  }
}

TEST_CASE("hyperbolic distance is exactly zero at coincident points") {
  SpacePtr h = make_hyperbolic2();
  Rng rng(15);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    Point a = hyperbolic_point_xy(h, u(rng), u(rng));
    REQUIRE(distance(a, a) == 0.0);
  }
}

TEST_CASE("tree distances match a DFS oracle on the raw edge list") {
  Rng rng(16);
  for (int trial = 0; trial < 20; ++trial) {
    SpacePtr t = random_tree(rng, 8);
    auto* tree = dynamic_cast<const MetricTree*>(t.get());
    REQUIRE(tree != nullptr);
    std::vector<oracles::Edge> edges;
    for (const auto& e : tree->edges()) edges.push_back({e.u, e.v, e.length});
    for (int i = 0; i < 50; ++i) {
      Point p = random_point(t, rng);
      Point q = random_point(t, rng);
      oracles::TreePos po{p.tree().edge, p.tree().offset};
      oracles::TreePos qo{q.tree().edge, q.tree().offset};
      double expected = oracles::tree_distance(edges, po, qo);
      REQUIRE(distance(p, q) == Catch::Approx(expected).margin(1e-12));
    }
  }
}

TEST_CASE("tree geodesics are additive along the path") {
  Rng rng(17);
  SpacePtr t = random_tree(rng, 10);
  for (int i = 0; i < 100; ++i) {
    Point p = random_point(t, rng);
    Point q = random_point(t, rng);
    Point m = geodesic_point(p, q, 0.5);
    REQUIRE(distance(p, m) + distance(m, q) ==
            Catch::Approx(distance(p, q)).margin(1e-12));
    REQUIRE(distance(p, m) == Catch::Approx(distance(m, q)).margin(1e-12));
  }
}

TEST_CASE("product distance is the l2 combination of the factors") {
  SpacePtr line = make_euclidean(1);
  SpacePtr spider = spider_tree();
  SpacePtr prod = make_product(line, spider);
  Rng rng(18);
  for (int i = 0; i < 100; ++i) {
    Point a = random_point(prod, rng);
    Point b = random_point(prod, rng);
    double dl = distance(a.components()[0], b.components()[0]);
    double dr = distance(a.components()[1], b.components()[1]);
    REQUIRE(distance(a, b) == Catch::Approx(std::hypot(dl, dr)).margin(1e-12));
  }
}

TEST_CASE("mixing points across spaces throws") {
  SpacePtr e1 = make_euclidean(1);
  SpacePtr e2 = make_euclidean(2);
  Point a = euclidean_point(e1, {0.0});
  Point b = euclidean_point(e2, {0.0, 0.0});
  REQUIRE_THROWS_AS(distance(a, b), SpaceMismatch);
}

TEST_CASE("spaces loaded from separate descriptors compare equal") {
  nlohmann::json doc = {{"kind", "tree"},
                        {"vertices", 4},
                        {"edges", {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}}}};
  SpacePtr a = space_from_json(doc);
  SpacePtr b = spider_tree();
  REQUIRE(a->same(*b));
  Point pa = tree_vertex(a, 1);
  Point pb = tree_vertex(b, 2);
  REQUIRE(distance(pa, pb) == Catch::Approx(2.0));
}
