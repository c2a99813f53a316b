#include <catch2/catch_amalgamated.hpp>

#include "moscolab/moscolab.hpp"
#include "oracles.hpp"

using namespace moscolab;

TEST_CASE("envelope of |x| matches both Huber oracles") {
  SpacePtr e1 = make_euclidean(1);
  ConvexFunction f = dist_to(euclidean_point(e1, {0.0}));
  Rng rng(31);
  std::uniform_real_distribution<double> ux(-2.0, 2.0), ul(0.05, 2.0);
  for (int i = 0; i < 40; ++i) {
    double x = ux(rng), lambda = ul(rng);
    double env = envelope(f, euclidean_point(e1, {x}), lambda);
    REQUIRE(env == Catch::Approx(oracles::huber_envelope(x, lambda)).margin(1e-5));
    REQUIRE(env == Catch::Approx(oracles::huber_formula(x, lambda)).margin(1e-9));
  }
}

TEST_CASE("envelope of a weighted squared distance has the closed form") {
  Rng rng(32);
  for (const SpacePtr& space : standard_spaces()) {
    for (int i = 0; i < 30; ++i) {
      Point p = random_point(space, rng);
      Point x = random_point(space, rng);
      std::uniform_real_distribution<double> u(0.25, 2.0);
      double w = u(rng), lambda = u(rng);
      double d = distance(x, p);
      double expected = 0.5 * w * d * d / (1.0 + w * lambda);
      REQUIRE(envelope(sq_dist(p, w), x, lambda) ==
              Catch::Approx(expected).margin(1e-10));
    }
  }
}

TEST_CASE("indicator envelope at lambda = 1/2 is the squared set distance") {
  Rng rng(33);
  for (const SpacePtr& space : standard_spaces()) {
    for (int i = 0; i < 30; ++i) {
      ConvexSet C = random_convex_set(space, rng);
      Point x = random_point(space, rng);
      double d = set_distance(C, x);
      REQUIRE(envelope(indicator(C), x, 0.5) ==
              Catch::Approx(d * d).margin(1e-7));
    }
  }
}

TEST_CASE("numerical weighted-sum prox agrees with the two-quadratic formula") {
  // sum of w_i/2 d(., p_i)^2 has prox at the convex combination pulled
  // toward x: minimizer of sum w_i/2 (y - p_i)^2 + (x - y)^2 / (2 lambda).
  SpacePtr e2 = make_euclidean(2);
  Rng rng(34);
  std::uniform_real_distribution<double> u(-2.0, 2.0), w(0.25, 2.0);
  for (int i = 0; i < 20; ++i) {
    std::vector<double> p1{u(rng), u(rng)}, p2{u(rng), u(rng)}, xc{u(rng), u(rng)};
    double w1 = w(rng), w2 = w(rng), lambda = w(rng);
    ConvexFunction f = weighted_sum({{w1, sq_dist(euclidean_point(e2, p1))},
                                     {w2, sq_dist(euclidean_point(e2, p2))}});
    ProxOptions opts;
    opts.tol = 1e-6;
    ProxResult r = prox(f, euclidean_point(e2, xc), lambda, opts);
    for (int d = 0; d < 2; ++d) {
      double expected =
          (w1 * p1[d] + w2 * p2[d] + xc[d] / lambda) / (w1 + w2 + 1.0 / lambda);
      REQUIRE(r.minimizer.euclidean()[d] == Catch::Approx(expected).margin(1e-2));
    }
    // the certificate must cover the actual value error
    double exact_val = 0.0;
    std::vector<double> ystar(2);
    for (int d = 0; d < 2; ++d)
      ystar[d] = (w1 * p1[d] + w2 * p2[d] + xc[d] / lambda) / (w1 + w2 + 1.0 / lambda);
    auto sq = [](double a) { return a * a; };
    exact_val = 0.5 * w1 * (sq(ystar[0] - p1[0]) + sq(ystar[1] - p1[1])) +
                0.5 * w2 * (sq(ystar[0] - p2[0]) + sq(ystar[1] - p2[1])) +
                (sq(xc[0] - ystar[0]) + sq(xc[1] - ystar[1])) / (2.0 * lambda);
    REQUIRE(r.value >= exact_val - 1e-9);
    REQUIRE(r.value - exact_val <= r.certified_gap + 1e-9);
  }
}

TEST_CASE("semigroup identity holds through genuine nesting") {
  Rng rng(35);
  SpacePtr e2 = make_euclidean(2);
  std::uniform_real_distribution<double> u(0.25, 1.5);
  for (int i = 0; i < 25; ++i) {
    ConvexFunction f = random_function(e2, rng, /*allow_sums=*/false);
    Point x = random_point(e2, rng);
    ProxOptions tight;
    tight.tol = 1e-18;
    REQUIRE(semigroup_residual(f, x, u(rng), u(rng), tight) <= 1e-9);
  }
}

TEST_CASE("resolvent inequality residual stays above the certified budget") {
  Rng rng(36);
  for (const SpacePtr& space : standard_spaces()) {
    for (int i = 0; i < 50; ++i) {
      ConvexFunction f = random_function(space, rng);
      Point x = random_point(space, rng);
      Point y = random_point(space, rng);
      std::uniform_real_distribution<double> u(0.25, 2.0);
      double lambda = u(rng);
      ProxOptions opts = default_prox_options(space);
      opts.tol = 1e-6;
      ProxResult r = prox(f, x, lambda, opts);
      double res = resolvent_inequality_residual(f, x, y, lambda, opts);
      REQUIRE(res >= -(opts.tol + r.certified_gap));
    }
  }
}

TEST_CASE("envelopes increase and prox displacements shrink as lambda drops") {
  Rng rng(37);
  for (const SpacePtr& space : standard_spaces()) {
    for (int i = 0; i < 30; ++i) {
      ConvexFunction f = random_function(space, rng, /*allow_sums=*/false);
      Point x = random_point(space, rng);
      REQUIRE(envelope_monotone_in_lambda(f, x, 1.0, 0.25));
      REQUIRE(prox_displacement_monotone(f, x, 1.0, 0.25));
    }
  }
}

TEST_CASE("convexity holds along geodesics for catalog functions") {
  Rng rng(38);
  for (const SpacePtr& space : standard_spaces()) {
    for (int i = 0; i < 30; ++i) {
      ConvexFunction f = random_function(space, rng);
      Point x = random_point(space, rng);
      Point y = random_point(space, rng);
      std::uniform_real_distribution<double> u(0.0, 1.0);
      REQUIRE(convexity_residual(f, x, y, u(rng)) >= -1e-7);
    }
  }
}

TEST_CASE("minorization estimate succeeds on drifting quadratics") {
  SpacePtr e1 = make_euclidean(1);
  FunctionSequence seq = fixtures::drifting_sqdist_seq(e1);
  MinorizationBound b =
      estimate_minorization(seq, euclidean_point(e1, {0.0}), 1.0);
  REQUIRE(b.r > 0.0);
  REQUIRE(std::isfinite(b.envelope_at_anchor));
}

TEST_CASE("minorization estimate refuses the escaping family") {
  SpacePtr e1 = make_euclidean(1);
  FunctionSequence seq = fixtures::escaping_seq(e1);
  REQUIRE_THROWS_AS(
      estimate_minorization(seq, euclidean_point(e1, {0.0}), 1.0),
      NoUniformBound);
}

TEST_CASE("prox rejects nonpositive parameters") {
  SpacePtr e1 = make_euclidean(1);
  Point zero = euclidean_point(e1, {0.0});
  REQUIRE_THROWS_AS(prox(sq_dist(zero), zero, 0.0), DomainError);
  REQUIRE_THROWS_AS(prox(sq_dist(zero), zero, -1.0), DomainError);
}
