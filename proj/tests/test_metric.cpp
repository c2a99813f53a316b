#include <catch2/catch_amalgamated.hpp>

#include "moscolab/moscolab.hpp"
#include "oracles.hpp"

using namespace moscolab;

TEST_CASE("lambda grids validate monotonicity and sign") {
  REQUIRE_THROWS_AS(LambdaGrid(std::vector<double>{}), DomainError);
  REQUIRE_THROWS_AS(LambdaGrid({1.0, 1.0}), DomainError);
  REQUIRE_THROWS_AS(LambdaGrid({1.0, -0.5}), DomainError);
  LambdaGrid g = LambdaGrid::dyadic(4);
  REQUIRE(g.values == std::vector<double>{1.0, 0.5, 0.25, 0.125});
}

TEST_CASE("lattice probes are sorted by distance from the origin") {
  SpacePtr e2 = make_euclidean(2);
  ProbeGrid grid = fixtures::plane_probes(e2);
  REQUIRE(grid.points.front().euclidean() == std::vector<double>{0.0, 0.0});
  double prev = 0.0;
  Point origin = euclidean_point(e2, {0.0, 0.0});
  for (const Point& p : grid.points) {
    double d = distance(origin, p);
    REQUIRE(d >= prev - 1e-12);
    prev = d;
  }
  REQUIRE(grid.size() == 81);
}

TEST_CASE("rho is a bounded pseudometric on the catalog") {
  SpacePtr e1 = make_euclidean(1);
  LambdaGrid lambdas = LambdaGrid::dyadic(4);
  ProbeGrid probes = fixtures::line_probes(e1);
  ProxOptions opts;
  Rng rng(51);
  for (int i = 0; i < 8; ++i) {
    ConvexFunction f = random_function(e1, rng, false);
    ConvexFunction g = random_function(e1, rng, false);
    ConvexFunction h = random_function(e1, rng, false);
    double dfg = rho(f, g, lambdas, probes, opts).value;
    double dgf = rho(g, f, lambdas, probes, opts).value;
    REQUIRE(rho(f, f, lambdas, probes, opts).value <= 1e-9);
    REQUIRE(dfg == Catch::Approx(dgf).margin(1e-9));
    REQUIRE(dfg >= 0.0);
    REQUIRE(dfg < 2.0);
    // triangle inequality via the t/(1+t) metric transform
    double dfh = rho(f, h, lambdas, probes, opts).value;
    double dhg = rho(h, g, lambdas, probes, opts).value;
    REQUIRE(dfg <= dfh + dhg + 1e-9);
  }
}

TEST_CASE("rho separates genuinely different functions") {
  SpacePtr e1 = make_euclidean(1);
  ConvexFunction a = sq_dist(euclidean_point(e1, {0.0}));
  ConvexFunction b = sq_dist(euclidean_point(e1, {1.0}));
  MoscoDistance d = rho(a, b, LambdaGrid::dyadic(4),
                        fixtures::line_probes(e1), ProxOptions{});
  REQUIRE(d.value > 0.01);
  REQUIRE(d.e_terms > 0.0);
  REQUIRE(d.r_terms > 0.0);
}

TEST_CASE("equi-Lipschitz constants bound measured difference quotients") {
  SpacePtr e1 = make_euclidean(1);
  FunctionSequence seq = fixtures::drifting_sqdist_seq(e1);
  Point anchor = euclidean_point(e1, {0.0});
  ProbeGrid ball = fixtures::line_probes(e1);
  ProxOptions opts;
  Window window(8, 1016);
  EquiLipschitzBound bound = equi_lipschitz_bound(seq, 2.0, 4.0, anchor, 1.0,
                                                  window, ball.points, opts);
  REQUIRE(bound.C > 0.0);
  REQUIRE_THROWS_AS(bound.L(2.5), DomainError);  // only valid below lambda0
  Rng rng(52);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double lambda : LambdaGrid::dyadic(8).values) {
    double L = bound.L(lambda);
    for (long n : log_samples(1, 1000, 8)) {
      ConvexFunction fn = seq.at(n);
      for (int i = 0; i < 20; ++i) {
        Point x = euclidean_point(e1, {u(rng)});
        Point y = euclidean_point(e1, {u(rng)});
        double d = distance(x, y);
        if (d < 1e-9) continue;
        double q =
            std::abs(envelope(fn, x, lambda) - envelope(fn, y, lambda)) / d;
        REQUIRE(q <= L + 1e-9);
      }
    }
  }
}

TEST_CASE("cauchy limit assembly round-trips the drifting quadratic") {
  SpacePtr e1 = make_euclidean(1);
  FunctionSequence seq = fixtures::drifting_sqdist_seq(e1);
  LambdaGrid lambdas = LambdaGrid::dyadic(6);
  ProbeGrid probes = fixtures::line_probes(e1);
  Window window(64, 960);
  LimitTable table = cauchy_limit(seq, lambdas, probes, window);

  // rho to the table decreases along the sequence and gets small
  double prev = kInf;
  ProxOptions opts;
  for (long n : log_samples(8, 1000, 6)) {
    double v = rho_to_table(seq.at(n), table, opts).value;
    REQUIRE(v <= prev + 1e-9);
    prev = v;
  }
  REQUIRE(prev < 1e-2);

  // the assembled sup evaluates close to the true limit, within its own
  // declared error bar plus the lambda truncation
  ConvexFunction f = *seq.limit;
  double lam_last = lambdas.values.back();
  for (const Point& x : probes.points) {
    auto ev = table.evaluate(x);
    double fx = evaluate(f, x);
    double trunc = fx - envelope(f, x, lam_last);
    REQUIRE(std::abs(ev.value - fx) <= ev.error_bound + trunc + 0.05);
  }
  REQUIRE(std::isfinite(table.witness_value));
}

TEST_CASE("non-Cauchy families are refused") {
  SpacePtr e1 = make_euclidean(1);
  LambdaGrid lambdas = LambdaGrid::dyadic(4);
  ProbeGrid probes = fixtures::line_probes(e1);
  REQUIRE_THROWS_AS(cauchy_limit(fixtures::alternating_function_seq(e1),
                                 lambdas, probes, Window(64, 960)),
                    NotCauchy);
  REQUIRE_THROWS_AS(cauchy_limit(fixtures::escaping_seq(e1), lambdas, probes,
                                 Window(64, 960)),
                    NotCauchy);
}
