#ifndef MOSCOLAB_SUITES_HPP
#define MOSCOLAB_SUITES_HPP

// Randomized property batteries over the standard spaces: geometry
// axioms, prox-engine identities, convergence checkers against known
// fixtures, and the metric-side machinery. Each suite returns one
// pass/fail record per property with a short measurement summary.

#include <sstream>

#include "moscolab/fixtures.hpp"

namespace moscolab {

struct PropertyResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<PropertyResult> results;

  bool all_pass() const {
    for (const auto& r : results)
      if (!r.pass) return false;
    return true;
  }
};

namespace detail {

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Geometry

inline SuiteReport run_geometry_suite(std::uint64_t seed) {
  SuiteReport rep{"geometry", {}};
  auto add = [&rep](std::string name, bool pass, std::string detail) {
    rep.results.push_back({std::move(name), pass, std::move(detail)});
  };
  std::vector<SpacePtr> spaces = standard_spaces();

  {
    Rng rng(seed);
    bool ok = true;
    double worst = 0.0;
    for (const SpacePtr& sp : spaces) {
      for (int i = 0; i < 40; ++i) {
        Point x = random_point(sp, rng), y = random_point(sp, rng),
              z = random_point(sp, rng);
        double dxy = distance(x, y);
        ok = ok && dxy >= 0.0 && std::abs(dxy - distance(y, x)) <= 1e-9;
        ok = ok && distance(x, x) <= 1e-9;
        double slack = dxy + distance(y, z) - distance(x, z);
        worst = std::min(worst, slack);
        ok = ok && slack >= -1e-9;
      }
    }
    add("metric-axioms", ok, "worst triangle slack " + detail::fmt(worst));
  }

  {
    Rng rng(seed + 1);
    bool ok = true;
    double worst = 0.0;
    for (const SpacePtr& sp : spaces) {
      for (int i = 0; i < 10; ++i) {
        Point x = random_point(sp, rng), y = random_point(sp, rng);
        double d = distance(x, y);
        for (int a = 0; a <= 10; ++a) {
          for (int b = a; b <= 10; ++b) {
            double s = a / 10.0, t = b / 10.0;
            double seg = distance(geodesic_point(x, y, s), geodesic_point(x, y, t));
            double err = std::abs(seg - (t - s) * d);
            worst = std::max(worst, err);
            ok = ok && err <= 1e-9 * (1.0 + d);
          }
        }
      }
    }
    add("geodesic-constant-speed", ok, "worst speed error " + detail::fmt(worst));
  }

  {
    Rng rng(seed + 2);
    bool ok = true;
    double worst_strong = kInf, worst_weak = kInf;
    for (const SpacePtr& sp : spaces) {
      for (int i = 0; i < 30; ++i) {
        Point x = random_point(sp, rng), y = random_point(sp, rng);
        Point v = random_point(sp, rng), w = random_point(sp, rng);
        double rs = quadruple_residual(x, y, v, w);
        double rw = quadruple_residual_weak(x, y, v, w);
        worst_strong = std::min(worst_strong, rs);
        worst_weak = std::min(worst_weak, rw);
        ok = ok && rs >= -1e-9 && rw >= -1e-9 && rw >= rs - 1e-9;
      }
    }
    add("quadruple-inequality", ok,
        "min residual strong " + detail::fmt(worst_strong) + ", weak " +
            detail::fmt(worst_weak));
  }

  {
    Rng rng(seed + 3);
    SpacePtr prod = spaces.back();
    auto* p = dynamic_cast<const ProductSpace*>(prod.get());
    bool ok = p != nullptr;
    double worst = 0.0;
    for (int i = 0; ok && i < 30; ++i) {
      Point x = random_point(prod, rng), y = random_point(prod, rng);
      double dl = distance(x.components()[0], y.components()[0]);
      double dr = distance(x.components()[1], y.components()[1]);
      double d = distance(x, y);
      double err = std::abs(d * d - dl * dl - dr * dr);
      for (double t : {0.25, 0.5, 0.75}) {
        Point g = geodesic_point(x, y, t);
        err = std::max(err, distance(g.components()[0],
                                     geodesic_point(x.components()[0],
                                                    y.components()[0], t)));
        err = std::max(err, distance(g.components()[1],
                                     geodesic_point(x.components()[1],
                                                    y.components()[1], t)));
      }
      worst = std::max(worst, err);
      ok = ok && err <= 1e-9;
    }
    add("product-decomposition", ok, "worst error " + detail::fmt(worst));
  }

  {
    Rng rng(seed + 4);
    bool ok = true;
    double worst = 0.0;
    for (int rep_i = 0; rep_i < 5; ++rep_i) {
      SpacePtr tree = random_tree(rng, 10);
      auto* t = static_cast<const MetricTree*>(tree.get());
      std::uniform_int_distribution<int> pick(0, t->vertex_count() - 1);
      for (int i = 0; i < 20; ++i) {
        int u = pick(rng), v = pick(rng);
        double duv = t->vertex_distance(u, v);
        for (int w : t->vertex_path(u, v)) {
          double err = std::abs(t->vertex_distance(u, w) +
                                t->vertex_distance(w, v) - duv);
          worst = std::max(worst, err);
          ok = ok && err <= 1e-9;
        }
        Point pu = tree_vertex(tree, u), pv = tree_vertex(tree, v);
        ok = ok && std::abs(distance(pu, pv) - duv) <= 1e-9;
      }
      for (int i = 0; i < 15; ++i) {
        Point x = random_point(tree, rng), y = random_point(tree, rng);
        Point v2 = random_point(tree, rng), w2 = random_point(tree, rng);
        ok = ok && quadruple_residual(x, y, v2, w2) >= -1e-9;
      }
    }
    add("tree-path-additivity", ok, "worst additivity error " + detail::fmt(worst));
  }

  return rep;
}

// ---------------------------------------------------------------------------
// Prox engine

inline SuiteReport run_prox_suite(std::uint64_t seed) {
  SuiteReport rep{"prox", {}};
  auto add = [&rep](std::string name, bool pass, std::string detail) {
    rep.results.push_back({std::move(name), pass, std::move(detail)});
  };
  std::vector<SpacePtr> spaces = standard_spaces();

  {
    Rng rng(seed);
    bool ok = true;
    double worst = kInf;
    for (const SpacePtr& sp : spaces) {
      for (int i = 0; i < 10; ++i) {
        ConvexFunction f = random_function(sp, rng);
        for (int j = 0; j < 5; ++j) {
          Point x = random_point(sp, rng), y = random_point(sp, rng);
          std::uniform_real_distribution<double> ut(0.0, 1.0);
          double r = convexity_residual(f, x, y, ut(rng));
          if (r < kInf) worst = std::min(worst, r);
          ok = ok && r >= -1e-9;
        }
      }
    }
    add("convexity-along-geodesics", ok, "min residual " + detail::fmt(worst));
  }

  {
    Rng rng(seed + 1);
    bool ok = true;
    double worst = kInf;
    for (const SpacePtr& sp : spaces) {
      ProxOptions opts = default_prox_options(sp);
      opts.tol = 1e-6;
      for (int i = 0; i < 8; ++i) {
        ConvexFunction f = random_function(sp, rng);
        Point x = random_point(sp, rng);
        for (double lambda : {0.25, 1.0}) {
          ProxResult r = prox(f, x, lambda, opts);
          for (int j = 0; j < 8; ++j) {
            Point z = random_point(sp, rng);
            double fz = evaluate(f, z);
            if (fz == kInf) continue;
            double dz = distance(x, z);
            double slack = fz + dz * dz / (2.0 * lambda) - r.value +
                           r.certified_gap;
            worst = std::min(worst, slack);
            ok = ok && slack >= -1e-9;
          }
        }
      }
    }
    add("prox-optimality-certificate", ok, "min slack " + detail::fmt(worst));
  }

  {
    Rng rng(seed + 2);
    bool ok = true;
    double worst = kInf;
    for (const SpacePtr& sp : spaces) {
      for (int i = 0; i < 10; ++i) {
        ConvexFunction f = random_function(sp, rng, /*allow_sums=*/false);
        Point x = random_point(sp, rng), y = random_point(sp, rng);
        for (double lambda : {0.25, 1.0}) {
          Point jx = prox(f, x, lambda).minimizer;
          Point jy = prox(f, y, lambda).minimizer;
          double slack = distance(x, y) - distance(jx, jy);
          worst = std::min(worst, slack);
          ok = ok && slack >= -1e-8;
        }
      }
    }
    add("prox-nonexpansive", ok, "min contraction slack " + detail::fmt(worst));
  }

  {
    Rng rng(seed + 3);
    bool ok = true;
    double worst = 0.0;
    for (const SpacePtr& sp : spaces) {
      for (int i = 0; i < 10; ++i) {
        ConvexSet C = random_convex_set(sp, rng);
        Point x = random_point(sp, rng);
        Point p = project(C, x);
        double again = distance(p, project(C, p));
        worst = std::max(worst, again);
        ok = ok && again <= 1e-7 && contains(C, p, 1e-7);
        // Projection is distance-minimizing against set members we can name.
        if (auto* ball = std::get_if<ClosedBall>(&C.node()))
          ok = ok && distance(x, p) <= distance(x, ball->center) + 1e-9;
      }
    }
    add("projection-idempotent", ok, "worst re-projection move " + detail::fmt(worst));
  }

  {
    Rng rng(seed + 4);
    bool ok = true;
    double worst = 0.0;
    for (const SpacePtr& sp : spaces) {
      for (int i = 0; i < 4; ++i) {
        ConvexFunction f = random_function(sp, rng, /*allow_sums=*/false);
        Point x = random_point(sp, rng);
        for (auto [lambda, mu] : {std::pair{0.5, 1.0}, std::pair{1.0, 0.5}}) {
          double r = semigroup_residual(f, x, lambda, mu);
          worst = std::max(worst, r);
          ok = ok && r <= 1e-4;
        }
      }
    }
    add("envelope-semigroup", ok, "max residual " + detail::fmt(worst));
  }

  {
    Rng rng(seed + 5);
    bool ok = true;
    double worst = kInf;
    for (const SpacePtr& sp : spaces) {
      for (int i = 0; i < 8; ++i) {
        ConvexFunction f = random_function(sp, rng, /*allow_sums=*/false);
        Point x = random_point(sp, rng), y = random_point(sp, rng);
        double r = resolvent_inequality_residual(f, x, y, 0.5);
        if (r < kInf) worst = std::min(worst, r);
        ok = ok && r >= -1e-6;
      }
    }
    add("resolvent-inequality", ok, "min slack " + detail::fmt(worst));
  }

  {
    Rng rng(seed + 6);
    bool ok = true;
    for (const SpacePtr& sp : spaces) {
      for (int i = 0; i < 8; ++i) {
        ConvexFunction f = random_function(sp, rng, /*allow_sums=*/false);
        Point x = random_point(sp, rng);
        std::uniform_real_distribution<double> ul(0.05, 2.0);
        double a = ul(rng), b = ul(rng);
        double l1 = std::max(a, b) + 0.01, l2 = std::min(a, b);
        ok = ok && envelope_monotone_in_lambda(f, x, l1, l2);
        ok = ok && prox_displacement_monotone(f, x, l1, l2);
      }
    }
    add("lambda-monotonicity", ok, "envelope and displacement ordered");
  }

  {
    Rng rng(seed + 7);
    bool ok = true;
    double worst = 0.0;
    for (const SpacePtr& sp : spaces) {
      for (int i = 0; i < 8; ++i) {
        ConvexSet C = random_convex_set(sp, rng);
        Point x = random_point(sp, rng);
        double d = set_distance(C, x);
        double err = std::abs(envelope(indicator(C), x, 0.5) - d * d);
        worst = std::max(worst, err);
        ok = ok && err <= 1e-7 * (1.0 + d * d);
      }
    }
    add("indicator-half-envelope", ok,
        "max |env - dist^2| " + detail::fmt(worst));
  }

  {
    // Numerical engine against closed forms it cannot see: a weighted sum
    // of squared distances has an explicit minimizer in Euclidean space.
    Rng rng(seed + 8);
    SpacePtr sp = make_euclidean(2);
    ProxOptions opts;
    opts.tol = 1e-6;
    bool ok = true;
    double worst = 0.0;
    for (int i = 0; i < 6; ++i) {
      Point p1 = random_point(sp, rng), p2 = random_point(sp, rng);
      std::uniform_real_distribution<double> uw(0.25, 2.0);
      double w1 = uw(rng), w2 = uw(rng), lambda = uw(rng);
      ConvexFunction f = weighted_sum({{w1, sq_dist(p1)}, {w2, sq_dist(p2)}});
      Point x = random_point(sp, rng);
      ProxResult r = prox(f, x, lambda, opts);
      std::vector<double> exact(2);
      double denom = 1.0 / lambda + w1 + w2;
      for (int d = 0; d < 2; ++d)
        exact[d] = (x.euclidean()[d] / lambda + w1 * p1.euclidean()[d] +
                    w2 * p2.euclidean()[d]) / denom;
      double err = distance(r.minimizer, euclidean_point(sp, exact));
      worst = std::max(worst, err);
      ok = ok && err <= 1e-2;
    }
    add("numerical-prox-oracle", ok, "max minimizer error " + detail::fmt(worst));
  }

  return rep;
}

// ---------------------------------------------------------------------------
// Convergence checkers

inline SuiteReport run_convergence_suite(std::uint64_t seed) {
  SuiteReport rep{"convergence", {}};
  auto add = [&rep](std::string name, bool pass, std::string detail) {
    rep.results.push_back({std::move(name), pass, std::move(detail)});
  };

  {
    Rng rng(seed);
    SpacePtr sp = make_euclidean(3);
    bool ok = true;
    double worst = kInf;
    for (int i = 0; i < 5; ++i) {
      std::vector<Point> cloud;
      for (int j = 0; j < 20; ++j) cloud.push_back(random_point(sp, rng));
      PointSequence seq{[&cloud](long n) { return cloud[(n - 1) % cloud.size()]; },
                        Window(1, static_cast<long>(cloud.size()))};
      Point c = asymptotic_center(seq);
      double vc = detail::omega_hat(cloud, c);
      for (int j = 0; j < 40; ++j) {
        double slack = detail::omega_hat(cloud, random_point(sp, rng)) - vc;
        worst = std::min(worst, slack);
        ok = ok && slack >= -1e-9;
      }
      for (const Point& p : cloud)
        ok = ok && detail::omega_hat(cloud, p) >= vc - 1e-9;
    }
    add("center-euclidean-minimax", ok, "min competitor slack " + detail::fmt(worst));
  }

  {
    SpacePtr spider = spider_tree();
    Point c = asymptotic_center(fixtures::spider_alternating_tips(spider));
    double d = distance(c, tree_vertex(spider, 0));
    add("center-tree-branch-point", d <= 1e-9,
        "distance to hub " + detail::fmt(d));
  }

  {
    SpacePtr sp = make_euclidean(2);
    Point star = euclidean_point(sp, {0.3, -0.7});
    PointSequence seq{[sp, star](long n) {
                        return euclidean_point(
                            sp, {star.euclidean()[0] + 1.0 / n,
                                 star.euclidean()[1] - 0.5 / n});
                      },
                      Window(4096, 16)};
    WeakLimitVerdict v = weak_limit(seq, default_battery(seed));
    double d = v.candidate ? distance(*v.candidate, star) : kInf;
    add("weak-limit-convergent", v.converges == TriState::yes && d <= 1e-3,
        "verdict " + to_string(v.converges) + ", candidate error " + detail::fmt(d));
  }

  {
    SpacePtr spider = spider_tree();
    WeakLimitVerdict v =
        weak_limit(fixtures::spider_alternating_tips(spider), default_battery(seed));
    add("weak-limit-alternating", v.converges == TriState::no && v.witness,
        "verdict " + to_string(v.converges) + ", witness " +
            v.witness.value_or("none"));
  }

  {
    SpacePtr sp = fixtures::plane();
    FunctionSequence seq = fixtures::shrinking_ball_seq(sp);
    std::vector<Point> probes{euclidean_point(sp, {0.0, 0.0}),
                              euclidean_point(sp, {0.5, 0.5}),
                              euclidean_point(sp, {1.5, 0.0})};
    EnvelopeConvergenceReport r = check_envelope_convergence(
        seq, *seq.limit, {1.0, 0.5, 0.25}, probes, Window(8, 1016));
    bool shrinks = true;
    for (const EnvelopeCell& cell : r.cells)
      shrinks = shrinks && cell.final_gap <= cell.gaps.front().second + 1e-9;
    add("envelope-gaps-shrinking-ball", r.pass(0.02) && shrinks,
        "max final gap " + detail::fmt(r.max_final_gap) + ", max prox gap " +
            detail::fmt(r.max_prox_gap));
  }

  {
    SpacePtr sp = fixtures::plane();
    FunctionSequence seq = fixtures::shrinking_ball_seq(sp);
    std::vector<Point> probes{euclidean_point(sp, {0.0, 0.0}),
                              euclidean_point(sp, {0.5, 0.0}),
                              euclidean_point(sp, {1.5, 0.0})};
    Point anchor = euclidean_point(sp, {0.25, 0.25});
    std::vector<PointSequence> wseqs{
        PointSequence{[anchor](long) { return anchor; }, Window(8, 16)}};
    MoscoOptions opts;
    opts.check.seed = seed;
    MoscoReport r = mosco_check(seq, *seq.limit, probes, wseqs, opts);
    add("mosco-consistent-shrinking-ball", r.verdict == TriState::yes,
        "verdict " + mosco_verdict_name(r.verdict));
  }

  {
    SpacePtr line = make_euclidean(1);
    FunctionSequence seq = fixtures::drifting_sqdist_seq(line);
    std::vector<Point> probes{euclidean_point(line, {0.0}),
                              euclidean_point(line, {0.75})};
    std::vector<PointSequence> wseqs{PointSequence{
        [line](long n) { return euclidean_point(line, {0.5 + 1.0 / n}); },
        Window(4096, 16)}};
    MoscoOptions opts;
    opts.check.seed = seed;
    MoscoReport r = mosco_check(seq, *seq.limit, probes, wseqs, opts);
    add("mosco-consistent-drifting-quadratic", r.verdict == TriState::yes,
        "verdict " + mosco_verdict_name(r.verdict));
  }

  {
    SpacePtr sp = fixtures::plane();
    FunctionSequence seq = fixtures::alternating_ball_seq(sp);
    std::vector<Point> probes{euclidean_point(sp, {0.0, 0.0})};
    MoscoOptions opts;
    opts.check.seed = seed;
    MoscoReport r = mosco_check(seq, *seq.limit, probes, {}, opts);
    add("mosco-falsifies-alternating-ball", r.verdict == TriState::no,
        "verdict " + mosco_verdict_name(r.verdict) + ", witness: " + r.witness);
  }

  {
    SpacePtr line = make_euclidean(1);
    FunctionSequence seq = fixtures::drifting_sqdist_seq(line);
    std::vector<Point> probes;
    for (double v : {0.0, 0.5, 1.0, -0.75})
      probes.push_back(euclidean_point(line, {v}));
    GammaLimitTable table = gamma_limit_from_envelopes(
        seq, LambdaGrid::dyadic(10).values, probes, Window(64, 960),
        euclidean_point(line, {0.0}));
    bool ok = true;
    double worst = 0.0;
    for (std::size_t l = 0; l < probes.size(); ++l) {
      double err = std::abs(table.sup_values[l] - evaluate(*seq.limit, probes[l]));
      worst = std::max(worst, err);
      ok = ok && err <= 1e-2;
    }
    add("gamma-limit-recovers-quadratic", ok, "max sup error " + detail::fmt(worst));
  }

  {
    SpacePtr line = make_euclidean(1);
    FunctionSequence seq = fixtures::escaping_seq(line);
    bool refused = false;
    std::string what;
    try {
      gamma_limit_from_envelopes(seq, LambdaGrid::dyadic(4).values,
                                 {euclidean_point(line, {0.0})}, Window(64, 960),
                                 euclidean_point(line, {0.0}));
    } catch (const NoUniformBound& e) {
      refused = true;
      what = e.what();
    }
    add("gamma-limit-refuses-escaping", refused, what);
  }

  {
    SpacePtr sp = fixtures::plane();
    std::vector<Point> probes{euclidean_point(sp, {0.0, 0.0}),
                              euclidean_point(sp, {0.5, 0.0}),
                              euclidean_point(sp, {1.5, 0.5})};
    MoscoOptions opts;
    opts.check.seed = seed;
    FWReport r = frolik_wijsman_check(fixtures::shrinking_ball_sets(sp),
                                      fixtures::unit_ball(sp), probes, opts);
    double bridge = 0.0;
    for (double b : r.bridge_residuals) bridge = std::max(bridge, b);
    add("set-function-bridge-shrinking-ball",
        r.fw_pass && r.mosco_pass && r.agree && bridge <= 1e-7,
        "bridge residual " + detail::fmt(bridge));
  }

  {
    SpacePtr line = make_euclidean(1);
    std::vector<Point> probes{euclidean_point(line, {0.0})};
    MoscoOptions opts;
    opts.check.seed = seed;
    FWReport r = frolik_wijsman_check(
        fixtures::escaping_sets(line),
        closed_ball(euclidean_point(line, {0.0}), 0.0), probes, opts);
    add("set-function-bridge-escaping", !r.fw_pass && !r.mosco_pass && r.agree,
        "both sides reject, agree=" + std::string(r.agree ? "yes" : "no"));
  }

  return rep;
}

// ---------------------------------------------------------------------------
// Metric side

inline SuiteReport run_metric_suite(std::uint64_t seed) {
  SuiteReport rep{"metric", {}};
  auto add = [&rep](std::string name, bool pass, std::string detail) {
    rep.results.push_back({std::move(name), pass, std::move(detail)});
  };
  SpacePtr sp = make_euclidean(2);
  LambdaGrid lambdas = LambdaGrid::dyadic(4);
  ProbeGrid probes = fixtures::plane_probes(sp, 1.0, 0.5);
  ProxOptions popts = default_prox_options(sp);

  {
    Rng rng(seed);
    ConvexFunction f = random_function(sp, rng, false);
    ConvexFunction g = sq_dist(euclidean_point(sp, {0.4, -0.2}));
    MoscoDistance self = rho(f, f, lambdas, probes, popts);
    MoscoDistance fg = rho(f, g, lambdas, probes, popts);
    MoscoDistance gf = rho(g, f, lambdas, probes, popts);
    bool ok = self.value <= 1e-12 && fg.value > 0.0 && fg.value < 2.0 &&
              std::abs(fg.value - gf.value) <= 1e-12 &&
              fg.e_terms < 1.0 && fg.r_terms < 1.0;
    add("rho-pseudometric-axioms", ok,
        "rho(f,f)=" + detail::fmt(self.value) + ", rho(f,g)=" +
            detail::fmt(fg.value));
  }

  {
    Rng rng(seed + 1);
    bool ok = true;
    double worst = kInf;
    for (int i = 0; i < 8; ++i) {
      ConvexFunction f = random_function(sp, rng, false);
      ConvexFunction g = random_function(sp, rng, false);
      ConvexFunction h = random_function(sp, rng, false);
      double fh = rho(f, h, lambdas, probes, popts).value;
      double fg = rho(f, g, lambdas, probes, popts).value;
      double gh = rho(g, h, lambdas, probes, popts).value;
      double slack = fg + gh - fh;
      worst = std::min(worst, slack);
      ok = ok && slack >= -1e-9;
    }
    add("rho-triangle-inequality", ok, "min slack " + detail::fmt(worst));
  }

  {
    SpacePtr line = make_euclidean(1);
    FunctionSequence seq = fixtures::drifting_sqdist_seq(line);
    Point x0 = euclidean_point(line, {0.0});
    std::vector<Point> samples;
    for (double v = -2.0; v <= 2.0; v += 0.5)
      samples.push_back(euclidean_point(line, {v}));
    EquiLipschitzBound b = equi_lipschitz_bound(seq, 0.5, 1.0, x0, 2.0,
                                                Window(8, 120), samples,
                                                default_prox_options(line));
    bool ok = b.C > 0.0;
    double worst = kInf;
    for (long n : {4L, 32L, 128L}) {
      ConvexFunction fn = seq.at(n);
      for (double lambda : {0.4, 0.1, 0.02}) {
        double L = b.L(lambda);
        for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
          double lhs = std::abs(envelope(fn, samples[i], lambda) -
                                envelope(fn, samples[i + 1], lambda));
          double slack = L * distance(samples[i], samples[i + 1]) - lhs;
          worst = std::min(worst, slack);
          ok = ok && slack >= -1e-9;
        }
      }
    }
    add("equi-lipschitz-envelopes", ok,
        "C=" + detail::fmt(b.C) + ", min slack " + detail::fmt(worst));
  }

  {
    FunctionSequence seq = fixtures::shrinking_ball_seq(sp);
    std::vector<double> values;
    for (long n : {4L, 64L, 1023L})
      values.push_back(rho(seq.at(n), *seq.limit, lambdas, probes, popts).value);
    bool ok = values[2] <= values[1] && values[1] <= values[0] &&
              values[2] <= 1e-2;
    add("rho-vanishes-along-sequence", ok,
        "rho at n=4,64,1023: " + detail::fmt(values[0]) + ", " +
            detail::fmt(values[1]) + ", " + detail::fmt(values[2]));
  }

  {
    SpacePtr line = make_euclidean(1);
    FunctionSequence seq = fixtures::drifting_sqdist_seq(line);
    LambdaGrid lg = LambdaGrid::dyadic(6);
    ProbeGrid pg = fixtures::line_probes(line, 1.0, 0.25);
    CauchyLimitOptions copts;
    copts.prox = default_prox_options(line);
    LimitTable table = cauchy_limit(seq, lg, pg, Window(64, 960), copts);
    double early = rho_to_table(seq.at(64), table, copts.prox).value;
    double late = rho_to_table(seq.at(512), table, copts.prox).value;
    Point off_grid = euclidean_point(line, {0.37});
    LimitTable::Eval ev = table.evaluate(off_grid);
    double eval_err = std::abs(ev.value - evaluate(*seq.limit, off_grid));
    bool ok = late <= early && late <= 1e-2 &&
              eval_err <= ev.error_bound + 0.05 &&
              table.witness_value < kInf;
    add("cauchy-limit-roundtrip", ok,
        "rho-to-table at n=64: " + detail::fmt(early) + ", n=512: " +
            detail::fmt(late) + ", eval error " + detail::fmt(eval_err));
  }

  {
    SpacePtr line = make_euclidean(1);
    bool refused = false;
    std::string what;
    try {
      cauchy_limit(fixtures::alternating_function_seq(line), LambdaGrid::dyadic(4),
                   fixtures::line_probes(line, 1.0, 0.5), Window(64, 960));
    } catch (const NotCauchy& e) {
      refused = true;
      what = e.what();
    }
    add("not-cauchy-alternating", refused, what);
  }

  {
    SpacePtr line = make_euclidean(1);
    bool refused = false;
    std::string what;
    try {
      cauchy_limit(fixtures::escaping_seq(line), LambdaGrid::dyadic(4),
                   fixtures::line_probes(line, 1.0, 0.5), Window(64, 960));
    } catch (const NotCauchy& e) {
      refused = true;
      what = e.what();
    }
    add("not-cauchy-escaping", refused, what);
  }

  return rep;
}

inline std::vector<SuiteReport> run_all_suites(std::uint64_t seed) {
  return {run_geometry_suite(seed), run_prox_suite(seed),
          run_convergence_suite(seed), run_metric_suite(seed)};
}

}  // namespace moscolab

#endif
