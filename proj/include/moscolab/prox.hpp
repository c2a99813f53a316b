#ifndef MOSCOLAB_PROX_HPP
#define MOSCOLAB_PROX_HPP

// Proximal mappings and Moreau envelopes. Closed-form proxes are taken
// from the catalog; WeightedSum falls back to a cyclic proximal-point
// scheme over the summands, EnvelopeOf to alternating minimization of
// the joint objective. Every numerical result carries a suboptimality
// certificate so that downstream inequality checks can budget for
// solver error.

#include <cmath>
#include <functional>
#include <vector>

#include "moscolab/convex.hpp"

namespace moscolab {

struct ProxResult {
  Point minimizer;
  double value = 0.0;        // envelope value f_lambda(x)
  long iterations = 0;
  double certified_gap = 0.0;  // upper bound on objective suboptimality
};

struct ProxOptions {
  double tol = 1e-8;        // target certified gap for numerical routes
  long max_cycles = 200000;
  double sigma0 = 1.0;      // initial step of the cyclic scheme
  // Checkpoint movement allowed at the break, as a multiple of
  // lambda * tol. Position-sensitive consumers (resolvent inequality,
  // nonexpansiveness) need the default; value-only consumers may set 0
  // to stop on the value plateau alone.
  double pos_hold = 0.15;
};

inline ProxOptions default_prox_options(const SpacePtr& space) {
  ProxOptions o;
  // arccosh conditioning near argument 1 limits hyperboloid accuracy.
  if (dynamic_cast<const HyperbolicPlane*>(space.get())) o.tol = 1e-6;
  return o;
}

ProxResult prox(const ConvexFunction& f, const Point& x, double lambda,
                const ProxOptions& opts);

namespace detail {

// EnvelopeOf nests deeper than this are collapsed with the semigroup
// identity (f_lambda)_mu = f_{lambda+mu} before solving.
constexpr int kEnvelopeDepthCap = 3;

inline int envelope_depth(const ConvexFunction& f) {
  if (auto* e = std::get_if<FnEnvelopeOf>(&f.node()))
    return 1 + envelope_depth(e->inner);
  if (auto* s = std::get_if<FnShifted>(&f.node()))
    return envelope_depth(s->inner);
  return 0;
}

inline ConvexFunction collapse_envelopes(const ConvexFunction& f) {
  if (auto* e = std::get_if<FnEnvelopeOf>(&f.node())) {
    if (auto* inner = std::get_if<FnEnvelopeOf>(&e->inner.node()))
      return collapse_envelopes(envelope_of(inner->inner, e->mu + inner->mu));
  }
  return f;
}

// Geodesic extension: the point at parameter 2 on the geodesic through
// a and b (i.e. past b by d(a,b)). Used to Richardson-extrapolate the
// step-proportional bias of the cyclic scheme; every result is validated
// against the objective before use, so clamping (trees) is harmless.
inline Point extend_point(const Point& a, const Point& b) {
  const SpacePtr& sp = b.space();
  if (dynamic_cast<const EuclideanSpace*>(sp.get())) {
    std::vector<double> c(b.euclidean().size());
    for (std::size_t i = 0; i < c.size(); ++i)
      c[i] = 2.0 * b.euclidean()[i] - a.euclidean()[i];
    return Point(sp, std::move(c));
  }
  if (dynamic_cast<const HyperbolicPlane*>(sp.get())) {
    double d = distance(a, b);
    if (d < 1e-14) return b;
    // Tangent at a toward b on the hyperboloid, then shoot distance 2d.
    const auto& pa = a.hyperboloid();
    const auto& pb = b.hyperboloid();
    double ch = std::cosh(d), sh = std::sinh(d);
    std::array<double, 3> c;
    for (int i = 0; i < 3; ++i) {
      double v = (pb[i] - ch * pa[i]) / sh;
      c[i] = std::cosh(2.0 * d) * pa[i] + std::sinh(2.0 * d) * v;
    }
    return Point(sp, HyperbolicPlane::renormalize(c));
  }
  if (auto* t = dynamic_cast<const MetricTree*>(sp.get())) {
    TreeCoord ca = a.tree(), cb = b.tree();
    double d = distance(a, b);
    if (d < 1e-14) return b;
    const TreeEdge& e = t->edges()[cb.edge];
    double off;
    if (ca.edge == cb.edge) {
      off = cb.offset + (cb.offset - ca.offset);
    } else {
      // continue away from a: pick the endpoint of b's edge whose
      // removal route does not lead back toward a
      Point u(sp, t->vertex_coord(e.u));
      Point v(sp, t->vertex_coord(e.v));
      bool away_is_v = distance(v, a) >= distance(u, a);
      off = away_is_v ? cb.offset + d : cb.offset - d;
    }
    return Point(sp, t->canonicalize({cb.edge, std::clamp(off, 0.0, e.length)}));
  }
  auto* p = dynamic_cast<const ProductSpace*>(sp.get());
  std::vector<Point> comps{extend_point(a.components()[0], b.components()[0]),
                           extend_point(a.components()[1], b.components()[1])};
  return Point(sp, std::move(comps));
}

// Flattened summand of a WeightedSum objective.
struct Summand {
  double coef = 1.0;
  ConvexFunction fn;
};

inline void flatten_sum(const ConvexFunction& f, double coef,
                        std::vector<Summand>& out, double& shift) {
  if (auto* ws = std::get_if<FnWeightedSum>(&f.node())) {
    for (const auto& [w, g] : ws->terms) flatten_sum(g, coef * w, out, shift);
  } else if (auto* sh = std::get_if<FnShifted>(&f.node())) {
    shift += coef * sh->c;
    flatten_sum(sh->inner, coef, out, shift);
  } else {
    out.push_back({coef, f});
  }
}

// prox of coef * fn with parameter sigma; coef scales into the parameter.
inline Point summand_prox(const Summand& s, const Point& y, double sigma,
                          const ProxOptions& opts) {
  if (auto p = exact_prox(s.fn, y, s.coef * sigma)) return *p;
  ProxOptions inner = opts;
  inner.tol = opts.tol * 0.1;
  // coef * f(z) + d^2/(2 sigma) = coef * (f(z) + d^2/(2 coef sigma))
  return prox(s.fn, y, s.coef * sigma, inner).minimizer;
}

// Cyclic proximal point over the summands of
//   F(y) = sum_i c_i f_i(y) + d(x,y)^2 / (2 lambda),
// steps sigma_j = sigma0 / j. The regularizer makes F (1/lambda)-strongly
// convex, so the certificate gap ~ disp^2 / lambda is meaningful.
inline ProxResult prox_weighted_sum(const ConvexFunction& f, const Point& x,
                                    double lambda, const ProxOptions& opts) {
  std::vector<Summand> summands;
  double shift = 0.0;
  flatten_sum(f, 1.0, summands, shift);

  // Feasibility polish: land exactly on indicator domains so objective
  // evaluations are finite.
  auto polished = [&](Point z, double* moved) {
    if (moved) *moved = 0.0;
    for (const Summand& s : summands) {
      if (auto* ind = std::get_if<FnIndicator>(&s.fn.node())) {
        Point z2 = project(ind->set, z);
        if (moved) *moved += distance(z, z2);
        z = z2;
      }
    }
    return z;
  };
  auto objective = [&](const Point& z) {
    double v = shift;
    for (const Summand& s : summands) v += s.coef * evaluate(s.fn, z);
    double dz = distance(x, z);
    return v + dz * dz / (2.0 * lambda);
  };

  // Nonsmooth summands often pin the minimizer to their kink locus, where
  // the cyclic iterate orbits at the step radius instead of settling.
  // Each checkpoint therefore also tries the kink candidates directly:
  // the anchor of a DistanceTo term and the set projection of the current
  // iterate for DistanceToSet. A pinned minimizer is then hit exactly.
  auto checkpoint_candidates = [&](const Point& yc, std::vector<Point>& out) {
    out.clear();
    out.push_back(polished(yc, nullptr));
    for (const Summand& s : summands) {
      if (auto* d = std::get_if<FnDistanceTo>(&s.fn.node()))
        out.push_back(polished(d->p, nullptr));
      else if (auto* ds = std::get_if<FnDistanceToSet>(&s.fn.node()))
        out.push_back(polished(project(ds->set, yc), nullptr));
    }
  };

  // The stopping rule is value-based: at every power-of-two cycle the
  // best candidate objective is compared against the previous
  // checkpoint. With an error decay like c * j^{-alpha}, alpha >= 1/2,
  // three times the drop over a cycle doubling bounds the remaining
  // error; the strong-convexity term covers the fast regime where the
  // plateau is already flat.
  Point y = x;
  long cycles = 0;
  double checkpoint_val = kInf;
  Point checkpoint_pt = x;
  Point best_pt = x;
  double best_val = kInf;
  double gap_cert = kInf;
  std::vector<Point> cands;
  // Nonsmooth summands bias the fixed point of the cyclic sweep by an
  // amount proportional to the step, so the iterate tracks the minimizer
  // only like sigma_j ~ 1/j. Extrapolating the geodesic through two
  // consecutive checkpoints to parameter 2 cancels that first-order bias
  // (the step halves between checkpoints), recovering the position at
  // second order. The extrapolated point is only ever adopted after its
  // objective has been evaluated, so a bad extrapolation costs nothing.
  Point raw_prev = x;
  Point hold_pt = x;
  // sigma_j = theta * lambda / j with theta >= 2: the regularizer is
  // (1/lambda)-strongly convex, and steps below lambda/j contract the
  // iterate only like j^{-sigma0/lambda}, stalling for large lambda.
  const double step0 = std::max(opts.sigma0, 2.0 * lambda);
  for (long j = 1; j <= opts.max_cycles; ++j) {
    double sigma = step0 / static_cast<double>(j);
    for (const Summand& s : summands) y = summand_prox(s, y, sigma, opts);
    // Quadratic term d(x,.)^2/(2 lambda): prox step pulls toward x.
    y = geodesic_point(y, x, sigma / (sigma + lambda));
    cycles = j;
    if ((j & (j - 1)) == 0 && j >= 8) {
      // The checkpoint sequence is already feasibility-polished, so its
      // drops certify the polished point directly. The movement term uses
      // the (1/lambda)-strong convexity: two points d apart cannot both be
      // closer than d^2/(4 lambda) to the minimum, so a checkpoint that
      // moved without lowering the value (a transient overshoot) does not
      // read as converged.
      // The gap must be measured on the iterate sequence alone: a kink
      // or extrapolation candidate that stays best across checkpoints
      // would fake a flat plateau while the iterate is still moving.
      Point yp = polished(y, nullptr);
      double fj = objective(yp);
      double dcheck = distance(checkpoint_pt, yp);
      gap_cert = 3.0 * std::max(0.0, checkpoint_val - fj) +
                 dcheck * dcheck / (4.0 * lambda);
      checkpoint_val = fj;
      checkpoint_pt = yp;
      checkpoint_candidates(y, cands);
      if (j >= 16) cands.push_back(polished(extend_point(raw_prev, y), nullptr));
      raw_prev = y;
      Point cur_best = yp;
      double cur_val = fj;
      for (const Point& c : cands) {
        double v = objective(c);
        if (v < cur_val) {
          cur_val = v;
          cur_best = c;
        }
      }
      if (cur_val < best_val) {
        best_val = cur_val;
        best_pt = cur_best;
      }
      // Values near the minimum converge quadratically in the position,
      // so a small gap alone can leave the minimizer orders of magnitude
      // less accurate than the value. Downstream identities (resolvent
      // inequality, nonexpansiveness) consume positions, so the break
      // also demands that the best candidate has stopped moving on the
      // scale lambda * tol; the extrapolated candidate makes this
      // reachable even when the raw iterate still crawls.
      double dhold = distance(hold_pt, cur_best);
      hold_pt = cur_best;
      if (gap_cert <= 0.9 * opts.tol &&
          (opts.pos_hold <= 0.0 || dhold <= opts.pos_hold * lambda * opts.tol))
        break;
    }
  }

  y = polished(y, nullptr);
  double value = objective(y);
  // The gap certifies the last checkpoint; any point at least as good
  // inherits it.
  if (best_val < value) {
    y = best_pt;
    value = best_val;
  }
  return ProxResult{y, value, cycles, gap_cert};
}

// Alternating minimization of the jointly convex objective
//   h(y,z) = g(z) + d(y,z)^2/(2 mu) + d(x,y)^2/(2 lambda)
// whose y-marginal is the prox objective of g_mu. The y-step is exact:
// the block minimizer lies on the geodesic [x,z].
inline ProxResult prox_envelope_of(const FnEnvelopeOf& env, const Point& x,
                                   double lambda, const ProxOptions& opts) {
  const double mu = env.mu;
  ProxOptions inner = opts;
  inner.tol = opts.tol * 0.1;
  // Each alternation pays for a full inner solve; cap the inner budget
  // and let an unconverged inner gap flow into the envelope gap below.
  // Inner positions enter only through the geodesic y-step, where their
  // noise is quadratic in the envelope value, so the value plateau alone
  // is enough to stop on.
  inner.max_cycles = std::min(opts.max_cycles, 30000L);
  inner.pos_hold = 0.0;

  Point y = x;
  ProxResult z_res = prox(env.inner, y, mu, inner);
  double disp = kInf;
  double disp_prev = kInf;
  double value = 0.0;
  long iters = 0;
  const double disp_target =
      std::sqrt(opts.tol / (1.0 / lambda + 1.0 / mu)) * 0.5;
  for (long j = 1; j <= 10000; ++j) {
    Point y_prev = y;
    y = geodesic_point(x, z_res.minimizer, lambda / (lambda + mu));
    z_res = prox(env.inner, y, mu, inner);
    disp_prev = disp;
    disp = distance(y, y_prev);
    double dxy = distance(x, y);
    value = z_res.value + dxy * dxy / (2.0 * lambda);
    iters = j;
    if (j > 2 && disp < disp_target) break;
    // A numerical inner prox jitters y by the inner position noise; once
    // the displacement stops contracting the alternation is at that
    // floor, and the disp^2 term in the gap below accounts for it.
    if (j > 5 && disp >= 0.9 * disp_prev) break;
  }
  double gap = 4.0 * disp * disp * (1.0 / lambda + 1.0 / mu) +
               2.0 * z_res.certified_gap;
  return ProxResult{y, value, iters, gap};
}

}  // namespace detail

inline ProxResult prox(const ConvexFunction& f_in, const Point& x, double lambda,
                       const ProxOptions& opts) {
  if (!(lambda > 0.0)) throw DomainError("prox needs lambda > 0");
  if (!(opts.tol > 0.0)) throw DomainError("prox needs tol > 0");
  ConvexFunction f = detail::envelope_depth(f_in) > detail::kEnvelopeDepthCap
                         ? detail::collapse_envelopes(f_in)
                         : f_in;
  if (auto y = exact_prox(f, x, lambda)) {
    double fy;
    if (std::holds_alternative<FnIndicator>(f.node())) {
      fy = 0.0;  // projection lands on the set by construction
    } else {
      fy = evaluate(f, *y);
    }
    double d = distance(x, *y);
    return ProxResult{*y, fy + d * d / (2.0 * lambda), 0, 0.0};
  }
  if (auto* sh = std::get_if<FnShifted>(&f.node())) {
    // Exact prox of the inner already failed, so recurse numerically.
    ProxResult r = prox(sh->inner, x, lambda, opts);
    r.value += sh->c;
    return r;
  }
  if (auto* env = std::get_if<FnEnvelopeOf>(&f.node()))
    return detail::prox_envelope_of(*env, x, lambda, opts);
  return detail::prox_weighted_sum(f, x, lambda, opts);
}

inline ProxResult prox(const ConvexFunction& f, const Point& x, double lambda) {
  return prox(f, x, lambda, default_prox_options(x.space()));
}

inline double envelope(const ConvexFunction& f, const Point& x, double lambda,
                       const ProxOptions& opts) {
  return prox(f, x, lambda, opts).value;
}

inline double envelope(const ConvexFunction& f, const Point& x, double lambda) {
  return prox(f, x, lambda).value;
}

// ---------------------------------------------------------------------------
// Evaluation (declared in convex.hpp)

inline double evaluate(const ConvexFunction& f, const Point& x) {
  return std::visit(
      [&](const auto& fn) -> double {
        using T = std::decay_t<decltype(fn)>;
        if constexpr (std::is_same_v<T, FnSquaredDistance>) {
          double d = distance(x, fn.p);
          return 0.5 * fn.weight * d * d;
        } else if constexpr (std::is_same_v<T, FnDistanceTo>) {
          return distance(x, fn.p);
        } else if constexpr (std::is_same_v<T, FnIndicator>) {
          return contains(fn.set, x) ? 0.0 : kInf;
        } else if constexpr (std::is_same_v<T, FnDistanceToSet>) {
          return set_distance(fn.set, x);
        } else if constexpr (std::is_same_v<T, FnWeightedSum>) {
          double s = 0.0;
          for (const auto& [w, g] : fn.terms) {
            double v = evaluate(g, x);
            if (v == kInf) return kInf;
            s += w * v;
          }
          return s;
        } else if constexpr (std::is_same_v<T, FnShifted>) {
          double v = evaluate(fn.inner, x);
          return v == kInf ? kInf : v + fn.c;
        } else {  // FnEnvelopeOf
          return envelope(fn.inner, x, fn.mu);
        }
      },
      f.node());
}

inline double convexity_residual(const ConvexFunction& f, const Point& x,
                                 const Point& y, double t) {
  detail::check_unit_interval(t);
  double fx = evaluate(f, x), fy = evaluate(f, y);
  if (fx == kInf || fy == kInf) return kInf;  // vacuously satisfied
  double fm = evaluate(f, geodesic_point(x, y, t));
  return (1.0 - t) * fx + t * fy - fm;
}

// ---------------------------------------------------------------------------
// Identities from the envelope calculus

// |(f_lambda)_mu (x) - f_{lambda+mu}(x)|, left side via genuine nesting.
inline double semigroup_residual(const ConvexFunction& f, const Point& x,
                                 double lambda, double mu,
                                 const ProxOptions& opts) {
  if (!(lambda > 0.0 && mu > 0.0)) throw DomainError("semigroup needs lambda, mu > 0");
  double nested = envelope(envelope_of(f, lambda), x, mu, opts);
  double direct = envelope(f, x, lambda + mu, opts);
  return std::abs(nested - direct);
}

inline double semigroup_residual(const ConvexFunction& f, const Point& x,
                                 double lambda, double mu) {
  return semigroup_residual(f, x, lambda, mu, default_prox_options(x.space()));
}

// Slack of the resolvent inequality
//   f(Jx) + d(x,Jx)^2/(2l) + d(Jx,y)^2/(2l) <= f(y) + d(x,y)^2/(2l):
// returns RHS - LHS; +inf when y is outside dom f (vacuous).
inline double resolvent_inequality_residual(const ConvexFunction& f,
                                            const Point& x, const Point& y,
                                            double lambda,
                                            const ProxOptions& opts) {
  double fy = evaluate(f, y);
  if (fy == kInf) return kInf;
  ProxResult r = prox(f, x, lambda, opts);
  double dxy = distance(x, y);
  double djy = distance(r.minimizer, y);
  // f(Jx) + d(x,Jx)^2/(2l) is exactly r.value, avoiding an indicator
  // re-evaluation at the boundary.
  return fy + dxy * dxy / (2.0 * lambda) - r.value - djy * djy / (2.0 * lambda);
}

inline double resolvent_inequality_residual(const ConvexFunction& f,
                                            const Point& x, const Point& y,
                                            double lambda) {
  return resolvent_inequality_residual(f, x, y, lambda,
                                       default_prox_options(x.space()));
}

// f_{l1}(x) <= f_{l2}(x) <= f(x) for l1 > l2 > 0.
inline bool envelope_monotone_in_lambda(const ConvexFunction& f, const Point& x,
                                        double lambda1, double lambda2,
                                        double tol = 1e-9) {
  if (!(lambda1 > lambda2 && lambda2 > 0.0))
    throw DomainError("need lambda1 > lambda2 > 0");
  double e1 = envelope(f, x, lambda1);
  double e2 = envelope(f, x, lambda2);
  double fx = evaluate(f, x);
  return e1 <= e2 + tol && (fx == kInf || e2 <= fx + tol);
}

// Envelope values along a decreasing lambda grid, for lambda -> 0 probes.
inline std::vector<double> envelope_limit_probe(const ConvexFunction& f,
                                                const Point& x,
                                                const std::vector<double>& lambdas) {
  std::vector<double> out;
  out.reserve(lambdas.size());
  for (double l : lambdas) out.push_back(envelope(f, x, l));
  return out;
}

// d(J_{l2} x, x) <= d(J_{l1} x, x) for l1 > l2 > 0.
inline bool prox_displacement_monotone(const ConvexFunction& f, const Point& x,
                                       double lambda1, double lambda2,
                                       double tol = 1e-9) {
  if (!(lambda1 > lambda2 && lambda2 > 0.0))
    throw DomainError("need lambda1 > lambda2 > 0");
  double d1 = distance(prox(f, x, lambda1).minimizer, x);
  double d2 = distance(prox(f, x, lambda2).minimizer, x);
  return d2 <= d1 + tol;
}

// ---------------------------------------------------------------------------
// Equi-minorization: f_n >= -r (d(., x0)^2 + 1)

struct MinorizationBound {
  Point anchor;
  double r = 0.0;
  double lambda = 0.0;
  double envelope_at_anchor = 0.0;  // the sampled limit f_0
};

// Stability of f_{n,lambda}(x0) over a dyadic index schedule; diverging
// envelope values mean no uniform minorization exists over the family.
inline MinorizationBound estimate_minorization(const FunctionSequence& seq,
                                               const Point& x0, double lambda,
                                               long n_start = 8, int levels = 7,
                                               const ProxOptions* opts = nullptr) {
  if (!(lambda > 0.0)) throw DomainError("estimate_minorization needs lambda > 0");
  ProxOptions o = opts ? *opts : default_prox_options(x0.space());
  std::vector<double> values;
  long n = n_start;
  for (int j = 0; j <= levels; ++j, n *= 2)
    values.push_back(envelope(seq.at(n), x0, lambda, o));
  double last = values.back();
  double d_last = std::abs(values[values.size() - 1] - values[values.size() - 2]);
  double d_prev = std::abs(values[values.size() - 2] - values[values.size() - 3]);
  double scale = 1.0 + std::abs(last);
  bool stable = d_last <= 1e-3 * scale && d_last <= d_prev + 1e-3 * scale;
  if (!stable)
    throw NoUniformBound("envelope values at the anchor do not stabilize");
  double r = std::max(1.0 / (2.0 * lambda), std::abs(last) + 1.0);
  return MinorizationBound{x0, r, lambda, last};
}

}  // namespace moscolab

#endif
