#ifndef MOSCOLAB_MOSCO_METRIC_HPP
#define MOSCOLAB_MOSCO_METRIC_HPP

// The metric side of Mosco convergence: envelope/prox pseudometric
// families over finite lambda and probe grids, the summed metric rho,
// equi-Lipschitz constants for envelope families, and the Cauchy-limit
// assembly f = sup_k phi(lambda_k, .).

#include <cmath>
#include <functional>
#include <vector>

#include "moscolab/convergence.hpp"

namespace moscolab {

struct LambdaGrid {
  std::vector<double> values;  // strictly decreasing, positive

  explicit LambdaGrid(std::vector<double> v) : values(std::move(v)) {
    if (values.empty()) throw DomainError("lambda grid must be nonempty");
    for (std::size_t k = 0; k < values.size(); ++k) {
      if (!(values[k] > 0.0)) throw DomainError("lambda grid must be positive");
      if (k > 0 && !(values[k] < values[k - 1]))
        throw DomainError("lambda grid must strictly decrease");
    }
  }

  // lambda_k = 2^{1-k}, k = 1..K
  static LambdaGrid dyadic(int K = 12) {
    std::vector<double> v;
    for (int k = 1; k <= K; ++k) v.push_back(std::ldexp(1.0, 1 - k));
    return LambdaGrid(std::move(v));
  }

  std::size_t size() const { return values.size(); }
};

struct ProbeGrid {
  std::vector<Point> points;

  explicit ProbeGrid(std::vector<Point> pts) : points(std::move(pts)) {
    if (points.empty()) throw DomainError("probe grid must be nonempty");
    for (const Point& p : points) detail::check_same_space(points.front(), p);
  }

  // Euclidean lattice over [min, max] with the given spacing, ordered by
  // distance from the origin so that low-index (high-weight) probes sit
  // near the center of the region.
  static ProbeGrid lattice(const SpacePtr& space, const std::vector<double>& lo,
                           const std::vector<double>& hi, double spacing) {
    auto* e = dynamic_cast<const EuclideanSpace*>(space.get());
    if (!e) throw DomainError("lattice probe grids are Euclidean only");
    int dim = e->dim();
    if (static_cast<int>(lo.size()) != dim || static_cast<int>(hi.size()) != dim)
      throw DomainError("lattice bounds have wrong dimension");
    if (!(spacing > 0.0)) throw DomainError("lattice spacing must be positive");
    std::vector<std::vector<double>> coords{{}};
    for (int d = 0; d < dim; ++d) {
      std::vector<std::vector<double>> next;
      for (double v = lo[d]; v <= hi[d] + 1e-12; v += spacing)
        for (auto base : coords) {
          base.push_back(v);
          next.push_back(std::move(base));
        }
      coords = std::move(next);
    }
    std::sort(coords.begin(), coords.end(), [](const auto& a, const auto& b) {
      double na = 0.0, nb = 0.0;
      for (double v : a) na += v * v;
      for (double v : b) nb += v * v;
      if (na != nb) return na < nb;
      return a < b;
    });
    std::vector<Point> pts;
    pts.reserve(coords.size());
    for (auto& c : coords) pts.push_back(euclidean_point(space, std::move(c)));
    return ProbeGrid(std::move(pts));
  }

  std::size_t size() const { return points.size(); }
};

// ---------------------------------------------------------------------------
// Pseudometric families

// e_{lambda,x}(f,g) = |f_lambda(x) - g_lambda(x)|
inline double pseudometric_e(const ConvexFunction& f, const ConvexFunction& g,
                             double lambda, const Point& x,
                             const ProxOptions& opts) {
  if (!f.space()->same(*g.space()))
    throw SpaceMismatch("pseudometric over different spaces");
  return std::abs(envelope(f, x, lambda, opts) - envelope(g, x, lambda, opts));
}

// r_{lambda,x}(f,g) = d(J^f_lambda x, J^g_lambda x)
inline double pseudometric_r(const ConvexFunction& f, const ConvexFunction& g,
                             double lambda, const Point& x,
                             const ProxOptions& opts) {
  if (!f.space()->same(*g.space()))
    throw SpaceMismatch("pseudometric over different spaces");
  return distance(prox(f, x, lambda, opts).minimizer,
                  prox(g, x, lambda, opts).minimizer);
}

struct MoscoDistance {
  double value = 0.0;    // e_terms + r_terms, in [0, 2)
  double e_terms = 0.0;  // < 1
  double r_terms = 0.0;  // < 1
  double truncation_weight = 0.0;  // weight of the ignored grid tail
};

// rho(f,g) = sum_{k,l} 2^{-(k+l)} [ e/(1+e) + r/(1+r) ], indices from 1.
inline MoscoDistance rho(const ConvexFunction& f, const ConvexFunction& g,
                         const LambdaGrid& lambdas, const ProbeGrid& probes,
                         const ProxOptions& opts) {
  MoscoDistance out;
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    for (std::size_t l = 0; l < probes.size(); ++l) {
      double w = std::ldexp(1.0, -static_cast<int>(k + l + 2));
      double e = pseudometric_e(f, g, lambdas.values[k], probes.points[l], opts);
      double r = pseudometric_r(f, g, lambdas.values[k], probes.points[l], opts);
      out.e_terms += w * e / (1.0 + e);
      out.r_terms += w * r / (1.0 + r);
    }
  }
  out.value = out.e_terms + out.r_terms;
  out.truncation_weight = std::ldexp(1.0, -static_cast<int>(lambdas.size())) +
                          std::ldexp(1.0, -static_cast<int>(probes.size()));
  return out;
}

// ---------------------------------------------------------------------------
// Equi-Lipschitz constants (C + R) / lambda for envelope families

struct EquiLipschitzBound {
  double C = 0.0;       // displacement bound sup d(J^n_{lambda0} x, x) on B_R
  double R = 0.0;
  double lambda0 = 0.0;  // bound valid for lambda in (0, lambda0)
  Point anchor;

  double L(double lambda) const {
    if (!(lambda > 0.0 && lambda < lambda0))
      throw DomainError("Lipschitz bound valid only for lambda in (0, lambda0)");
    return (C + R) / lambda;
  }
};

// Hypothesis: f_{n,lambda}(x0) settles at two scales lambda0 < lambda1.
// C is the largest sampled prox displacement at scale lambda0 over B_R(x0).
inline EquiLipschitzBound equi_lipschitz_bound(
    const FunctionSequence& seq, double lambda0, double lambda1,
    const Point& x0, double R, const Window& window,
    const std::vector<Point>& ball_samples, const ProxOptions& opts) {
  if (!(0.0 < lambda0 && lambda0 < lambda1))
    throw DomainError("need 0 < lambda0 < lambda1");
  for (double lambda : {lambda0, lambda1}) {
    bool divergent = false;
    detail::stabilized_limit(
        [&](long n) { return envelope(seq.at(n), x0, lambda, opts); },
        window.start, &divergent);
    if (divergent)
      throw NoBound("envelope values at the anchor diverge; no uniform "
                    "Lipschitz constant");
  }
  EquiLipschitzBound out;
  out.R = R;
  out.lambda0 = lambda0;
  out.anchor = x0;
  std::vector<long> ns = log_samples(window.start, window.end(), 8);
  for (long n : ns) {
    ConvexFunction fn = seq.at(n);
    for (const Point& x : ball_samples) {
      if (distance(x, x0) > R + 1e-12) continue;
      double d = distance(prox(fn, x, lambda0, opts).minimizer, x);
      out.C = std::max(out.C, d);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cauchy-limit assembly (completeness construction)

struct LimitTable {
  LambdaGrid lambdas;
  ProbeGrid probes;
  std::vector<std::vector<double>> phi;     // [k][l]
  std::vector<std::vector<Point>> prox_pts; // [k][l], limits of J^n
  std::vector<double> sup_over_k;           // [l]
  std::vector<double> lipschitz;            // L(lambda_k) error-bar constants
  double grid_spacing = 0.0;
  Point properness_witness;
  double witness_value = 0.0;

  struct Eval {
    double value = 0.0;
    double error_bound = 0.0;
  };

  // Nearest-grid evaluation with an equi-Lipschitz error bar.
  Eval evaluate(const Point& x) const {
    std::size_t best = 0;
    double best_d = kInf;
    for (std::size_t l = 0; l < probes.size(); ++l) {
      double d = distance(x, probes.points[l]);
      if (d < best_d) {
        best_d = d;
        best = l;
      }
    }
    Eval out;
    out.value = sup_over_k[best];
    double lip = lipschitz.empty() ? 0.0 : lipschitz.back();
    out.error_bound = lip * best_d;
    return out;
  }
};

struct CauchyLimitOptions {
  double cauchy_tol = 0.02;  // rho threshold on tail pairs
  ProxOptions prox;
  double lipschitz_R = 2.0;
};

// rho between a sequence member and a limit table (envelope and prox
// families compared cell by cell).
inline MoscoDistance rho_to_table(const ConvexFunction& f, const LimitTable& table,
                                  const ProxOptions& opts) {
  MoscoDistance out;
  for (std::size_t k = 0; k < table.lambdas.size(); ++k) {
    for (std::size_t l = 0; l < table.probes.size(); ++l) {
      double w = std::ldexp(1.0, -static_cast<int>(k + l + 2));
      ProxResult r = prox(f, table.probes.points[l], table.lambdas.values[k], opts);
      double e = std::abs(r.value - table.phi[k][l]);
      double rr = distance(r.minimizer, table.prox_pts[k][l]);
      out.e_terms += w * e / (1.0 + e);
      out.r_terms += w * rr / (1.0 + rr);
    }
  }
  out.value = out.e_terms + out.r_terms;
  out.truncation_weight =
      std::ldexp(1.0, -static_cast<int>(table.lambdas.size())) +
      std::ldexp(1.0, -static_cast<int>(table.probes.size()));
  return out;
}

inline LimitTable cauchy_limit(const FunctionSequence& seq,
                               const LambdaGrid& lambdas, const ProbeGrid& probes,
                               const Window& window,
                               const CauchyLimitOptions& opts = {}) {
  // Cauchy diagnostic over tail pairs: adjacent indices catch alternating
  // families, dyadic pairs catch slow drift.
  double first_pair = -1.0, last_pair = -1.0;
  long n = window.start;
  for (int j = 0; j < 3; ++j, n *= 2) {
    double a = rho(seq.at(n), seq.at(n + 1), lambdas, probes, opts.prox).value;
    double b = rho(seq.at(n), seq.at(2 * n), lambdas, probes, opts.prox).value;
    double m = std::max(a, b);
    if (first_pair < 0.0) first_pair = m;
    last_pair = m;
  }
  if (last_pair > opts.cauchy_tol || last_pair > first_pair + opts.cauchy_tol)
    throw NotCauchy("sequence is not rho-Cauchy over the supplied grids");

  LimitTable table{lambdas, probes, {}, {}, {}, {}, 0.0, probes.points.front(), 0.0};
  // Minorization must hold or the sup-assembly has no Gamma-limit backing.
  estimate_minorization(FunctionSequence{seq.at, seq.limit},
                        probes.points.front(), lambdas.values.front(),
                        std::max<long>(8, window.start / 4), 7, &opts.prox);

  long n_tail = window.end() / 4;
  EquiLipschitzBound lip = equi_lipschitz_bound(
      seq, 2.0 * lambdas.values.front(), 4.0 * lambdas.values.front(),
      probes.points.front(), opts.lipschitz_R, window, probes.points, opts.prox);

  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    std::vector<double> phi_row;
    std::vector<Point> prox_row;
    for (std::size_t l = 0; l < probes.size(); ++l) {
      const Point& x = probes.points[l];
      double lambda = lambdas.values[k];
      phi_row.push_back(detail::stabilized_limit(
          [&](long m) { return envelope(seq.at(m), x, lambda, opts.prox); },
          std::max<long>(1, n_tail)));
      prox_row.push_back(prox(seq.at(window.end()), x, lambda, opts.prox).minimizer);
    }
    table.phi.push_back(std::move(phi_row));
    table.prox_pts.push_back(std::move(prox_row));
    table.lipschitz.push_back(lip.L(lambdas.values[k]));
  }
  for (std::size_t l = 0; l < probes.size(); ++l) {
    double sup = -kInf;
    for (std::size_t k = 0; k < lambdas.size(); ++k)
      sup = std::max(sup, table.phi[k][l]);
    table.sup_over_k.push_back(sup);
  }
  // Probe spacing estimate: nearest-neighbour distance of the first probe.
  double spacing = kInf;
  for (std::size_t l = 1; l < probes.size(); ++l)
    spacing = std::min(spacing,
                       distance(probes.points[0], probes.points[l]));
  table.grid_spacing = probes.size() > 1 ? spacing : 0.0;

  // Properness witness: a prox-point limit has limit value phi < inf, so
  // the assembled function is finite somewhere.
  std::size_t kk = lambdas.size() - 1;
  table.properness_witness = table.prox_pts[kk][0];
  table.witness_value = table.phi[kk][0];
  return table;
}

}  // namespace moscolab

#endif
