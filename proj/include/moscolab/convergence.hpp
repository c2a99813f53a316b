#ifndef MOSCOLAB_CONVERGENCE_HPP
#define MOSCOLAB_CONVERGENCE_HPP

// Weak convergence via asymptotic centers, Mosco-convergence checkers
// (both directions, at desk scale), Gamma-limit assembly from envelope
// limits, and the Frolik-Wijsman bridge for convex sets.
//
// All asymptotic statements are approximated by windowed tails; every
// verdict is a falsifier outcome ("consistent" means no counterexample
// found), never a proof.

#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "moscolab/prox.hpp"

namespace moscolab {

struct Window {
  long start = 16;
  long length = 16;

  Window() = default;
  Window(long s, long l) : start(s), length(l) {
    if (s < 1 || l < 8) throw DomainError("window needs start >= 1, length >= 8");
  }
  long end() const { return start + length - 1; }
};

struct PointSequence {
  std::function<Point(long)> at;
  Window window;
};

// Log-spaced sample indices covering [lo, hi], always including both ends.
inline std::vector<long> log_samples(long lo, long hi, int count = 12) {
  std::vector<long> out;
  double ratio = static_cast<double>(hi) / static_cast<double>(lo);
  for (int i = 0; i < count; ++i) {
    double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    long n = std::lround(lo * std::pow(ratio, t));
    if (out.empty() || n > out.back()) out.push_back(n);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Asymptotic centers: minimizers of max_{n in window} d(x, x_n)^2

namespace detail {

inline double omega_hat(const std::vector<Point>& pts, const Point& x) {
  double m = 0.0;
  for (const Point& p : pts) {
    double d = distance(x, p);
    m = std::max(m, d * d);
  }
  return m;
}

// --- Euclidean: exact minimum enclosing ball (Welzl) -----------------------

struct Ball {
  std::vector<double> c;
  double r2 = -1.0;
  bool contains(const std::vector<double>& p, double slack) const {
    if (r2 < 0.0) return false;
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += (p[i] - c[i]) * (p[i] - c[i]);
    return s <= r2 + slack;
  }
};

// Circumscribed ball of up to dim+1 affinely independent boundary points.
inline Ball ball_from_boundary(const std::vector<std::vector<double>>& B, int dim) {
  Ball out;
  if (B.empty()) {
    out.c.assign(dim, 0.0);
    out.r2 = -1.0;
    return out;
  }
  const auto& p0 = B[0];
  int m = static_cast<int>(B.size()) - 1;
  if (m == 0) {
    out.c = p0;
    out.r2 = 0.0;
    return out;
  }
  // Solve (A A^T) u = b with A rows p_i - p0, b_i = |p_i - p0|^2 / 2.
  std::vector<std::vector<double>> A(m, std::vector<double>(dim));
  std::vector<double> b(m);
  for (int i = 0; i < m; ++i) {
    double nn = 0.0;
    for (int d = 0; d < dim; ++d) {
      A[i][d] = B[i + 1][d] - p0[d];
      nn += A[i][d] * A[i][d];
    }
    b[i] = 0.5 * nn;
  }
  std::vector<std::vector<double>> G(m, std::vector<double>(m + 1));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      double s = 0.0;
      for (int d = 0; d < dim; ++d) s += A[i][d] * A[j][d];
      G[i][j] = s;
    }
    G[i][m] = b[i];
  }
  // Gaussian elimination with partial pivoting.
  for (int col = 0; col < m; ++col) {
    int piv = col;
    for (int row = col + 1; row < m; ++row)
      if (std::abs(G[row][col]) > std::abs(G[piv][col])) piv = row;
    std::swap(G[col], G[piv]);
    if (std::abs(G[col][col]) < 1e-14) {
      out.r2 = -1.0;  // degenerate boundary set
      out.c.assign(dim, 0.0);
      return out;
    }
    for (int row = 0; row < m; ++row) {
      if (row == col) continue;
      double f = G[row][col] / G[col][col];
      for (int k = col; k <= m; ++k) G[row][k] -= f * G[col][k];
    }
  }
  out.c = p0;
  double r2 = 0.0;
  for (int i = 0; i < m; ++i) {
    double u = G[i][m] / G[i][i];
    for (int d = 0; d < dim; ++d) out.c[d] += u * A[i][d];
  }
  for (int d = 0; d < dim; ++d) r2 += (out.c[d] - p0[d]) * (out.c[d] - p0[d]);
  out.r2 = r2;
  return out;
}

inline Ball welzl(std::vector<std::vector<double>>& pts, std::size_t n,
                  std::vector<std::vector<double>>& boundary, int dim) {
  if (n == 0 || static_cast<int>(boundary.size()) == dim + 1)
    return ball_from_boundary(boundary, dim);
  Ball D = welzl(pts, n - 1, boundary, dim);
  double slack = 1e-12 * (1.0 + std::abs(D.r2));
  if (D.contains(pts[n - 1], slack)) return D;
  boundary.push_back(pts[n - 1]);
  D = welzl(pts, n - 1, boundary, dim);
  boundary.pop_back();
  return D;
}

inline Point center_euclidean(const SpacePtr& space, const std::vector<Point>& pts) {
  int dim = static_cast<const EuclideanSpace*>(space.get())->dim();
  std::vector<std::vector<double>> coords;
  coords.reserve(pts.size());
  for (const Point& p : pts) coords.push_back(p.euclidean());
  std::mt19937_64 rng(0x5eedULL);  // deterministic shuffle for Welzl
  std::shuffle(coords.begin(), coords.end(), rng);
  std::vector<std::vector<double>> boundary;
  Ball ball = welzl(coords, coords.size(), boundary, dim);
  return euclidean_point(space, ball.c);
}

// --- Metric tree: exact per-edge 1-D convex minimax ------------------------

inline Point center_tree(const SpacePtr& space, const std::vector<Point>& pts) {
  auto* tree = static_cast<const MetricTree*>(space.get());
  Point best = pts.front();
  double best_val = omega_hat(pts, best);
  for (int e = 0; e < static_cast<int>(tree->edges().size()); ++e) {
    double len = tree->edges()[e].length;
    auto value = [&](double off) {
      return omega_hat(pts, tree_point(space, e, off));
    };
    double lo = 0.0, hi = len;
    for (int it = 0; it < 200 && hi - lo > 1e-14 * (1.0 + len); ++it) {
      double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
      if (value(m1) <= value(m2)) hi = m2;
      else lo = m1;
    }
    Point cand = tree_point(space, e, (lo + hi) / 2.0);
    double v = omega_hat(pts, cand);
    if (v < best_val) {
      best_val = v;
      best = cand;
    }
  }
  return best;
}

// --- Generic: geodesic farthest-point descent ------------------------------

inline Point center_generic(const std::vector<Point>& pts, long iterations) {
  Point x = pts.front();
  double best = omega_hat(pts, x);
  for (const Point& p : pts) {
    double v = omega_hat(pts, p);
    if (v < best) {
      best = v;
      x = p;
    }
  }
  for (long j = 1; j <= iterations; ++j) {
    const Point* far = &pts.front();
    double fd = -1.0;
    for (const Point& p : pts) {
      double d = distance(x, p);
      if (d > fd) {
        fd = d;
        far = &p;
      }
    }
    if (fd == 0.0) break;
    x = geodesic_point(x, *far, 1.0 / static_cast<double>(j + 1));
  }
  return x;
}

}  // namespace detail

struct AsymptoticCenterOptions {
  long generic_iterations = 200000;
  double bound_limit = 1e8;  // beyond this the window counts as unbounded
};

inline Point asymptotic_center(const PointSequence& seq,
                               const AsymptoticCenterOptions& opts = {}) {
  std::vector<Point> pts;
  pts.reserve(seq.window.length);
  for (long n = seq.window.start; n <= seq.window.end(); ++n)
    pts.push_back(seq.at(n));
  const Point& ref = pts.front();
  for (const Point& p : pts) {
    double d = distance(ref, p);
    if (!std::isfinite(d) || d > opts.bound_limit)
      throw Unbounded("point sequence window is not bounded");
  }
  SpacePtr space = ref.space();
  if (dynamic_cast<const EuclideanSpace*>(space.get()))
    return detail::center_euclidean(space, pts);
  if (dynamic_cast<const MetricTree*>(space.get()))
    return detail::center_tree(space, pts);
  return detail::center_generic(pts, opts.generic_iterations);
}

// ---------------------------------------------------------------------------
// Weak limits

enum class TriState { yes, no, inconclusive };

inline std::string to_string(TriState t) {
  switch (t) {
    case TriState::yes: return "yes";
    case TriState::no: return "no";
    default: return "inconclusive";
  }
}

struct SubsequenceSelector {
  std::string name;
  std::function<long(long)> map;  // subsequence index k >= 1 -> original n
};

// identity, evens, odds, and a seeded random thinning.
inline std::vector<SubsequenceSelector> default_battery(std::uint64_t seed) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return {
      {"identity", [](long k) { return k; }},
      {"evens", [](long k) { return 2 * k; }},
      {"odds", [](long k) { return 2 * k + 1; }},
      {"random-thinning",
       [mix, seed](long k) {
         long n = 0;
         for (long i = 1; i <= k; ++i)
           n += 1 + static_cast<long>(mix(seed + static_cast<std::uint64_t>(i)) % 2);
         return n;
       }},
  };
}

struct WeakLimitVerdict {
  TriState converges = TriState::inconclusive;
  std::optional<Point> candidate;
  std::optional<std::string> witness;  // selector whose center disagrees
  double max_center_spread = 0.0;
};

struct WeakLimitOptions {
  double tol = 1e-3;            // agreement tolerance between centers
  double stability_tol = 1e-3;  // drift allowed when the window doubles
  AsymptoticCenterOptions center;
};

inline WeakLimitVerdict weak_limit(const PointSequence& seq,
                                   const std::vector<SubsequenceSelector>& battery,
                                   const WeakLimitOptions& opts = {}) {
  if (battery.size() < 4)
    throw DomainError("battery must include identity, evens, odds, thinning");
  Point c_full = asymptotic_center(seq, opts.center);
  PointSequence doubled{seq.at, Window(seq.window.start, seq.window.length * 2)};
  Point c_doubled = asymptotic_center(doubled, opts.center);
  WeakLimitVerdict v;
  v.candidate = c_full;
  if (distance(c_full, c_doubled) > opts.stability_tol) {
    v.converges = TriState::inconclusive;
    return v;
  }
  for (const auto& sel : battery) {
    PointSequence sub{[&seq, &sel](long k) { return seq.at(sel.map(k)); },
                      seq.window};
    Point c = asymptotic_center(sub, opts.center);
    double d = distance(c, c_full);
    v.max_center_spread = std::max(v.max_center_spread, d);
    if (d > opts.tol) {
      v.converges = TriState::no;
      v.witness = sel.name;
      return v;
    }
  }
  v.converges = TriState::yes;
  return v;
}

// ---------------------------------------------------------------------------
// Mosco condition (i): liminf inequality along weak limits

struct LiminfCheck {
  Point x;
  double liminf_estimate = 0.0;
  double f_at_x = 0.0;
  bool pass = false;
  std::string label;
};

struct CheckOptions {
  double tol = 1e-6;
  double recovery_tol = 0.05;   // final-displacement bound for recovery
  double value_tol = 1e-6;      // limsup f_n(y_n) <= f(x) + value_tol
  ProxOptions prox;
  std::uint64_t seed = 1;
};

inline LiminfCheck check_liminf_condition(const FunctionSequence& fseq,
                                          const ConvexFunction& f,
                                          const PointSequence& wseq,
                                          const CheckOptions& opts = {}) {
  WeakLimitVerdict v = weak_limit(wseq, default_battery(opts.seed));
  if (v.converges != TriState::yes)
    throw PreconditionFailed("sequence is not weakly convergent");
  const Point& x = *v.candidate;
  double est = kInf;
  for (long n = wseq.window.start; n <= wseq.window.end(); ++n)
    est = std::min(est, evaluate(fseq.at(n), wseq.at(n)));
  double fx = evaluate(f, x);
  // The center is only resolved to about the selector spread; budget the
  // comparison by a local Lipschitz estimate of f over that radius so a
  // genuinely convergent sequence is not "falsified" by center roundoff.
  // The slack is zero for constant sequences, keeping the strict check.
  double slack = 0.0;
  if (fx < kInf && v.max_center_spread > 0.0) {
    Point tail = wseq.at(wseq.window.end());
    double d = distance(x, tail);
    if (d > 0.0) {
      Point probe = geodesic_point(x, tail,
                                   std::min(1.0, 2.0 * v.max_center_spread / d));
      double dp = distance(x, probe);
      double fp = evaluate(f, probe);
      if (dp > 0.0 && fp < kInf)
        slack = 4.0 * v.max_center_spread * std::abs(fp - fx) / dp;
    }
  }
  LiminfCheck out;
  out.x = x;
  out.liminf_estimate = est;
  out.f_at_x = fx;
  out.pass = fx <= est + opts.tol + slack || est == kInf;
  return out;
}

// ---------------------------------------------------------------------------
// Mosco condition (ii): recovery sequences y_n = J^n_{lambda_n} x

using LambdaSchedule = std::function<double(long)>;

inline LambdaSchedule default_lambda_schedule() {
  return [](long n) { return 1.0 / static_cast<double>(n); };
}

struct RecoveryCheck {
  Point x;
  double f_at_x = 0.0;
  bool vacuous = false;  // x outside dom f
  std::vector<long> ns;
  std::vector<double> displacements;  // d(y_n, x)
  std::vector<double> values;         // f_n(y_n)
  double limsup_estimate = 0.0;
  bool pass_distance = false;
  bool pass_value = false;
  bool pass = false;
  std::string label;
};

inline PointSequence build_recovery_sequence(const FunctionSequence& fseq,
                                             const Point& x,
                                             const LambdaSchedule& schedule,
                                             const Window& window,
                                             const ProxOptions& opts) {
  if (!(schedule(window.start) > schedule(window.end())) &&
      schedule(window.start) != schedule(window.end()))
    throw DomainError("lambda schedule must be decreasing");
  auto at = [fseq, x, schedule, opts](long n) {
    return prox(fseq.at(n), x, schedule(n), opts).minimizer;
  };
  return PointSequence{at, window};
}

inline RecoveryCheck check_recovery(const FunctionSequence& fseq,
                                    const ConvexFunction& f, const Point& x,
                                    const LambdaSchedule& schedule,
                                    const Window& window,
                                    const CheckOptions& opts = {}) {
  RecoveryCheck out;
  out.x = x;
  out.f_at_x = evaluate(f, x);
  if (out.f_at_x == kInf) {
    out.vacuous = true;
    out.pass = true;  // nothing to prove outside dom f
    return out;
  }
  out.ns = log_samples(window.start, window.end());
  for (long n : out.ns) {
    double lambda = schedule(n);
    ProxResult r = prox(fseq.at(n), x, lambda, opts.prox);
    double d = distance(r.minimizer, x);
    out.displacements.push_back(d);
    // f_n(y_n) recovered from the envelope value, robust at indicator
    // boundaries.
    out.values.push_back(r.value - d * d / (2.0 * lambda));
  }
  std::size_t half = out.ns.size() / 2;
  double tail_max_disp = 0.0, head_max_disp = 0.0;
  double tail_max_val = -kInf;
  bool tail_decreasing = true;
  for (std::size_t i = 0; i < out.ns.size(); ++i) {
    if (i >= half) {
      tail_max_disp = std::max(tail_max_disp, out.displacements[i]);
      tail_max_val = std::max(tail_max_val, out.values[i]);
      if (i + 1 < out.ns.size())
        tail_decreasing = tail_decreasing &&
                          out.values[i + 1] <=
                              out.values[i] + 1e-9 * (1.0 + std::abs(out.values[i]));
    } else {
      head_max_disp = std::max(head_max_disp, out.displacements[i]);
    }
  }
  // A monotone tail pins the limsup at its last sample; otherwise stay
  // with the conservative tail maximum.
  out.limsup_estimate = tail_decreasing ? out.values.back() : tail_max_val;
  out.pass_distance =
      tail_max_disp <= std::max(opts.recovery_tol, 0.6 * head_max_disp);
  out.pass_value = out.limsup_estimate <= out.f_at_x + opts.value_tol;
  out.pass = out.pass_distance && out.pass_value;
  return out;
}

// ---------------------------------------------------------------------------
// Envelope convergence (Theorem 3.1 direction diagnostics)

struct LambdaGrid;   // defined in mosco_metric.hpp
struct ProbeGrid;

struct EnvelopeCell {
  double lambda = 0.0;
  std::size_t probe = 0;
  std::vector<std::pair<long, double>> gaps;  // (n, |f_{n,l}(x) - f_l(x)|)
  double final_gap = 0.0;
  double cauchy = 0.0;     // max successive envelope difference, tail half
  double prox_gap = 0.0;   // d(J^n_l x, J_l x) at the window end
  bool divergent = false;
};

struct EnvelopeConvergenceReport {
  std::vector<EnvelopeCell> cells;
  double max_final_gap = 0.0;
  double max_prox_gap = 0.0;
  bool any_divergent = false;

  bool pass(double tol) const {
    return !any_divergent && max_final_gap <= tol;
  }
};

inline EnvelopeConvergenceReport check_envelope_convergence(
    const FunctionSequence& fseq, const ConvexFunction& f,
    const std::vector<double>& lambdas, const std::vector<Point>& probes,
    const Window& window, const CheckOptions& opts = {}) {
  if (lambdas.empty() || probes.empty())
    throw DomainError("envelope convergence needs nonempty grids");
  for (std::size_t k = 1; k < lambdas.size(); ++k)
    if (!(lambdas[k] < lambdas[k - 1]))
      throw DomainError("lambda grid must be strictly decreasing");
  EnvelopeConvergenceReport rep;
  std::vector<long> ns = log_samples(window.start, window.end());
  for (double lambda : lambdas) {
    for (std::size_t l = 0; l < probes.size(); ++l) {
      const Point& x = probes[l];
      EnvelopeCell cell;
      cell.lambda = lambda;
      cell.probe = l;
      ProxResult target = prox(f, x, lambda, opts.prox);
      std::vector<double> values;
      for (long n : ns) {
        double v = envelope(fseq.at(n), x, lambda, opts.prox);
        values.push_back(v);
        cell.gaps.emplace_back(n, std::abs(v - target.value));
      }
      cell.final_gap = cell.gaps.back().second;
      std::size_t half = ns.size() / 2;
      for (std::size_t i = half; i + 1 < values.size(); ++i)
        cell.cauchy = std::max(cell.cauchy, std::abs(values[i + 1] - values[i]));
      Point jn = prox(fseq.at(ns.back()), x, lambda, opts.prox).minimizer;
      cell.prox_gap = distance(jn, target.minimizer);
      // Divergence: strictly growing gaps that end far beyond where they
      // started.
      bool growing = true;
      for (std::size_t i = half; i + 1 < cell.gaps.size(); ++i)
        if (cell.gaps[i + 1].second <= cell.gaps[i].second) growing = false;
      cell.divergent =
          growing && cell.final_gap > 10.0 * (cell.gaps.front().second + 1.0);
      rep.max_final_gap = std::max(rep.max_final_gap, cell.final_gap);
      rep.max_prox_gap = std::max(rep.max_prox_gap, cell.prox_gap);
      rep.any_divergent = rep.any_divergent || cell.divergent;
      rep.cells.push_back(std::move(cell));
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Full Mosco check (falsifier)

struct MoscoReport {
  std::vector<LiminfCheck> liminf_checks;
  std::vector<RecoveryCheck> recovery_checks;
  std::vector<RecoveryCheck> smoothed_checks;  // f_mu device outside dom f
  TriState verdict = TriState::inconclusive;
  std::string witness;
};

struct MoscoOptions {
  CheckOptions check;
  Window window = Window(8, 1016);
  std::vector<double> smoothing_mus{1.0, 0.25};
  LambdaSchedule schedule = default_lambda_schedule();
};

inline MoscoReport mosco_check(const FunctionSequence& fseq,
                               const ConvexFunction& f,
                               const std::vector<Point>& probes,
                               const std::vector<PointSequence>& weak_seqs,
                               const MoscoOptions& opts = {}) {
  dom_sample(f);  // catalog properness guarantee; throws otherwise
  MoscoReport rep;
  bool falsified = false, inconclusive = false;
  for (std::size_t i = 0; i < weak_seqs.size(); ++i) {
    WeakLimitVerdict v =
        weak_limit(weak_seqs[i], default_battery(opts.check.seed));
    if (v.converges == TriState::inconclusive) {
      inconclusive = true;
      continue;
    }
    if (v.converges == TriState::no) continue;  // not a valid liminf probe
    LiminfCheck c = check_liminf_condition(fseq, f, weak_seqs[i], opts.check);
    c.label = "wseq#" + std::to_string(i);
    if (!c.pass) {
      falsified = true;
      rep.witness = "liminf violated at " + c.label;
    }
    rep.liminf_checks.push_back(std::move(c));
  }
  for (std::size_t l = 0; l < probes.size(); ++l) {
    const Point& x = probes[l];
    if (evaluate(f, x) < kInf) {
      RecoveryCheck c =
          check_recovery(fseq, f, x, opts.schedule, opts.window, opts.check);
      c.label = "probe#" + std::to_string(l);
      if (!c.pass) {
        falsified = true;
        rep.witness = "recovery failed at " + c.label;
      }
      rep.recovery_checks.push_back(std::move(c));
    } else {
      // Outside the domain: test the smoothed pair g_n = f_{n,mu},
      // g = f_mu, which is finite everywhere.
      for (double mu : opts.smoothing_mus) {
        FunctionSequence gseq{
            [fseq, mu](long n) { return envelope_of(fseq.at(n), mu); },
            f};
        ConvexFunction g = envelope_of(f, mu);
        CheckOptions smoothed = opts.check;
        smoothed.value_tol =
            std::max(opts.check.value_tol, 100.0 * opts.check.prox.tol);
        RecoveryCheck c =
            check_recovery(gseq, g, x, opts.schedule, opts.window, smoothed);
        c.label = "probe#" + std::to_string(l) + ",mu=" + std::to_string(mu);
        if (!c.pass) {
          falsified = true;
          rep.witness = "smoothed recovery failed at " + c.label;
        }
        rep.smoothed_checks.push_back(std::move(c));
      }
    }
  }
  rep.verdict = falsified ? TriState::no
               : inconclusive ? TriState::inconclusive
                              : TriState::yes;
  return rep;
}

inline std::string mosco_verdict_name(TriState t) {
  switch (t) {
    case TriState::yes: return "consistent";
    case TriState::no: return "falsified";
    default: return "inconclusive";
  }
}

// ---------------------------------------------------------------------------
// Gamma-limit assembly (sup over lambda of limiting envelopes)

struct GammaLimitTable {
  std::vector<Point> probes;
  std::vector<double> lambdas;
  std::vector<std::vector<double>> phi;  // [probe][k]; +inf marks divergence
  std::vector<double> sup_values;        // [probe]
  MinorizationBound bound;
};

namespace detail {

// Windowed limit of a 1/n-type tail: Richardson extrapolation on a dyadic
// triple, with divergence reported as +inf.
inline double stabilized_limit(const std::function<double(long)>& value, long n0,
                               bool* divergent = nullptr) {
  double v1 = value(n0), v2 = value(2 * n0), v3 = value(4 * n0);
  double e1 = 2.0 * v2 - v1;
  double e2 = 2.0 * v3 - v2;
  double scale = 1.0 + std::abs(v3);
  bool growing = std::abs(v3) > 2.0 * std::abs(v2) + 1.0 &&
                 std::abs(v2) > 2.0 * std::abs(v1) + 1.0;
  if (divergent) *divergent = false;
  if (growing || !std::isfinite(e2)) {
    if (divergent) *divergent = true;
    return kInf;
  }
  if (std::abs(e2 - e1) > 0.05 * scale) {
    // Not 1/n-regular; fall back to the raw tail value.
    return v3;
  }
  return e2;
}

}  // namespace detail

inline GammaLimitTable gamma_limit_from_envelopes(
    const FunctionSequence& fseq, const std::vector<double>& lambdas,
    const std::vector<Point>& probes, const Window& window,
    const Point& anchor, double anchor_lambda = 1.0,
    const CheckOptions& opts = {}) {
  GammaLimitTable table;
  // Theorem hypothesis: a uniform minorization must exist; refuse otherwise.
  table.bound = estimate_minorization(
      FunctionSequence{fseq.at, fseq.limit}, anchor, anchor_lambda,
      std::max<long>(8, window.start / 4), 7, &opts.prox);
  table.probes = probes;
  table.lambdas = lambdas;
  for (const Point& x : probes) {
    std::vector<double> row;
    double sup = -kInf;
    for (double lambda : lambdas) {
      bool div = false;
      double phi = detail::stabilized_limit(
          [&](long n) { return envelope(fseq.at(n), x, lambda, opts.prox); },
          window.start, &div);
      row.push_back(div ? kInf : phi);
      sup = std::max(sup, row.back());
    }
    table.phi.push_back(std::move(row));
    table.sup_values.push_back(sup);
  }
  return table;
}

// ---------------------------------------------------------------------------
// Frolik-Wijsman bridge

struct FWReport {
  std::vector<double> dist_gaps_final;   // per probe
  bool fw_pass = false;
  MoscoReport mosco;
  bool mosco_pass = false;
  bool agree = false;
  std::vector<double> bridge_residuals;  // |iota_{C,1/2}(x) - d(x,C)^2|
};

inline FWReport frolik_wijsman_check(
    const std::function<ConvexSet(long)>& set_seq, const ConvexSet& C,
    const std::vector<Point>& probes, const MoscoOptions& opts = {}) {
  FWReport rep;
  std::vector<long> ns = log_samples(opts.window.start, opts.window.end());
  bool all_pass = true;
  for (const Point& x : probes) {
    double target = set_distance(C, x);
    std::vector<double> gaps;
    for (long n : ns) gaps.push_back(std::abs(set_distance(set_seq(n), x) - target));
    double head = gaps.front(), tail = gaps.back();
    bool pass = tail <= std::max(opts.check.recovery_tol, 0.6 * head);
    all_pass = all_pass && pass;
    rep.dist_gaps_final.push_back(tail);
    // lambda = 1/2 envelope of the indicator is exactly d(., C)^2.
    double env = envelope(indicator(C), x, 0.5, opts.check.prox);
    rep.bridge_residuals.push_back(std::abs(env - target * target));
  }
  rep.fw_pass = all_pass;
  FunctionSequence fseq{[set_seq](long n) { return indicator(set_seq(n)); },
                        indicator(C)};
  // Constant probe sequences: place their liminf window at the tail of
  // the index range, where the set sequence has settled.
  long tail_start = std::max<long>(1, opts.window.end() - 15);
  std::vector<PointSequence> weak_seqs;
  for (const Point& x : probes)
    weak_seqs.push_back(PointSequence{[x](long) { return x; }, Window(tail_start, 16)});
  rep.mosco = mosco_check(fseq, indicator(C), probes, weak_seqs, opts);
  rep.mosco_pass = rep.mosco.verdict == TriState::yes;
  rep.agree = rep.fw_pass == rep.mosco_pass;
  return rep;
}

}  // namespace moscolab

#endif
