#ifndef MOSCOLAB_SCENARIO_HPP
#define MOSCOLAB_SCENARIO_HPP

// Scenario documents: JSON descriptions of a function sequence (with a
// symbolic index n), optional declared limit, grids, weak-sequence
// batteries and the checks to run, plus a runner producing a
// deterministic JSON report and CSV tables.

#include <cctype>
#include <cstdio>
#include <map>
#include <set>

#include <json.hpp>

#include "moscolab/mosco_metric.hpp"

namespace moscolab {

// ---------------------------------------------------------------------------
// Arithmetic expressions over the symbolic index n
//
// Grammar: sum of products of powers; numbers, "n", parentheses, unary
// minus. "^" is right-associative. Examples: "1/n", "1+1/n", "(-1)^n".

struct Expr {
  std::function<double(double)> fn = [](double) { return 0.0; };
  bool uses_n = false;

  double eval(long n) const { return fn(static_cast<double>(n)); }
};

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(std::string src) : s_(std::move(src)) {}

  Expr parse() {
    Expr e = sum();
    skip_ws();
    if (i_ != s_.size())
      throw ParseError("expression '" + s_ + "': unexpected character at " +
                       std::to_string(i_));
    return e;
  }

 private:
  std::string s_;
  std::size_t i_ = 0;

  void skip_ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_])))
      ++i_;
  }

  bool eat(char c) {
    skip_ws();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }

  template <class Op>
  static Expr combine(const Expr& a, const Expr& b, Op op) {
    Expr out;
    out.uses_n = a.uses_n || b.uses_n;
    out.fn = [fa = a.fn, fb = b.fn, op](double n) { return op(fa(n), fb(n)); };
    return out;
  }

  Expr sum() {
    Expr lhs = product();
    for (;;) {
      if (eat('+')) lhs = combine(lhs, product(), std::plus<double>());
      else if (eat('-')) lhs = combine(lhs, product(), std::minus<double>());
      else return lhs;
    }
  }

  Expr product() {
    Expr lhs = power();
    for (;;) {
      if (eat('*')) lhs = combine(lhs, power(), std::multiplies<double>());
      else if (eat('/')) lhs = combine(lhs, power(), std::divides<double>());
      else return lhs;
    }
  }

  Expr power() {
    Expr base = unary();
    if (eat('^'))
      return combine(base, power(),
                     [](double a, double b) { return std::pow(a, b); });
    return base;
  }

  Expr unary() {
    if (eat('-')) {
      Expr e = unary();
      Expr out;
      out.uses_n = e.uses_n;
      out.fn = [f = e.fn](double n) { return -f(n); };
      return out;
    }
    return primary();
  }

  Expr primary() {
    skip_ws();
    if (eat('(')) {
      Expr e = sum();
      if (!eat(')'))
        throw ParseError("expression '" + s_ + "': missing ')'");
      return e;
    }
    if (i_ < s_.size() && s_[i_] == 'n') {
      ++i_;
      Expr e;
      e.uses_n = true;
      e.fn = [](double n) { return n; };
      return e;
    }
    const char* begin = s_.c_str() + i_;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin)
      throw ParseError("expression '" + s_ + "': expected a number at " +
                       std::to_string(i_));
    i_ += static_cast<std::size_t>(end - begin);
    Expr e;
    e.fn = [v](double) { return v; };
    return e;
  }
};

}  // namespace detail

inline Expr expr_from_json(const nlohmann::json& j) {
  if (j.is_number()) {
    double v = j.get<double>();
    Expr e;
    e.fn = [v](double) { return v; };
    return e;
  }
  if (j.is_string()) return detail::ExprParser(j.get<std::string>()).parse();
  throw ParseError("expected a number or expression string, got " + j.dump());
}

// ---------------------------------------------------------------------------
// Space, point, set and function documents

inline SpacePtr space_from_json(const nlohmann::json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "euclidean") return make_euclidean(j.at("dim").get<int>());
  if (kind == "hyperbolic2") return make_hyperbolic2();
  if (kind == "tree") {
    int nv = j.at("vertices").is_number()
                 ? j["vertices"].get<int>()
                 : static_cast<int>(j["vertices"].size());
    std::vector<TreeEdge> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 3)
        throw ParseError("tree edge must be [u, v, length]");
      edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
    }
    return make_tree(nv, std::move(edges));
  }
  if (kind == "product")
    return make_product(space_from_json(j.at("left")),
                        space_from_json(j.at("right")));
  throw ParseError("unknown space kind '" + kind + "'");
}

// A point whose coordinates may depend on n.
struct PointSpec {
  std::function<Point(long)> make;
  bool uses_n = false;
};

inline PointSpec point_from_json(const SpacePtr& space, const nlohmann::json& j) {
  PointSpec out;
  if (auto* e = dynamic_cast<const EuclideanSpace*>(space.get())) {
    if (!j.is_array() || static_cast<int>(j.size()) != e->dim())
      throw ParseError("euclidean point needs " + std::to_string(e->dim()) +
                       " coordinates: " + j.dump());
    std::vector<Expr> coords;
    for (const auto& c : j) {
      coords.push_back(expr_from_json(c));
      out.uses_n = out.uses_n || coords.back().uses_n;
    }
    out.make = [space, coords](long n) {
      std::vector<double> v;
      v.reserve(coords.size());
      for (const Expr& c : coords) v.push_back(c.eval(n));
      return euclidean_point(space, std::move(v));
    };
    return out;
  }
  if (dynamic_cast<const HyperbolicPlane*>(space.get())) {
    const nlohmann::json& xy = j.is_object() ? j.at("xy") : j;
    if (!xy.is_array() || xy.size() != 2)
      throw ParseError("hyperbolic point needs two plane coordinates: " + j.dump());
    Expr u = expr_from_json(xy[0]), v = expr_from_json(xy[1]);
    out.uses_n = u.uses_n || v.uses_n;
    out.make = [space, u, v](long n) {
      return hyperbolic_point_xy(space, u.eval(n), v.eval(n));
    };
    return out;
  }
  if (dynamic_cast<const MetricTree*>(space.get())) {
    if (j.is_object() && j.contains("vertex")) {
      int w = j["vertex"].get<int>();
      out.make = [space, w](long) { return tree_vertex(space, w); };
      return out;
    }
    if (j.is_object() && j.contains("edge")) {
      int edge = j["edge"].get<int>();
      Expr off = expr_from_json(j.at("offset"));
      out.uses_n = off.uses_n;
      out.make = [space, edge, off](long n) {
        return tree_point(space, edge, off.eval(n));
      };
      return out;
    }
    throw ParseError("tree point needs 'vertex' or 'edge'+'offset': " + j.dump());
  }
  auto* p = dynamic_cast<const ProductSpace*>(space.get());
  PointSpec left = point_from_json(p->left(), j.at("left"));
  PointSpec right = point_from_json(p->right(), j.at("right"));
  out.uses_n = left.uses_n || right.uses_n;
  out.make = [space, left, right](long n) {
    return product_point(space, left.make(n), right.make(n));
  };
  return out;
}

struct SetSpec {
  std::function<ConvexSet(long)> make;
  bool uses_n = false;
};

inline SetSpec set_from_json(const SpacePtr& space, const nlohmann::json& j) {
  std::string kind = j.at("kind").get<std::string>();
  SetSpec out;
  if (kind == "ball") {
    PointSpec c = point_from_json(space, j.at("center"));
    Expr r = expr_from_json(j.at("radius"));
    out.uses_n = c.uses_n || r.uses_n;
    out.make = [c, r](long n) { return closed_ball(c.make(n), r.eval(n)); };
    return out;
  }
  if (kind == "segment") {
    PointSpec a = point_from_json(space, j.at("a"));
    PointSpec b = point_from_json(space, j.at("b"));
    out.uses_n = a.uses_n || b.uses_n;
    out.make = [a, b](long n) { return geodesic_segment(a.make(n), b.make(n)); };
    return out;
  }
  if (kind == "subtree") {
    std::vector<int> vertices = j.at("vertices").get<std::vector<int>>();
    out.make = [space, vertices](long) { return subtree(space, vertices); };
    return out;
  }
  if (kind == "halfspace") {
    std::vector<double> normal = j.at("normal").get<std::vector<double>>();
    Expr off = expr_from_json(j.at("offset"));
    out.uses_n = off.uses_n;
    out.make = [space, normal, off](long n) {
      return halfspace(space, normal, off.eval(n));
    };
    return out;
  }
  if (kind == "whole_space") {
    out.make = [space](long) { return whole_space(space); };
    return out;
  }
  throw ParseError("unknown set kind '" + kind + "'");
}

struct FnSpec {
  std::function<ConvexFunction(long)> make;
  bool uses_n = false;
  // Set behind a top-level indicator, for the set-convergence bridge.
  std::optional<SetSpec> indicator_set;
};

inline FnSpec function_from_json(const SpacePtr& space, const nlohmann::json& j) {
  std::string kind = j.at("kind").get<std::string>();
  FnSpec out;
  if (kind == "squared_distance") {
    PointSpec p = point_from_json(space, j.at("p"));
    Expr w = j.contains("w") ? expr_from_json(j["w"]) : expr_from_json(1.0);
    out.uses_n = p.uses_n || w.uses_n;
    out.make = [p, w](long n) { return sq_dist(p.make(n), w.eval(n)); };
    return out;
  }
  if (kind == "distance_to") {
    PointSpec p = point_from_json(space, j.at("p"));
    out.uses_n = p.uses_n;
    out.make = [p](long n) { return dist_to(p.make(n)); };
    return out;
  }
  if (kind == "indicator" || kind == "distance_to_set") {
    SetSpec s = set_from_json(space, j.at("set"));
    out.uses_n = s.uses_n;
    if (kind == "indicator") {
      out.indicator_set = s;
      out.make = [s](long n) { return indicator(s.make(n)); };
    } else {
      out.make = [s](long n) { return dist_to_set(s.make(n)); };
    }
    return out;
  }
  if (kind == "weighted_sum") {
    std::vector<std::pair<Expr, FnSpec>> terms;
    for (const auto& t : j.at("terms")) {
      terms.emplace_back(expr_from_json(t.at("w")),
                         function_from_json(space, t.at("f")));
      out.uses_n = out.uses_n || terms.back().first.uses_n ||
                   terms.back().second.uses_n;
    }
    if (terms.empty()) throw ParseError("weighted_sum needs at least one term");
    out.make = [terms](long n) {
      std::vector<std::pair<double, ConvexFunction>> built;
      for (const auto& [w, f] : terms) built.emplace_back(w.eval(n), f.make(n));
      return weighted_sum(std::move(built));
    };
    return out;
  }
  if (kind == "shifted") {
    FnSpec inner = function_from_json(space, j.at("f"));
    Expr c = expr_from_json(j.at("c"));
    out.uses_n = inner.uses_n || c.uses_n;
    out.make = [inner, c](long n) { return shifted(inner.make(n), c.eval(n)); };
    return out;
  }
  if (kind == "envelope_of") {
    FnSpec inner = function_from_json(space, j.at("f"));
    Expr mu = expr_from_json(j.at("mu"));
    out.uses_n = inner.uses_n || mu.uses_n;
    out.make = [inner, mu](long n) { return envelope_of(inner.make(n), mu.eval(n)); };
    return out;
  }
  throw ParseError("unknown function kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Scenario documents

inline const std::set<std::string>& known_checks() {
  static const std::set<std::string> k{
      "weak_limit",      "minorization", "envelope_convergence", "mosco",
      "gamma_limit",     "frolik_wijsman", "cauchy_limit"};
  return k;
}

struct Scenario {
  std::string id;
  SpacePtr space;
  std::function<ConvexFunction(long)> seq_at;
  std::optional<ConvexFunction> limit;
  std::optional<std::function<ConvexSet(long)>> set_seq;
  std::optional<ConvexSet> limit_set;
  LambdaGrid lambdas{std::vector<double>{1.0}};
  std::vector<Point> probes;
  Window window{8, 1016};
  std::vector<PointSequence> weak_seqs;
  std::vector<std::string> checks;
  std::map<std::string, std::string> expect;
  double tol_geom = 1e-9;
  double tol_prox = 1e-8;

  FunctionSequence sequence() const { return FunctionSequence{seq_at, limit}; }
};

inline Scenario parse_scenario(const nlohmann::json& doc) {
  Scenario sc;
  sc.id = doc.at("id").get<std::string>();
  sc.space = space_from_json(doc.at("space"));

  FnSpec seq = function_from_json(sc.space, doc.at("sequence"));
  sc.seq_at = seq.make;
  if (seq.indicator_set) {
    SetSpec s = *seq.indicator_set;
    sc.set_seq = [s](long n) { return s.make(n); };
  }

  if (doc.contains("limit")) {
    FnSpec lim = function_from_json(sc.space, doc["limit"]);
    if (lim.uses_n)
      throw ParseError("the declared limit must not depend on n");
    sc.limit = lim.make(1);
    if (lim.indicator_set) sc.limit_set = lim.indicator_set->make(1);
  }

  if (doc.contains("lambda_grid")) {
    const auto& lg = doc["lambda_grid"];
    if (lg.is_array())
      sc.lambdas = LambdaGrid(lg.get<std::vector<double>>());
    else if (lg.is_object() && lg.contains("dyadic"))
      sc.lambdas = LambdaGrid::dyadic(lg["dyadic"].get<int>());
    else
      throw ParseError("lambda_grid must be an array or {\"dyadic\": K}");
  } else {
    sc.lambdas = LambdaGrid::dyadic(12);
  }

  const auto& pr = doc.at("probes");
  if (pr.is_object() && pr.contains("lattice")) {
    const auto& lat = pr["lattice"];
    sc.probes = ProbeGrid::lattice(sc.space,
                                   lat.at("min").get<std::vector<double>>(),
                                   lat.at("max").get<std::vector<double>>(),
                                   lat.at("spacing").get<double>())
                    .points;
  } else if (pr.is_object() && pr.contains("points")) {
    for (const auto& p : pr["points"]) {
      PointSpec ps = point_from_json(sc.space, p);
      if (ps.uses_n) throw ParseError("probe points must not depend on n");
      sc.probes.push_back(ps.make(1));
    }
  } else {
    throw ParseError("probes must contain 'lattice' or 'points'");
  }
  if (sc.probes.empty()) throw ParseError("probe set must be nonempty");

  if (doc.contains("window"))
    sc.window = Window(doc["window"].at("start").get<long>(),
                       doc["window"].at("length").get<long>());

  const nlohmann::json weak_docs =
      doc.value("weak_sequences", nlohmann::json::array());
  for (const auto& ws : weak_docs) {
    std::string kind = ws.at("kind").get<std::string>();
    Window w = ws.contains("window")
                   ? Window(ws["window"].at("start").get<long>(),
                            ws["window"].at("length").get<long>())
                   : (kind == "path" ? Window(4096, 16) : Window(1, 16));
    if (kind == "path") {
      PointSpec p = point_from_json(sc.space, ws.at("point"));
      sc.weak_seqs.push_back(PointSequence{[p](long n) { return p.make(n); }, w});
    } else if (kind == "constant") {
      PointSpec p = point_from_json(sc.space, ws.at("point"));
      if (p.uses_n) throw ParseError("constant weak sequence must not use n");
      Point fixed = p.make(1);
      sc.weak_seqs.push_back(PointSequence{[fixed](long) { return fixed; }, w});
    } else if (kind == "alternate") {
      PointSpec a = point_from_json(sc.space, ws.at("a"));
      PointSpec b = point_from_json(sc.space, ws.at("b"));
      if (a.uses_n || b.uses_n)
        throw ParseError("alternate weak sequence endpoints must not use n");
      Point pa = a.make(1), pb = b.make(1);
      sc.weak_seqs.push_back(PointSequence{
          [pa, pb](long n) { return n % 2 == 0 ? pa : pb; }, w});
    } else {
      throw ParseError("unknown weak sequence kind '" + kind + "'");
    }
  }

  for (const auto& c : doc.at("checks")) {
    std::string name = c.get<std::string>();
    if (!known_checks().count(name))
      throw ParseError("unknown check '" + name + "'");
    sc.checks.push_back(name);
  }
  bool needs_limit = false;
  for (const std::string& c : sc.checks)
    needs_limit = needs_limit || c == "envelope_convergence" || c == "mosco";
  if (needs_limit && !sc.limit)
    throw ParseError("envelope_convergence and mosco need a declared limit");
  for (const std::string& c : sc.checks)
    if (c == "frolik_wijsman" && (!sc.set_seq || !sc.limit_set))
      throw ParseError(
          "frolik_wijsman needs indicator sequence and indicator limit");

  const nlohmann::json expect_doc =
      doc.value("expect", nlohmann::json::object());
  for (const auto& [key, val] : expect_doc.items()) {
    if (!known_checks().count(key))
      throw ParseError("expectation for unknown check '" + key + "'");
    if (std::find(sc.checks.begin(), sc.checks.end(), key) == sc.checks.end())
      throw ParseError("expectation for check '" + key + "' which is not run");
    sc.expect[key] = val.get<std::string>();
  }

  if (doc.contains("tolerances")) {
    sc.tol_geom = doc["tolerances"].value("geom", sc.tol_geom);
    sc.tol_prox = doc["tolerances"].value("prox", sc.tol_prox);
  }
  return sc;
}

// ---------------------------------------------------------------------------
// Runner

struct RunReport {
  nlohmann::json report;
  std::string envelopes_csv;
  std::string rho_csv;
  bool matched = true;
};

namespace detail {

// Full-precision, locale-independent double formatting for CSV cells.
inline std::string csv_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

inline RunReport run_scenario(const Scenario& sc, std::uint64_t seed) {
  RunReport out;
  nlohmann::json checks = nlohmann::json::object();
  std::map<std::string, std::string> outcomes;
  FunctionSequence seq = sc.sequence();

  ProxOptions popts = default_prox_options(sc.space);
  popts.tol = std::min(popts.tol, sc.tol_prox);
  CheckOptions copts;
  copts.prox = popts;
  copts.seed = seed;

  auto enabled = [&sc](const std::string& name) {
    return std::find(sc.checks.begin(), sc.checks.end(), name) != sc.checks.end();
  };
  const Point& anchor = sc.probes.front();

  if (enabled("weak_limit")) {
    nlohmann::json entry;
    std::string joined;
    for (std::size_t i = 0; i < sc.weak_seqs.size(); ++i) {
      WeakLimitVerdict v = weak_limit(sc.weak_seqs[i], default_battery(seed));
      nlohmann::json one;
      one["verdict"] = to_string(v.converges);
      one["max_center_spread"] = v.max_center_spread;
      if (v.witness) one["witness"] = *v.witness;
      entry["sequences"].push_back(one);
      if (!joined.empty()) joined += ",";
      joined += to_string(v.converges);
    }
    entry["outcome"] = joined;
    outcomes["weak_limit"] = joined;
    checks["weak_limit"] = entry;
  }

  if (enabled("minorization")) {
    nlohmann::json entry;
    try {
      MinorizationBound b = estimate_minorization(
          seq, anchor, sc.lambdas.values.front(),
          std::max<long>(8, sc.window.start), 7, &popts);
      entry["r"] = b.r;
      entry["envelope_at_anchor"] = b.envelope_at_anchor;
      entry["outcome"] = "ok";
    } catch (const NoUniformBound& e) {
      entry["outcome"] = "NoUniformBound";
      entry["error"] = e.what();
    }
    outcomes["minorization"] = entry["outcome"].get<std::string>();
    checks["minorization"] = entry;
  }

  if (enabled("envelope_convergence")) {
    EnvelopeConvergenceReport r = check_envelope_convergence(
        seq, *sc.limit, sc.lambdas.values, sc.probes, sc.window, copts);
    nlohmann::json entry;
    entry["max_final_gap"] = r.max_final_gap;
    entry["max_prox_gap"] = r.max_prox_gap;
    entry["any_divergent"] = r.any_divergent;
    double max_scaled = 0.0;
    for (const EnvelopeCell& cell : r.cells)
      for (const auto& [n, gap] : cell.gaps)
        max_scaled = std::max(max_scaled, static_cast<double>(n) * gap);
    entry["max_n_scaled_gap"] = max_scaled;
    entry["cells"] = nlohmann::json::array();
    for (const EnvelopeCell& cell : r.cells) {
      nlohmann::json c;
      c["lambda"] = cell.lambda;
      c["probe"] = cell.probe;
      c["final_gap"] = cell.final_gap;
      c["prox_gap"] = cell.prox_gap;
      entry["cells"].push_back(c);
    }
    entry["outcome"] = r.pass(0.02) ? "pass" : "fail";
    outcomes["envelope_convergence"] = entry["outcome"].get<std::string>();
    checks["envelope_convergence"] = entry;
  }

  if (enabled("mosco")) {
    MoscoOptions mopts;
    mopts.check = copts;
    mopts.window = sc.window;
    MoscoReport r = mosco_check(seq, *sc.limit, sc.probes, sc.weak_seqs, mopts);
    nlohmann::json entry;
    entry["liminf_checks"] = r.liminf_checks.size();
    entry["recovery_checks"] = r.recovery_checks.size();
    entry["smoothed_checks"] = r.smoothed_checks.size();
    if (!r.witness.empty()) entry["witness"] = r.witness;
    std::string verdict = mosco_verdict_name(r.verdict);
    entry["outcome"] = verdict;
    double worst_disp = 0.0;
    for (const RecoveryCheck& c : r.recovery_checks)
      if (!c.vacuous && !c.displacements.empty())
        worst_disp = std::max(worst_disp, c.displacements.back());
    entry["max_final_recovery_displacement"] = worst_disp;
    outcomes["mosco"] = verdict;
    checks["mosco"] = entry;
  }

  if (enabled("gamma_limit")) {
    nlohmann::json entry;
    try {
      GammaLimitTable table = gamma_limit_from_envelopes(
          seq, sc.lambdas.values, sc.probes, sc.window, anchor,
          sc.lambdas.values.front(), copts);
      entry["outcome"] = "ok";
      entry["sup_values"] = table.sup_values;
      if (sc.limit) {
        double worst = 0.0;
        for (std::size_t l = 0; l < sc.probes.size(); ++l) {
          double fx = evaluate(*sc.limit, sc.probes[l]);
          if (fx < kInf)
            worst = std::max(worst, std::abs(table.sup_values[l] - fx));
        }
        entry["max_error_vs_limit"] = worst;
      }
    } catch (const NoUniformBound& e) {
      entry["outcome"] = "NoUniformBound";
      entry["error"] = e.what();
    }
    outcomes["gamma_limit"] = entry["outcome"].get<std::string>();
    checks["gamma_limit"] = entry;
  }

  if (enabled("frolik_wijsman")) {
    MoscoOptions mopts;
    mopts.check = copts;
    mopts.window = sc.window;
    FWReport r = frolik_wijsman_check(*sc.set_seq, *sc.limit_set, sc.probes, mopts);
    nlohmann::json entry;
    entry["fw_pass"] = r.fw_pass;
    entry["mosco_pass"] = r.mosco_pass;
    entry["agree"] = r.agree;
    double bridge = 0.0;
    for (double b : r.bridge_residuals) bridge = std::max(bridge, b);
    entry["max_bridge_residual"] = bridge;
    std::string fw_outcome = !r.agree ? "disagree"
                             : r.fw_pass ? "agree-pass" : "agree-fail";
    entry["outcome"] = fw_outcome;
    outcomes["frolik_wijsman"] = fw_outcome;
    checks["frolik_wijsman"] = entry;
  }

  std::optional<LimitTable> cauchy_table;
  if (enabled("cauchy_limit")) {
    nlohmann::json entry;
    try {
      CauchyLimitOptions clopts;
      clopts.prox = popts;
      cauchy_table = cauchy_limit(seq, sc.lambdas, ProbeGrid(sc.probes),
                                  sc.window, clopts);
      entry["outcome"] = "ok";
      entry["witness_value"] = cauchy_table->witness_value;
      entry["sup_over_k"] = cauchy_table->sup_over_k;
    } catch (const NotCauchy& e) {
      entry["outcome"] = "NotCauchy";
      entry["error"] = e.what();
    } catch (const NoUniformBound& e) {
      entry["outcome"] = "NoUniformBound";
      entry["error"] = e.what();
    }
    outcomes["cauchy_limit"] = entry["outcome"].get<std::string>();
    checks["cauchy_limit"] = entry;
  }

  // envelopes.csv: envelope values of the last window member on the
  // (probe, lambda) grid; rows = probes, columns = lambda_k.
  {
    std::string csv = "probe";
    for (double l : sc.lambdas.values)
      csv += ",lambda=" + detail::csv_double(l);
    csv += "\n";
    ConvexFunction f_end = sc.seq_at(sc.window.end());
    for (std::size_t l = 0; l < sc.probes.size(); ++l) {
      csv += std::to_string(l);
      for (double lambda : sc.lambdas.values)
        csv += "," + detail::csv_double(
                         envelope(f_end, sc.probes[l], lambda, popts));
      csv += "\n";
    }
    out.envelopes_csv = csv;
  }

  // rho.csv: distance to the declared limit (or to the assembled limit
  // table) along a log-sampled index schedule.
  {
    std::string csv = "n,rho\n";
    std::vector<long> ns = log_samples(sc.window.start, sc.window.end(), 8);
    if (sc.limit) {
      ProbeGrid grid(sc.probes);
      for (long n : ns)
        csv += std::to_string(n) + "," +
               detail::csv_double(
                   rho(sc.seq_at(n), *sc.limit, sc.lambdas, grid, popts).value) +
               "\n";
    } else if (cauchy_table) {
      for (long n : ns)
        csv += std::to_string(n) + "," +
               detail::csv_double(
                   rho_to_table(sc.seq_at(n), *cauchy_table, popts).value) +
               "\n";
    }
    out.rho_csv = csv;
  }

  bool matched = true;
  nlohmann::json expected = nlohmann::json::object();
  for (const auto& [check, want] : sc.expect) {
    expected[check] = want;
    auto it = outcomes.find(check);
    matched = matched && it != outcomes.end() && it->second == want;
  }
  out.matched = matched;

  out.report["id"] = sc.id;
  out.report["seed"] = seed;
  out.report["tolerances"] = {{"geom", sc.tol_geom}, {"prox", sc.tol_prox}};
  out.report["space"] = sc.space->describe();
  out.report["checks"] = checks;
  out.report["expected"] = expected;
  out.report["matched"] = matched;
  out.report["verdict"] =
      outcomes.count("mosco") ? outcomes["mosco"]
      : outcomes.count("frolik_wijsman") ? outcomes["frolik_wijsman"]
                                         : "n/a";
  return out;
}

inline RunReport run_scenario_json(const nlohmann::json& doc, std::uint64_t seed) {
  return run_scenario(parse_scenario(doc), seed);
}

}  // namespace moscolab

#endif
