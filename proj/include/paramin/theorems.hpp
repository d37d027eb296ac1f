// Statements as (hypothesis checks -> predicted conclusions), evaluated on one
// problem at one parameter point, with soundness accounting.
#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "paramin/checks.hpp"

namespace paramin {

/// A predicted conclusion.  `guards` are check ids that must HOLD (or FAIL,
/// when written "!id") for the prediction to be made; equivalence and
/// implication claims are expressed this way.
struct Conclusion {
  std::string check;
  std::vector<std::string> guards;
};

struct Hypothesis {
  std::string label;  // "i", "ii", ... or a short name; addressed as ID[label]
  std::string check;
};

struct StatementSpec {
  std::string id;
  std::string title;
  std::string citation;  // stable descriptive anchor
  std::vector<Hypothesis> hypotheses;
  std::vector<Conclusion> conclusions;
};

inline const std::vector<StatementSpec>& statement_catalog() {
  static const std::vector<StatementSpec> catalog = [] {
    std::vector<StatementSpec> c;
    auto hyp = [](std::initializer_list<std::pair<const char*, const char*>> l) {
      std::vector<Hypothesis> h;
      for (const auto& [a, b] : l) h.push_back({a, b});
      return h;
    };
    auto plain = [](std::initializer_list<const char*> ids) {
      std::vector<Conclusion> out;
      for (const char* id : ids) out.push_back({id, {}});
      return out;
    };
    // the equivalence of (iv) and usc of the solution map, and continuity from either
    auto equivalence = [](std::vector<Conclusion> head) {
      head.push_back({"argmin_usc_at_x", {"condition_iv"}});
      head.push_back({"condition_iv", {"argmin_usc_at_x"}});
      head.push_back({"v_continuous_at_x", {"condition_iv"}});
      head.push_back({"v_continuous_at_x", {"argmin_usc_at_x"}});
      return head;
    };

    c.push_back({"TH1.1", "global maximum theorem", "conclusion: continuous value, usc compact-valued solutions",
                 hyp({{"kn", "kn_global"},
                      {"usc", "u_graph_usc_global"},
                      {"lsc_map", "map_lsc_global"},
                      {"nonempty", "phi_nonempty_global"}}),
                 plain({"v_continuous_at_x", "argmin_usc_at_x", "argmin_compact_at_x"})});
    c.push_back({"TH1.2", "local maximum theorem under a compact level bound", "conclusion: continuity at x from a uniformly bounded level",
                 hyp({{"i", "u_continuous_near_x"},
                      {"ii", "closed_graph"},
                      {"iii", "condition_iii"},
                      {"iv", "condition_iv"}}),
                 plain({"v_continuous_at_x", "argmin_usc_at_x"})});
    c.push_back({"TH1.3", "lower semi-continuity of minima at x", "conclusion: lsc value and compact solution set at x",
                 hyp({{"kn", "kn_at_x"}}),
                 {{"v_lsc_at_x", {}}, {"argmin_compact_at_x", {"value_finite_at_x"}},
                  {"argmin_is_phi_at_x", {"!value_finite_at_x"}}}});
    c.push_back({"TH1.4(i)", "upper semi-continuity of minima via lsc of the map",
                 "conclusion: usc value at x, map route",
                 hyp({{"usc", "u_graph_usc_at_x"}, {"lsc_map", "map_lsc_at_x"}}), plain({"v_usc_at_x"})});
    c.push_back({"TH1.4(ii)", "upper semi-continuity of minima via condition (iv)",
                 "conclusion: usc value at x, neighborhood route",
                 hyp({{"compact", "argmin_compact_at_x"}, {"usc", "u_graph_usc_on_argmin"}, {"iv", "condition_iv"}}),
                 plain({"v_usc_at_x"})});
    c.push_back({"TH1.5", "upper semi-continuity of the solution map", "conclusion: compact usc solution map at x",
                 hyp({{"kn", "kn_at_x"}, {"continuous", "v_continuous_at_x"}, {"finite", "value_finite_at_x"}}),
                 plain({"argmin_compact_at_x", "argmin_usc_at_x"})});
    c.push_back({"TH1.6", "local optimum theorem", "conclusion: (iv) iff usc solutions, both give continuity",
                 hyp({{"a", "value_finite_at_x"}, {"b", "kn_at_x"}, {"usc", "u_graph_usc_on_argmin"}}),
                 equivalence(plain({"argmin_compact_at_x"}))});
    c.push_back({"TH1.7", "local optimum theorem for the truncated problem",
                 "conclusion: truncated form of the equivalence",
                 hyp({{"below", "value_below_lambda"}, {"kn", "truncated_kn_at_x"}, {"usc", "u_graph_usc_on_argmin"}}),
                 equivalence({})});
    c.push_back({"COR1.1", "lower semi-continuity of minima for the truncated problem",
                 "conclusion: lsc value at x from the truncated problem",
                 hyp({{"level", "level_nonempty_at_lambda"}, {"kn", "truncated_kn_at_x"}}),
                 plain({"v_lsc_at_x", "argmin_compact_at_x"})});
    c.push_back({"B1", "lower semi-continuity of minima", "conclusion: lsc value everywhere",
                 hyp({{"kn", "kn_global"}}), plain({"v_lsc_global"})});
    c.push_back({"B2", "upper semi-continuity of minima", "conclusion: usc value everywhere",
                 hyp({{"usc", "u_graph_usc_global"}, {"lsc_map", "map_lsc_global"}, {"nonempty", "phi_nonempty_global"}}),
                 plain({"v_usc_global"})});
    c.push_back({"B3", "upper semi-continuity of the solution map", "conclusion: usc compact-valued solutions",
                 hyp({{"kn", "kn_global"}, {"continuous", "v_continuous_global"}, {"nonempty", "phi_nonempty_global"}}),
                 plain({"argmin_usc_at_x", "argmin_compact_at_x"})});
    c.push_back({"BS1", "local lower semi-continuity of minima", "conclusion: lsc value at x, product route",
                 hyp({{"lsc", "u_product_lsc_near_x"}, {"ii", "closed_graph"}, {"iii", "condition_iii"}}),
                 plain({"v_lsc_at_x"})});
    c.push_back({"BS2", "local upper semi-continuity of minima", "conclusion: usc value at x, product route",
                 hyp({{"usc", "u_product_usc_near_x"}, {"compact", "argmin_compact_at_x"}, {"iv", "condition_iv"}}),
                 plain({"v_usc_at_x"})});
    c.push_back({"BS3", "local upper semi-continuity of the solution map",
                 "conclusion: usc solutions at x, product route",
                 hyp({{"i", "u_continuous_near_x"},
                      {"ii", "closed_graph"},
                      {"iii", "condition_iii"},
                      {"iv", "condition_iv"}}),
                 plain({"argmin_usc_at_x"})});
    c.push_back({"LEM2.1", "compact-valued usc maps give the accumulation property",
                 "conclusion: accumulation property at x",
                 hyp({{"lsc", "u_graph_lsc_at_x"}, {"compact", "phi_compact_at_x"}, {"usc_map", "map_usc_at_x"}}),
                 plain({"kn_at_x"})});
    return c;
  }();
  return catalog;
}

inline const StatementSpec* find_statement(const std::string& id) {
  for (const auto& s : statement_catalog())
    if (s.id == id) return &s;
  return nullptr;
}

/// Every check id the engine knows.
inline const std::vector<std::string>& check_ids() {
  static const std::vector<std::string> ids = {
      "argmin_compact_at_x", "argmin_is_phi_at_x", "argmin_usc_at_x", "closed_graph", "condition_iii",
      "condition_iv", "inf_compact_at_x", "k_inf_compact", "kn_at_x", "kn_global", "level_nonempty_at_lambda",
      "map_lsc_at_x", "map_lsc_global", "map_usc_at_x", "phi_compact_at_x", "phi_nonempty_global",
      "truncated_kn_at_x", "u_continuous_near_x", "u_graph_lsc_at_x", "u_graph_usc_at_x", "u_graph_usc_global",
      "u_graph_usc_on_argmin", "u_product_lsc_near_x", "u_product_usc_near_x", "v_continuous_at_x",
      "v_continuous_global", "v_lsc_at_x", "v_lsc_global", "v_usc_at_x", "v_usc_global", "value_below_lambda",
      "value_finite_at_x"};
  return ids;
}

inline bool is_check_id(const std::string& id) {
  for (const auto& c : check_ids())
    if (c == id) return true;
  return false;
}

struct EngineConfig {
  CheckConfig checks;
  std::optional<ExtendedReal> lambda;  // truncation level; default v(x) + 1
  std::optional<IntervalSet> k_set;    // enables k_inf_compact
  bool fault_negate_lsc = false;       // test hook: flips lsc verdicts of v
  bool all_checks = true;              // also run checks no statement needs
};

enum class Applicability : std::uint8_t { Applicable, Blocked, Unknown };

inline const char* applicability_name(Applicability a) {
  switch (a) {
    case Applicability::Applicable: return "applicable";
    case Applicability::Blocked: return "blocked";
    case Applicability::Unknown: return "not applicable (UNKNOWN)";
  }
  return "?";
}

struct ConclusionResult {
  std::string check;
  std::vector<std::string> guards;
  bool predicted = false;  // hypotheses and guards all satisfied
  Status measured = Status::Unknown;
  bool violated = false;
};

struct StatementResult {
  std::string id;
  std::string citation;
  std::vector<std::pair<Hypothesis, Status>> hypotheses;
  Applicability applicability = Applicability::Unknown;
  std::vector<std::string> blocked_by;
  std::vector<ConclusionResult> conclusions;
  bool soundness_violation = false;
};

struct TheoremReport {
  std::string problem;
  TaggedPoint x;
  ExtendedReal value;
  bool attained = false;
  IntervalSet argmin;
  ExtendedReal lambda;  // truncation level used
  std::optional<ExtendedReal> iii_lambda;
  std::optional<IntervalSet> iii_C;
  std::map<std::string, Verdict> checks;
  std::vector<StatementResult> statements;
  long queries = 0;
  bool fault_injected = false;

  const StatementResult* statement(const std::string& id) const {
    for (const auto& s : statements)
      if (s.id == id) return &s;
    return nullptr;
  }
};

/// Lazily computes and memoizes every named check at one parameter point.
class Analyzer {
 public:
  Analyzer(const Problem& p, TaggedPoint x, EngineConfig cfg = {})
      : p_(p), x_(std::move(x)), cfg_(std::move(cfg)), base_(p, cfg_.checks.tol) {
    if (!p_.in_x_domain(x_)) throw DomainError("x=" + x_.str() + " is outside x_domain");
    const Slice& s = base_.slice(x_);
    value_ = s.value();
    if (cfg_.lambda) {
      lambda_ = *cfg_.lambda;
    } else {
      lambda_ = value_.is_finite() ? value_ + ExtendedReal(1) : ExtendedReal(0);
    }
  }

  const Problem& problem() const { return p_; }
  const TaggedPoint& x() const { return x_; }
  const ExtendedReal& value() const { return value_; }
  const ExtendedReal& lambda() const { return lambda_; }
  ProblemModel& base() { return base_; }
  const std::optional<ConditionIII>& condition_iii_result() const { return iii_; }
  const std::map<std::string, Verdict>& computed() const { return memo_; }
  long queries() const { return base_.queries() + (trunc_ ? trunc_->queries() : 0); }

  const Verdict& get(const std::string& id) {
    auto it = memo_.find(id);
    if (it != memo_.end()) return it->second;
    Verdict v;
    try {
      v = compute(id);
    } catch (const Error& e) {
      v = make_verdict(id, Status::Unknown, e.what());
    }
    v.id = id;
    if (cfg_.fault_negate_lsc && id.rfind("v_lsc", 0) == 0 && v.status != Status::Unknown) {
      v.status = v.holds() ? Status::Fails : Status::Holds;
      v.witness.reset();
      v.note = "fault injected: verdict negated";
    }
    return memo_.emplace(id, std::move(v)).first->second;
  }

  /// X-bar: x, a window grid and nearby breakpoints.
  const std::vector<TaggedPoint>& global_pts() {
    if (global_.empty()) global_ = global_points(p_, x_, cfg_.checks.global_grid);
    return global_;
  }

  /// Parameter points close to x (x included) used for "near x" product checks.
  const std::vector<TaggedPoint>& near_pts() {
    if (!near_.empty()) return near_;
    near_.push_back(x_);
    Rational w = p_.window_width();
    for (int k : {3, 5}) {
      Rational h = w / (1L << k);
      for (int s : {1, -1}) {
        TaggedPoint z = s > 0 ? x_ + TaggedPoint(h) : x_ - TaggedPoint(h);
        if (p_.in_window(z)) near_.push_back(z);
      }
    }
    return near_;
  }

  TruncatedModel* truncated() {
    if (!trunc_tried_) {
      trunc_tried_ = true;
      auto tp = truncate(base_, lambda_, x_);
      if (!tp.anchor_empty) trunc_ = std::make_unique<TruncatedModel>(base_, std::move(tp));
    }
    return trunc_.get();
  }

 private:
  Verdict over_points(const std::string& id, const std::vector<TaggedPoint>& pts,
                      const std::function<std::optional<Verdict>(const TaggedPoint&)>& at) {
    std::vector<Verdict> parts;
    for (const auto& z : pts) {
      auto v = at(z);
      if (!v) continue;
      v->id = v->id + "@" + z.str();
      parts.push_back(std::move(*v));
      if (parts.back().fails()) break;
    }
    return conjoin(id, parts);
  }

  Verdict product_near(const std::string& id, bool lsc) {
    const CheckConfig& c = cfg_.checks;
    return over_points(id, near_pts(), [&](const TaggedPoint& z) -> std::optional<Verdict> {
      const Slice& sl = base_.slice_on(z, p_.y_domain);
      std::vector<ExtendedReal> extra = sl.breakpoints();
      for (const auto& e : detail::endpoints(base_.feasible(z))) extra.push_back(e);
      std::vector<Verdict> parts;
      for (const auto& y : y_samples(p_.y_domain, extra, 9, 16)) {
        parts.push_back(check_u_product_at(base_, z, y, lsc, c));
        if (parts.back().fails()) break;
      }
      return conjoin(id, parts);
    });
  }

  Verdict compute(const std::string& id) {
    const CheckConfig& c = cfg_.checks;
    if (id == "v_lsc_at_x") return check_v_lsc(base_, x_, c, id);
    if (id == "v_usc_at_x") return check_v_usc(base_, x_, c, id);
    if (id == "v_continuous_at_x") {
      const Verdict& a = get("v_lsc_at_x");
      if (a.fails()) return conjoin(id, {a});
      return conjoin(id, {a, get("v_usc_at_x")});
    }
    if (id == "v_lsc_global" || id == "v_usc_global") {
      bool lsc = id == "v_lsc_global";
      return over_points(id, global_pts(), [&](const TaggedPoint& z) -> std::optional<Verdict> {
        return lsc ? check_v_lsc(base_, z, c) : check_v_usc(base_, z, c);
      });
    }
    if (id == "v_continuous_global") {
      const Verdict& a = get("v_lsc_global");
      if (a.fails()) return conjoin(id, {a});
      return conjoin(id, {a, get("v_usc_global")});
    }
    if (id == "u_graph_lsc_at_x") return check_u_graph_on(base_, x_, base_.feasible(x_), true, c, id);
    if (id == "u_graph_usc_at_x") return check_u_graph_on(base_, x_, base_.feasible(x_), false, c, id);
    if (id == "u_graph_usc_on_argmin") {
      const IntervalSet& a = base_.slice(x_).argmin();
      if (a.empty()) return make_verdict(id, Status::Holds, "solution set is empty; vacuous");
      return check_u_graph_on(base_, x_, a, false, c, id);
    }
    if (id == "u_graph_usc_global") {
      return over_points(id, global_pts(), [&](const TaggedPoint& z) -> std::optional<Verdict> {
        return check_u_graph_on(base_, z, base_.feasible(z), false, c, "u_graph_usc");
      });
    }
    if (id == "u_product_lsc_near_x") return product_near(id, true);
    if (id == "u_product_usc_near_x") return product_near(id, false);
    if (id == "u_continuous_near_x") {
      const Verdict& a = get("u_product_lsc_near_x");
      if (a.fails()) return conjoin(id, {a});
      return conjoin(id, {a, get("u_product_usc_near_x")});
    }
    if (id == "map_lsc_at_x") return check_map_lsc_at(base_, x_, c, id);
    if (id == "map_lsc_global") {
      return over_points(id, global_pts(), [&](const TaggedPoint& z) -> std::optional<Verdict> {
        if (base_.feasible(z).empty()) return std::nullopt;  // lsc is defined on Dom Phi
        return check_map_lsc_at(base_, z, c);
      });
    }
    if (id == "map_usc_at_x") return check_map_usc_at(base_, x_, c, id);
    if (id == "closed_graph") return check_closed_graph(base_, x_, c, id);
    if (id == "phi_nonempty_global") {
      return over_points(id, global_pts(),
                         [&](const TaggedPoint& z) -> std::optional<Verdict> { return check_phi_nonempty(base_, z, c); });
    }
    if (id == "phi_compact_at_x") return check_phi_compact(base_, x_, c, id);
    if (id == "argmin_usc_at_x") return check_argmin_usc_at(base_, x_, c, id);
    if (id == "argmin_compact_at_x") return check_argmin_compact(base_, x_, c, id);
    if (id == "argmin_is_phi_at_x") return check_argmin_is_phi(base_, x_, c, id);
    if (id == "inf_compact_at_x") return check_inf_compact(base_, x_, default_lambdas(base_, x_), c, id);
    if (id == "kn_at_x") return check_kn_at(base_, x_, c, id);
    if (id == "kn_global") {
      return over_points(id, global_pts(),
                         [&](const TaggedPoint& z) -> std::optional<Verdict> { return check_kn_at(base_, z, c); });
    }
    if (id == "truncated_kn_at_x") {
      TruncatedModel* tm = truncated();
      if (!tm) return make_verdict(id, Status::Unknown, "truncated mapping is empty at x for lambda=" + lambda_.str());
      return check_kn_at(*tm, x_, c, id);
    }
    if (id == "value_finite_at_x") return check_value_bound(base_, x_, lambda_, "finite", c, id);
    if (id == "value_below_lambda") return check_value_bound(base_, x_, lambda_, "lt", c, id);
    if (id == "level_nonempty_at_lambda") return check_value_bound(base_, x_, lambda_, "le", c, id);
    if (id == "condition_iv") return check_condition_iv(base_, x_, c, id);
    if (id == "condition_iii") return condition_iii(id);
    if (id == "k_inf_compact") {
      if (!cfg_.k_set) return make_verdict(id, Status::Unknown, "no compact set K configured");
      return check_k_inf_compact(base_, *cfg_.k_set, c, id);
    }
    throw DomainError("unknown check id '" + id + "'");
  }

  /// Searches lambda in {config lambda} u {v(x) + 2^-j : j = 0..10}; the first
  /// certified level wins.
  Verdict condition_iii(const std::string& id) {
    std::vector<ExtendedReal> cands;
    if (cfg_.lambda) cands.push_back(*cfg_.lambda);
    if (value_.is_finite())
      for (int j = 0; j <= 10; ++j) cands.push_back(value_ + ExtendedReal(make_rational(1, 1L << j)));
    if (cands.empty()) return make_verdict(id, Status::Unknown, "v(x) is infinite and no lambda was given");
    std::optional<Verdict> first_fail;
    bool unknown = false;
    long budget = 0;
    for (const auto& lam : cands) {
      auto r = check_condition_iii(base_, x_, lam, cfg_.checks, id);
      budget += r.verdict.budget_used;
      if (r.verdict.holds()) {
        iii_ = r;
        r.verdict.budget_used = budget;
        r.verdict.note = "lambda=" + lam.str() + ", C=" + (r.C ? r.C->str() : std::string("?"));
        return r.verdict;
      }
      if (r.verdict.fails() && !first_fail) first_fail = r.verdict;
      if (r.verdict.status == Status::Unknown) unknown = true;
    }
    Verdict v = unknown || !first_fail ? make_verdict(id, Status::Unknown, "no lambda certified") : *first_fail;
    v.budget_used = budget;
    return v;
  }

  const Problem& p_;
  TaggedPoint x_;
  EngineConfig cfg_;
  ProblemModel base_;
  std::unique_ptr<TruncatedModel> trunc_;
  bool trunc_tried_ = false;
  ExtendedReal value_, lambda_;
  std::optional<ConditionIII> iii_;
  std::vector<TaggedPoint> global_, near_;
  std::map<std::string, Verdict> memo_;
};

namespace detail {

inline bool guard_met(Analyzer& a, const std::string& g) {
  if (!g.empty() && g[0] == '!') return a.get(g.substr(1)).fails();
  return a.get(g).holds();
}

}  // namespace detail

/// Evaluates one statement: hypotheses first, then every conclusion on its own.
inline StatementResult evaluate_statement(Analyzer& a, const StatementSpec& spec) {
  StatementResult r;
  r.id = spec.id;
  r.citation = spec.citation;
  bool all = true, unknown = false;
  for (const auto& h : spec.hypotheses) {
    Status s = a.get(h.check).status;
    r.hypotheses.emplace_back(h, s);
    if (s == Status::Fails) r.blocked_by.push_back(h.check);
    if (s == Status::Unknown) unknown = true;
    all = all && s == Status::Holds;
  }
  r.applicability = !r.blocked_by.empty() ? Applicability::Blocked
                    : unknown             ? Applicability::Unknown
                                          : Applicability::Applicable;
  for (const auto& c : spec.conclusions) {
    ConclusionResult cr;
    cr.check = c.check;
    cr.guards = c.guards;
    cr.measured = a.get(c.check).status;
    bool guards = true;
    for (const auto& g : c.guards) guards = guards && detail::guard_met(a, g);
    cr.predicted = all && guards;
    cr.violated = cr.predicted && cr.measured == Status::Fails;
    r.soundness_violation = r.soundness_violation || cr.violated;
    r.conclusions.push_back(std::move(cr));
  }
  return r;
}

/// Runs the whole catalog at x.
inline TheoremReport evaluate(const Problem& p, const TaggedPoint& x, const EngineConfig& cfg = {}) {
  Analyzer a(p, x, cfg);
  TheoremReport rep;
  rep.problem = p.name;
  rep.x = x;
  const Slice& s = a.base().slice(x);
  rep.value = s.value();
  rep.attained = s.attained();
  rep.argmin = s.argmin();
  rep.lambda = a.lambda();
  rep.fault_injected = cfg.fault_negate_lsc;
  for (const auto& spec : statement_catalog()) {
    try {
      rep.statements.push_back(evaluate_statement(a, spec));
    } catch (const Error& e) {
      throw Error(spec.id + ": " + e.what());
    }
  }
  // every named check appears in the report, also those no statement needed
  if (cfg.all_checks)
    for (const auto& id : check_ids()) a.get(id);
  if (const auto& iii = a.condition_iii_result()) {
    rep.iii_lambda = iii->lambda;
    rep.iii_C = iii->C;
  }
  rep.checks = a.computed();
  rep.queries = a.queries();
  return rep;
}

struct SoundnessViolation {
  std::string statement;
  std::string conclusion;
  std::vector<std::pair<std::string, Status>> hypotheses;
  std::optional<Witness> witness;
};

inline std::vector<SoundnessViolation> cross_validate(const TheoremReport& rep) {
  std::vector<SoundnessViolation> out;
  for (const auto& s : rep.statements) {
    if (s.applicability != Applicability::Applicable) continue;
    for (const auto& c : s.conclusions) {
      if (!c.violated) continue;
      SoundnessViolation v;
      v.statement = s.id;
      v.conclusion = c.check;
      for (const auto& [h, st] : s.hypotheses) v.hypotheses.emplace_back(h.check, st);
      auto it = rep.checks.find(c.check);
      if (it != rep.checks.end()) v.witness = it->second.witness;
      out.push_back(std::move(v));
    }
  }
  return out;
}

/// Resolves a corpus key: a check id, a statement id (applicable -> HOLDS,
/// blocked -> FAILS) or a hypothesis "ID[label]".
inline std::optional<Status> lookup_status(const TheoremReport& rep, const std::string& key) {
  auto it = rep.checks.find(key);
  if (it != rep.checks.end()) return it->second.status;
  auto lb = key.find('[');
  if (lb != std::string::npos && key.back() == ']') {
    const StatementResult* s = rep.statement(key.substr(0, lb));
    if (!s) return std::nullopt;
    std::string label = key.substr(lb + 1, key.size() - lb - 2);
    for (const auto& [h, st] : s->hypotheses)
      if (h.label == label) return st;
    return std::nullopt;
  }
  if (const StatementResult* s = rep.statement(key)) {
    switch (s->applicability) {
      case Applicability::Applicable: return Status::Holds;
      case Applicability::Blocked: return Status::Fails;
      case Applicability::Unknown: return Status::Unknown;
    }
  }
  return std::nullopt;
}

}  // namespace paramin
