// JSON serialization of verdicts, witnesses and theorem reports.
//
// Numbers carry 12 significant digits; exact values travel as strings next to
// them.  Witness margins also keep a full-precision copy so a serialized
// witness replays to 1e-12.
#pragma once

#include <cstdio>
#include <string>

#include "json.hpp"
#include "paramin/theorems.hpp"

namespace paramin {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kSchemaVersion = "1";

using Json = nlohmann::json;

inline Json num_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return round_significant(v, 12);
}

inline Json num_json(const ExtendedReal& v) { return num_json(v.numeric()); }

inline std::string full_precision(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_full_precision(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::stod(s);
}

inline Json witness_json(const Witness& w) {
  Json j;
  j["kind"] = w.kind;
  j["check"] = w.check;
  j["args"] = w.args;
  j["scheme"] = w.scheme;
  Json xs = Json::array(), ds = Json::array(), ys = Json::array();
  for (const auto& t : w.terms) {
    xs.push_back(t.z.str());
    ds.push_back(to_string(t.delta));
  }
  for (const auto& y : w.y_seq) ys.push_back(y.exact_str());
  j["x_seq"] = xs;
  j["deltas"] = ds;
  j["tail_start"] = w.tail_start;
  j["y_seq"] = ys;
  j["limit_claim"] = w.limit_claim;
  j["violation_margin"] = num_json(w.margin);
  j["violation_margin_full"] = full_precision(w.margin);
  return j;
}

inline Witness witness_from_json(const Json& j) {
  try {
    Witness w;
    w.kind = j.at("kind").get<std::string>();
    w.check = j.at("check").get<std::string>();
    w.args = j.at("args").get<Args>();
    w.scheme = j.at("scheme").get<std::string>();
    const auto& xs = j.at("x_seq");
    const auto& ds = j.at("deltas");
    if (xs.size() != ds.size()) throw SchemaError("witness x_seq and deltas differ in length");
    for (std::size_t i = 0; i < xs.size(); ++i)
      w.terms.push_back(Term{parse_point(xs[i].get<std::string>()), parse_rational(ds[i].get<std::string>())});
    w.tail_start = j.at("tail_start").get<int>();
    for (const auto& y : j.at("y_seq")) w.y_seq.push_back(detail::parse_er(y.get<std::string>()));
    w.limit_claim = j.at("limit_claim").get<std::string>();
    w.margin = parse_full_precision(j.at("violation_margin_full").get<std::string>());
    return w;
  } catch (const Json::exception& e) {
    throw SchemaError(std::string("malformed witness: ") + e.what());
  }
}

inline Json verdict_json(const Verdict& v) {
  Json j;
  j["status"] = status_name(v.status);
  j["margin"] = num_json(v.margin);
  j["budget_used"] = v.budget_used;
  j["note"] = v.note;
  j["witness"] = v.witness ? witness_json(*v.witness) : Json(nullptr);
  return j;
}

inline Json statement_json(const StatementResult& s) {
  Json j;
  j["id"] = s.id;
  const StatementSpec* spec = find_statement(s.id);
  j["title"] = spec ? spec->title : "";
  j["citation"] = s.citation;
  j["applicability"] = applicability_name(s.applicability);
  j["blocked_by"] = s.blocked_by;
  Json hs = Json::array();
  for (const auto& [h, st] : s.hypotheses) hs.push_back({{"label", h.label}, {"check", h.check}, {"status", status_name(st)}});
  j["hypotheses"] = hs;
  Json cs = Json::array();
  for (const auto& c : s.conclusions)
    cs.push_back({{"check", c.check},
                  {"guards", c.guards},
                  {"predicted", c.predicted},
                  {"measured", status_name(c.measured)},
                  {"violated", c.violated}});
  j["conclusions"] = cs;
  j["soundness_violation"] = s.soundness_violation;
  return j;
}

inline Json violation_json(const SoundnessViolation& v) {
  Json j;
  j["statement"] = v.statement;
  j["conclusion"] = v.conclusion;
  Json hs = Json::object();
  for (const auto& [id, st] : v.hypotheses) hs[id] = status_name(st);
  j["hypotheses"] = hs;
  j["witness"] = v.witness ? witness_json(*v.witness) : Json(nullptr);
  return j;
}

inline Json report_json(const TheoremReport& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["tool_version"] = kToolVersion;
  j["problem"] = r.problem;
  j["x"] = r.x.str();
  j["x_numeric"] = num_json(r.x.numeric());
  j["value"] = num_json(r.value);
  j["value_exact"] = r.value.exact_str();
  j["attained"] = r.attained;
  j["argmin"] = r.argmin.str();
  j["lambda"] = num_json(r.lambda);
  j["lambda_exact"] = r.lambda.exact_str();
  if (r.iii_lambda) {
    j["condition_iii"] = {{"lambda", r.iii_lambda->exact_str()}, {"C", r.iii_C ? r.iii_C->str() : ""}};
  } else {
    j["condition_iii"] = nullptr;
  }
  Json checks = Json::object();
  for (const auto& [id, v] : r.checks) checks[id] = verdict_json(v);
  j["checks"] = checks;
  Json st = Json::array();
  for (const auto& s : r.statements) st.push_back(statement_json(s));
  j["statements"] = st;
  Json vs = Json::array();
  for (const auto& v : cross_validate(r)) vs.push_back(violation_json(v));
  j["soundness_violations"] = vs;
  j["budget"] = {{"queries", r.queries}};
  j["fault_injected"] = r.fault_injected;
  return j;
}

inline Json error_json(const std::string& kind, const std::string& message) {
  return Json{{"error", {{"kind", kind}, {"message", message}}}};
}

}  // namespace paramin
