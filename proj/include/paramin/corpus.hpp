// Golden corpus: problem files with expected verdict maps.
#pragma once

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "paramin/report.hpp"
#include "paramin/testing.hpp"

namespace paramin {

/// A quantity derived by hand and checked against the oracle or the engine.
///   kind: value            at, optional equals   (v(at) vs the brute-force oracle)
///   kind: condition_iii_C  equals                 (the compact set found for (iii))
struct DerivedCheck {
  std::string kind;
  std::optional<TaggedPoint> at;
  std::optional<std::string> equals;
};

struct CorpusCase {
  std::string id;  // file stem, or the variant name
  std::string file;
  bool skip = false;
  std::string anchor;
  std::string notes;
  std::optional<Problem> problem;
  TaggedPoint focus;
  std::optional<ExtendedReal> lambda;
  std::optional<IntervalSet> k_set;
  std::vector<std::pair<std::string, Status>> expected;
  std::vector<DerivedCheck> derived;
  std::vector<TaggedPoint> oracle_points;  // extra points for oracle sweeps
};

namespace detail {

inline bool is_expected_key(const std::string& key) {
  if (is_check_id(key) || find_statement(key)) return true;
  auto lb = key.find('[');
  if (lb == std::string::npos || key.back() != ']') return false;
  const StatementSpec* s = find_statement(key.substr(0, lb));
  if (!s) return false;
  std::string label = key.substr(lb + 1, key.size() - lb - 2);
  return std::any_of(s->hypotheses.begin(), s->hypotheses.end(), [&](const Hypothesis& h) { return h.label == label; });
}

inline CorpusCase case_from_yaml(const YAML::Node& doc, const std::string& id, const std::string& file) {
  CorpusCase c;
  c.id = id;
  c.file = file;
  if (doc["skip"]) c.skip = doc["skip"].as<bool>();
  if (doc["anchor"]) c.anchor = doc["anchor"].as<std::string>();
  if (doc["notes"]) c.notes = doc["notes"].as<std::string>();
  if (c.skip) return c;
  YAML::Node pdoc = YAML::Clone(doc);
  c.problem = problem_from_yaml(pdoc);
  c.focus = doc["focus"] ? parse_point(doc["focus"].as<std::string>()) : TaggedPoint(c.problem->window_lo);
  if (!c.problem->in_x_domain(c.focus)) throw SchemaError(id + ": focus outside x_domain");
  if (doc["lambda"]) c.lambda = parse_extended(doc["lambda"].as<std::string>());
  if (doc["k_set"]) {
    c.k_set = yaml_const_set(doc["k_set"], "k_set");
    if (c.k_set->empty() || !c.k_set->is_compact()) throw SchemaError(id + ": k_set must be nonempty compact");
  }
  if (const auto& e = doc["expected"]) {
    if (!e.IsMap()) throw SchemaError(id + ": expected must be a mapping");
    for (const auto& kv : e) {
      std::string key = kv.first.as<std::string>();
      if (!is_expected_key(key)) throw SchemaError(id + ": expected key '" + key + "' names no check or statement");
      std::string text = kv.second.as<std::string>();
      Status s = text == "HOLDS" ? Status::Holds : text == "FAILS" ? Status::Fails : Status::Unknown;
      if (s == Status::Unknown) throw SchemaError(id + ": expected status for '" + key + "' must be HOLDS or FAILS");
      c.expected.emplace_back(key, s);
    }
  }
  if (const auto& d = doc["derived"]) {
    for (const auto& item : d) {
      DerivedCheck dc;
      dc.kind = item["kind"].as<std::string>();
      if (dc.kind != "value" && dc.kind != "condition_iii_C")
        throw SchemaError(id + ": unknown derived kind '" + dc.kind + "'");
      if (item["at"]) dc.at = parse_point(item["at"].as<std::string>());
      if (item["equals"]) dc.equals = item["equals"].as<std::string>();
      if (dc.kind == "value" && !dc.at) throw SchemaError(id + ": derived value needs 'at'");
      c.derived.push_back(std::move(dc));
    }
  }
  if (const auto& o = doc["oracle_points"])
    for (const auto& item : o) c.oracle_points.push_back(parse_point(item.as<std::string>()));
  return c;
}

}  // namespace detail

/// One file gives one case, or one per entry of `variants` (each entry
/// overrides top-level fields and must carry its own name).
inline std::vector<CorpusCase> load_corpus_file(const std::string& path) {
  YAML::Node doc;
  try {
    doc = YAML::LoadFile(path);
  } catch (const YAML::Exception& e) {
    throw SchemaError(path + ": " + e.what());
  }
  if (!doc.IsMap()) throw SchemaError(path + ": corpus file must be a mapping");
  std::string stem = std::filesystem::path(path).stem().string();
  std::vector<CorpusCase> out;
  try {
    if (!doc["variants"]) {
      out.push_back(detail::case_from_yaml(doc, stem, path));
      return out;
    }
    for (const auto& v : doc["variants"]) {
      if (!v.IsMap() || !v["name"]) throw SchemaError(path + ": every variant needs a name");
      YAML::Node merged = YAML::Clone(doc);
      merged.remove("variants");
      merged.remove("expected");
      merged.remove("derived");
      for (const auto& kv : v) merged[kv.first.as<std::string>()] = kv.second;
      out.push_back(detail::case_from_yaml(merged, merged["name"].as<std::string>(), path));
    }
  } catch (const YAML::Exception& e) {
    throw SchemaError(path + ": " + e.what());
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(path + ": " + e.what());
  }
  return out;
}

inline std::vector<CorpusCase> load_corpus_dir(const std::string& dir) {
  std::vector<std::string> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".yaml") files.push_back(e.path().string());
  std::sort(files.begin(), files.end());
  std::vector<CorpusCase> out;
  for (const auto& f : files)
    for (auto& c : load_corpus_file(f)) out.push_back(std::move(c));
  return out;
}

struct EntryResult {
  std::string key;
  Status expected = Status::Unknown;
  std::optional<Status> measured;
  bool ok = false;
};

struct DerivedResult {
  std::string what;
  bool ok = false;
  std::string detail;
};

struct CaseResult {
  std::string id;
  bool skipped = false;
  std::string anchor;
  std::vector<EntryResult> entries;
  std::vector<DerivedResult> derived;
  std::optional<TheoremReport> report;
  double seconds = 0.0;

  bool ok() const {
    return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.ok; }) &&
           std::all_of(derived.begin(), derived.end(), [](const auto& d) { return d.ok; });
  }
};

inline EngineConfig case_config(const CorpusCase& c, EngineConfig base = {}) {
  if (c.lambda) base.lambda = c.lambda;
  if (c.k_set) base.k_set = c.k_set;
  return base;
}

inline CaseResult run_case(const CorpusCase& c, const EngineConfig& base = {}) {
  CaseResult r;
  r.id = c.id;
  r.anchor = c.anchor;
  r.skipped = c.skip;
  if (c.skip) return r;
  auto t0 = std::chrono::steady_clock::now();
  const Problem& p = *c.problem;
  r.report = evaluate(p, c.focus, case_config(c, base));
  for (const auto& [key, want] : c.expected) {
    EntryResult e;
    e.key = key;
    e.expected = want;
    e.measured = lookup_status(*r.report, key);
    e.ok = e.measured && *e.measured == want;
    r.entries.push_back(std::move(e));
  }
  for (const auto& d : c.derived) {
    DerivedResult dr;
    if (d.kind == "value") {
      dr.what = "v(" + d.at->str() + ")";
      double got = value(p, *d.at).value.numeric();
      double oracle = oracle_value(p, *d.at).value;
      dr.ok = std::fabs(got - oracle) <= 1e-6 || (std::isinf(got) && got == oracle);
      std::ostringstream os;
      os << "engine " << got << ", oracle " << oracle;
      if (d.equals) {
        double want = parse_extended(*d.equals).numeric();
        dr.ok = dr.ok && std::fabs(got - want) <= 1e-6;
        os << ", expected " << *d.equals;
      }
      dr.detail = os.str();
    } else {
      dr.what = "C for condition (iii)";
      std::string got = r.report->iii_C ? r.report->iii_C->str() : "none";
      IntervalSet want = eval_set(*parse_set(*d.equals), TaggedPoint(0));
      dr.ok = r.report->iii_C && *r.report->iii_C == want;
      dr.detail = "found " + got + ", expected " + want.str();
    }
    r.derived.push_back(std::move(dr));
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace paramin
