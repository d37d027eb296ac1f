// paramin: analyze a parametric minimization problem, print its value curve,
// or run the golden corpus.
//
// Exit codes: 0 success, 1 load or usage error (error JSON on stderr),
// 2 soundness violation.  `corpus run` also exits 1 on any expectation mismatch.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "paramin/paramin.hpp"

namespace fs = std::filesystem;
using namespace paramin;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitViolation = 2;

#ifndef PARAMIN_CORPUS_DIR
#define PARAMIN_CORPUS_DIR "corpus"
#endif

int fail(const std::string& kind, const std::string& message) {
  std::cerr << error_json(kind, message).dump() << "\n";
  return kExitError;
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", round_significant(v, 12));
  return buf;
}

/// A bare case name such as "ex4_1" resolves into the corpus directory.
std::string resolve_problem_path(const std::string& arg, const std::string& corpus_dir) {
  if (fs::exists(arg)) return arg;
  fs::path candidate = fs::path(corpus_dir) / (arg + ".yaml");
  if (fs::exists(candidate)) return candidate.string();
  return arg;
}

void print_text_report(const TheoremReport& r, const std::vector<SoundnessViolation>& violations) {
  std::cout << "problem  " << r.problem << "\n"
            << "x        " << r.x.str() << "\n"
            << "v(x)     " << r.value.str() << (r.attained ? " (attained)" : " (not attained)") << "\n"
            << "argmin   " << r.argmin.str() << "\n"
            << "lambda   " << r.lambda.str() << "\n";
  if (r.iii_lambda)
    std::cout << "(iii)    lambda " << r.iii_lambda->str() << ", C " << (r.iii_C ? r.iii_C->str() : "-") << "\n";
  std::cout << "\nchecks\n";
  for (const auto& [id, v] : r.checks) {
    std::cout << "  " << id << std::string(id.size() < 26 ? 26 - id.size() : 1, ' ') << status_name(v.status);
    if (v.witness) std::cout << "  [" << v.witness->kind << ", " << v.witness->scheme << "]";
    std::cout << "\n";
  }
  std::cout << "\nstatements\n";
  for (const auto& s : r.statements) {
    std::cout << "  " << s.id << std::string(s.id.size() < 10 ? 10 - s.id.size() : 1, ' ')
              << applicability_name(s.applicability);
    if (!s.blocked_by.empty()) {
      std::cout << "  (";
      for (std::size_t i = 0; i < s.blocked_by.size(); ++i) std::cout << (i ? ", " : "") << s.blocked_by[i];
      std::cout << ")";
    }
    std::cout << "\n";
  }
  std::cout << "\nsoundness violations: " << violations.size() << "\n";
  for (const auto& v : violations) std::cout << "  " << v.statement << " -> " << v.conclusion << "\n";
}

struct AnalyzeArgs {
  std::string file;
  std::string at;
  std::string lambda;
  long budget = 0;
  bool json = false;
  bool timing = false;
};

int cmd_analyze(const AnalyzeArgs& a, const std::string& corpus_dir) {
  Problem p;
  TaggedPoint x;
  EngineConfig cfg;
  try {
    p = load_problem_file(resolve_problem_path(a.file, corpus_dir));
    x = parse_point(a.at);
    if (!a.lambda.empty()) cfg.lambda = parse_extended(a.lambda);
  } catch (const Error& e) {
    return fail("load", e.what());
  }
  if (!p.in_x_domain(x)) return fail("usage", "x=" + x.str() + " is outside x_domain " + p.x_domain.str());
  if (a.budget > 0) cfg.checks.plan.budget = a.budget;

  auto t0 = std::chrono::steady_clock::now();
  TheoremReport rep;
  try {
    rep = evaluate(p, x, cfg);
  } catch (const Error& e) {
    return fail("analysis", e.what());
  }
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  auto violations = cross_validate(rep);
  if (a.json) {
    Json j = report_json(rep);
    // wall-clock is opt-in so default output stays byte-identical across runs
    if (a.timing) j["wall_clock_seconds"] = num_json(seconds);
    std::cout << j.dump(2) << "\n";
  } else {
    print_text_report(rep, violations);
    if (a.timing) std::cout << "wall clock: " << fmt(seconds) << " s\n";
  }
  return violations.empty() ? kExitOk : kExitViolation;
}

struct ValueArgs {
  std::string file;
  std::vector<std::string> range;
  int samples = 0;
};

int cmd_value(const ValueArgs& a, const std::string& corpus_dir) {
  Problem p;
  Rational lo, hi;
  try {
    p = load_problem_file(resolve_problem_path(a.file, corpus_dir));
    TaggedPoint a0 = parse_point(a.range.at(0)), b0 = parse_point(a.range.at(1));
    if (!a0.is_rational() || !b0.is_rational()) return fail("usage", "--range endpoints must be rational");
    lo = a0.value();
    hi = b0.value();
  } catch (const Error& e) {
    return fail("load", e.what());
  }
  if (a.samples < 2) return fail("usage", "--samples must be at least 2");
  if (!(lo < hi)) return fail("usage", "--range needs a < b");
  auto seg = Interval::make(ExtendedReal(lo), ExtendedReal(hi), true, true);
  if (!seg || !IntervalSet(*seg).subset_of(p.x_domain))
    return fail("usage", "range [" + to_string(lo) + ", " + to_string(hi) + "] is not inside x_domain " + p.x_domain.str());

  std::cout << "x,v,attained\n";
  for (int i = 0; i < a.samples; ++i) {
    Rational x = lo + (hi - lo) * make_rational(i, a.samples - 1);
    MinResult r;
    try {
      r = value(p, TaggedPoint(x));
    } catch (const Error& e) {
      return fail("analysis", e.what());
    }
    std::cout << fmt(to_double(x)) << "," << fmt(r.value.numeric()) << "," << (r.attained ? "true" : "false") << "\n";
  }
  return kExitOk;
}

int cmd_corpus(const std::string& which, const std::string& dir, bool json) {
  std::vector<CorpusCase> cases;
  try {
    cases = load_corpus_dir(dir);
  } catch (const Error& e) {
    return fail("load", e.what());
  }
  if (!which.empty()) {
    std::vector<CorpusCase> picked;
    for (auto& c : cases) {
      std::string stem = fs::path(c.file).stem().string();
      if (c.id == which || stem == which) picked.push_back(std::move(c));
    }
    if (picked.empty()) return fail("usage", "unknown corpus case '" + which + "'");
    cases = std::move(picked);
  }

  std::set<std::string> executed_files, skipped_files;
  int mismatches = 0, violations = 0;
  Json out = Json::array();
  for (const auto& c : cases) {
    CaseResult r;
    try {
      r = run_case(c);
    } catch (const Error& e) {
      return fail("analysis", c.id + ": " + e.what());
    }
    (r.skipped ? skipped_files : executed_files).insert(c.file);
    std::size_t nviol = r.report ? cross_validate(*r.report).size() : 0;
    violations += static_cast<int>(nviol);
    if (!r.ok()) ++mismatches;
    if (json) {
      Json j;
      j["id"] = r.id;
      j["anchor"] = r.anchor;
      j["skipped"] = r.skipped;
      Json es = Json::array();
      for (const auto& e : r.entries)
        es.push_back({{"key", e.key},
                      {"expected", status_name(e.expected)},
                      {"measured", e.measured ? status_name(*e.measured) : "missing"},
                      {"ok", e.ok}});
      j["entries"] = es;
      Json ds = Json::array();
      for (const auto& d : r.derived) ds.push_back({{"what", d.what}, {"ok", d.ok}, {"detail", d.detail}});
      j["derived"] = ds;
      j["soundness_violations"] = nviol;
      out.push_back(j);
      continue;
    }
    if (r.skipped) {
      std::cout << c.id << "  SKIP  \"" << r.anchor << "\"\n";
      continue;
    }
    int good = 0;
    for (const auto& e : r.entries) good += e.ok;
    int dgood = 0;
    for (const auto& d : r.derived) dgood += d.ok;
    std::cout << c.id << "  " << (r.ok() ? "PASS" : "FAIL") << "  " << good << "/" << r.entries.size() << " expected, "
              << dgood << "/" << r.derived.size() << " derived\n";
    for (const auto& e : r.entries)
      if (!e.ok)
        std::cout << "    " << e.key << ": expected " << status_name(e.expected) << ", measured "
                  << (e.measured ? status_name(*e.measured) : "missing") << "\n";
    for (const auto& d : r.derived)
      if (!d.ok) std::cout << "    " << d.what << ": " << d.detail << "\n";
  }
  if (json) {
    Json summary{{"cases", out},
                 {"executed", executed_files.size()},
                 {"skipped", skipped_files.size()},
                 {"mismatches", mismatches},
                 {"soundness_violations", violations}};
    std::cout << summary.dump(2) << "\n";
  } else {
    std::cout << "corpus: " << executed_files.size() << " executed, " << skipped_files.size() << " skipped, "
              << mismatches << " mismatched, " << violations << " soundness violations\n";
  }
  if (mismatches) return kExitError;
  return violations ? kExitViolation : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Value functions and semicontinuity checks for parametric minimization"};
  app.require_subcommand(1);
  std::string corpus_dir = PARAMIN_CORPUS_DIR;
  app.add_option("--corpus-dir", corpus_dir, "Directory holding the golden corpus");

  AnalyzeArgs aa;
  auto* analyze = app.add_subcommand("analyze", "Run every check and statement at one parameter");
  analyze->add_option("file", aa.file, "Problem file or corpus case name")->required();
  analyze->add_option("--at", aa.at, "Parameter x (rational, decimal, or q+c*sqrt2)")->required();
  analyze->add_option("--lambda", aa.lambda, "Truncation level (default v(x) + 1)");
  analyze->add_option("--budget", aa.budget, "Model queries per check");
  analyze->add_flag("--json", aa.json, "Emit the JSON report");
  analyze->add_flag("--timing", aa.timing, "Include wall-clock time");

  ValueArgs va;
  auto* value_cmd = app.add_subcommand("value", "Print v(x), attained as CSV on a uniform grid");
  value_cmd->add_option("file", va.file, "Problem file or corpus case name")->required();
  value_cmd->add_option("--range", va.range, "Endpoints a b")->expected(2)->required();
  value_cmd->add_option("--samples", va.samples, "Number of grid points (>= 2)")->required();

  std::string which;
  bool corpus_json = false;
  auto* corpus = app.add_subcommand("corpus", "Golden corpus");
  corpus->require_subcommand(1);
  auto* run = corpus->add_subcommand("run", "Run all cases, or one by name");
  run->add_option("case", which, "Case id or file stem");
  run->add_flag("--json", corpus_json, "Emit a JSON summary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what());
  }

  if (*analyze) return cmd_analyze(aa, corpus_dir);
  if (*value_cmd) return cmd_value(va, corpus_dir);
  return cmd_corpus(which, corpus_dir, corpus_json);
}
