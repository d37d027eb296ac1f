#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "paramin/report.hpp"

using namespace paramin;

namespace {

struct CliRun {
  int code = -1;
  std::string out, err;
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CliRun cli(const std::string& args) {
  auto dir = std::filesystem::temp_directory_path();
  auto out = dir / "paramin_cli_out.txt", err = dir / "paramin_cli_err.txt";
  std::string cmd = std::string(PARAMIN_CLI_PATH) + " " + args + " > " + out.string() + " 2> " + err.string();
  int status = std::system(cmd.c_str());
  CliRun r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

const Json* find_statement(const Json& rep, const std::string& id) {
  for (const auto& s : rep["statements"])
    if (s["id"] == id) return &s;
  return nullptr;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(Analyze, ClipProblemAtOrigin) {
  CliRun r = cli("analyze ex4_1 --at 0 --lambda 0.5 --json");
  ASSERT_EQ(r.code, 0) << r.err;
  Json j = Json::parse(r.out);
  EXPECT_EQ(j["checks"]["kn_at_x"]["status"], "FAILS");
  EXPECT_FALSE(j["checks"]["kn_at_x"]["witness"].is_null());
  const Json* th = find_statement(j, "TH1.2");
  ASSERT_NE(th, nullptr);
  EXPECT_EQ((*th)["applicability"], "applicable");
  EXPECT_EQ(j["condition_iii"]["C"], "[-1,1]");
  EXPECT_TRUE(j["soundness_violations"].empty());
  EXPECT_FALSE(j.contains("wall_clock_seconds"));
}

TEST(Analyze, IndicatorProblemAtOrigin) {
  CliRun r = cli("analyze ex4_9 --at 0 --lambda 0.5 --json");
  ASSERT_EQ(r.code, 0) << r.err;
  Json j = Json::parse(r.out);
  EXPECT_EQ(j["checks"]["truncated_kn_at_x"]["status"], "HOLDS");
  EXPECT_EQ(j["checks"]["u_graph_usc_on_argmin"]["status"], "FAILS");
  EXPECT_EQ(j["checks"]["v_continuous_at_x"]["status"], "FAILS");
}

TEST(Analyze, TextReportAndTiming) {
  CliRun r = cli("analyze ex4_7 --at 1/2 --timing");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("v(x)     2 (attained)"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("wall clock:"), std::string::npos);
}

TEST(Analyze, OutsideDomainIsAUsageError) {
  CliRun r = cli("analyze ex4_7 --at 3");
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(r.out.empty());
  Json e = Json::parse(r.err);
  EXPECT_EQ(e["error"]["kind"], "usage");
}

TEST(Analyze, MissingFileAndBadFlags) {
  CliRun missing = cli("analyze /nonexistent.yaml --at 0");
  EXPECT_EQ(missing.code, 1);
  EXPECT_EQ(Json::parse(missing.err)["error"]["kind"], "load");
  CliRun flag = cli("analyze ex4_1 --bogus");
  EXPECT_EQ(flag.code, 1);
  EXPECT_EQ(Json::parse(flag.err)["error"]["kind"], "usage");
  CliRun none = cli("");
  EXPECT_EQ(none.code, 1);
}

TEST(Value, ReciprocalCurve) {
  CliRun r = cli("value ex4_7 --range 0.1 1 --samples 10");
  ASSERT_EQ(r.code, 0) << r.err;
  auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 11u);
  EXPECT_EQ(ls[0], "x,v,attained");
  for (std::size_t i = 1; i < ls.size(); ++i) {
    double x = 0, v = 0;
    char attained[8] = {};
    ASSERT_EQ(std::sscanf(ls[i].c_str(), "%lf,%lf,%7s", &x, &v, attained), 3) << ls[i];
    EXPECT_NEAR(v, 1.0 / x, 1e-9) << ls[i];
    EXPECT_STREQ(attained, "true");
  }
  EXPECT_EQ(ls[1], "0.1,10,true");
  EXPECT_EQ(ls[10], "1,1,true");
}

TEST(Value, StepCurveIsZero) {
  CliRun r = cli("value ex4_5 --range 0 1 --samples 11");
  ASSERT_EQ(r.code, 0) << r.err;
  auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 12u);
  for (std::size_t i = 1; i < ls.size(); ++i) EXPECT_NE(ls[i].find(",0,"), std::string::npos) << ls[i];
}

TEST(Value, RejectsBadGrids) {
  EXPECT_EQ(cli("value ex4_5 --range 0 1 --samples 1").code, 1);
  EXPECT_EQ(cli("value ex4_5 --range 1 0 --samples 5").code, 1);
  CliRun out = cli("value ex4_5 --range 0 2 --samples 5");
  EXPECT_EQ(out.code, 1);
  EXPECT_EQ(Json::parse(out.err)["error"]["kind"], "usage");
}

TEST(Corpus, FullRun) {
  CliRun r = cli("corpus run");
  ASSERT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_NE(r.out.find("corpus: 8 executed, 1 skipped, 0 mismatched, 0 soundness violations"), std::string::npos)
      << r.out;
  EXPECT_NE(r.out.find("ex4_2  SKIP  \"are not compact sets because the sequence\""), std::string::npos);
}

TEST(Corpus, SingleCaseAndJson) {
  CliRun r = cli("corpus run ex4_6 --json");
  ASSERT_EQ(r.code, 0) << r.err;
  Json j = Json::parse(r.out);
  EXPECT_EQ(j["executed"], 1);
  EXPECT_EQ(j["mismatches"], 0);
  ASSERT_EQ(j["cases"].size(), 1u);
  EXPECT_EQ(j["cases"][0]["id"], "ex4_6");
  CliRun unknown = cli("corpus run ex9_9");
  EXPECT_EQ(unknown.code, 1);
  EXPECT_EQ(Json::parse(unknown.err)["error"]["kind"], "usage");
}

TEST(Corpus, MismatchExitsNonzero) {
  auto dir = std::filesystem::temp_directory_path() / "paramin_bad_corpus";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "wrong.yaml") << "name: wrong\nx_domain: \"[0, 1]\"\ny_domain: \"[0, 1]\"\n"
                                       "u: \"y\"\nphi: \"[0, 1]\"\nanchor: test\nexpected:\n  kn_at_x: FAILS\n";
  CliRun r = cli("--corpus-dir " + dir.string() + " corpus run");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("wrong  FAIL"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("1 mismatched"), std::string::npos);
}

TEST(Determinism, RepeatedRunsAreByteIdentical) {
  for (const char* args : {"analyze ex4_8 --at 0 --lambda 0 --json", "value ex4_7 --range 0.1 1 --samples 10"}) {
    CliRun a = cli(args), b = cli(args);
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.out, b.out) << args;
  }
}

TEST(Schema, ReportKeysMatchDocumentedSchema) {
  std::ifstream in(std::string(PARAMIN_CORPUS_DIR) + "/../docs/report-schema.json");
  ASSERT_TRUE(in.good());
  Json schema = Json::parse(in);
  CliRun r = cli("analyze ex4_6 --at 0 --json");
  ASSERT_EQ(r.code, 0) << r.err;
  Json rep = Json::parse(r.out);
  std::set<std::string> got, want;
  for (const auto& [k, v] : rep.items()) got.insert(k);
  for (const auto& k : schema["required"]) want.insert(k.get<std::string>());
  EXPECT_EQ(got, want);
  std::set<std::string> vkeys, wkeys;
  for (const auto& [k, v] : rep["checks"]["map_usc_at_x"].items()) vkeys.insert(k);
  for (const auto& k : schema["$defs"]["verdict"]["required"]) wkeys.insert(k.get<std::string>());
  EXPECT_EQ(vkeys, wkeys);
  ASSERT_FALSE(rep["checks"]["map_usc_at_x"]["witness"].is_null());
  std::set<std::string> keys, schema_keys;
  for (const auto& [k, v] : rep["checks"]["map_usc_at_x"]["witness"].items()) keys.insert(k);
  for (const auto& k : schema["$defs"]["witness"]["required"]) schema_keys.insert(k.get<std::string>());
  EXPECT_EQ(keys, schema_keys);
}
