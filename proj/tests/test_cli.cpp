#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"
#include "tge/cli.hpp"

using namespace tge;
using tge::test::fixture;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json json_of(const Outcome& o) { return nlohmann::json::parse(o.out); }

}  // namespace

TEST(Cli, LoopsMatchClosedFormula) {
  auto o = run({"loops", fixture("two_loops.json"), "--kmax", "12"});
  ASSERT_EQ(o.code, 0) << o.err;
  auto j = json_of(o);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["command"], "loops");
  ASSERT_EQ(j["loops"].size(), 12u);
  for (unsigned m = 1; m <= 12; ++m)
    EXPECT_EQ(j["loops"][m - 1]["L_k"].get<std::string>(), tge::test::two_loops_formula(m).str());
}

TEST(Cli, SignedQFlagsDiscrepancy) {
  auto o = run({"loops", fixture("e3m2.json"), "--kmax", "3"});
  ASSERT_EQ(o.code, 0) << o.err;
  auto j = json_of(o);
  EXPECT_EQ(j["loops"][0]["L_k"], "5");
  EXPECT_EQ(j["loops"][0]["L_k_abs_q"], "1");
  EXPECT_EQ(j["loops"][0]["sign_discrepancy"], true);
  EXPECT_EQ(j["loops"][1]["sign_discrepancy"], false);
}

TEST(Cli, OutputIsDeterministic) {
  for (const char* cmd : {"analyze", "loops", "conjecture", "spectra", "verify-basis"}) {
    auto a = run({cmd, fixture("two_loops.json"), "--kmax", "10"});
    auto b = run({cmd, fixture("two_loops.json"), "--kmax", "10"});
    EXPECT_EQ(a.code, 0) << cmd << ": " << a.err;
    EXPECT_EQ(a.out, b.out) << cmd;
    EXPECT_NO_THROW(json_of(a)) << cmd;
  }
}

TEST(Cli, AnalyzeReport) {
  auto o = run({"analyze", fixture("two_loops.json")});
  ASSERT_EQ(o.code, 0) << o.err;
  auto r = json_of(o)["report"];
  EXPECT_NEAR(r["h_b"].get<double>(), std::log(4.0), 1e-9);
  EXPECT_NEAR(r["h_b_transpose"].get<double>(), std::log(3.0), 1e-9);
  EXPECT_NEAR(r["ht_phi"].get<double>(), std::log(3.0), 1e-9);
  EXPECT_NEAR(r["h_ell_estimate"].get<double>(), std::log(4.0), 0.02);
  EXPECT_EQ(r["conjecture_verdict"]["verdict"], "consistent");
  EXPECT_EQ(r["h_ell_sequence"].size(), 14u);
}

TEST(Cli, WritesToFile) {
  const auto path = std::filesystem::temp_directory_path() / "tge_cli_out.json";
  std::filesystem::remove(path);
  auto direct = run({"spectra", fixture("e23.json")});
  auto o = run({"spectra", fixture("e23.json"), "--out", path.string()});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_TRUE(o.out.empty());
  EXPECT_EQ(read_file(path.string()), direct.out);
  std::filesystem::remove(path);
  EXPECT_EQ(run({"spectra", fixture("e23.json"), "--out", "/nonexistent/dir/out.json"}).code, 2);
}

TEST(Cli, Formats) {
  auto csv = run({"loops", fixture("two_loops.json"), "--kmax", "3", "--format", "csv"});
  ASSERT_EQ(csv.code, 0);
  EXPECT_EQ(csv.out,
            "k,L_k,L_k_abs_q,sign_discrepancy,trace_P,trace_Q_abs,closed_words\n"
            "1,3,3,0,3,4,2\n2,13,13,0,9,16,4\n3,57,57,0,27,64,8\n");
  auto text = run({"analyze", fixture("e23.json"), "--format", "text"});
  ASSERT_EQ(text.code, 0);
  EXPECT_NE(text.out.find("consistent"), std::string::npos);
  EXPECT_EQ(run({"loops", fixture("e23.json"), "--format", "xml"}).code, 1);
}

TEST(Cli, Rewrite) {
  auto o = run({"rewrite", fixture("two_loops.json"), "-e", "u(v)*S(e1,2)"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(o.out, "S(e1,1)*u(v)\n");
  auto j = run({"rewrite", fixture("two_loops.json"), "-e", "u(v)*S(e1,1)", "--format", "json"});
  EXPECT_EQ(json_of(j)["normal_form"], "S(e1,2)");
  EXPECT_EQ(run({"rewrite", fixture("two_loops.json"), "-e", "S(e1,9)"}).code, 3);
  EXPECT_EQ(run({"rewrite", fixture("two_loops.json")}).code, 1);
}

TEST(Cli, VerifyBasisMatchesGolden) {
  auto o = run({"verify-basis", fixture("two_loops.json")});
  ASSERT_EQ(o.code, 0) << o.err;
  auto j = json_of(o);
  EXPECT_EQ(j["result"]["pass"], true);
  EXPECT_EQ(j["result"]["checks"], 27);
  const auto golden = nlohmann::json::parse(read_file(fixture("golden/left_action_two_loops.json")));
  EXPECT_EQ(j["left_action"]["v"], golden);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"loops", fixture("degenerate.json"), "--kmax", "3"}).code, 5);
  auto invalid = run({"analyze", fixture("invalid.json")});
  EXPECT_EQ(invalid.code, 4);
  EXPECT_FALSE(invalid.err.empty());
  EXPECT_EQ(run({"analyze", fixture("malformed.json")}).code, 3);
  EXPECT_EQ(run({"analyze", fixture("unknown_key.json")}).code, 3);
  EXPECT_EQ(run({"analyze", fixture("absent.json")}).code, 2);
  EXPECT_EQ(run({"bogus", fixture("e23.json")}).code, 1);
  EXPECT_EQ(run({"loops", fixture("e23.json"), "--kmax", "0"}).code, 1);
  EXPECT_EQ(run({"loops"}).code, 1);
  EXPECT_EQ(run({"loops", fixture("two_loops.json"), "--kmax", "30", "--cap", "1000"}).code, 7);
}

TEST(Cli, Help) {
  auto o = run({"--help"});
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("verify-basis"), std::string::npos);
}
