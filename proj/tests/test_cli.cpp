// Copyright 2026 The matmult Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "oracles.hpp"

namespace {

struct Result {
  int code = -1;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "matmult");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = matmult::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string law(const std::string& name) { return oracle::law_path(name).string(); }

TEST(Cli, ValidateExitCodes) {
  auto r = run({"validate", "--law", law("sl2")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["schema_version"], 1);
  EXPECT_EQ(doc["command"], "validate");
  EXPECT_EQ(doc["config"]["law"], law("sl2"));
  EXPECT_TRUE(doc["result"]["is_mean_zero"].get<bool>());
  EXPECT_EQ(doc["result"]["second_hs_moment"], 2.5);

  EXPECT_EQ(run({"validate", "--law", law("identity2")}).code, 0);
  EXPECT_EQ(run({"validate", "--law", law("identity2"), "--require-mean-zero"}).code, 2);
  EXPECT_EQ(run({"validate", "--law", "/nonexistent/law.json"}).code, 1);
  EXPECT_EQ(run({"validate", "--law", oracle::fixture_path("bad_weights.law.json").string()}).code, 1);
  EXPECT_EQ(run({"validate"}).code, 1);
  EXPECT_EQ(run({"bogus"}).code, 1);
  EXPECT_EQ(run({}).code, 1);
}

TEST(Cli, HelpIsSuccess) { EXPECT_EQ(run({"--help"}).code, 0); }

TEST(Cli, OperatorJson) {
  auto r = run({"operator", "--law", law("sl2"), "--flavor", "real"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["result"]["l"], 3);
  EXPECT_EQ(doc["result"]["rep"][0][0][0], 0.75);
  EXPECT_EQ(doc["result"]["rep"][2][0][0], 0.75);
  EXPECT_EQ(doc["config"]["flavor"], "real");
  EXPECT_EQ(run({"operator", "--law", law("gaussian_units"), "--flavor", "real"}).code, 1);
  EXPECT_EQ(run({"operator", "--law", law("sl2"), "--flavor", "quaternion"}).code, 1);
  EXPECT_EQ(run({"operator", "--law", law("sl2"), "--k", "25", "--flavor", "complex"}).code, 3);
}

TEST(Cli, RecurrenceJson) {
  auto r = run({"recurrence", "--law", law("shear")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["result"]["max_residual"], 0.0);
  EXPECT_EQ(doc["result"]["moments"][10], 102.0);
  EXPECT_EQ(doc["result"]["minimal_recurrence_length"], 3);
}

TEST(Cli, ConstantsJson) {
  auto r = run({"constants", "--law", law("sl2"), "--prime-bound", "1e6"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  const auto& terms = doc["result"]["expansion"]["terms"];
  ASSERT_EQ(terms.size(), 6u);
  EXPECT_NEAR(terms[0]["C"][0].get<double>(), 1.256, 1e-3);
  EXPECT_EQ(doc["config"]["prime_bound"], 1000000);
  EXPECT_EQ(run({"constants", "--law", law("sl2"), "--N", "3"}).code, 1);
  EXPECT_EQ(run({"constants", "--law", law("sl2"), "--prime-bound", "abc"}).code, 1);
}

TEST(Cli, ExactAndMc) {
  auto r = run({"exact", "--law", law("rademacher"), "--x", "1000", "--prime-bound", "1e5"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["result"]["exact"], 608.0);
  EXPECT_EQ(doc["result"]["squarefree_count"], 608);

  const std::vector<std::string> mc{"mc", "--law", law("sl2"), "--x", "2000", "--trials", "50", "--seed", "3"};
  auto a = run(mc);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, run(mc).out);
  doc = nlohmann::json::parse(a.out);
  EXPECT_EQ(doc["result"]["trials"], 50);
  EXPECT_EQ(doc["config"]["seed"], 3);
  EXPECT_TRUE(doc["result"]["exact"].is_number());
  EXPECT_EQ(run({"mc", "--law", law("sl2"), "--x", "100", "--trials", "1"}).code, 1);
}

TEST(Cli, ThreadsEnvironment) {
  const std::vector<std::string> mc{"mc", "--law", law("sl2"), "--x", "3000", "--trials", "40"};
  ::setenv("MATMULT_THREADS", "1", 1);
  const auto one = run(mc);
  ::setenv("MATMULT_THREADS", "3", 1);
  const auto three = run(mc);
  ::setenv("MATMULT_THREADS", "zero", 1);
  EXPECT_EQ(run(mc).code, 1);
  ::unsetenv("MATMULT_THREADS");
  ASSERT_EQ(one.code, 0);
  ASSERT_EQ(three.code, 0);
  EXPECT_EQ(nlohmann::json::parse(one.out)["result"], nlohmann::json::parse(three.out)["result"]);
}

TEST(Cli, JsrJson) {
  auto r = run({"jsr", "--law", law("sl2"), "--k", "3", "--delta", "0.01"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_LE(doc["result"]["bounds"]["lower"].get<double>(), 1.3480928);
  EXPECT_GE(doc["result"]["bounds"]["upper"].get<double>(), 1.3480927);
  EXPECT_EQ(doc["result"]["ladder"]["rho"].size(), 3u);
  EXPECT_EQ(run({"jsr", "--law", law("sl2"), "--delta", "-1"}).code, 1);
}

TEST(Cli, SieveStats) {
  auto r = run({"sieve-stats", "--x", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["result"]["hist"], (nlohmann::json{1, 4, 2}));
  EXPECT_EQ(doc["result"]["squarefree_count"], 7);
  EXPECT_EQ(run({"sieve-stats", "--x", "1e9"}).code, 3);
  EXPECT_EQ(run({"sieve-stats", "--x", "-5"}).code, 1);
  EXPECT_EQ(run({"sieve-stats", "--x", "1.5"}).code, 1);
}

std::vector<std::string> csv_rows(const std::string& text) {
  std::vector<std::string> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != '#') rows.push_back(line);
  return rows;
}

TEST(Cli, ReportCsv) {
  const std::vector<std::string> args{"report", "--law", law("sl2"), "--x-grid", "100:10000:10",
                                      "--trials", "20", "--seed", "5", "--prime-bound", "1e5"};
  const auto r = run(args);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, run(args).out);
  EXPECT_NE(r.out.find("# schema_version=1"), std::string::npos);
  EXPECT_NE(r.out.find("# seed=5"), std::string::npos);
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], "x,exact,pred_N1,pred_N2,mc,mc_stderr,ratio_exact_over_pred_N2,status");
  EXPECT_EQ(rows[1].rfind("100,", 0), 0u);
  EXPECT_EQ(rows[3].substr(rows[3].size() - 3), ",ok");
}

TEST(Cli, ReportEdgeCases) {
  auto r = run({"report", "--law", law("sl2"), "--x-grid", "10:1:10"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(csv_rows(r.out).size(), 1u);

  r = run({"report", "--law", law("rademacher"), "--x-grid", "1e6:1e6:10", "--trials", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].rfind("1000000,607926,", 0), 0u);
  const double pred_n1 = std::stod(rows[1].substr(std::string("1000000,607926,").size()));
  EXPECT_NEAR(pred_n1, 6e6 / (std::numbers::pi * std::numbers::pi), 1e-8 * pred_n1);

  r = run({"report", "--law", law("sl2"), "--x-grid", "1e7:1e9:100", "--trials", "0"});
  EXPECT_EQ(r.code, 3);
  rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_NE(rows[2].find("cap_exceeded"), std::string::npos);

  EXPECT_EQ(run({"report", "--law", law("sl2"), "--x-grid", "1:10"}).code, 1);
  EXPECT_EQ(run({"report", "--law", law("sl2"), "--x-grid", "1:10:1"}).code, 1);
}

TEST(Cli, OutFile) {
  const auto path = std::filesystem::temp_directory_path() / "matmult_cli_out.json";
  std::filesystem::remove(path);
  auto r = run({"sieve-stats", "--x", "100", "--out", path.string()});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  const auto doc = nlohmann::json::parse(in);
  EXPECT_EQ(doc["config"]["out"], path.string());
  EXPECT_EQ(doc["result"]["squarefree_count"], 61);
  std::filesystem::remove(path);
  EXPECT_EQ(run({"sieve-stats", "--x", "100", "--out", "/nonexistent/dir/x.json"}).code, 1);
}

}  // namespace
