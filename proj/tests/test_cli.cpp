/*
 * Copyright 2026 The specdiff Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace specdiff::cli {
namespace {

namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out, err;
};

Run cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("specdiff_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
    unsetenv("SPECDIFF_SEED");
  }
  void TearDown() override {
    fs::remove_all(dir_);
    unsetenv("SPECDIFF_SEED");
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, CheckReferencesWritesFullReport) {
  auto r = cli({"check", "--suite", "finite_set", "--impl-a", "listset", "--impl-b", "bstset", "--trials", "10000",
                "--seed", "7", "--report", path("out.jsonl")});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  auto lines = lines_of(slurp(path("out.jsonl")));
  ASSERT_EQ(lines.size(), 10001u);
  EXPECT_NE(lines.back().find("\"type\":\"summary\""), std::string::npos);
  EXPECT_NE(r.out.find("listset-vs-bstset: 10000 trial(s), 0 failure(s)"), std::string::npos);
}

TEST_F(CliTest, ExitCodeMatrix) {
  for (const auto& s : list_suites()) {
    const std::string ref = s.reference();
    for (const auto& impl : s.implementations) {
      auto r = cli({"check", "--suite", s.name, "--impl-a", ref, "--impl-b", impl.name, "--trials", "2000"});
      EXPECT_EQ(r.code, kExitOk) << s.name << " " << impl.name << "\n" << r.out;
    }
    for (const auto& bug : s.bug_variants) {
      auto r = cli({"check", "--suite", s.name, "--impl-a", ref, "--impl-b", bug.name, "--trials", "10000",
                    "--stop-on-failure"});
      EXPECT_EQ(r.code, kExitFailure) << s.name << " " << bug.name << "\n" << r.out;
      EXPECT_NE(r.out.find("FAIL trial"), std::string::npos);
      EXPECT_NE(r.out.find("shrunk: "), std::string::npos);
    }
  }
}

TEST_F(CliTest, UsageErrors) {
  const std::vector<std::vector<std::string>> bad = {
      {},
      {"frobnicate"},
      {"check", "--suite", "finite_set", "--impl-a", "listset"},
      {"check", "--suite", "nope", "--impl-a", "a", "--impl-b", "b"},
      {"check", "--suite", "finite_set", "--impl-a", "listset", "--impl-b", "heap"},
      {"check", "--suite", "finite_set", "--sig", path("x.sig"), "--impl-a", "listset", "--impl-b", "listset"},
      {"check", "--sig", path("missing.sig"), "--impl-a", "listset", "--impl-b", "listset"},
      {"check", "--suite", "finite_set", "--impl-a", "listset", "--impl-b", "listset", "--trials", "many"},
      {"check", "--suite", "finite_set", "--impl-a", "listset", "--impl-b", "listset", "--seq-prob", "2"},
      {"sample", "--suite", "finite_set", "--type", "char"},
      {"sample", "--suite", "finite_set", "--type", "int ->"},
      {"bench", "--suite", "nope"},
      {"summarize", path("missing.jsonl")},
  };
  for (const auto& args : bad) {
    auto r = cli(args);
    std::string joined;
    for (const auto& a : args) joined += a + " ";
    EXPECT_EQ(r.code, kExitUsage) << joined;
    EXPECT_FALSE(r.err.empty()) << joined;
  }
}

TEST_F(CliTest, ValidateReportsParseAndValidationErrors) {
  std::ofstream(path("bad.sig")) << "signature s\nabstract t\nop e : t\nop f : t -> widget\nend\n";
  auto r = cli({"validate", "--sig", path("bad.sig")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("parse error"), std::string::npos);
  EXPECT_NE(r.err.find("4:"), std::string::npos) << r.err;

  std::ofstream(path("opaque.sig")) << "signature s\nabstract t\nop e : t\nop id : t -> t\nend\n";
  r = cli({"validate", "--sig", path("opaque.sig")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("no concrete return type"), std::string::npos);

  r = cli({"validate", "--sig", std::string(SPECDIFF_SUITES_DIR) + "/bst_map.sig"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("[int option] [int list] [int]"), std::string::npos) << r.out;
}

TEST_F(CliTest, SignatureFileSelectsBundledImplementations) {
  auto r = cli({"check", "--sig", std::string(SPECDIFF_SUITES_DIR) + "/counter.sig", "--impl-a", "intcounter",
                "--impl-b", "listcounter", "--trials", "500"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
}

TEST_F(CliTest, SampleTypeChecks) {
  auto r = cli({"sample", "--suite", "finite_set", "--type", "bool", "--count", "3", "--size", "5", "--seed", "1"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  auto lines = lines_of(r.out);
  ASSERT_EQ(lines.size(), 3u);
  Signature sig = parse_signature(kFiniteSetSig);
  for (const auto& l : lines) EXPECT_EQ(type_of(from_text(l, sig), sig), Ty::boolean()) << l;

  r = cli({"sample", "--suite", "bst_map", "--type", "int option", "--count", "20", "--size", "12"});
  ASSERT_EQ(r.code, kExitOk);
  Signature map = parse_signature(kBstMapSig);
  for (const auto& l : lines_of(r.out)) EXPECT_EQ(type_of(from_text(l, map), map), Ty::option(Ty::integer()));
}

TEST_F(CliTest, IdenticalArgvIdenticalOutput) {
  const std::vector<std::string> args = {"check",    "--suite", "bst_map", "--impl-a", "correct", "--impl-b",
                                         "b3",       "--trials", "3000",   "--seed",   "11",      "--report",
                                         path("a.jsonl")};
  auto first = cli(args);
  std::string report_a = slurp(path("a.jsonl"));
  auto second = cli(args);
  EXPECT_EQ(first.code, second.code);
  EXPECT_EQ(first.out, second.out);
  EXPECT_EQ(report_a, slurp(path("a.jsonl")));

  auto par = args;
  par.back() = path("b.jsonl");
  par.push_back("--jobs");
  par.push_back("3");
  auto third = cli(par);
  EXPECT_EQ(first.out, third.out);
  EXPECT_EQ(report_a, slurp(path("b.jsonl")));
}

TEST_F(CliTest, SeedFromEnvironmentFlagWins) {
  const std::vector<std::string> base = {"sample", "--suite", "finite_set", "--type", "int", "--count", "5"};
  auto with_flag = [&](const std::string& seed) {
    auto a = base;
    a.push_back("--seed");
    a.push_back(seed);
    return cli(a).out;
  };
  setenv("SPECDIFF_SEED", "42", 1);
  EXPECT_EQ(cli(base).out, with_flag("42"));
  EXPECT_EQ(with_flag("3"), [&] {
    unsetenv("SPECDIFF_SEED");
    return with_flag("3");
  }());
  unsetenv("SPECDIFF_SEED");
  EXPECT_EQ(cli(base).out, with_flag("0"));
  EXPECT_NE(with_flag("42"), with_flag("0"));
  setenv("SPECDIFF_SEED", "forty", 1);
  EXPECT_EQ(cli(base).code, kExitUsage);
}

TEST_F(CliTest, ReportToStandardOutput) {
  auto r = cli({"check", "--suite", "counter", "--impl-a", "intcounter", "--impl-b", "listcounter", "--trials", "50",
                "--report", "-"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(lines_of(r.out).size(), 51u);
  EXPECT_NE(r.err.find("intcounter-vs-listcounter"), std::string::npos);
}

TEST_F(CliTest, SummarizeReport) {
  cli({"check", "--suite", "bst_map", "--impl-a", "correct", "--impl-b", "b1", "--trials", "300", "--report",
       path("r.jsonl")});
  auto r = cli({"summarize", path("r.jsonl")});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("trials: 300"), std::string::npos);
  EXPECT_NE(r.out.find("correct-vs-b1"), std::string::npos);
  EXPECT_NE(r.out.find("depth histogram"), std::string::npos);

  std::ofstream(path("bad.jsonl")) << "{}\n";
  r = cli({"summarize", path("bad.jsonl")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("line 1"), std::string::npos);
}

TEST_F(CliTest, BenchTableAndOutput) {
  auto r = cli({"bench", "--suite", "finite_set", "--runs", "4", "--seed", "0", "--output", path("bench.jsonl")});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  for (const char* col : {"BUG_DEDUP", "BUG_REMOVE_LEFT", "BUG_MEM_STRICT", "Min", "Mean", "Max", "Detected"})
    EXPECT_NE(r.out.find(col), std::string::npos) << col;
  EXPECT_EQ(lines_of(slurp(path("bench.jsonl"))).size(), 12u);
  auto s = cli({"summarize", path("bench.jsonl")});
  EXPECT_EQ(s.code, kExitOk);
  EXPECT_NE(s.out.find("listset-vs-bug_dedup"), std::string::npos);
}

TEST_F(CliTest, SuitesListing) {
  auto r = cli({"suites"});
  EXPECT_EQ(r.code, kExitOk);
  for (const char* n : {"finite_set", "bst_map", "counter", "listset", "b8", "bug_saturate"})
    EXPECT_NE(r.out.find(n), std::string::npos) << n;
}

TEST_F(CliTest, HelpIsNotAnError) {
  auto r = cli({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("check"), std::string::npos);
}

}  // namespace
}  // namespace specdiff::cli
