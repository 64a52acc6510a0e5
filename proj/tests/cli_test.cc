// Copyright 2026 The discamc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "gtest/gtest.h"
#include "nlohmann/json.hpp"
#include "test_util.h"

namespace discamc::cli {
namespace {

using discamc::testing::ReadFile;
using discamc::testing::TempDir;
using discamc::testing::WriteFile;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome Call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = Run(args, out, err);
  return {code, out.str(), err.str()};
}

const std::vector<std::string> kSubcommands = {
    "generate",      "features", "calibrate", "quantize", "shortlist-train",
    "shortlist-eval", "prompt",  "classify",  "eval",     "ablate-k",
    "ablate-bins",   "ablate-strategy"};

TEST(CliTest, HelpListsEverySubcommand) {
  const Outcome o = Call({"--help"});
  EXPECT_EQ(o.code, kExitOk);
  for (const auto& s : kSubcommands) EXPECT_NE(o.out.find(s), std::string::npos) << s;
}

TEST(CliTest, HelpAllCoversEveryFlag) {
  const Outcome o = Call({"--help-all"});
  EXPECT_EQ(o.code, kExitOk);
  const auto names = AllOptionNames();
  EXPECT_GT(names.size(), 30u);
  for (const auto& n : names) EXPECT_NE(o.out.find(n), std::string::npos) << n;
  for (const auto& n : {"--mock", "--endpoint", "--max-in-flight", "--k-values", "--bins-values",
                        "--strategies", "--query-id", "--format", "--config", "--seed"}) {
    EXPECT_NE(std::find(names.begin(), names.end(), n), names.end()) << n;
  }
}

TEST(CliTest, UnknownFlagIsUsageError) {
  const Outcome o = Call({"eval", "--no-such-flag"});
  EXPECT_EQ(o.code, kExitUsage);
  EXPECT_NE(o.err.find("--no-such-flag"), std::string::npos) << o.err;
}

TEST(CliTest, UnknownSubcommandPrintsUsage) {
  const Outcome o = Call({"frobnicate"});
  EXPECT_EQ(o.code, kExitUsage);
  EXPECT_NE(o.err.find("frobnicate"), std::string::npos);
  EXPECT_NE(o.err.find("eval"), std::string::npos);
  EXPECT_NE(o.err.find("Usage"), std::string::npos);
}

TEST(CliTest, MissingSubcommandIsUsageError) { EXPECT_EQ(Call({}).code, kExitUsage); }

TEST(CliTest, MissingManifestIsDataError) {
  TempDir dir;
  const Outcome o = Call({"eval", "--mock", "first_option", "--out", dir.path().string(),
                          "--dataset", (dir.path() / "absent.json").string()});
  EXPECT_EQ(o.code, kExitData) << o.err;
  EXPECT_NE(o.err.find("absent.json"), std::string::npos) << o.err;
}

TEST(CliTest, BadArgumentsAreUsageErrors) {
  TempDir dir;
  EXPECT_EQ(Call({"eval", "--mock", "first_option", "--bins", "1"}).code, kExitUsage);
  EXPECT_EQ(Call({"eval", "--mock", "first_option", "--k", "11"}).code, kExitUsage);
  EXPECT_EQ(Call({"eval", "--mock", "bogus"}).code, kExitUsage);
  EXPECT_EQ(Call({"eval", "--mock", "first_option", "--strategy", "best"}).code, kExitUsage);
  EXPECT_EQ(Call({"eval", "--mock", "first_option", "--format", "xml", "--out",
                  dir.path().string()})
                .code,
            kExitUsage);
}

TEST(CliTest, UnreachableEndpointIsTransportError) {
  TempDir dir;
  const Outcome o =
      Call({"classify", "--query-id", "q0000", "--endpoint", "http://127.0.0.1:1",
            "--max-retries", "0", "--timeout-s", "2", "--out", dir.path().string(),
            "--per-class", "2", "--pool-per-class", "2", "--bins", "2"});
  EXPECT_EQ(o.code, kExitTransport) << o.err;
}

TEST(CliTest, TinyGenerateThenEval) {
  TempDir dir;
  const auto data_dir = dir.path() / "data";
  const auto pool_dir = dir.path() / "pool";
  const std::vector<std::string> gen = {"generate", "--classes", "OOK,GMSK", "--per-class", "2",
                                        "--snr-steps", "2", "--n-symbols", "256"};
  auto args = gen;
  args.insert(args.end(), {"--out", data_dir.string(), "--seed", "1"});
  Outcome o = Call(args);
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_NE(o.out.find("manifest.json"), std::string::npos);
  EXPECT_NE(o.err.find("seed: 1"), std::string::npos);
  args = gen;
  args[4] = "10";
  args.insert(args.end(), {"--out", pool_dir.string(), "--seed", "2"});
  ASSERT_EQ(Call(args).code, kExitOk);

  const auto out_dir = dir.path() / "out";
  o = Call({"eval", "--mock", "first_option", "--dataset", (data_dir / "manifest.json").string(),
            "--pool", (pool_dir / "manifest.json").string(), "--k", "2", "--strategy", "random",
            "--bins", "2",
            "--out", out_dir.string(), "--format", "json,csv"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_NE(o.out.find("queries: 4"), std::string::npos) << o.out;
  const auto report = nlohmann::json::parse(ReadFile(out_dir / "report.json"));
  EXPECT_EQ(report.at("total"), 4);
  EXPECT_TRUE(std::filesystem::exists(out_dir / "report_queries.csv"));
}

TEST(CliTest, PromptForOneQuery) {
  TempDir dir;
  const Outcome o = Call({"prompt", "--mock", "first_option", "--query-id", "q0003",
                          "--per-class", "2", "--pool-per-class", "2", "--bins", "2", "--out",
                          dir.path().string()});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_NE(o.out.find("**Classification Options:**"), std::string::npos);
  EXPECT_EQ(Call({"prompt", "--mock", "first_option", "--query-id", "q9999", "--per-class", "2",
                  "--pool-per-class", "2", "--bins", "2"})
                .code,
            kExitUsage);
}

TEST(CliTest, ConfigFileSuppliesOptions) {
  TempDir dir;
  const auto cfg = dir.path() / "run.toml";
  WriteFile(cfg, "seed = 7\n[eval]\nk = 3\nmock = \"first_option\"\nper-class = 2\n"
                 "pool-per-class = 2\nbins = 2\n");
  const Outcome o = Call({"--config", cfg.string(), "--out", dir.path().string(), "eval"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_NE(o.err.find("seed: 7"), std::string::npos);
  const auto report = nlohmann::json::parse(ReadFile(dir.path() / "report.json"));
  EXPECT_EQ(report.at("seed"), 7);
  EXPECT_EQ(report.at("records").at(0).at("options").size(), 3u);
  EXPECT_EQ(report.at("total"), 20);
}

TEST(CliTest, BinaryExitCodes) {
  const std::string bin = DISCAMC_CLI_PATH;
  auto status = [&](const std::string& tail) {
    const int raw = std::system((bin + " " + tail + " >/dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  EXPECT_EQ(status("--help"), kExitOk);
  EXPECT_EQ(status("--bogus"), kExitUsage);
  EXPECT_EQ(status("eval --mock first_option --dataset /nonexistent/manifest.json"), kExitData);
}

}  // namespace
}  // namespace discamc::cli
