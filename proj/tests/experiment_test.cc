// Copyright 2026 The fedsched Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// =============================================================================
#include "fedsched/experiment.h"

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"

namespace fedsched {
namespace {

namespace fs = std::filesystem;

fs::path TempPath(const std::string& name) {
  return fs::temp_directory_path() /
         ("fedsched_exp_test_" + std::to_string(::getpid()) + "_" + name);
}

std::vector<std::string> ReadLines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

std::string ReadAll(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> Split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string f; std::getline(ss, f, sep);) out.push_back(f);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

ExperimentConfig SmallSimulate(const fs::path& out) {
  ExperimentConfig cfg;
  cfg.mode = Mode::kSimulate;
  cfg.out = out.string();
  cfg.M = 4;
  cfg.K = 2;
  cfg.T = 5;
  cfg.n_slots = 200;
  cfg.train_samples = 400;
  cfg.test_samples = 100;
  cfg.B = 50;
  cfg.features = 6;
  return cfg;
}

TEST(ExperimentTest, BoundWithZeroRhoIsFlat) {
  const fs::path out = TempPath("flat.csv");
  ExperimentConfig cfg;
  cfg.mode = Mode::kBound;
  cfg.M = 100;
  cfg.K = 5;
  cfg.tau = 3;
  cfg.T = 500;
  cfg.lr = LrSchedule::InverseMuTau(1000, 1000);
  cfg.fixed_rho = 0.0;
  cfg.out = out.string();
  RunExperiment(cfg);
  const auto lines = ReadLines(out);
  fs::remove(out);
  ASSERT_EQ(lines.size(), 502u);
  EXPECT_EQ(lines[0], kBoundCsvHeader);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = Split(lines[i], ',');
    ASSERT_EQ(f.size(), 5u);
    EXPECT_EQ(f[0], "K=5");
    EXPECT_EQ(f[1], std::to_string(i - 1));
    EXPECT_EQ(f[4], "1250");
    EXPECT_EQ(f[2].empty(), i == 501);
  }
}

TEST(ExperimentTest, SweepShapesAndReplicas) {
  const fs::path out = TempPath("sweep.csv");
  ExperimentConfig cfg;
  cfg.mode = Mode::kSweep;
  cfg.M = 20;
  cfg.T = 30;
  cfg.tau = 3;
  cfg.lr = LrSchedule::InverseMuTau(1000, 1000);
  cfg.d = 5000;
  cfg.n_slots = 5000;
  cfg.sweep_values = {1, 3};
  cfg.replicas = 2;
  cfg.out = out.string();
  RunExperiment(cfg);
  const auto lines = ReadLines(out);
  fs::remove(out);
  ASSERT_EQ(lines.size(), 1u + 2 * 31);
  EXPECT_EQ(lines[0], kBoundCsvHeader);
  EXPECT_EQ(Split(lines[1], ',')[0], "K=1");
  EXPECT_EQ(Split(lines[32], ',')[0], "K=3");
}

TEST(ExperimentTest, SimulateIsByteIdentical) {
  const fs::path a = TempPath("a.csv"), b = TempPath("b.csv");
  ExperimentConfig cfg = SmallSimulate(a);
  RunExperiment(cfg);
  cfg.out = b.string();
  cfg.jobs = 3;
  RunExperiment(cfg);
  const std::string sa = ReadAll(a), sb = ReadAll(b);
  fs::remove(a);
  fs::remove(b);
  EXPECT_EQ(sa, sb);
  const auto lines = Split(sa, '\n');
  ASSERT_GE(lines.size(), 6u);
  EXPECT_EQ(lines[0], kSimulateCsvHeader);
  const auto f = Split(lines[1], ',');
  ASSERT_EQ(f.size(), 8u);
  EXPECT_EQ(f[0], "1");
  EXPECT_EQ(f[1], "bn2-c");
  EXPECT_EQ(f[2], "2");
  EXPECT_EQ(Split(f[3], ';').size(), 2u);
}

TEST(ExperimentTest, FixtureSource) {
  const fs::path fixture = TempPath("fx.bin"), out = TempPath("fx.csv");
  BlobSpec spec;
  spec.num_samples = 300;
  spec.num_features = 3;
  Rng r1(1), r2(2);
  SaveFixture(MakeGaussianBlobs(spec, r1, r2), fixture);
  ExperimentConfig cfg = SmallSimulate(out);
  cfg.dataset = "fixture:" + fixture.string();
  cfg.test_dataset = cfg.dataset;
  const TrainingData data = PrepareData(cfg);
  EXPECT_EQ(data.train.size(), 300u);
  EXPECT_EQ(data.partitions.size(), 4u);
  EXPECT_EQ(MakeModel(cfg, data.train)->dim(), 2u * 4);
  fs::remove(fixture);
}

#ifdef FEDSCHED_CLI_PATH
int RunCli(const std::string& args) {
  const std::string cmd = std::string(FEDSCHED_CLI_PATH) + " " + args +
                          " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(CliTest, ExitCodes) {
  const fs::path out = TempPath("cli.csv");
  EXPECT_EQ(RunCli("bound --set rho=fixed:0 --set T=20 --set M=100 --set tau=3 "
                   "--set lr=inv_mu_tau:1000,1000 --out " + out.string()),
            0);
  EXPECT_EQ(ReadLines(out).size(), 22u);
  fs::remove(out);
  EXPECT_EQ(RunCli("bound --K 0 --out " + out.string()), 2);
  EXPECT_EQ(RunCli("sweep --set no_such_key=1"), 2);
  EXPECT_EQ(RunCli("bound --config /nonexistent/fedsched.cfg"), 4);
  EXPECT_EQ(RunCli("bound --set rho=fixed:0 --set T=5 --set M=100 --set tau=3 "
                   "--set lr=inv_mu_tau:1000,1000 --out /nonexistent/x.csv"),
            4);
  EXPECT_EQ(RunCli("simulate --set T=2 --set M=3 --set train_samples=90 "
                   "--set dataset=fixture:/nonexistent.bin --out " +
                   out.string()),
            4);
  EXPECT_FALSE(fs::exists(out));
}
#endif

}  // namespace
}  // namespace fedsched
