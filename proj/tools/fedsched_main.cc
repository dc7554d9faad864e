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
// fedsched: command-line driver for training simulations, single bound
// trajectories and K / tau bound sweeps.

#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "fedsched/config.h"
#include "fedsched/errors.h"
#include "fedsched/experiment.h"

namespace {

enum ExitCode { kOk = 0, kConfigError = 2, kNumericalError = 3, kIoError = 4 };

struct Flags {
  std::string config;
  std::optional<std::string> seed, out, jobs, policy, K, Kc, replicas;
  std::vector<std::string> sets;
  bool print_config = false;
};

void AddFlags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "Config file (key = value lines)");
  cmd->add_option("--seed", f.seed, "Master seed (u64)");
  cmd->add_option("--out", f.out, "Output CSV path");
  cmd->add_option("--jobs", f.jobs, "Worker threads");
  cmd->add_option("--policy", f.policy, "bc|bn2|bc-bn2|bn2-c|random");
  cmd->add_option("--K", f.K, "Scheduled devices per round");
  cmd->add_option("--Kc", f.Kc, "BC-BN2 candidate pool size");
  cmd->add_option("--replicas", f.replicas, "Channel replicas (bound/sweep)");
  cmd->add_option("--set", f.sets, "Override any config key: key=value");
  cmd->add_flag("--print-config", f.print_config,
                "Print the resolved config and exit");
}

std::vector<std::pair<std::string, std::string>> Overrides(const Flags& f) {
  std::vector<std::pair<std::string, std::string>> out;
  auto add = [&](const char* key, const std::optional<std::string>& v) {
    if (v) out.emplace_back(key, *v);
  };
  add("seed", f.seed);
  add("out", f.out);
  add("jobs", f.jobs);
  add("policy", f.policy);
  add("K", f.K);
  add("Kc", f.Kc);
  add("replicas", f.replicas);
  for (const std::string& s : f.sets) {
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos) {
      throw fedsched::ConfigError(s, "--set expects key=value");
    }
    out.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Federated learning over a fading uplink: scheduling "
               "simulator and convergence-bound calculator"};
  app.require_subcommand(1);
  Flags flags;
  std::vector<std::pair<CLI::App*, fedsched::Mode>> modes = {
      {app.add_subcommand("simulate", "Run federated training"),
       fedsched::Mode::kSimulate},
      {app.add_subcommand("bound", "Single convergence-bound trajectory"),
       fedsched::Mode::kBound},
      {app.add_subcommand("sweep", "Bound sweep over K or tau"),
       fedsched::Mode::kSweep},
  };
  for (auto& [cmd, mode] : modes) AddFlags(cmd, flags);
  CLI11_PARSE(app, argc, argv);

  try {
    fedsched::ExperimentConfig cfg;
    if (!flags.config.empty()) cfg = fedsched::LoadConfigFile(flags.config);
    for (auto& [cmd, mode] : modes) {
      if (cmd->parsed()) cfg.mode = mode;
    }
    cfg = fedsched::FinalizeConfig(std::move(cfg), Overrides(flags));
    if (flags.print_config) {
      std::cout << fedsched::EmitConfig(cfg);
      return kOk;
    }
    std::cout << fedsched::RunExperiment(cfg) << '\n';
    return kOk;
  } catch (const fedsched::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const fedsched::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::domain_error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const fedsched::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }
}
