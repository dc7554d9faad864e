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
#ifndef FEDSCHED_CONFIG_H_
#define FEDSCHED_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fedsched/bound.h"
#include "fedsched/fedsim.h"
#include "fedsched/lr_schedule.h"
#include "fedsched/schedule.h"

namespace fedsched {

enum class Mode { kSimulate, kBound, kSweep };
enum class PartitionKind { kIid, kNonIid };

std::string_view ModeName(Mode mode);
std::optional<Mode> ParseMode(std::string_view name);

// Every knob of one run. The text form is flat "key = value" lines with '#'
// comments; see docs/config.md for the key reference.
struct ExperimentConfig {
  Mode mode = Mode::kSimulate;
  std::uint64_t seed = 1;
  std::string out = "results.csv";
  std::size_t jobs = 1;
  std::size_t replicas = 1;

  // Channel and scheduling.
  std::size_t M = 10;
  std::size_t K = 1;
  std::size_t Kc = 0;  // 0 means "same as K"
  double n_slots = 1000.0;
  double pbar = 1.0;
  double noise_var = 1.0;
  Policy policy = Policy::kBn2C;

  // Training.
  std::size_t tau = 1;
  std::size_t batch = 32;
  std::size_t T = 100;
  LrSchedule lr = LrSchedule::Constant(0.1);
  Optimizer optimizer = Optimizer::kSgd;
  std::string model = "logistic";  // logistic | mlp
  std::size_t hidden = 32;
  bool bias = true;
  std::string dataset = "synthetic";  // synthetic | fixture:PATH | idx:IMG,LBL
  std::string test_dataset = "synthetic";
  std::size_t classes = 2;
  std::size_t features = 24;
  std::size_t train_samples = 4000;
  std::size_t test_samples = 1000;
  double separation = 3.0;
  double noise = 1.0;
  PartitionKind partition = PartitionKind::kIid;
  std::size_t B = 200;
  bool compress = true;

  // Bound.
  double mu = 1.0;
  double L = 5.0;
  double G = 1.0;
  double Gamma = 1.0;
  double init_dist_sq = 500.0;
  std::size_t d = 203530;
  std::optional<double> fixed_rho;  // "rho = sampled" or "rho = fixed:<v>"
  SweepAxis sweep_axis = SweepAxis::kK;
  std::vector<std::size_t> sweep_values;

  std::size_t EffectiveKc() const { return Kc == 0 ? K : Kc; }

  TrainConfig ToTrainConfig() const;
  ChannelParams ToChannelParams() const;
  BoundParams ToBoundParams() const;
  // Bound mode is a one-value sweep over K.
  SweepSpec ToSweepSpec() const;

  // Re-checks every constraint that applies to `mode`. Throws ConfigError
  // carrying the offending key.
  void Validate() const;

  friend bool operator==(const ExperimentConfig&,
                         const ExperimentConfig&) = default;
};

// Applies one key = value pair. Throws ConfigError on unknown keys or bad
// values.
void ApplySetting(ExperimentConfig& cfg, std::string_view key,
                  std::string_view value);

// Parses config text on top of `base`. Does not validate.
ExperimentConfig ParseConfigText(std::string_view text,
                                 ExperimentConfig base = {});
ExperimentConfig LoadConfigFile(const std::string& path,
                                ExperimentConfig base = {});

// Applies overrides in order, then validates.
ExperimentConfig FinalizeConfig(
    ExperimentConfig cfg,
    const std::vector<std::pair<std::string, std::string>>& overrides);

// Text form of every key; ParseConfigText(EmitConfig(c)) == c.
std::string EmitConfig(const ExperimentConfig& cfg);

}  // namespace fedsched

#endif  // FEDSCHED_CONFIG_H_
