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
#ifndef FEDSCHED_FEDSIM_H_
#define FEDSCHED_FEDSIM_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fedsched/compress.h"
#include "fedsched/data.h"
#include "fedsched/loss_model.h"
#include "fedsched/lr_schedule.h"
#include "fedsched/rng.h"
#include "fedsched/schedule.h"

namespace fedsched {

// Local optimizer. Plain SGD is what the convergence analysis assumes; the
// adaptive ones restart their moment estimates every round.
enum class Optimizer { kSgd, kAdam, kAdagrad };

std::string_view OptimizerName(Optimizer opt);
std::optional<Optimizer> ParseOptimizer(std::string_view name);

struct TrainConfig {
  std::size_t tau = 1;     // local steps per round
  std::size_t batch = 32;  // mini-batch size, 0 = whole local dataset
  LrSchedule lr = LrSchedule::Constant(0.1);
  Optimizer optimizer = Optimizer::kSgd;
  std::size_t num_devices = 10;  // M
  std::size_t k = 1;
  std::size_t kc = 1;
  Policy policy = Policy::kBn2C;
  std::size_t rounds = 100;  // T
  std::uint64_t seed = 1;
  std::size_t jobs = 1;  // threads for per-device local SGD

  void Validate() const;
};

struct ChannelParams {
  double n_slots = 1000.0;
  double pbar = 1.0;
  double noise_var = 1.0;
};

struct ModelState {
  std::vector<double> theta;
  std::size_t round = 0;
};

struct LocalUpdate {
  std::size_t device = 0;
  std::vector<double> delta;  // theta_m(t+1) - theta(t)
  double norm = 0.0;
};

// tau steps of theta <- theta - eta(round) * grad on mini-batches drawn
// uniformly with replacement (or the whole local set when batch == 0).
// Throws NumericalError on a non-finite gradient or iterate.
LocalUpdate LocalSgd(std::span<const double> theta,
                     const DevicePartition& part, const TrainConfig& cfg,
                     std::size_t round, const LossModel& model, Rng& rng);

// theta + (1/K) sum of updates; round advances by one.
ModelState Aggregate(const ModelState& state,
                     std::span<const SparseUpdate> updates, std::size_t k);

struct RoundMetrics {
  std::size_t round = 0;  // index t of the executed round
  Policy policy = Policy::kBc;
  std::size_t k = 0;
  std::vector<std::size_t> selected;
  std::vector<std::size_t> q;       // sparsity sent by each selected device
  std::vector<double> bits;         // bit budget n_m C_m of each selected device
  std::vector<double> slots;        // n_m of each selected device
  std::vector<double> update_norms;  // ||delta_m|| for all M devices

  double MeanQ() const;
  double MeanBits() const;
};

struct RoundOptions {
  // When false scheduled devices send their exact dense update (test hook).
  bool compress = true;
};

struct RoundResult {
  ModelState state;
  RoundMetrics metrics;
};

// One global iteration: every device runs LocalSgd, the PS draws the round's
// channel, schedules under cfg.policy, each scheduled device D-SGD-quantizes
// to the largest q its bit budget affords, and the PS aggregates.
// Randomness comes from streams derived from cfg.seed and the round index.
RoundResult RunRound(const ModelState& state,
                     std::span<const DevicePartition> partitions,
                     const TrainConfig& cfg, const ChannelParams& channel,
                     const LossModel& model, const RoundOptions& options = {});

struct EvalResult {
  double accuracy = 0.0;
  double mean_loss = 0.0;
};

EvalResult Evaluate(std::span<const double> theta, const Dataset& test,
                    const LossModel& model);

struct SimulationRow {
  RoundMetrics metrics;
  EvalResult eval;
};

// Initial parameters from the model's init stream, then cfg.rounds rounds,
// evaluating on `test` after each.
std::vector<SimulationRow> Simulate(std::span<const DevicePartition> partitions,
                                    const Dataset& test, const TrainConfig& cfg,
                                    const ChannelParams& channel,
                                    const LossModel& model,
                                    const RoundOptions& options = {});

}  // namespace fedsched

#endif  // FEDSCHED_FEDSIM_H_
