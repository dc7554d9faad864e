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
#ifndef FEDSCHED_EXPERIMENT_H_
#define FEDSCHED_EXPERIMENT_H_

#include <memory>
#include <ostream>
#include <span>
#include <string>

#include "fedsched/bound.h"
#include "fedsched/config.h"
#include "fedsched/data.h"
#include "fedsched/fedsim.h"
#include "fedsched/loss_model.h"

namespace fedsched {

inline constexpr std::string_view kSimulateCsvHeader =
    "round,policy,K,selected,test_accuracy,mean_loss,mean_q,mean_bits";
inline constexpr std::string_view kBoundCsvHeader =
    "series,round,rho_mean,dist_bound,loss_gap_bound";

// One row per executed round; `round` is 1-based (the model after t rounds).
void WriteSimulateCsv(std::span<const SimulationRow> rows, std::ostream& out);

// T+1 rows per series. rho_mean on row t is the mean rho(t) that drives the
// step t -> t+1, so it is empty on the last row.
void WriteBoundCsv(std::span<const SweepSeries> series, std::ostream& out);

struct TrainingData {
  Dataset train;
  Dataset test;
  std::vector<DevicePartition> partitions;
};

// Builds (or loads) the train/test sets and partitions them across devices.
TrainingData PrepareData(const ExperimentConfig& cfg);
std::unique_ptr<LossModel> MakeModel(const ExperimentConfig& cfg,
                                     const Dataset& train);

// Runs the configured mode, writes cfg.out and returns a one-line summary.
// Throws ConfigError, NumericalError or IoError.
std::string RunExperiment(const ExperimentConfig& cfg);

}  // namespace fedsched

#endif  // FEDSCHED_EXPERIMENT_H_
