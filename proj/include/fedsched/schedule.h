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
#ifndef FEDSCHED_SCHEDULE_H_
#define FEDSCHED_SCHEDULE_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fedsched/channel.h"
#include "fedsched/rng.h"

namespace fedsched {

enum class Policy { kBc, kBn2, kBcBn2, kBn2C, kRandom };

// "bc", "bn2", "bc-bn2", "bn2-c", "random".
std::string_view PolicyName(Policy policy);
std::optional<Policy> ParsePolicy(std::string_view name);

struct SchedulingDecision {
  Policy policy = Policy::kBc;
  std::vector<std::size_t> selected;  // ordered, distinct, each < M
  std::vector<LinkBudget> budgets;    // one per selected device

  double TotalSlots() const;
};

// Indices of the k largest scores, best first; ties go to the lower index.
// Throws std::invalid_argument unless 1 <= k <= scores.size().
std::vector<std::size_t> TopK(std::span<const double> scores, std::size_t k);

std::vector<std::size_t> ScheduleBc(std::span<const double> gain_magnitudes,
                                    std::size_t k);
std::vector<std::size_t> ScheduleBn2(std::span<const double> norms,
                                     std::size_t k);
// Top k by norm among the top kc by channel magnitude. Requires
// k <= kc <= M.
std::vector<std::size_t> ScheduleBcBn2(std::span<const double> gain_magnitudes,
                                       std::span<const double> norms,
                                       std::size_t k, std::size_t kc);
// quantized_norms[m] is the norm of device m's update after D-SGD at the
// sparsity its full-bandwidth budget n * C_m affords.
std::vector<std::size_t> ScheduleBn2C(std::span<const double> quantized_norms,
                                      std::size_t k);
// Uniformly random k-subset, in increasing index order.
std::vector<std::size_t> ScheduleRandom(std::size_t num_devices, std::size_t k,
                                        Rng& rng);

// Slots giving every device the same bit budget n_k C_k, summing to n.
std::vector<double> AllocEqualBits(std::span<const double> capacities,
                                   double n_slots);

// Slots giving bit budgets n_k C_k proportional to weights, summing to n:
// n_k = n (w_k / C_k) / sum_j (w_j / C_j). A zero weight gets zero slots.
std::vector<double> AllocWeightedBits(std::span<const double> capacities,
                                      std::span<const double> weights,
                                      double n_slots);

struct ScheduleOptions {
  Policy policy = Policy::kBc;
  std::size_t k = 1;
  std::size_t kc = 1;  // BC-BN2 candidate pool size
};

// Full-bandwidth D-SGD sparsity q*_m = MaxQ(d, n C_m, dsgd) for every device,
// with C_m evaluated at the scheduled-device power M pbar / K.
std::vector<std::size_t> FullBandwidthSparsity(const ChannelRealization& ch,
                                               std::size_t dim, std::size_t k);

// Norms of DsgdQuantize(updates[m], q_star[m]).
std::vector<double> QuantizedNorms(
    std::span<const std::vector<double>> updates,
    std::span<const std::size_t> q_star);

// Composes a policy with its allocation rule. BC and random use equal bits;
// BN2 and BC-BN2 weight by the update norms in scores; BN2-C weights by the
// quantized norms in scores. When every selected weight is zero the decision
// falls back to equal bits (nobody has anything to send). rng is only used
// by the random policy.
SchedulingDecision Decide(const ScheduleOptions& options,
                          const ChannelRealization& ch,
                          std::span<const double> scores, Rng* rng = nullptr);

}  // namespace fedsched

#endif  // FEDSCHED_SCHEDULE_H_
