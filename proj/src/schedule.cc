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
#include "fedsched/schedule.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "fedsched/compress.h"

namespace fedsched {
namespace {

void CheckK(std::size_t k, std::size_t m, const char* what) {
  if (k == 0 || k > m) {
    throw std::invalid_argument(std::string(what) + ": need 1 <= K <= M, got K=" +
                                std::to_string(k) + " M=" + std::to_string(m));
  }
}

void CheckCapacities(std::span<const double> capacities, const char* what) {
  if (capacities.empty()) {
    throw std::invalid_argument(std::string(what) + ": no devices");
  }
  for (double c : capacities) {
    if (!(c > 0.0)) {
      throw std::invalid_argument(
          std::string(what) +
          ": zero-capacity device cannot be allocated slots");
    }
  }
}

}  // namespace

std::string_view PolicyName(Policy policy) {
  switch (policy) {
    case Policy::kBc:
      return "bc";
    case Policy::kBn2:
      return "bn2";
    case Policy::kBcBn2:
      return "bc-bn2";
    case Policy::kBn2C:
      return "bn2-c";
    case Policy::kRandom:
      return "random";
  }
  return "unknown";
}

std::optional<Policy> ParsePolicy(std::string_view name) {
  for (Policy p : {Policy::kBc, Policy::kBn2, Policy::kBcBn2, Policy::kBn2C,
                   Policy::kRandom}) {
    if (PolicyName(p) == name) return p;
  }
  return std::nullopt;
}

double SchedulingDecision::TotalSlots() const {
  double total = 0.0;
  for (const LinkBudget& b : budgets) total += b.slots;
  return total;
}

std::vector<std::size_t> TopK(std::span<const double> scores, std::size_t k) {
  CheckK(k, scores.size(), "top_k");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::partial_sort(order.begin(), order.begin() + k, order.end(),
                    [&](std::size_t a, std::size_t b) {
                      return scores[a] > scores[b] ||
                             (scores[a] == scores[b] && a < b);
                    });
  order.resize(k);
  return order;
}

std::vector<std::size_t> ScheduleBc(std::span<const double> gain_magnitudes,
                                    std::size_t k) {
  return TopK(gain_magnitudes, k);
}

std::vector<std::size_t> ScheduleBn2(std::span<const double> norms,
                                     std::size_t k) {
  return TopK(norms, k);
}

std::vector<std::size_t> ScheduleBcBn2(std::span<const double> gain_magnitudes,
                                       std::span<const double> norms,
                                       std::size_t k, std::size_t kc) {
  const std::size_t m = gain_magnitudes.size();
  if (norms.size() != m) {
    throw std::invalid_argument("schedule_bc_bn2: gains/norms size mismatch");
  }
  if (kc < k || kc > m) {
    throw std::invalid_argument("schedule_bc_bn2: need K <= Kc <= M, got K=" +
                                std::to_string(k) + " Kc=" + std::to_string(kc) +
                                " M=" + std::to_string(m));
  }
  CheckK(k, m, "schedule_bc_bn2");
  std::vector<std::size_t> candidates = TopK(gain_magnitudes, kc);
  // Ties among candidates resolve by device index, not by gain rank.
  std::sort(candidates.begin(), candidates.end());
  std::vector<double> candidate_norms;
  candidate_norms.reserve(kc);
  for (std::size_t c : candidates) candidate_norms.push_back(norms[c]);
  std::vector<std::size_t> picked = TopK(candidate_norms, k);
  for (std::size_t& p : picked) p = candidates[p];
  return picked;
}

std::vector<std::size_t> ScheduleBn2C(std::span<const double> quantized_norms,
                                      std::size_t k) {
  return TopK(quantized_norms, k);
}

std::vector<std::size_t> ScheduleRandom(std::size_t num_devices, std::size_t k,
                                        Rng& rng) {
  CheckK(k, num_devices, "schedule_random");
  std::vector<std::size_t> out;
  out.reserve(k);
  std::size_t needed = k;
  for (std::size_t i = 0; i < num_devices && needed > 0; ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, num_devices - i - 1);
    if (pick(rng) < needed) {
      out.push_back(i);
      --needed;
    }
  }
  return out;
}

std::vector<double> AllocEqualBits(std::span<const double> capacities,
                                   double n_slots) {
  CheckCapacities(capacities, "alloc_equal_bits");
  double inv_sum = 0.0;
  for (double c : capacities) inv_sum += 1.0 / c;
  std::vector<double> slots;
  slots.reserve(capacities.size());
  for (double c : capacities) slots.push_back(n_slots * (1.0 / c) / inv_sum);
  return slots;
}

std::vector<double> AllocWeightedBits(std::span<const double> capacities,
                                      std::span<const double> weights,
                                      double n_slots) {
  CheckCapacities(capacities, "alloc_weighted_bits");
  if (weights.size() != capacities.size()) {
    throw std::invalid_argument(
        "alloc_weighted_bits: capacities/weights size mismatch");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] < 0.0) {
      throw std::invalid_argument("alloc_weighted_bits: negative weight");
    }
    sum += weights[i] / capacities[i];
  }
  if (!(sum > 0.0)) {
    throw std::invalid_argument("alloc_weighted_bits: all weights are zero");
  }
  std::vector<double> slots;
  slots.reserve(capacities.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    slots.push_back(n_slots * (weights[i] / capacities[i]) / sum);
  }
  return slots;
}

std::vector<std::size_t> FullBandwidthSparsity(const ChannelRealization& ch,
                                               std::size_t dim, std::size_t k) {
  const double power = TransmitPower(ch.num_devices(), k, ch.pbar());
  std::vector<std::size_t> q_star;
  q_star.reserve(ch.num_devices());
  for (const Complex& h : ch.gains()) {
    const double budget = ch.n_slots() * Capacity(h, power, ch.noise_var());
    q_star.push_back(MaxQ(dim, budget, Scheme::kDsgd));
  }
  return q_star;
}

std::vector<double> QuantizedNorms(
    std::span<const std::vector<double>> updates,
    std::span<const std::size_t> q_star) {
  if (updates.size() != q_star.size()) {
    throw std::invalid_argument("quantized_norms: size mismatch");
  }
  std::vector<double> norms;
  norms.reserve(updates.size());
  for (std::size_t m = 0; m < updates.size(); ++m) {
    norms.push_back(SparseL2Norm(DsgdQuantize(updates[m], q_star[m])));
  }
  return norms;
}

SchedulingDecision Decide(const ScheduleOptions& options,
                          const ChannelRealization& ch,
                          std::span<const double> scores, Rng* rng) {
  const std::size_t m = ch.num_devices();
  const std::size_t k = options.k;
  CheckK(k, m, "decide");
  const bool uses_scores = options.policy == Policy::kBn2 ||
                           options.policy == Policy::kBcBn2 ||
                           options.policy == Policy::kBn2C;
  if (uses_scores && scores.size() != m) {
    throw std::invalid_argument("decide: policy " +
                                std::string(PolicyName(options.policy)) +
                                " needs one score per device");
  }

  SchedulingDecision decision;
  decision.policy = options.policy;
  const std::vector<double> mags = ch.Magnitudes();
  switch (options.policy) {
    case Policy::kBc:
      decision.selected = ScheduleBc(mags, k);
      break;
    case Policy::kBn2:
      decision.selected = ScheduleBn2(scores, k);
      break;
    case Policy::kBcBn2:
      decision.selected = ScheduleBcBn2(mags, scores, k, options.kc);
      break;
    case Policy::kBn2C:
      decision.selected = ScheduleBn2C(scores, k);
      break;
    case Policy::kRandom:
      if (rng == nullptr) {
        throw std::invalid_argument("decide: random policy needs an rng");
      }
      decision.selected = ScheduleRandom(m, k, *rng);
      break;
  }

  const double power = TransmitPower(m, k, ch.pbar());
  std::vector<double> caps, weights;
  caps.reserve(k);
  weights.reserve(k);
  for (std::size_t dev : decision.selected) {
    caps.push_back(Capacity(ch.gains()[dev], power, ch.noise_var()));
    weights.push_back(uses_scores ? scores[dev] : 1.0);
  }
  const bool any_weight =
      std::any_of(weights.begin(), weights.end(), [](double w) { return w > 0; });
  const std::vector<double> slots =
      uses_scores && any_weight
          ? AllocWeightedBits(caps, weights, ch.n_slots())
          : AllocEqualBits(caps, ch.n_slots());

  decision.budgets.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    decision.budgets.push_back(
        LinkBudget::Make(decision.selected[i], slots[i], caps[i]));
  }
  return decision;
}

}  // namespace fedsched
