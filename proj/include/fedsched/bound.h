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
#ifndef FEDSCHED_BOUND_H_
#define FEDSCHED_BOUND_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fedsched/lr_schedule.h"
#include "fedsched/rng.h"

namespace fedsched {

// Inputs to the strongly convex convergence bound on E||theta(t) - theta*||^2.
struct BoundParams {
  double mu = 1.0;     // strong convexity
  double L = 5.0;      // smoothness
  std::size_t tau = 3;
  double G = 1.0;      // bound on E||stochastic gradient||
  double Gamma = 1.0;  // F* - mean_m F_m*, data bias
  std::size_t M = 100;
  std::size_t K = 1;
  std::size_t T = 500;
  LrSchedule lr = LrSchedule::InverseMuTau(1000.0, 1000.0);
  double init_dist_sq = 500.0;

  double Eta(std::size_t t) const { return lr.At(t, mu, tau); }
  // Checks mu <= L, Gamma >= 0, 1 <= K <= M, and
  // 0 < eta(t) <= min{1, 1/(mu tau)} for every t < T.
  // Throws std::invalid_argument naming the violated condition.
  void Validate() const;
};

// Per-round contraction 1 - mu rho eta (tau - eta (tau - 1)). Throws
// std::domain_error if the value leaves [0, 1], which means the step size
// hypothesis was broken.
double CoeffA(double rho, double eta, double mu, std::size_t tau);

// Per-round additive error: scheduling variance, local drift, gradient
// noise and data bias terms, each scaled by rho. For M = K = 1 the
// scheduling term is 0.
double CoeffB(double rho, double eta, std::size_t tau, double G, double Gamma,
              std::size_t M, std::size_t K, double mu);

// e(0) = init_dist_sq, e(t+1) = A(t) e(t) + B(t) for t < T; returns T+1
// values. Uses the first T entries of rho.
std::vector<double> BoundTrajectory(const BoundParams& params,
                                    std::span<const double> rho);

// (L/2) * traj, pointwise.
std::vector<double> LossGapBound(std::span<const double> traj, double L);

// Channel model used to draw rho(t) = q(t)/d.
struct RhoChannel {
  std::size_t d = 203530;
  std::size_t M = 100;
  std::size_t K = 1;
  double n_slots = 1e5;
  double pbar = 1.0;
  double noise_var = 1.0;
};

// Per round: K uniformly random devices, fresh CN(0,1) gains, power
// M pbar / K, equal-bit slot allocation, q(t) = MaxQ(d, common budget, rand).
std::vector<double> SampleRhoSequence(const RhoChannel& channel,
                                      std::size_t T, Rng& rng);

enum class SweepAxis { kK, kTau };
std::string_view SweepAxisName(SweepAxis axis);

struct SweepSpec {
  BoundParams base;
  RhoChannel channel;  // M and K are taken from base / the axis
  SweepAxis axis = SweepAxis::kK;
  std::vector<std::size_t> values;
  std::size_t replicas = 100;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  std::optional<double> fixed_rho;  // bypasses channel sampling
};

struct SweepSeries {
  std::string label;  // "K=5" or "tau=3"
  std::size_t value = 0;
  std::vector<double> rho_mean;   // T entries, mean rho(t) over replicas
  std::vector<double> dist_mean;  // T+1 entries
  std::vector<double> gap_mean;   // T+1 entries

  double FinalGap() const { return gap_mean.back(); }
};

// For every axis value, averages the bound over `replicas` independent rho
// sequences. Replica r uses the stream (seed, kReplica, r) for every axis
// value, so series share channel randomness and adding replicas leaves the
// existing ones unchanged. Results do not depend on `jobs`.
std::vector<SweepSeries> Sweep(const SweepSpec& spec);

}  // namespace fedsched

#endif  // FEDSCHED_BOUND_H_
