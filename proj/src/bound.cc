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
#include "fedsched/bound.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fedsched/channel.h"
#include "fedsched/compress.h"
#include "fedsched/parallel.h"
#include "fedsched/schedule.h"

namespace fedsched {
namespace {

constexpr double kCoeffSlack = 1e-12;

void CheckRho(double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) {
    throw std::invalid_argument("rho must lie in [0, 1], got " +
                                FormatDouble(rho));
  }
}

}  // namespace

void BoundParams::Validate() const {
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be > 0");
  if (!(L >= mu)) throw std::invalid_argument("need mu <= L");
  if (tau == 0) throw std::invalid_argument("tau must be >= 1");
  if (!(G >= 0.0)) throw std::invalid_argument("G must be >= 0");
  if (!(Gamma >= 0.0)) throw std::invalid_argument("Gamma must be >= 0");
  if (K == 0 || K > M) throw std::invalid_argument("need 1 <= K <= M");
  if (!(init_dist_sq >= 0.0)) {
    throw std::invalid_argument("init_dist_sq must be >= 0");
  }
  const double cap = std::min(1.0, 1.0 / (mu * static_cast<double>(tau)));
  for (std::size_t t = 0; t < T; ++t) {
    const double eta = Eta(t);
    if (!(eta > 0.0) || eta > cap) {
      throw std::invalid_argument(
          "learning rate must satisfy 0 < eta(t) <= min{1, 1/(mu tau)} = " +
          FormatDouble(cap) + " for all t; eta(" + std::to_string(t) +
          ") = " + FormatDouble(eta));
    }
  }
}

double CoeffA(double rho, double eta, double mu, std::size_t tau) {
  const double tau_d = static_cast<double>(tau);
  const double a = 1.0 - mu * rho * eta * (tau_d - eta * (tau_d - 1.0));
  if (a < -kCoeffSlack || a > 1.0 + kCoeffSlack || std::isnan(a)) {
    throw std::domain_error("contraction factor A = " + FormatDouble(a) +
                            " outside [0, 1]; step size hypothesis violated");
  }
  return std::clamp(a, 0.0, 1.0);
}

double CoeffB(double rho, double eta, std::size_t tau, double G, double Gamma,
              std::size_t M, std::size_t K, double mu) {
  if (K == 0 || K > M) throw std::invalid_argument("coeff_B: need 1 <= K <= M");
  const double t = static_cast<double>(tau);
  const double g2 = G * G;
  const double eta2 = eta * eta;
  const double sched =
      M == K ? 0.0
             : static_cast<double>(M - K) * rho * eta2 * t * t * g2 /
                   (static_cast<double>(K) * static_cast<double>(M - 1));
  const double drift = rho * (1.0 + mu * (1.0 - eta)) * eta2 * g2 * t *
                       (t - 1.0) * (2.0 * t - 1.0) / 6.0;
  const double noise = rho * eta2 * (t * t + t - 1.0) * g2;
  const double bias = 2.0 * rho * eta * (t - 1.0) * Gamma;
  return sched + drift + noise + bias;
}

std::vector<double> BoundTrajectory(const BoundParams& params,
                                    std::span<const double> rho) {
  if (rho.size() < params.T) {
    throw std::invalid_argument("bound_trajectory: need " +
                                std::to_string(params.T) + " rho values, got " +
                                std::to_string(rho.size()));
  }
  std::vector<double> e;
  e.reserve(params.T + 1);
  e.push_back(params.init_dist_sq);
  for (std::size_t t = 0; t < params.T; ++t) {
    CheckRho(rho[t]);
    const double eta = params.Eta(t);
    const double a = CoeffA(rho[t], eta, params.mu, params.tau);
    const double b = CoeffB(rho[t], eta, params.tau, params.G, params.Gamma,
                            params.M, params.K, params.mu);
    e.push_back(a * e.back() + b);
  }
  return e;
}

std::vector<double> LossGapBound(std::span<const double> traj, double L) {
  if (!(L > 0.0)) throw std::invalid_argument("loss_gap_bound: L must be > 0");
  std::vector<double> out;
  out.reserve(traj.size());
  for (double e : traj) out.push_back(0.5 * L * e);
  return out;
}

std::vector<double> SampleRhoSequence(const RhoChannel& channel,
                                      std::size_t T, Rng& rng) {
  if (channel.d == 0) throw std::invalid_argument("sample_rho: d must be >= 1");
  if (channel.n_slots < 0.0) {
    throw std::invalid_argument("sample_rho: n_slots must be >= 0");
  }
  if (!(channel.noise_var > 0.0)) {
    throw std::invalid_argument("sample_rho: noise_var must be > 0");
  }
  const double power = TransmitPower(channel.M, channel.K, channel.pbar);
  const double d = static_cast<double>(channel.d);
  std::vector<double> rho;
  rho.reserve(T);
  std::vector<double> caps(channel.K);
  for (std::size_t t = 0; t < T; ++t) {
    // Which devices are picked does not change the i.i.d. gain law, but the
    // draw keeps the stream layout identical to a full scheduler.
    ScheduleRandom(channel.M, channel.K, rng);
    const std::vector<Complex> gains = DrawChannelGains(channel.K, rng);
    bool silent = channel.n_slots == 0.0;
    for (std::size_t k = 0; k < channel.K; ++k) {
      caps[k] = Capacity(gains[k], power, channel.noise_var);
      if (caps[k] == 0.0) silent = true;
    }
    if (silent) {
      rho.push_back(0.0);
      continue;
    }
    const std::vector<double> slots = AllocEqualBits(caps, channel.n_slots);
    // Equal-bit allocation gives every scheduled device this budget.
    double budget = slots[0] * caps[0];
    for (std::size_t k = 1; k < channel.K; ++k) {
      budget = std::min(budget, slots[k] * caps[k]);
    }
    rho.push_back(static_cast<double>(MaxQ(channel.d, budget, Scheme::kRand)) /
                  d);
  }
  return rho;
}

std::string_view SweepAxisName(SweepAxis axis) {
  return axis == SweepAxis::kK ? "K" : "tau";
}

std::vector<SweepSeries> Sweep(const SweepSpec& spec) {
  if (spec.replicas == 0) throw std::invalid_argument("sweep: replicas >= 1");
  if (spec.values.empty()) throw std::invalid_argument("sweep: no axis values");
  if (spec.fixed_rho) CheckRho(*spec.fixed_rho);

  std::vector<BoundParams> params;
  for (std::size_t v : spec.values) {
    BoundParams p = spec.base;
    (spec.axis == SweepAxis::kK ? p.K : p.tau) = v;
    p.Validate();
    params.push_back(p);
  }
  const std::size_t T = spec.base.T;
  const std::size_t n_values = spec.values.size();

  struct Run {
    std::vector<double> rho;
    std::vector<double> dist;
  };
  // runs[v * replicas + r]
  std::vector<Run> runs(n_values * spec.replicas);
  ParallelFor(runs.size(), spec.jobs, [&](std::size_t idx) {
    const std::size_t v = idx / spec.replicas;
    const std::size_t r = idx % spec.replicas;
    const BoundParams& p = params[v];
    Run& run = runs[idx];
    if (spec.fixed_rho) {
      run.rho.assign(T, *spec.fixed_rho);
    } else {
      RhoChannel ch = spec.channel;
      ch.M = p.M;
      ch.K = p.K;
      Rng rng = MakeRng(spec.seed, Stream::kReplica, {r});
      run.rho = SampleRhoSequence(ch, T, rng);
    }
    run.dist = BoundTrajectory(p, run.rho);
  });

  std::vector<SweepSeries> out;
  out.reserve(n_values);
  const double inv_r = 1.0 / static_cast<double>(spec.replicas);
  for (std::size_t v = 0; v < n_values; ++v) {
    SweepSeries s;
    s.value = spec.values[v];
    s.label = std::string(SweepAxisName(spec.axis)) + "=" +
              std::to_string(s.value);
    s.rho_mean.assign(T, 0.0);
    s.dist_mean.assign(T + 1, 0.0);
    for (std::size_t r = 0; r < spec.replicas; ++r) {
      const Run& run = runs[v * spec.replicas + r];
      for (std::size_t t = 0; t < T; ++t) s.rho_mean[t] += run.rho[t] * inv_r;
      for (std::size_t t = 0; t <= T; ++t) {
        s.dist_mean[t] += run.dist[t] * inv_r;
      }
    }
    s.gap_mean = LossGapBound(s.dist_mean, params[v].L);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace fedsched
