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
#include "fedsched/fedsim.h"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "fedsched/channel.h"
#include "fedsched/errors.h"
#include "fedsched/parallel.h"

namespace fedsched {
namespace {

constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kEps = 1e-8;

double L2Norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

bool AllFinite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace

std::string_view OptimizerName(Optimizer opt) {
  switch (opt) {
    case Optimizer::kSgd:
      return "sgd";
    case Optimizer::kAdam:
      return "adam";
    case Optimizer::kAdagrad:
      return "adagrad";
  }
  return "unknown";
}

std::optional<Optimizer> ParseOptimizer(std::string_view name) {
  for (Optimizer o : {Optimizer::kSgd, Optimizer::kAdam, Optimizer::kAdagrad}) {
    if (OptimizerName(o) == name) return o;
  }
  return std::nullopt;
}

void TrainConfig::Validate() const {
  if (tau == 0) throw std::invalid_argument("tau must be >= 1");
  if (num_devices == 0) throw std::invalid_argument("M must be >= 1");
  if (k == 0 || k > num_devices) {
    throw std::invalid_argument("K must satisfy 1 <= K <= M");
  }
  if (policy == Policy::kBcBn2 && (kc < k || kc > num_devices)) {
    throw std::invalid_argument("Kc must satisfy K <= Kc <= M");
  }
  if (lr.DependsOnMu()) {
    throw std::invalid_argument("lr schedule for training may not depend on mu");
  }
}

LocalUpdate LocalSgd(std::span<const double> theta,
                     const DevicePartition& part, const TrainConfig& cfg,
                     std::size_t round, const LossModel& model, Rng& rng) {
  if (cfg.tau == 0) throw std::invalid_argument("local_sgd: tau must be >= 1");
  const Dataset& data = part.data;
  if (data.empty()) throw std::invalid_argument("local_sgd: empty partition");
  const std::size_t d = theta.size();
  const double eta = cfg.lr.At(round);

  std::vector<double> w(theta.begin(), theta.end());
  std::vector<double> grad(d), m1, m2;
  if (cfg.optimizer != Optimizer::kSgd) m2.assign(d, 0.0);
  if (cfg.optimizer == Optimizer::kAdam) m1.assign(d, 0.0);

  std::vector<std::size_t> batch;
  if (cfg.batch == 0) {
    batch.resize(data.size());
    std::iota(batch.begin(), batch.end(), std::size_t{0});
  } else {
    batch.resize(cfg.batch);
  }
  std::uniform_int_distribution<std::size_t> pick(0, data.size() - 1);

  for (std::size_t step = 1; step <= cfg.tau; ++step) {
    if (cfg.batch != 0) {
      for (std::size_t& b : batch) b = pick(rng);
    }
    model.LossAndGradient(w, data, batch, grad);
    if (!AllFinite(grad)) {
      throw NumericalError(round, part.device, "non-finite gradient");
    }
    switch (cfg.optimizer) {
      case Optimizer::kSgd:
        for (std::size_t i = 0; i < d; ++i) w[i] -= eta * grad[i];
        break;
      case Optimizer::kAdam: {
        const double c1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(step));
        const double c2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(step));
        for (std::size_t i = 0; i < d; ++i) {
          m1[i] = kAdamBeta1 * m1[i] + (1.0 - kAdamBeta1) * grad[i];
          m2[i] = kAdamBeta2 * m2[i] + (1.0 - kAdamBeta2) * grad[i] * grad[i];
          w[i] -= eta * (m1[i] / c1) / (std::sqrt(m2[i] / c2) + kEps);
        }
        break;
      }
      case Optimizer::kAdagrad:
        for (std::size_t i = 0; i < d; ++i) {
          m2[i] += grad[i] * grad[i];
          w[i] -= eta * grad[i] / (std::sqrt(m2[i]) + kEps);
        }
        break;
    }
  }
  if (!AllFinite(w)) {
    throw NumericalError(round, part.device, "non-finite local model");
  }

  LocalUpdate out;
  out.device = part.device;
  out.delta.resize(d);
  for (std::size_t i = 0; i < d; ++i) out.delta[i] = w[i] - theta[i];
  out.norm = L2Norm(out.delta);
  return out;
}

ModelState Aggregate(const ModelState& state,
                     std::span<const SparseUpdate> updates, std::size_t k) {
  if (k == 0 || updates.size() != k) {
    throw std::invalid_argument("aggregate: expected K=" + std::to_string(k) +
                                " updates, got " +
                                std::to_string(updates.size()));
  }
  ModelState next = state;
  const double scale = 1.0 / static_cast<double>(k);
  for (const SparseUpdate& u : updates) {
    u.AddTo(next.theta, scale);
  }
  ++next.round;
  return next;
}

double RoundMetrics::MeanQ() const {
  if (q.empty()) return 0.0;
  double s = 0.0;
  for (std::size_t v : q) s += static_cast<double>(v);
  return s / static_cast<double>(q.size());
}

double RoundMetrics::MeanBits() const {
  if (bits.empty()) return 0.0;
  return std::accumulate(bits.begin(), bits.end(), 0.0) /
         static_cast<double>(bits.size());
}

RoundResult RunRound(const ModelState& state,
                     std::span<const DevicePartition> partitions,
                     const TrainConfig& cfg, const ChannelParams& channel,
                     const LossModel& model, const RoundOptions& options) {
  cfg.Validate();
  const std::size_t num_devices = cfg.num_devices;
  if (partitions.size() != num_devices) {
    throw std::invalid_argument("run_round: need one partition per device");
  }
  const std::size_t d = state.theta.size();
  if (d != model.dim()) {
    throw std::invalid_argument("run_round: model/state dimension mismatch");
  }
  const std::size_t t = state.round;

  // Every device trains; each owns its stream.
  std::vector<LocalUpdate> local(num_devices);
  ParallelFor(num_devices, cfg.jobs, [&](std::size_t m) {
    Rng rng = MakeRng(cfg.seed, Stream::kLocalSgd, {t, m});
    local[m] = LocalSgd(state.theta, partitions[m], cfg, t, model, rng);
  });

  Rng channel_rng = MakeRng(cfg.seed, Stream::kChannel, {t});
  const ChannelRealization ch(DrawChannelGains(num_devices, channel_rng),
                              channel.noise_var, channel.n_slots,
                              channel.pbar);

  RoundMetrics metrics;
  metrics.round = t;
  metrics.policy = cfg.policy;
  metrics.k = cfg.k;
  metrics.update_norms.reserve(num_devices);
  for (const LocalUpdate& u : local) metrics.update_norms.push_back(u.norm);

  std::vector<double> scores;
  switch (cfg.policy) {
    case Policy::kBn2:
    case Policy::kBcBn2:
      scores = metrics.update_norms;
      break;
    case Policy::kBn2C: {
      const std::vector<std::size_t> q_star =
          FullBandwidthSparsity(ch, d, cfg.k);
      std::vector<std::vector<double>> deltas;
      deltas.reserve(num_devices);
      for (const LocalUpdate& u : local) deltas.push_back(u.delta);
      scores = QuantizedNorms(deltas, q_star);
      break;
    }
    case Policy::kBc:
    case Policy::kRandom:
      break;
  }

  Rng schedule_rng = MakeRng(cfg.seed, Stream::kSchedule, {t});
  const SchedulingDecision decision =
      Decide({cfg.policy, cfg.k, cfg.kc}, ch, scores, &schedule_rng);

  std::vector<SparseUpdate> sent;
  sent.reserve(cfg.k);
  for (const LinkBudget& b : decision.budgets) {
    const std::vector<double>& delta = local[b.device].delta;
    if (options.compress) {
      const std::size_t q = MaxQ(d, b.bits, Scheme::kDsgd);
      sent.push_back(DsgdQuantize(delta, q));
      metrics.q.push_back(q);
    } else {
      sent.push_back(SparseUpdate::FromDense(delta));
      metrics.q.push_back(d);
    }
    metrics.selected.push_back(b.device);
    metrics.bits.push_back(b.bits);
    metrics.slots.push_back(b.slots);
  }

  RoundResult result{Aggregate(state, sent, cfg.k), std::move(metrics)};
  if (!AllFinite(result.state.theta)) {
    throw NumericalError(t, decision.selected.front(),
                         "non-finite global model after aggregation");
  }
  return result;
}

EvalResult Evaluate(std::span<const double> theta, const Dataset& test,
                    const LossModel& model) {
  if (test.empty()) throw std::invalid_argument("evaluate: empty test set");
  std::vector<std::size_t> rows(test.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  EvalResult out;
  out.mean_loss = model.Loss(theta, test, rows);
  std::size_t correct = 0;
  for (std::size_t r : rows) {
    if (model.Predict(theta, test.Row(r)) ==
        static_cast<std::size_t>(test.labels[r])) {
      ++correct;
    }
  }
  out.accuracy = static_cast<double>(correct) / static_cast<double>(test.size());
  return out;
}

std::vector<SimulationRow> Simulate(std::span<const DevicePartition> partitions,
                                    const Dataset& test, const TrainConfig& cfg,
                                    const ChannelParams& channel,
                                    const LossModel& model,
                                    const RoundOptions& options) {
  Rng init_rng = MakeRng(cfg.seed, Stream::kInit);
  ModelState state{model.InitialParams(init_rng), 0};
  std::vector<SimulationRow> rows;
  rows.reserve(cfg.rounds);
  for (std::size_t t = 0; t < cfg.rounds; ++t) {
    RoundResult r = RunRound(state, partitions, cfg, channel, model, options);
    state = std::move(r.state);
    rows.push_back({std::move(r.metrics), Evaluate(state.theta, test, model)});
  }
  return rows;
}

}  // namespace fedsched
