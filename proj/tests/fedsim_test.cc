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

#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "fedsched/errors.h"
#include "gtest/gtest.h"

namespace fedsched {
namespace {

// F(theta) = 0.5 ||theta - c||^2 regardless of the data rows.
class QuadraticModel final : public LossModel {
 public:
  explicit QuadraticModel(std::vector<double> c) : c_(std::move(c)) {}
  std::string_view name() const override { return "quadratic"; }
  std::size_t dim() const override { return c_.size(); }
  std::size_t num_features() const override { return 1; }
  std::size_t num_classes() const override { return 2; }
  void Logits(std::span<const double>, std::span<const double>,
              std::span<double> logits) const override {
    for (double& l : logits) l = 0.0;
  }
  double LossAndGradient(std::span<const double> theta, const Dataset&,
                         std::span<const std::size_t>,
                         std::span<double> grad) const override {
    calls.fetch_add(1);
    double loss = 0.0;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      const double r = theta[i] - c_[i];
      loss += 0.5 * r * r;
      if (!grad.empty()) grad[i] = r;
    }
    return loss;
  }
  std::vector<double> InitialParams(Rng&) const override {
    return std::vector<double>(c_.size(), 0.0);
  }
  mutable std::atomic<int> calls{0};

 private:
  std::vector<double> c_;
};

Dataset TinyData(std::size_t n) {
  Dataset d;
  d.num_features = 1;
  d.num_classes = 2;
  for (std::size_t i = 0; i < n; ++i) {
    d.Append(std::vector<double>{static_cast<double>(i)},
             static_cast<int>(i % 2));
  }
  return d;
}

TrainConfig BaseConfig() {
  TrainConfig cfg;
  cfg.tau = 1;
  cfg.batch = 0;
  cfg.lr = LrSchedule::Constant(0.1);
  cfg.num_devices = 3;
  cfg.k = 1;
  cfg.kc = 1;
  cfg.policy = Policy::kBc;
  cfg.rounds = 1;
  cfg.seed = 5;
  return cfg;
}

TEST(LocalSgdTest, SingleFullBatchStep) {
  QuadraticModel model({1.0, -2.0, 0.5});
  const DevicePartition part{0, TinyData(4)};
  TrainConfig cfg = BaseConfig();
  const std::vector<double> theta = {0.0, 0.0, 2.5};
  Rng rng(1);
  const LocalUpdate u = LocalSgd(theta, part, cfg, 0, model, rng);
  EXPECT_NEAR(u.delta[0], 0.1, 1e-15);
  EXPECT_NEAR(u.delta[1], -0.2, 1e-15);
  EXPECT_NEAR(u.delta[2], -0.2, 1e-15);
  EXPECT_NEAR(u.norm, std::sqrt(0.01 + 0.04 + 0.04), 1e-15);

  cfg.lr = LrSchedule::Constant(0.0);
  Rng rng2(1);
  const LocalUpdate z = LocalSgd(theta, part, cfg, 0, model, rng2);
  for (double x : z.delta) EXPECT_EQ(x, 0.0);
}

TEST(LocalSgdTest, MatchesUnrolledLoop) {
  // Real softmax model with mini-batches: replay the same RNG by hand.
  const SoftmaxRegression model(3, 2);
  Dataset data;
  data.num_features = 3;
  data.num_classes = 2;
  Rng drng(3);
  std::normal_distribution<double> nd;
  for (int i = 0; i < 20; ++i) {
    data.Append(std::vector<double>{nd(drng), nd(drng), nd(drng)}, i % 2);
  }
  const DevicePartition part{2, data};
  TrainConfig cfg = BaseConfig();
  cfg.tau = 3;
  cfg.batch = 4;
  cfg.lr = LrSchedule::Inverse(2.0, 10.0);
  std::vector<double> theta(model.dim());
  for (double& x : theta) x = nd(drng);

  Rng rng(99);
  const LocalUpdate u = LocalSgd(theta, part, cfg, 6, model, rng);

  Rng replay(99);
  const double eta = 2.0 / (6.0 + 10.0);
  std::vector<double> w = theta, grad(model.dim());
  std::uniform_int_distribution<std::size_t> pick(0, data.size() - 1);
  for (int s = 0; s < 3; ++s) {
    std::vector<std::size_t> rows(4);
    for (auto& r : rows) r = pick(replay);
    model.LossAndGradient(w, data, rows, grad);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= eta * grad[i];
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    EXPECT_DOUBLE_EQ(u.delta[i], w[i] - theta[i]);
  }
}

TEST(LocalSgdTest, NonFiniteRaises) {
  QuadraticModel model({1.0});
  const DevicePartition part{4, TinyData(2)};
  TrainConfig cfg = BaseConfig();
  const std::vector<double> theta = {std::nan("")};
  Rng rng(1);
  try {
    LocalSgd(theta, part, cfg, 7, model, rng);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_EQ(e.round(), 7u);
    EXPECT_EQ(e.device(), 4u);
  }
}

TEST(AggregateTest, Examples) {
  const ModelState s{{1.0, 1.0, 1.0}, 4};
  const std::vector<SparseUpdate> one = {
      SparseUpdate::FromDense(std::vector<double>{0.5, 0, -1})};
  const ModelState a = Aggregate(s, one, 1);
  EXPECT_EQ(a.theta, (std::vector<double>{1.5, 1.0, 0.0}));
  EXPECT_EQ(a.round, 5u);
  const std::vector<SparseUpdate> two = {
      SparseUpdate::FromDense(std::vector<double>{2, 0, 0}),
      SparseUpdate::FromDense(std::vector<double>{0, 4, 0})};
  const ModelState b = Aggregate(s, two, 2);
  EXPECT_EQ(b.theta, (std::vector<double>{2.0, 3.0, 1.0}));
  const std::vector<SparseUpdate> empty = {SparseUpdate::Empty(3)};
  EXPECT_EQ(Aggregate(s, empty, 1).theta, s.theta);
  EXPECT_THROW(Aggregate(s, two, 1), std::invalid_argument);
}

TEST(RunRoundTest, FullParticipationUncompressedIsPlainAverage) {
  QuadraticModel model({1.0, 2.0, 3.0, 4.0});
  std::vector<DevicePartition> parts;
  for (std::size_t m = 0; m < 3; ++m) parts.push_back({m, TinyData(5 + m)});
  TrainConfig cfg = BaseConfig();
  cfg.k = 3;
  cfg.kc = 3;
  cfg.tau = 2;
  cfg.batch = 2;
  cfg.policy = Policy::kBn2;
  const ModelState s{{0.5, -0.5, 0.0, 1.0}, 3};
  const RoundResult r =
      RunRound(s, parts, cfg, ChannelParams{}, model, RoundOptions{false});

  std::vector<double> expect = s.theta;
  for (std::size_t m = 0; m < 3; ++m) {
    Rng rng = MakeRng(cfg.seed, Stream::kLocalSgd, {3, m});
    const LocalUpdate u = LocalSgd(s.theta, parts[m], cfg, 3, model, rng);
    for (std::size_t i = 0; i < 4; ++i) expect[i] += u.delta[i] / 3.0;
  }
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(r.state.theta[i], expect[i], 1e-15);
  }
  EXPECT_EQ(r.metrics.q, (std::vector<std::size_t>{4, 4, 4}));
  EXPECT_EQ(r.state.round, 4u);
}

TEST(RunRoundTest, DeterministicAndCountsGradientCalls) {
  QuadraticModel model({1.0, -1.0, 0.5, 2.0, 0.0});
  std::vector<DevicePartition> parts;
  for (std::size_t m = 0; m < 4; ++m) parts.push_back({m, TinyData(6)});
  TrainConfig cfg = BaseConfig();
  cfg.num_devices = 4;
  cfg.k = 2;
  cfg.kc = 3;
  cfg.tau = 5;
  cfg.batch = 3;
  for (Policy p : {Policy::kBc, Policy::kBn2, Policy::kBcBn2, Policy::kBn2C,
                   Policy::kRandom}) {
    cfg.policy = p;
    const ModelState s{{0, 0, 0, 0, 0}, 0};
    model.calls = 0;
    const RoundResult a = RunRound(s, parts, cfg, ChannelParams{}, model);
    EXPECT_EQ(model.calls.load(), 4 * 5);
    cfg.jobs = 3;
    const RoundResult b = RunRound(s, parts, cfg, ChannelParams{}, model);
    cfg.jobs = 1;
    EXPECT_EQ(a.state.theta, b.state.theta);
    EXPECT_EQ(a.metrics.selected, b.metrics.selected);
    EXPECT_EQ(a.metrics.selected.size(), 2u);
  }
}

TEST(RunRoundTest, ZeroSparsityLeavesModelUnchanged) {
  QuadraticModel model({1.0, -1.0, 0.5});
  std::vector<DevicePartition> parts;
  for (std::size_t m = 0; m < 3; ++m) parts.push_back({m, TinyData(3)});
  TrainConfig cfg = BaseConfig();
  cfg.policy = Policy::kBc;
  ChannelParams ch;
  ch.n_slots = 1e-3;
  const ModelState s{{0.2, 0.3, 0.4}, 0};
  const RoundResult r = RunRound(s, parts, cfg, ch, model);
  EXPECT_EQ(r.metrics.q, std::vector<std::size_t>{0});
  EXPECT_EQ(r.state.theta, s.theta);
}

TEST(EvaluateTest, SeparableAndGolden) {
  const SoftmaxRegression model(1, 2);
  Dataset test;
  test.num_features = 1;
  test.num_classes = 2;
  for (int i = 0; i < 50; ++i) {
    test.Append(std::vector<double>{-1.0 - i}, 0);
    test.Append(std::vector<double>{1.0 + i}, 1);
  }
  // Layout W[0], W[1], b[0], b[1]: class 1 logit grows with x.
  const std::vector<double> theta = {-1.0, 1.0, 0.0, 0.0};
  EXPECT_DOUBLE_EQ(Evaluate(theta, test, model).accuracy, 1.0);
  const std::vector<double> zero(4, 0.0);
  const EvalResult z = Evaluate(zero, test, model);
  EXPECT_NEAR(z.mean_loss, std::log(2.0), 1e-15);
  // Ties go to class 0.
  EXPECT_DOUBLE_EQ(z.accuracy, 0.5);
}

TEST(EvaluateTest, RandomModelNearChance) {
  const SoftmaxRegression model(5, 2);
  Rng rng(12);
  std::normal_distribution<double> nd;
  Dataset test;
  test.num_features = 5;
  test.num_classes = 2;
  for (int i = 0; i < 20000; ++i) {
    std::vector<double> x(5);
    for (double& v : x) v = nd(rng);
    test.Append(x, static_cast<int>(rng() % 2));
  }
  std::vector<double> theta(model.dim());
  for (double& v : theta) v = nd(rng);
  EXPECT_NEAR(Evaluate(theta, test, model).accuracy, 0.5, 0.02);
}

TEST(TrainConfigTest, Validate) {
  TrainConfig cfg = BaseConfig();
  EXPECT_NO_THROW(cfg.Validate());
  cfg.k = 4;
  EXPECT_THROW(cfg.Validate(), std::invalid_argument);
  cfg = BaseConfig();
  cfg.tau = 0;
  EXPECT_THROW(cfg.Validate(), std::invalid_argument);
  cfg = BaseConfig();
  cfg.policy = Policy::kBcBn2;
  cfg.k = 2;
  cfg.kc = 1;
  EXPECT_THROW(cfg.Validate(), std::invalid_argument);
}

}  // namespace
}  // namespace fedsched
