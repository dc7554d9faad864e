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
#ifndef FEDSCHED_LOSS_MODEL_H_
#define FEDSCHED_LOSS_MODEL_H_

#include <cstddef>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "fedsched/data.h"
#include "fedsched/rng.h"

namespace fedsched {

// A differentiable classifier with cross-entropy loss over a flat parameter
// vector.
class LossModel {
 public:
  virtual ~LossModel() = default;

  virtual std::string_view name() const = 0;
  virtual std::size_t dim() const = 0;
  virtual std::size_t num_features() const = 0;
  virtual std::size_t num_classes() const = 0;

  virtual void Logits(std::span<const double> theta, std::span<const double> x,
                      std::span<double> logits) const = 0;

  // Mean cross-entropy over the given rows. When grad is non-empty it is
  // overwritten with the mean gradient (grad.size() must equal dim()).
  virtual double LossAndGradient(std::span<const double> theta,
                                 const Dataset& data,
                                 std::span<const std::size_t> rows,
                                 std::span<double> grad) const = 0;

  virtual std::vector<double> InitialParams(Rng& rng) const = 0;

  double Loss(std::span<const double> theta, const Dataset& data,
              std::span<const std::size_t> rows) const {
    return LossAndGradient(theta, data, rows, {});
  }
  // Arg-max class; ties go to the lower class index.
  std::size_t Predict(std::span<const double> theta,
                      std::span<const double> x) const;
};

// Multinomial logistic regression. Layout: W[class][feature], then one bias
// per class when enabled.
class SoftmaxRegression final : public LossModel {
 public:
  SoftmaxRegression(std::size_t num_features, std::size_t num_classes,
                    bool bias = true);

  std::string_view name() const override { return "logistic"; }
  std::size_t dim() const override;
  std::size_t num_features() const override { return features_; }
  std::size_t num_classes() const override { return classes_; }
  void Logits(std::span<const double> theta, std::span<const double> x,
              std::span<double> logits) const override;
  double LossAndGradient(std::span<const double> theta, const Dataset& data,
                         std::span<const std::size_t> rows,
                         std::span<double> grad) const override;
  // All zeros.
  std::vector<double> InitialParams(Rng& rng) const override;

 private:
  std::size_t features_;
  std::size_t classes_;
  bool bias_;
};

// One hidden sigmoid layer, softmax output. Layout: W1[hidden][feature],
// b1[hidden], W2[class][hidden], b2[class]. 784-256-10 gives d = 203530.
class MlpClassifier final : public LossModel {
 public:
  MlpClassifier(std::size_t num_features, std::size_t hidden,
                std::size_t num_classes);

  std::string_view name() const override { return "mlp"; }
  std::size_t dim() const override;
  std::size_t num_features() const override { return features_; }
  std::size_t num_classes() const override { return classes_; }
  std::size_t hidden() const { return hidden_; }
  void Logits(std::span<const double> theta, std::span<const double> x,
              std::span<double> logits) const override;
  double LossAndGradient(std::span<const double> theta, const Dataset& data,
                         std::span<const std::size_t> rows,
                         std::span<double> grad) const override;
  // Glorot-uniform weights, zero biases.
  std::vector<double> InitialParams(Rng& rng) const override;

 private:
  void Hidden(std::span<const double> theta, std::span<const double> x,
              std::span<double> act) const;

  std::size_t features_;
  std::size_t hidden_;
  std::size_t classes_;
};

}  // namespace fedsched

#endif  // FEDSCHED_LOSS_MODEL_H_
