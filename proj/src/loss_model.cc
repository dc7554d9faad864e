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
#include "fedsched/loss_model.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fedsched {
namespace {

// Turns logits into probabilities in place and returns -log p[label].
double SoftmaxCrossEntropy(std::span<double> z, std::size_t label) {
  const double zmax = *std::max_element(z.begin(), z.end());
  const double z_label = z[label];
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - zmax);
    sum += v;
  }
  const double loss = std::log(sum) + zmax - z_label;
  for (double& v : z) v /= sum;
  return loss;
}

double Sigmoid(double x) {
  return x >= 0 ? 1.0 / (1.0 + std::exp(-x))
                : std::exp(x) / (1.0 + std::exp(x));
}

void CheckTheta(std::span<const double> theta, std::size_t dim) {
  if (theta.size() != dim) {
    throw std::invalid_argument("loss model: parameter dimension mismatch");
  }
}

}  // namespace

std::size_t LossModel::Predict(std::span<const double> theta,
                               std::span<const double> x) const {
  std::vector<double> z(num_classes());
  Logits(theta, x, z);
  return static_cast<std::size_t>(std::max_element(z.begin(), z.end()) -
                                  z.begin());
}

SoftmaxRegression::SoftmaxRegression(std::size_t num_features,
                                     std::size_t num_classes, bool bias)
    : features_(num_features), classes_(num_classes), bias_(bias) {
  if (features_ == 0 || classes_ < 2) {
    throw std::invalid_argument("logistic: need features >= 1, classes >= 2");
  }
}

std::size_t SoftmaxRegression::dim() const {
  return classes_ * features_ + (bias_ ? classes_ : 0);
}

void SoftmaxRegression::Logits(std::span<const double> theta,
                               std::span<const double> x,
                               std::span<double> logits) const {
  for (std::size_t c = 0; c < classes_; ++c) {
    const double* w = theta.data() + c * features_;
    double z = bias_ ? theta[classes_ * features_ + c] : 0.0;
    for (std::size_t f = 0; f < features_; ++f) z += w[f] * x[f];
    logits[c] = z;
  }
}

double SoftmaxRegression::LossAndGradient(std::span<const double> theta,
                                          const Dataset& data,
                                          std::span<const std::size_t> rows,
                                          std::span<double> grad) const {
  CheckTheta(theta, dim());
  if (rows.empty()) throw std::invalid_argument("logistic: empty batch");
  const bool want_grad = !grad.empty();
  if (want_grad) {
    CheckTheta(grad, dim());
    std::fill(grad.begin(), grad.end(), 0.0);
  }
  const double inv_n = 1.0 / static_cast<double>(rows.size());
  std::vector<double> z(classes_);
  double loss = 0.0;
  for (std::size_t r : rows) {
    const auto x = data.Row(r);
    const auto y = static_cast<std::size_t>(data.labels[r]);
    Logits(theta, x, z);
    loss += SoftmaxCrossEntropy(z, y);
    if (!want_grad) continue;
    for (std::size_t c = 0; c < classes_; ++c) {
      const double err = (z[c] - (c == y ? 1.0 : 0.0)) * inv_n;
      double* g = grad.data() + c * features_;
      for (std::size_t f = 0; f < features_; ++f) g[f] += err * x[f];
      if (bias_) grad[classes_ * features_ + c] += err;
    }
  }
  return loss * inv_n;
}

std::vector<double> SoftmaxRegression::InitialParams(Rng&) const {
  return std::vector<double>(dim(), 0.0);
}

MlpClassifier::MlpClassifier(std::size_t num_features, std::size_t hidden,
                             std::size_t num_classes)
    : features_(num_features), hidden_(hidden), classes_(num_classes) {
  if (features_ == 0 || hidden_ == 0 || classes_ < 2) {
    throw std::invalid_argument(
        "mlp: need features >= 1, hidden >= 1, classes >= 2");
  }
}

std::size_t MlpClassifier::dim() const {
  return hidden_ * features_ + hidden_ + classes_ * hidden_ + classes_;
}

void MlpClassifier::Hidden(std::span<const double> theta,
                           std::span<const double> x,
                           std::span<double> act) const {
  const double* b1 = theta.data() + hidden_ * features_;
  for (std::size_t h = 0; h < hidden_; ++h) {
    const double* w = theta.data() + h * features_;
    double a = b1[h];
    for (std::size_t f = 0; f < features_; ++f) a += w[f] * x[f];
    act[h] = Sigmoid(a);
  }
}

void MlpClassifier::Logits(std::span<const double> theta,
                           std::span<const double> x,
                           std::span<double> logits) const {
  std::vector<double> act(hidden_);
  Hidden(theta, x, act);
  const std::size_t w2_off = hidden_ * features_ + hidden_;
  const double* b2 = theta.data() + w2_off + classes_ * hidden_;
  for (std::size_t c = 0; c < classes_; ++c) {
    const double* w = theta.data() + w2_off + c * hidden_;
    double z = b2[c];
    for (std::size_t h = 0; h < hidden_; ++h) z += w[h] * act[h];
    logits[c] = z;
  }
}

double MlpClassifier::LossAndGradient(std::span<const double> theta,
                                      const Dataset& data,
                                      std::span<const std::size_t> rows,
                                      std::span<double> grad) const {
  CheckTheta(theta, dim());
  if (rows.empty()) throw std::invalid_argument("mlp: empty batch");
  const bool want_grad = !grad.empty();
  if (want_grad) {
    CheckTheta(grad, dim());
    std::fill(grad.begin(), grad.end(), 0.0);
  }
  const std::size_t b1_off = hidden_ * features_;
  const std::size_t w2_off = b1_off + hidden_;
  const std::size_t b2_off = w2_off + classes_ * hidden_;
  const double inv_n = 1.0 / static_cast<double>(rows.size());

  std::vector<double> act(hidden_), z(classes_), dact(hidden_);
  double loss = 0.0;
  for (std::size_t r : rows) {
    const auto x = data.Row(r);
    const auto y = static_cast<std::size_t>(data.labels[r]);
    Hidden(theta, x, act);
    for (std::size_t c = 0; c < classes_; ++c) {
      const double* w = theta.data() + w2_off + c * hidden_;
      double v = theta[b2_off + c];
      for (std::size_t h = 0; h < hidden_; ++h) v += w[h] * act[h];
      z[c] = v;
    }
    loss += SoftmaxCrossEntropy(z, y);
    if (!want_grad) continue;

    std::fill(dact.begin(), dact.end(), 0.0);
    for (std::size_t c = 0; c < classes_; ++c) {
      const double err = (z[c] - (c == y ? 1.0 : 0.0)) * inv_n;
      const double* w = theta.data() + w2_off + c * hidden_;
      double* g = grad.data() + w2_off + c * hidden_;
      for (std::size_t h = 0; h < hidden_; ++h) {
        g[h] += err * act[h];
        dact[h] += err * w[h];
      }
      grad[b2_off + c] += err;
    }
    for (std::size_t h = 0; h < hidden_; ++h) {
      const double da = dact[h] * act[h] * (1.0 - act[h]);
      if (da == 0.0) continue;
      double* g = grad.data() + h * features_;
      for (std::size_t f = 0; f < features_; ++f) g[f] += da * x[f];
      grad[b1_off + h] += da;
    }
  }
  return loss * inv_n;
}

std::vector<double> MlpClassifier::InitialParams(Rng& rng) const {
  std::vector<double> theta(dim(), 0.0);
  const double a1 = std::sqrt(6.0 / static_cast<double>(features_ + hidden_));
  const double a2 = std::sqrt(6.0 / static_cast<double>(hidden_ + classes_));
  std::uniform_real_distribution<double> u1(-a1, a1), u2(-a2, a2);
  for (std::size_t i = 0; i < hidden_ * features_; ++i) theta[i] = u1(rng);
  const std::size_t w2_off = hidden_ * features_ + hidden_;
  for (std::size_t i = 0; i < classes_ * hidden_; ++i) {
    theta[w2_off + i] = u2(rng);
  }
  return theta;
}

}  // namespace fedsched
