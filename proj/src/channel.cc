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
#include "fedsched/channel.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fedsched {

ChannelRealization::ChannelRealization(std::vector<Complex> gains,
                                       double noise_var, double n_slots,
                                       double pbar)
    : gains_(std::move(gains)),
      noise_var_(noise_var),
      n_slots_(n_slots),
      pbar_(pbar) {
  if (gains_.empty()) {
    throw std::invalid_argument("channel: at least one device gain required");
  }
  if (!(noise_var_ > 0.0)) {
    throw std::invalid_argument("channel: noise_var must be > 0");
  }
  if (!(n_slots_ > 0.0)) {
    throw std::invalid_argument("channel: n_slots must be > 0");
  }
  if (!(pbar_ > 0.0)) {
    throw std::invalid_argument("channel: pbar must be > 0");
  }
}

std::vector<double> ChannelRealization::Magnitudes() const {
  return fedsched::Magnitudes(gains_);
}

LinkBudget LinkBudget::Make(std::size_t device, double slots,
                            double capacity) {
  LinkBudget b;
  b.device = device;
  b.slots = slots;
  b.capacity = capacity;
  b.bits = slots == 0.0 ? 0.0 : slots * capacity;
  return b;
}

std::vector<Complex> DrawChannelGains(std::size_t num_devices, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  std::vector<Complex> gains;
  gains.reserve(num_devices);
  for (std::size_t m = 0; m < num_devices; ++m) {
    double re = normal(rng);
    double im = normal(rng);
    gains.emplace_back(re, im);
  }
  return gains;
}

double TransmitPower(std::size_t num_devices, std::size_t k, double pbar) {
  if (k == 0 || k > num_devices) {
    throw std::invalid_argument("transmit_power: need 1 <= K <= M, got K=" +
                                std::to_string(k) +
                                " M=" + std::to_string(num_devices));
  }
  if (!(pbar > 0.0)) {
    throw std::invalid_argument("transmit_power: pbar must be > 0");
  }
  return static_cast<double>(num_devices) * pbar / static_cast<double>(k);
}

double Capacity(Complex gain, double power, double noise_var) {
  if (!(noise_var > 0.0)) {
    throw std::invalid_argument("capacity: noise_var must be > 0");
  }
  if (power < 0.0) {
    throw std::invalid_argument("capacity: power must be >= 0");
  }
  return std::log2(1.0 + std::norm(gain) * power / noise_var);
}

std::vector<double> Magnitudes(std::span<const Complex> gains) {
  std::vector<double> out;
  out.reserve(gains.size());
  for (const Complex& h : gains) out.push_back(std::abs(h));
  return out;
}

}  // namespace fedsched
