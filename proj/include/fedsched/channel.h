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
#ifndef FEDSCHED_CHANNEL_H_
#define FEDSCHED_CHANNEL_H_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "fedsched/rng.h"

namespace fedsched {

using Complex = std::complex<double>;

// One block-fading round of the uplink: gains h_m(t) for every device plus the
// round-invariant link parameters.
class ChannelRealization {
 public:
  // Throws std::invalid_argument if gains is empty or any scalar is not > 0.
  ChannelRealization(std::vector<Complex> gains, double noise_var,
                     double n_slots, double pbar);

  const std::vector<Complex>& gains() const { return gains_; }
  std::size_t num_devices() const { return gains_.size(); }
  double noise_var() const { return noise_var_; }
  double n_slots() const { return n_slots_; }
  double pbar() const { return pbar_; }

  // |h_m| for every device.
  std::vector<double> Magnitudes() const;

 private:
  std::vector<Complex> gains_;
  double noise_var_;
  double n_slots_;
  double pbar_;
};

struct LinkBudget {
  std::size_t device = 0;
  double slots = 0.0;     // n_m
  double capacity = 0.0;  // C_m(t), bits per slot
  double bits = 0.0;      // R_m = n_m * C_m

  static LinkBudget Make(std::size_t device, double slots, double capacity);
};

// M i.i.d. CN(0, 1) draws: real and imaginary parts each N(0, 1/2).
std::vector<Complex> DrawChannelGains(std::size_t num_devices, Rng& rng);

// Fixed per-round power M * pbar / K of a scheduled device, which meets the
// average power constraint with equality under uniform K/M participation.
double TransmitPower(std::size_t num_devices, std::size_t k, double pbar);

// Shannon capacity log2(1 + |h|^2 P / sigma^2) in bits per slot.
double Capacity(Complex gain, double power, double noise_var);

std::vector<double> Magnitudes(std::span<const Complex> gains);

}  // namespace fedsched

#endif  // FEDSCHED_CHANNEL_H_
