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
#ifndef FEDSCHED_LR_SCHEDULE_H_
#define FEDSCHED_LR_SCHEDULE_H_

#include <cstddef>
#include <string>
#include <string_view>

namespace fedsched {

// Learning rate eta(t) as a function of the global round.
//   const:v              eta(t) = v
//   inv:c,t0             eta(t) = c / (t + t0)
//   inv_mu:c,t0          eta(t) = c / (mu (t + t0))
//   inv_mu_tau:c,t0      eta(t) = c / (mu tau (t + t0))
class LrSchedule {
 public:
  enum class Kind { kConstant, kInverse, kInverseMu, kInverseMuTau };

  LrSchedule() = default;
  static LrSchedule Constant(double value);
  static LrSchedule Inverse(double scale, double offset);
  static LrSchedule InverseMu(double scale, double offset);
  static LrSchedule InverseMuTau(double scale, double offset);

  // Throws std::invalid_argument on malformed text.
  static LrSchedule Parse(std::string_view text);
  std::string ToString() const;

  double At(std::size_t t, double mu = 1.0, std::size_t tau = 1) const;
  Kind kind() const { return kind_; }
  bool DependsOnMu() const {
    return kind_ == Kind::kInverseMu || kind_ == Kind::kInverseMuTau;
  }

  friend bool operator==(const LrSchedule&, const LrSchedule&) = default;

 private:
  LrSchedule(Kind kind, double scale, double offset)
      : kind_(kind), scale_(scale), offset_(offset) {}

  Kind kind_ = Kind::kConstant;
  double scale_ = 0.01;
  double offset_ = 0.0;
};

// Shortest decimal text that reads back to the same double.
std::string FormatDouble(double value);

}  // namespace fedsched

#endif  // FEDSCHED_LR_SCHEDULE_H_
