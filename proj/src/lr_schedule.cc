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
#include "fedsched/lr_schedule.h"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fedsched {
namespace {

double ParseNumber(std::string_view text) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw std::invalid_argument("bad number '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

LrSchedule LrSchedule::Constant(double value) {
  if (!(value >= 0.0)) {
    throw std::invalid_argument("lr: constant rate must be >= 0");
  }
  return LrSchedule(Kind::kConstant, value, 0.0);
}

LrSchedule LrSchedule::Inverse(double scale, double offset) {
  if (!(scale > 0.0) || !(offset > 0.0)) {
    throw std::invalid_argument("lr: inverse schedule needs scale, t0 > 0");
  }
  return LrSchedule(Kind::kInverse, scale, offset);
}

LrSchedule LrSchedule::InverseMu(double scale, double offset) {
  LrSchedule s = Inverse(scale, offset);
  s.kind_ = Kind::kInverseMu;
  return s;
}

LrSchedule LrSchedule::InverseMuTau(double scale, double offset) {
  LrSchedule s = Inverse(scale, offset);
  s.kind_ = Kind::kInverseMuTau;
  return s;
}

LrSchedule LrSchedule::Parse(std::string_view text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("lr: expected kind:args, got '" +
                                std::string(text) + "'");
  }
  const std::string_view kind = text.substr(0, colon);
  const std::string_view args = text.substr(colon + 1);
  if (kind == "const") return Constant(ParseNumber(args));
  const std::size_t comma = args.find(',');
  if (comma == std::string_view::npos) {
    throw std::invalid_argument("lr: '" + std::string(kind) +
                                "' expects two arguments c,t0");
  }
  const double scale = ParseNumber(args.substr(0, comma));
  const double offset = ParseNumber(args.substr(comma + 1));
  if (kind == "inv") return Inverse(scale, offset);
  if (kind == "inv_mu") return InverseMu(scale, offset);
  if (kind == "inv_mu_tau") return InverseMuTau(scale, offset);
  throw std::invalid_argument("lr: unknown schedule kind '" +
                              std::string(kind) + "'");
}

std::string LrSchedule::ToString() const {
  switch (kind_) {
    case Kind::kConstant:
      return "const:" + FormatDouble(scale_);
    case Kind::kInverse:
      return "inv:" + FormatDouble(scale_) + "," + FormatDouble(offset_);
    case Kind::kInverseMu:
      return "inv_mu:" + FormatDouble(scale_) + "," + FormatDouble(offset_);
    case Kind::kInverseMuTau:
      return "inv_mu_tau:" + FormatDouble(scale_) + "," +
             FormatDouble(offset_);
  }
  return {};
}

double LrSchedule::At(std::size_t t, double mu, std::size_t tau) const {
  const double shifted = static_cast<double>(t) + offset_;
  switch (kind_) {
    case Kind::kConstant:
      return scale_;
    case Kind::kInverse:
      return scale_ / shifted;
    case Kind::kInverseMu:
      return scale_ / (mu * shifted);
    case Kind::kInverseMuTau:
      return scale_ / (mu * static_cast<double>(tau) * shifted);
  }
  return 0.0;
}

std::string FormatDouble(double value) {
  std::array<char, 64> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

}  // namespace fedsched
