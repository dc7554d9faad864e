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
#include "fedsched/compress.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace fedsched {
namespace {

double LogGamma(double x) {
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

void CheckQ(std::size_t d, std::size_t q, const char* what) {
  if (q > d) {
    throw std::invalid_argument(std::string(what) + ": q=" +
                                std::to_string(q) + " exceeds d=" +
                                std::to_string(d));
  }
}

constexpr std::size_t kRandMaxDim = std::size_t{1} << 33;

}  // namespace

void SparseUpdate::Validate() const {
  if (indices.size() != values.size()) {
    throw std::invalid_argument("sparse update: indices/values size mismatch");
  }
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= dim) {
      throw std::invalid_argument("sparse update: index out of range");
    }
    if (i > 0 && indices[i] <= indices[i - 1]) {
      throw std::invalid_argument(
          "sparse update: indices must be strictly increasing");
    }
  }
}

std::vector<double> SparseUpdate::ToDense() const {
  std::vector<double> dense(dim, 0.0);
  AddTo(dense);
  return dense;
}

void SparseUpdate::AddTo(std::span<double> dense, double scale) const {
  if (dense.size() != dim) {
    throw std::invalid_argument("sparse update: dimension mismatch (" +
                                std::to_string(dense.size()) + " vs " +
                                std::to_string(dim) + ")");
  }
  for (std::size_t i = 0; i < indices.size(); ++i) {
    dense[indices[i]] += scale * values[i];
  }
}

SparseUpdate SparseUpdate::Empty(std::size_t dim) {
  SparseUpdate u;
  u.dim = dim;
  return u;
}

SparseUpdate SparseUpdate::FromDense(std::span<const double> dense) {
  SparseUpdate u = Empty(dense.size());
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i] != 0.0) {
      u.indices.push_back(i);
      u.values.push_back(dense[i]);
    }
  }
  return u;
}

std::string_view SchemeName(Scheme scheme) {
  return scheme == Scheme::kDsgd ? "dsgd" : "rand";
}

double Log2Binomial(std::size_t d, std::size_t q) {
  CheckQ(d, q, "log2_binomial");
  if (q == 0 || q == d) return 0.0;
  if (q == 1 || q == d - 1) return std::log2(static_cast<double>(d));
  const double ln = LogGamma(static_cast<double>(d) + 1.0) -
                    LogGamma(static_cast<double>(q) + 1.0) -
                    LogGamma(static_cast<double>(d - q) + 1.0);
  return std::max(0.0, ln / std::numbers::ln2);
}

double BitCostDsgd(std::size_t d, std::size_t q) {
  CheckQ(d, q, "bit_cost_dsgd");
  return Log2Binomial(d, q) + 33.0;
}

double BitCostRand(std::size_t d, std::size_t q) {
  CheckQ(d, q, "bit_cost_rand");
  return Log2Binomial(d, q) + 33.0 * static_cast<double>(q);
}

double BitCost(Scheme scheme, std::size_t d, std::size_t q) {
  return scheme == Scheme::kDsgd ? BitCostDsgd(d, q) : BitCostRand(d, q);
}

std::size_t MaxSearchQ(Scheme scheme, std::size_t d) {
  return scheme == Scheme::kDsgd ? d / 2 : d;
}

std::size_t MaxQ(std::size_t d, double budget, Scheme scheme) {
  if (scheme == Scheme::kRand && d >= kRandMaxDim) {
    throw std::invalid_argument("max_q: random-sparsifier cost is only "
                                "monotone for d < 2^33");
  }
  std::size_t lo = 0;
  std::size_t hi = MaxSearchQ(scheme, d);
  if (hi == 0 || BitCost(scheme, d, 1) > budget) return 0;
  lo = 1;
  // Invariant: cost(lo) <= budget; answer in [lo, hi].
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo + 1) / 2;
    if (BitCost(scheme, d, mid) <= budget) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return lo;
}

SparseUpdate DsgdQuantize(std::span<const double> vec, std::size_t q) {
  const std::size_t d = vec.size();
  for (double v : vec) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("dsgd_quantize: non-finite entry");
    }
  }
  if (q == 0) return SparseUpdate::Empty(d);
  if (q > d / 2) {
    throw std::invalid_argument("dsgd_quantize: q=" + std::to_string(q) +
                                " exceeds floor(d/2)=" +
                                std::to_string(d / 2));
  }

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto larger = [&](std::size_t a, std::size_t b) {
    return vec[a] > vec[b] || (vec[a] == vec[b] && a < b);
  };
  auto smaller = [&](std::size_t a, std::size_t b) {
    return vec[a] < vec[b] || (vec[a] == vec[b] && a < b);
  };
  // order[0, q) = top q, order[q, 2q) = bottom q of the remainder.
  std::nth_element(order.begin(), order.begin() + (q - 1), order.end(),
                   larger);
  std::nth_element(order.begin() + q, order.begin() + (2 * q - 1),
                   order.end(), smaller);

  double pos_sum = 0.0, neg_sum = 0.0;
  std::size_t pos_n = 0, neg_n = 0;
  for (std::size_t k = 0; k < 2 * q; ++k) {
    const double v = vec[order[k]];
    if (v > 0.0) {
      pos_sum += v;
      ++pos_n;
    } else if (v < 0.0) {
      neg_sum += v;
      ++neg_n;
    }
  }
  const double q_pos = pos_n ? pos_sum / static_cast<double>(pos_n) : 0.0;
  const double q_neg = neg_n ? neg_sum / static_cast<double>(neg_n) : 0.0;
  const bool positive_wins = q_pos >= std::abs(q_neg);

  SparseUpdate out = SparseUpdate::Empty(d);
  for (std::size_t k = 0; k < 2 * q; ++k) {
    const std::size_t i = order[k];
    if (positive_wins ? vec[i] > 0.0 : vec[i] < 0.0) {
      out.indices.push_back(i);
    }
  }
  std::sort(out.indices.begin(), out.indices.end());
  out.values.assign(out.indices.size(), positive_wins ? q_pos : q_neg);
  return out;
}

std::uint32_t UniformQuantizer32::Encode(double magnitude) const {
  if (!(scale_ > 0.0)) return 0;
  const double x = std::clamp(std::abs(magnitude) / scale_, 0.0, 1.0);
  return static_cast<std::uint32_t>(
      std::llround(x * static_cast<double>(kMaxCode)));
}

double UniformQuantizer32::Decode(std::uint32_t code) const {
  return static_cast<double>(code) * scale_ / static_cast<double>(kMaxCode);
}

double UniformQuantizer32::RoundTrip(double value) const {
  const double mag = Decode(Encode(value));
  return std::signbit(value) ? -mag : mag;
}

SparseUpdate RandSparsify(std::span<const double> vec, std::size_t q,
                          Rng& rng) {
  const std::size_t d = vec.size();
  CheckQ(d, q, "rand_sparsify");
  SparseUpdate out = SparseUpdate::Empty(d);
  if (q == 0) return out;

  // Selection sampling: every q-subset is equally likely and the output
  // comes out sorted.
  out.indices.reserve(q);
  std::size_t needed = q;
  for (std::size_t i = 0; i < d && needed > 0; ++i) {
    const std::size_t remaining = d - i;
    std::uniform_int_distribution<std::size_t> pick(0, remaining - 1);
    if (pick(rng) < needed) {
      out.indices.push_back(i);
      --needed;
    }
  }

  double scale = 0.0;
  for (std::size_t i : out.indices) scale = std::max(scale, std::abs(vec[i]));
  const UniformQuantizer32 quantizer(scale);
  out.values.reserve(q);
  for (std::size_t i : out.indices) {
    out.values.push_back(quantizer.RoundTrip(vec[i]));
  }
  return out;
}

double SparseL2Norm(const SparseUpdate& u) {
  double sum = 0.0;
  for (double v : u.values) sum += v * v;
  return std::sqrt(sum);
}

}  // namespace fedsched
