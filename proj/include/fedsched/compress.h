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
#ifndef FEDSCHED_COMPRESS_H_
#define FEDSCHED_COMPRESS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "fedsched/rng.h"

namespace fedsched {

// A d-dimensional vector in sparse form; the unit sent uplink.
struct SparseUpdate {
  std::size_t dim = 0;
  std::vector<std::size_t> indices;  // strictly increasing, < dim
  std::vector<double> values;        // one per index

  bool empty() const { return indices.empty(); }
  std::size_t nnz() const { return indices.size(); }

  // Throws std::invalid_argument if the invariants above are broken.
  void Validate() const;
  std::vector<double> ToDense() const;
  // dense += scale * this
  void AddTo(std::span<double> dense, double scale = 1.0) const;

  static SparseUpdate Empty(std::size_t dim);
  static SparseUpdate FromDense(std::span<const double> dense);
};

enum class Scheme { kDsgd, kRand };

std::string_view SchemeName(Scheme scheme);

// log2 C(d, q) through log-gamma.
double Log2Binomial(std::size_t d, std::size_t q);

// log2 C(d, q) + 33: positions plus one 32-bit magnitude and a sign bit.
double BitCostDsgd(std::size_t d, std::size_t q);
// log2 C(d, q) + 33 q: positions plus 33 bits per kept entry.
double BitCostRand(std::size_t d, std::size_t q);
double BitCost(Scheme scheme, std::size_t d, std::size_t q);

// Upper end of the sparsity search range: floor(d/2) for D-SGD (the cost is
// unimodal with its peak there), d for the random sparsifier.
std::size_t MaxSearchQ(Scheme scheme, std::size_t d);

// Largest q in [0, MaxSearchQ] with BitCost(q) <= budget. Returns 0 when no
// q >= 1 fits, including budgets below the q = 0 overhead.
std::size_t MaxQ(std::size_t d, double budget, Scheme scheme);

// D-SGD: keep the q largest and q smallest entries, then send only the
// winning sign's kept entries at their common mean value. Ties in the
// ordering go to the lower index; q+ == |q-| goes to the positive side.
SparseUpdate DsgdQuantize(std::span<const double> vec, std::size_t q);

// Uniform 32-bit magnitude quantizer over [0, scale] with a separate sign.
class UniformQuantizer32 {
 public:
  static constexpr std::uint64_t kMaxCode = 0xFFFFFFFFULL;

  explicit UniformQuantizer32(double scale) : scale_(scale) {}

  std::uint32_t Encode(double magnitude) const;
  double Decode(std::uint32_t code) const;
  // Encode then decode, keeping the sign of value.
  double RoundTrip(double value) const;
  double scale() const { return scale_; }

 private:
  double scale_;
};

// Random sparsifier: a uniformly random q-subset of coordinates is kept and
// each kept value goes through UniformQuantizer32 scaled to max |kept|.
SparseUpdate RandSparsify(std::span<const double> vec, std::size_t q,
                          Rng& rng);

double SparseL2Norm(const SparseUpdate& u);

}  // namespace fedsched

#endif  // FEDSCHED_COMPRESS_H_
