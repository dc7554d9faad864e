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
#ifndef FEDSCHED_RNG_H_
#define FEDSCHED_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace fedsched {

using Rng = std::mt19937_64;

// Purpose tags that keep independent streams derived from one master seed
// apart from each other.
enum class Stream : std::uint64_t {
  kChannel = 1,
  kSchedule = 2,
  kLocalSgd = 3,
  kSparsify = 4,
  kPartition = 5,
  kDataset = 6,
  kInit = 7,
  kReplica = 8,
};

// SplitMix64 finalizer.
std::uint64_t Mix64(std::uint64_t x);

// Counter-based seed derivation: folds every path component into the master
// seed with Mix64. A stream is addressed by e.g. {kLocalSgd, round, device},
// so adding replicas, rounds or devices never perturbs existing streams.
std::uint64_t DeriveSeed(std::uint64_t master,
                         std::initializer_list<std::uint64_t> path);

Rng MakeRng(std::uint64_t master, Stream stream,
            std::initializer_list<std::uint64_t> path = {});

}  // namespace fedsched

#endif  // FEDSCHED_RNG_H_
