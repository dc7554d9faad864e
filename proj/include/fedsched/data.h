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
#ifndef FEDSCHED_DATA_H_
#define FEDSCHED_DATA_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "fedsched/rng.h"

namespace fedsched {

// Labeled classification samples, features stored row-major.
struct Dataset {
  std::size_t num_features = 0;
  std::size_t num_classes = 0;
  std::vector<double> features;
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
  bool empty() const { return labels.empty(); }
  std::span<const double> Row(std::size_t i) const {
    return {features.data() + i * num_features, num_features};
  }
  Dataset Subset(std::span<const std::size_t> rows) const;
  std::vector<std::size_t> ClassHistogram() const;
  void Append(std::span<const double> row, int label);
  void Validate() const;
};

struct BlobSpec {
  std::size_t num_samples = 1000;
  std::size_t num_features = 2;
  std::size_t num_classes = 2;
  double separation = 3.0;  // norm of every class mean
  double noise = 1.0;       // per-coordinate standard deviation
};

// Gaussian class blobs with balanced labels (sample i has label
// i % num_classes). Class means are drawn once from class_rng so train and
// test sets built from the same class_rng seed share them.
Dataset MakeGaussianBlobs(const BlobSpec& spec, Rng& class_rng,
                          Rng& sample_rng);

// Fixture format (all little-endian):
//   "FSDS" | u32 version=1 | u64 samples | u64 features | u32 classes |
//   u32 reserved=0 | f64[samples*features] | i32[samples]
void SaveFixture(const Dataset& data, const std::filesystem::path& path);
Dataset LoadFixture(const std::filesystem::path& path);

// Standard IDX pair (big-endian, ubyte images 0x00000803 and labels
// 0x00000801). Pixels are scaled to [0, 1].
Dataset LoadIdx(const std::filesystem::path& images,
                const std::filesystem::path& labels);

struct DevicePartition {
  std::size_t device = 0;
  Dataset data;
};

// Each device gets B samples chosen uniformly at random from the dataset,
// without replacement within a device when B <= dataset size and with
// replacement otherwise. Devices draw independently of each other.
std::vector<DevicePartition> PartitionIid(const Dataset& data,
                                          std::size_t num_devices,
                                          std::size_t per_device, Rng& rng);

// Each device picks 2 distinct classes uniformly and takes B/2 random
// samples from each. Requires an even B and at least 2 classes present.
std::vector<DevicePartition> PartitionNonIid(const Dataset& data,
                                             std::size_t num_devices,
                                             std::size_t per_device,
                                             Rng& rng);

}  // namespace fedsched

#endif  // FEDSCHED_DATA_H_
