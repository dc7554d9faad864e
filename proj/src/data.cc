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
#include "fedsched/data.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numeric>
#include <stdexcept>
#include <string>

#include "fedsched/errors.h"

namespace fedsched {
namespace {

constexpr std::array<char, 4> kFixtureMagic = {'F', 'S', 'D', 'S'};
constexpr std::uint32_t kFixtureVersion = 1;

template <typename T>
void PutLe(std::vector<unsigned char>& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  std::array<unsigned char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes.begin(), bytes.end());
  }
  out.insert(out.end(), bytes.begin(), bytes.end());
}

class ByteReader {
 public:
  ByteReader(std::vector<unsigned char> bytes, std::string source)
      : bytes_(std::move(bytes)), source_(std::move(source)) {}

  template <typename T>
  T Get(std::endian order) {
    if (pos_ + sizeof(T) > bytes_.size()) {
      throw IoError(source_ + ": truncated file");
    }
    std::array<unsigned char, sizeof(T)> raw;
    std::memcpy(raw.data(), bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    if (order != std::endian::native) std::reverse(raw.begin(), raw.end());
    T value;
    std::memcpy(&value, raw.data(), sizeof(T));
    return value;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::vector<unsigned char> bytes_;
  std::size_t pos_ = 0;
  std::string source_;
};

std::vector<unsigned char> ReadAll(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::size_t> SampleRows(std::span<const std::size_t> pool,
                                    std::size_t count, Rng& rng) {
  std::vector<std::size_t> rows;
  rows.reserve(count);
  if (count <= pool.size()) {
    std::vector<std::size_t> scratch(pool.begin(), pool.end());
    // Partial Fisher-Yates.
    for (std::size_t i = 0; i < count; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, scratch.size() - 1);
      std::swap(scratch[i], scratch[pick(rng)]);
      rows.push_back(scratch[i]);
    }
  } else {
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (std::size_t i = 0; i < count; ++i) rows.push_back(pool[pick(rng)]);
  }
  return rows;
}

}  // namespace

Dataset Dataset::Subset(std::span<const std::size_t> rows) const {
  Dataset out;
  out.num_features = num_features;
  out.num_classes = num_classes;
  out.features.reserve(rows.size() * num_features);
  out.labels.reserve(rows.size());
  for (std::size_t r : rows) {
    if (r >= size()) throw std::out_of_range("dataset: row out of range");
    out.Append(Row(r), labels[r]);
  }
  return out;
}

std::vector<std::size_t> Dataset::ClassHistogram() const {
  std::vector<std::size_t> hist(num_classes, 0);
  for (int y : labels) ++hist.at(static_cast<std::size_t>(y));
  return hist;
}

void Dataset::Append(std::span<const double> row, int label) {
  features.insert(features.end(), row.begin(), row.end());
  labels.push_back(label);
}

void Dataset::Validate() const {
  if (num_features == 0 || num_classes == 0) {
    throw std::invalid_argument("dataset: zero features or classes");
  }
  if (features.size() != labels.size() * num_features) {
    throw std::invalid_argument("dataset: feature buffer size mismatch");
  }
  for (int y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= num_classes) {
      throw std::invalid_argument("dataset: label out of range");
    }
  }
}

Dataset MakeGaussianBlobs(const BlobSpec& spec, Rng& class_rng,
                          Rng& sample_rng) {
  if (spec.num_features == 0 || spec.num_classes == 0) {
    throw std::invalid_argument("blobs: zero features or classes");
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> means(spec.num_classes * spec.num_features);
  for (std::size_t c = 0; c < spec.num_classes; ++c) {
    double norm_sq = 0.0;
    double* mean = means.data() + c * spec.num_features;
    for (std::size_t f = 0; f < spec.num_features; ++f) {
      mean[f] = normal(class_rng);
      norm_sq += mean[f] * mean[f];
    }
    const double scale = spec.separation / std::sqrt(norm_sq);
    for (std::size_t f = 0; f < spec.num_features; ++f) mean[f] *= scale;
  }

  Dataset out;
  out.num_features = spec.num_features;
  out.num_classes = spec.num_classes;
  out.features.reserve(spec.num_samples * spec.num_features);
  std::vector<double> row(spec.num_features);
  for (std::size_t i = 0; i < spec.num_samples; ++i) {
    const std::size_t c = i % spec.num_classes;
    for (std::size_t f = 0; f < spec.num_features; ++f) {
      row[f] = means[c * spec.num_features + f] + spec.noise * normal(sample_rng);
    }
    out.Append(row, static_cast<int>(c));
  }
  return out;
}

void SaveFixture(const Dataset& data, const std::filesystem::path& path) {
  data.Validate();
  std::vector<unsigned char> bytes(kFixtureMagic.begin(), kFixtureMagic.end());
  PutLe<std::uint32_t>(bytes, kFixtureVersion);
  PutLe<std::uint64_t>(bytes, data.size());
  PutLe<std::uint64_t>(bytes, data.num_features);
  PutLe<std::uint32_t>(bytes, static_cast<std::uint32_t>(data.num_classes));
  PutLe<std::uint32_t>(bytes, 0);
  for (double v : data.features) PutLe<double>(bytes, v);
  for (int y : data.labels) PutLe<std::int32_t>(bytes, y);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

Dataset LoadFixture(const std::filesystem::path& path) {
  std::vector<unsigned char> raw = ReadAll(path);
  if (raw.size() < 4 ||
      !std::equal(kFixtureMagic.begin(), kFixtureMagic.end(), raw.begin())) {
    throw IoError(path.string() + ": not a fixture file (bad magic)");
  }
  ByteReader in(std::vector<unsigned char>(raw.begin() + 4, raw.end()),
                path.string());
  constexpr auto le = std::endian::little;
  if (in.Get<std::uint32_t>(le) != kFixtureVersion) {
    throw IoError(path.string() + ": unsupported fixture version");
  }
  const auto samples = in.Get<std::uint64_t>(le);
  const auto features = in.Get<std::uint64_t>(le);
  const auto classes = in.Get<std::uint32_t>(le);
  in.Get<std::uint32_t>(le);
  if (in.remaining() != samples * features * 8 + samples * 4) {
    throw IoError(path.string() + ": payload size does not match header");
  }
  Dataset out;
  out.num_features = features;
  out.num_classes = classes;
  out.features.reserve(samples * features);
  for (std::uint64_t i = 0; i < samples * features; ++i) {
    out.features.push_back(in.Get<double>(le));
  }
  for (std::uint64_t i = 0; i < samples; ++i) {
    out.labels.push_back(in.Get<std::int32_t>(le));
  }
  try {
    out.Validate();
  } catch (const std::invalid_argument& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  return out;
}

Dataset LoadIdx(const std::filesystem::path& images,
                const std::filesystem::path& labels) {
  constexpr auto be = std::endian::big;
  ByteReader img(ReadAll(images), images.string());
  if (img.Get<std::uint32_t>(be) != 0x00000803) {
    throw IoError(images.string() + ": bad IDX image magic");
  }
  const std::uint32_t n = img.Get<std::uint32_t>(be);
  const std::uint32_t rows = img.Get<std::uint32_t>(be);
  const std::uint32_t cols = img.Get<std::uint32_t>(be);

  ByteReader lab(ReadAll(labels), labels.string());
  if (lab.Get<std::uint32_t>(be) != 0x00000801) {
    throw IoError(labels.string() + ": bad IDX label magic");
  }
  if (lab.Get<std::uint32_t>(be) != n) {
    throw IoError("IDX image/label counts differ");
  }

  Dataset out;
  out.num_features = static_cast<std::size_t>(rows) * cols;
  out.features.reserve(static_cast<std::size_t>(n) * out.num_features);
  int max_label = 0;
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::size_t p = 0; p < out.num_features; ++p) {
      out.features.push_back(img.Get<std::uint8_t>(be) / 255.0);
    }
    const int y = lab.Get<std::uint8_t>(be);
    max_label = std::max(max_label, y);
    out.labels.push_back(y);
  }
  out.num_classes = static_cast<std::size_t>(max_label) + 1;
  return out;
}

std::vector<DevicePartition> PartitionIid(const Dataset& data,
                                          std::size_t num_devices,
                                          std::size_t per_device, Rng& rng) {
  if (data.empty()) throw std::invalid_argument("partition_iid: empty dataset");
  if (per_device == 0) {
    throw std::invalid_argument("partition_iid: B must be >= 1");
  }
  std::vector<std::size_t> all(data.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::vector<DevicePartition> parts;
  parts.reserve(num_devices);
  for (std::size_t m = 0; m < num_devices; ++m) {
    const std::vector<std::size_t> rows = SampleRows(all, per_device, rng);
    parts.push_back({m, data.Subset(rows)});
  }
  return parts;
}

std::vector<DevicePartition> PartitionNonIid(const Dataset& data,
                                             std::size_t num_devices,
                                             std::size_t per_device,
                                             Rng& rng) {
  if (per_device == 0 || per_device % 2 != 0) {
    throw std::invalid_argument("partition_noniid: B must be even and >= 2");
  }
  std::vector<std::vector<std::size_t>> by_class(data.num_classes);
  for (std::size_t i = 0; i < data.size(); ++i) {
    by_class[static_cast<std::size_t>(data.labels[i])].push_back(i);
  }
  std::vector<std::size_t> present;
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    if (!by_class[c].empty()) present.push_back(c);
  }
  if (present.size() < 2) {
    throw std::invalid_argument("partition_noniid: need >= 2 classes");
  }
  std::vector<DevicePartition> parts;
  parts.reserve(num_devices);
  for (std::size_t m = 0; m < num_devices; ++m) {
    const std::vector<std::size_t> picked = SampleRows(present, 2, rng);
    std::vector<std::size_t> rows =
        SampleRows(by_class[picked[0]], per_device / 2, rng);
    const std::vector<std::size_t> second =
        SampleRows(by_class[picked[1]], per_device / 2, rng);
    rows.insert(rows.end(), second.begin(), second.end());
    parts.push_back({m, data.Subset(rows)});
  }
  return parts;
}

}  // namespace fedsched
