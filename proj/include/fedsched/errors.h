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
#ifndef FEDSCHED_ERRORS_H_
#define FEDSCHED_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fedsched {

// A configuration key failed to parse or validate.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key.empty() ? message : key + ": " + message),
        key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// Training diverged (non-finite gradient or model).
class NumericalError : public std::runtime_error {
 public:
  NumericalError(std::size_t round, std::size_t device,
                 const std::string& message)
      : std::runtime_error("round " + std::to_string(round) + ", device " +
                           std::to_string(device) + ": " + message),
        round_(round),
        device_(device) {}
  std::size_t round() const { return round_; }
  std::size_t device() const { return device_; }

 private:
  std::size_t round_;
  std::size_t device_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fedsched

#endif  // FEDSCHED_ERRORS_H_
