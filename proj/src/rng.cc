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
#include "fedsched/rng.h"

namespace fedsched {

std::uint64_t Mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t DeriveSeed(std::uint64_t master,
                         std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = Mix64(master);
  for (std::uint64_t p : path) {
    h = Mix64(h ^ Mix64(p + 0x632be59bd9b4e019ULL));
  }
  return h;
}

Rng MakeRng(std::uint64_t master, Stream stream,
            std::initializer_list<std::uint64_t> path) {
  std::uint64_t seed =
      DeriveSeed(master, {static_cast<std::uint64_t>(stream)});
  seed = DeriveSeed(seed, path);
  return Rng(seed);
}

}  // namespace fedsched
