// Copyright 2026 The cdsdmm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>

namespace cdsdmm {

/// Independent random streams derived from one master seed.
enum class SeedStream : std::uint64_t {
  kMask = 1,
  kAmplitudes = 2,
  kMatrix = 3,
  kNoise = 4,
};

/// SplitMix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for one stream: splitmix64(master ^ (stream * golden ratio constant)).
constexpr std::uint64_t derive_seed(std::uint64_t master, SeedStream stream) {
  return splitmix64(master ^ (static_cast<std::uint64_t>(stream) * 0x9e3779b97f4a7c15ULL));
}

}  // namespace cdsdmm
