// Copyright 2026 The QDB Lab Authors
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

#include "qdb/random.h"

namespace qdb {
namespace {

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kSplitGamma = 0xd1b54a32d192ed03ULL;
constexpr std::uint64_t kSeedTag = 0x5144422d6c616221ULL;

// SplitMix64 finalizer.
std::uint64_t Mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) : key_(Mix64(seed ^ kSeedTag)) {}

std::uint64_t RandomStream::NextU64() {
  ++counter_;
  return Mix64(key_ + counter_ * kGamma);
}

double RandomStream::NextUniform() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

std::uint8_t RandomStream::NextBit() {
  return static_cast<std::uint8_t>(NextU64() >> 63);
}

RandomStream RandomStream::Split(std::uint64_t index) const {
  return RandomStream(KeyTag{},
                      Mix64(Mix64(key_ ^ kSplitGamma) + (index + 1) * kGamma));
}

}  // namespace qdb
