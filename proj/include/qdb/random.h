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

#ifndef QDB_RANDOM_H_
#define QDB_RANDOM_H_

#include <cstdint>

namespace qdb {

// Counter-based, splittable random stream.
//
// Draw i of a stream with key k is a fixed function of (k, i), so a stream
// is fully described by its key and the number of draws consumed so far.
// Split() derives an independent child key without touching the parent's
// counter, which lets sessions and trials get their own streams in any
// order with bit-identical results.
//
// Every sampling routine in this library documents how many draws it
// consumes.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  // One draw.
  std::uint64_t NextU64();

  // One draw; uniform on [0, 1) with 53 bits of resolution.
  double NextUniform();

  // One draw; 0 or 1.
  std::uint8_t NextBit();

  // Child stream number `index`. Does not consume a draw.
  RandomStream Split(std::uint64_t index) const;

  std::uint64_t draws() const { return counter_; }
  std::uint64_t key() const { return key_; }

 private:
  struct KeyTag {};
  RandomStream(KeyTag, std::uint64_t key) : key_(key) {}

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace qdb

#endif  // QDB_RANDOM_H_
