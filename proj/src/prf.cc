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

#include <openssl/evp.h>
#include <openssl/hmac.h>

#include <array>
#include <string>

#include "qdb/errors.h"
#include "qdb/protocol.h"

namespace qdb {
namespace {

constexpr std::string_view kDomainLabel = "QDB-PRF/v1";

void AppendU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>(v >> shift));
  }
}

std::array<std::uint8_t, 32> HmacSha256(std::span<const std::uint8_t> key,
                                        std::span<const std::uint8_t> message) {
  std::array<std::uint8_t, 32> digest{};
  unsigned int length = 0;
  if (HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()),
           message.data(), message.size(), digest.data(), &length) == nullptr ||
      length != digest.size()) {
    throw std::runtime_error("HMAC-SHA256 failed");
  }
  return digest;
}

}  // namespace

std::vector<std::uint8_t> PackBits(const BitString& bits) {
  std::vector<std::uint8_t> bytes((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] & 1) bytes[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
  }
  return bytes;
}

std::string ToHex(const BitString& bits) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (std::uint8_t byte : PackBits(bits)) {
    out.push_back(kDigits[byte >> 4]);
    out.push_back(kDigits[byte & 0xf]);
  }
  return out;
}

RoundSecrets DeriveSecrets(const Key& key, const BitString& nonce_v,
                           const BitString& nonce_p, int n) {
  if (n < 1) throw ArgumentError("round count must be positive");
  if (nonce_v.size() != static_cast<std::size_t>(n) ||
      nonce_p.size() != static_cast<std::size_t>(n)) {
    throw ArgumentError("nonces must have exactly n bits");
  }
  const std::vector<std::uint8_t> key_bytes = PackBits(key.bits);

  // label || counter || n || N_v || N_p
  std::vector<std::uint8_t> message(kDomainLabel.begin(), kDomainLabel.end());
  const std::size_t counter_offset = message.size();
  AppendU32(message, 0);
  AppendU32(message, static_cast<std::uint32_t>(n));
  const auto packed_v = PackBits(nonce_v);
  const auto packed_p = PackBits(nonce_p);
  message.insert(message.end(), packed_v.begin(), packed_v.end());
  message.insert(message.end(), packed_p.begin(), packed_p.end());

  const std::size_t needed = 2 * static_cast<std::size_t>(n);
  BitString stream;
  stream.reserve(needed + 256);
  for (std::uint32_t counter = 0; stream.size() < needed; ++counter) {
    for (int i = 0; i < 4; ++i) {
      message[counter_offset + i] = static_cast<std::uint8_t>(counter >> (24 - 8 * i));
    }
    for (std::uint8_t byte : HmacSha256(key_bytes, message)) {
      for (int bit = 7; bit >= 0; --bit) stream.push_back((byte >> bit) & 1);
    }
  }

  RoundSecrets secrets;
  secrets.a.reserve(n);
  secrets.b.reserve(n);
  for (int i = 0; i < n; ++i) {
    secrets.a.push_back(BasisFromBit(stream[i]));
    secrets.b.push_back(BasisFromBit(stream[n + i]));
  }
  return secrets;
}

}  // namespace qdb
