// Copyright 2026 The fedrange Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fedrange/federation/secure_sum.h"

#include <sodium.h>

#include <algorithm>
#include <cmath>
#include <cstring>

#include "absl/strings/str_cat.h"

namespace fedrange {
namespace {

constexpr double kScale = static_cast<double>(uint64_t{1} << kFixedPointFractionBits);
constexpr double kMaxMagnitude = 0x1.0p43;

}  // namespace

absl::StatusOr<uint64_t> EncodeFixedPoint(double value) {
  if (!std::isfinite(value) || std::fabs(value) >= kMaxMagnitude) {
    return absl::OutOfRangeError(absl::StrCat("value ", value, " not representable"));
  }
  return static_cast<uint64_t>(std::llround(value * kScale));
}

double DecodeFixedPoint(uint64_t encoded) {
  return static_cast<double>(static_cast<int64_t>(encoded)) / kScale;
}

MaskKey DeriveMaskKey(absl::string_view secret, absl::string_view label) {
  static const bool initialized = sodium_init() >= 0;
  (void)initialized;
  // BLAKE2b keys are limited to 64 bytes, so long secrets are hashed first.
  unsigned char key[crypto_generichash_KEYBYTES];
  crypto_generichash(key, sizeof(key), reinterpret_cast<const unsigned char*>(secret.data()),
                     secret.size(), nullptr, 0);
  MaskKey out;
  crypto_generichash(out.data(), out.size(),
                     reinterpret_cast<const unsigned char*>(label.data()), label.size(),
                     key, sizeof(key));
  return out;
}

uint64_t MaskWord(const MaskKey& key, absl::string_view session, absl::string_view tag) {
  // Length-prefixing keeps (session, tag) pairs unambiguous.
  const std::string input = absl::StrCat(session.size(), ":", session, "|", tag);
  unsigned char digest[16];
  crypto_generichash(digest, sizeof(digest),
                     reinterpret_cast<const unsigned char*>(input.data()), input.size(),
                     key.data(), key.size());
  uint64_t word;
  std::memcpy(&word, digest, sizeof(word));
  return word;
}

uint64_t PairwiseMasker::PairMask(int i, int j, absl::string_view session) const {
  const MaskKey key = DeriveMaskKey(
      secret_, absl::StrCat("pair:", std::min(i, j), ":", std::max(i, j)));
  return MaskWord(key, session, "sum");
}

uint64_t PairwiseMasker::Mask(int self, std::span<const int> participants,
                              absl::string_view session, uint64_t encoded) const {
  uint64_t out = encoded;
  for (int other : participants) {
    if (other > self) out += PairMask(self, other, session);
    if (other < self) out -= PairMask(other, self, session);
  }
  return out;
}

SecureSumSession::SecureSumSession(std::vector<int> participants)
    : participants_(std::move(participants)) {
  std::sort(participants_.begin(), participants_.end());
}

absl::Status SecureSumSession::Add(int provider_id, uint64_t masked) {
  if (!std::binary_search(participants_.begin(), participants_.end(), provider_id)) {
    return absl::InvalidArgumentError(
        absl::StrCat("provider ", provider_id, " is not a participant"));
  }
  if (!contributions_.emplace(provider_id, masked).second) {
    return absl::InvalidArgumentError(
        absl::StrCat("provider ", provider_id, " contributed twice"));
  }
  return absl::OkStatus();
}

absl::StatusOr<uint64_t> SecureSumSession::Sum() const {
  if (!complete()) {
    for (int id : participants_) {
      if (!contributions_.contains(id)) {
        return absl::FailedPreconditionError(
            absl::StrCat("missing contribution from provider ", id));
      }
    }
  }
  uint64_t sum = 0;
  for (const auto& [id, masked] : contributions_) sum += masked;
  return sum;
}

uint64_t UnmaskedMaxSensitivity::Pad(int provider_id, absl::string_view session) const {
  return MaskWord(DeriveMaskKey(secret_, absl::StrCat("aggregator:", provider_id)), session,
                  "sensitivity");
}

absl::StatusOr<uint64_t> UnmaskedMaxSensitivity::Submit(int provider_id,
                                                        absl::string_view session,
                                                        double sensitivity) const {
  absl::StatusOr<uint64_t> encoded = EncodeFixedPoint(sensitivity);
  if (!encoded.ok()) return encoded.status();
  return *encoded + Pad(provider_id, session);
}

absl::StatusOr<double> UnmaskedMaxSensitivity::Max(
    absl::string_view session, const std::map<int, uint64_t>& submissions) const {
  if (submissions.empty()) return absl::FailedPreconditionError("no sensitivities");
  double max = -std::numeric_limits<double>::infinity();
  for (const auto& [id, masked] : submissions) {
    max = std::max(max, DecodeFixedPoint(masked - Pad(id, session)));
  }
  return max;
}

}  // namespace fedrange
