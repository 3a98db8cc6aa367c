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

#ifndef FEDRANGE_FEDERATION_SECURE_SUM_H_
#define FEDRANGE_FEDERATION_SECURE_SUM_H_

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace fedrange {

// Values travel as signed fixed point with 20 fractional bits, stored in
// two's complement and added modulo 2^64.
inline constexpr int kFixedPointFractionBits = 20;

// OutOfRange for non-finite values and magnitudes of 2^43 or more.
absl::StatusOr<uint64_t> EncodeFixedPoint(double value);
double DecodeFixedPoint(uint64_t encoded);

using MaskKey = std::array<uint8_t, 32>;

// Keyed BLAKE2b of `label` under `secret`.
MaskKey DeriveMaskKey(absl::string_view secret, absl::string_view label);

// 64 pseudorandom bits bound to (key, session, tag).
uint64_t MaskWord(const MaskKey& key, absl::string_view session, absl::string_view tag);

// Pairwise additive masks among providers that share `secret`. The mask of
// the unordered pair {i, j} is derived from the secret, both ids and the
// session, so each session uses fresh masks.
class PairwiseMasker {
 public:
  explicit PairwiseMasker(std::string secret) : secret_(std::move(secret)) {}

  uint64_t PairMask(int i, int j, absl::string_view session) const;

  // encoded + sum_{j > self} m(self, j) - sum_{j < self} m(j, self), over
  // the other participants.
  uint64_t Mask(int self, std::span<const int> participants,
                absl::string_view session, uint64_t encoded) const;

 private:
  std::string secret_;
};

// Collects one masked contribution per participant and releases only their
// modular sum, which equals the sum of the encoded values.
class SecureSumSession {
 public:
  explicit SecureSumSession(std::vector<int> participants);

  // InvalidArgument for non-participants and repeated contributions.
  absl::Status Add(int provider_id, uint64_t masked);
  bool complete() const { return contributions_.size() == participants_.size(); }
  // FailedPrecondition while any contribution is missing.
  absl::StatusOr<uint64_t> Sum() const;

 private:
  std::vector<int> participants_;
  std::map<int, uint64_t> contributions_;
};

// How the aggregator learns the maximum smooth sensitivity across providers.
class MaxSensitivityProtocol {
 public:
  virtual ~MaxSensitivityProtocol() = default;
  // Provider side: what provider `provider_id` sends for `sensitivity`.
  virtual absl::StatusOr<uint64_t> Submit(int provider_id, absl::string_view session,
                                          double sensitivity) const = 0;
  // Aggregator side: the maximum over every provider's submission.
  virtual absl::StatusOr<double> Max(absl::string_view session,
                                     const std::map<int, uint64_t>& submissions) const = 0;
};

// Reference protocol. Each provider pads its sensitivity with a word keyed by
// a secret it shares with the aggregator; the aggregator strips the pads and
// takes the maximum. The aggregator therefore sees every provider's
// sensitivity, though never an unmasked estimate.
class UnmaskedMaxSensitivity : public MaxSensitivityProtocol {
 public:
  explicit UnmaskedMaxSensitivity(std::string secret) : secret_(std::move(secret)) {}

  absl::StatusOr<uint64_t> Submit(int provider_id, absl::string_view session,
                                  double sensitivity) const override;
  absl::StatusOr<double> Max(absl::string_view session,
                             const std::map<int, uint64_t>& submissions) const override;

 private:
  uint64_t Pad(int provider_id, absl::string_view session) const;

  std::string secret_;
};

}  // namespace fedrange

#endif  // FEDRANGE_FEDERATION_SECURE_SUM_H_
