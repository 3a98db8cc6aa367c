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

#ifndef FEDRANGE_FEDERATION_NODE_CONFIG_H_
#define FEDRANGE_FEDERATION_NODE_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "absl/time/time.h"
#include "fedrange/dp/accountant.h"
#include "fedrange/federation/aggregator.h"
#include "fedrange/federation/provider.h"
#include "fedrange/federation/tcp.h"

namespace fedrange {

enum class NodeRole { kProvider, kAggregator };

// One node's deployment settings, read from a JSON file:
//
//   {"role": "provider", "listen": "0.0.0.0:7101", "provider_id": 0,
//    "num_providers": 4, "data_dir": "p0/data", "meta_dir": "p0/meta",
//    "n_min": 10, "hp": [0.1, 0.1, 0.8], "smc_mode": false, "seed": 7,
//    "timeout_s": 30, "mask_secret": "...", "aggregator_secret": "..."}
//
// Aggregators list provider endpoints in "peers" (in provider-id order) and
// may carry an analyst "budget": {"xi": 1, "psi": 1e-6, "composition":
// "sequential" | "advanced", "planned_queries": 100}. Unknown keys are
// rejected.
struct NodeConfig {
  NodeRole role = NodeRole::kProvider;
  Endpoint listen{"127.0.0.1", 0};
  std::vector<Endpoint> peers;
  int provider_id = 0;
  int num_providers = 1;
  std::string data_dir;
  std::string meta_dir;
  int n_min = 0;
  BudgetSplit split;
  bool smc_mode = false;
  uint64_t seed = 1;
  absl::Duration timeout = absl::Seconds(30);
  std::string mask_secret = "fedrange-mask";
  std::string aggregator_secret = "fedrange-aggregator";
  AnalystPolicy analyst_policy;
};

absl::StatusOr<NodeConfig> ParseNodeConfig(absl::string_view json_text);
absl::StatusOr<NodeConfig> LoadNodeConfig(const std::filesystem::path& path);

ProviderConfig ToProviderConfig(const NodeConfig& config);
AggregatorConfig ToAggregatorConfig(const NodeConfig& config);

}  // namespace fedrange

#endif  // FEDRANGE_FEDERATION_NODE_CONFIG_H_
