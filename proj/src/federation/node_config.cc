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

#include "fedrange/federation/node_config.h"

#include <fstream>
#include <set>
#include <sstream>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "json.hpp"

namespace fedrange {
namespace {

using Json = nlohmann::json;

absl::Status Invalid(absl::string_view key, absl::string_view what) {
  return absl::InvalidArgumentError(absl::StrCat("config key '", key, "': ", what));
}

absl::Status CheckKeys(const Json& object, const std::set<std::string>& allowed,
                       absl::string_view where) {
  for (const auto& [key, value] : object.items()) {
    if (!allowed.contains(key)) {
      return absl::InvalidArgumentError(absl::StrCat("unknown ", where, " key '", key, "'"));
    }
  }
  return absl::OkStatus();
}

template <typename T>
absl::Status Read(const Json& object, const char* key, T& out) {
  if (!object.contains(key)) return absl::OkStatus();
  try {
    out = object.at(key).get<T>();
  } catch (const Json::exception& e) {
    return Invalid(key, e.what());
  }
  return absl::OkStatus();
}

absl::Status ReadEndpoint(const Json& object, const char* key, Endpoint& out) {
  std::string text;
  if (absl::Status s = Read(object, key, text); !s.ok() || text.empty()) return s;
  absl::StatusOr<Endpoint> e = ParseEndpoint(text);
  if (!e.ok()) return Invalid(key, e.status().message());
  out = *e;
  return absl::OkStatus();
}

absl::Status ParseBudget(const Json& object, AnalystPolicy& policy) {
  if (absl::Status s = CheckKeys(object, {"xi", "psi", "composition", "planned_queries"},
                                 "budget");
      !s.ok()) {
    return s;
  }
  std::string composition = "sequential";
  if (absl::Status s = Read(object, "xi", policy.total.epsilon); !s.ok()) return s;
  if (absl::Status s = Read(object, "psi", policy.total.delta); !s.ok()) return s;
  if (absl::Status s = Read(object, "composition", composition); !s.ok()) return s;
  if (absl::Status s = Read(object, "planned_queries", policy.planned_queries); !s.ok()) {
    return s;
  }
  if (composition == "sequential") {
    policy.mode = CompositionMode::kSequential;
  } else if (composition == "advanced") {
    policy.mode = CompositionMode::kAdvanced;
  } else {
    return Invalid("composition", absl::StrCat("unknown mode '", composition, "'"));
  }
  if (policy.planned_queries < 1) return Invalid("planned_queries", "must be positive");
  return policy.total.Validate();
}

}  // namespace

absl::StatusOr<NodeConfig> ParseNodeConfig(absl::string_view json_text) {
  Json root;
  try {
    root = Json::parse(json_text.begin(), json_text.end());
  } catch (const Json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("config is not valid JSON: ", e.what()));
  }
  if (!root.is_object()) return absl::InvalidArgumentError("config must be a JSON object");
  if (absl::Status s = CheckKeys(
          root,
          {"role", "listen", "peers", "provider_id", "num_providers", "data_dir", "meta_dir",
           "n_min", "hp", "smc_mode", "seed", "timeout_s", "mask_secret",
           "aggregator_secret", "budget"},
          "config");
      !s.ok()) {
    return s;
  }
  NodeConfig c;
  std::string role;
  if (absl::Status s = Read(root, "role", role); !s.ok()) return s;
  if (role == "provider") {
    c.role = NodeRole::kProvider;
  } else if (role == "aggregator") {
    c.role = NodeRole::kAggregator;
  } else {
    return Invalid("role", "must be \"provider\" or \"aggregator\"");
  }
  if (absl::Status s = ReadEndpoint(root, "listen", c.listen); !s.ok()) return s;
  std::vector<std::string> peers;
  if (absl::Status s = Read(root, "peers", peers); !s.ok()) return s;
  for (const std::string& p : peers) {
    absl::StatusOr<Endpoint> e = ParseEndpoint(p);
    if (!e.ok()) return Invalid("peers", e.status().message());
    c.peers.push_back(*e);
  }
  std::vector<double> hp;
  double timeout_s = 30;
  if (absl::Status s = Read(root, "provider_id", c.provider_id); !s.ok()) return s;
  if (absl::Status s = Read(root, "num_providers", c.num_providers); !s.ok()) return s;
  if (absl::Status s = Read(root, "data_dir", c.data_dir); !s.ok()) return s;
  if (absl::Status s = Read(root, "meta_dir", c.meta_dir); !s.ok()) return s;
  if (absl::Status s = Read(root, "n_min", c.n_min); !s.ok()) return s;
  if (absl::Status s = Read(root, "hp", hp); !s.ok()) return s;
  if (absl::Status s = Read(root, "smc_mode", c.smc_mode); !s.ok()) return s;
  if (absl::Status s = Read(root, "seed", c.seed); !s.ok()) return s;
  if (absl::Status s = Read(root, "timeout_s", timeout_s); !s.ok()) return s;
  if (absl::Status s = Read(root, "mask_secret", c.mask_secret); !s.ok()) return s;
  if (absl::Status s = Read(root, "aggregator_secret", c.aggregator_secret); !s.ok()) {
    return s;
  }
  if (root.contains("budget")) {
    if (!root["budget"].is_object()) return Invalid("budget", "must be an object");
    if (absl::Status s = ParseBudget(root["budget"], c.analyst_policy); !s.ok()) return s;
  }
  if (root.contains("hp")) {
    if (hp.size() != 3) return Invalid("hp", "needs three fractions");
    c.split = BudgetSplit{hp[0], hp[1], hp[2]};
  }
  if (absl::Status s = c.split.Validate(); !s.ok()) return s;
  if (!(timeout_s > 0)) return Invalid("timeout_s", "must be positive");
  c.timeout = absl::Seconds(timeout_s);
  if (c.n_min < 0) return Invalid("n_min", "must be non-negative");
  if (c.num_providers < 1) return Invalid("num_providers", "must be positive");
  if (c.provider_id < 0 || c.provider_id >= c.num_providers) {
    return Invalid("provider_id", "must lie in [0, num_providers)");
  }
  if (c.role == NodeRole::kAggregator && c.peers.empty()) {
    return Invalid("peers", "an aggregator needs at least one provider");
  }
  if (c.role == NodeRole::kProvider && c.data_dir.empty()) {
    return Invalid("data_dir", "a provider needs its data directory");
  }
  return c;
}

absl::StatusOr<NodeConfig> LoadNodeConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path.string()));
  std::stringstream text;
  text << in.rdbuf();
  absl::StatusOr<NodeConfig> config = ParseNodeConfig(text.str());
  if (!config.ok()) {
    return absl::Status(config.status().code(),
                        absl::StrCat(path.string(), ": ", config.status().message()));
  }
  return config;
}

ProviderConfig ToProviderConfig(const NodeConfig& config) {
  ProviderConfig p;
  p.provider_id = config.provider_id;
  for (int i = 0; i < config.num_providers; ++i) p.participants.push_back(i);
  p.n_min = config.n_min;
  p.smc_mode = config.smc_mode;
  p.seed = config.seed;
  p.mask_secret = config.mask_secret;
  p.aggregator_secret = config.aggregator_secret;
  return p;
}

AggregatorConfig ToAggregatorConfig(const NodeConfig& config) {
  AggregatorConfig a;
  a.smc_mode = config.smc_mode;
  a.split = config.split;
  a.timeout = config.timeout;
  a.seed = config.seed;
  a.aggregator_secret = config.aggregator_secret;
  return a;
}

}  // namespace fedrange
