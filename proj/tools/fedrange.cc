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

// fedrange: data preparation, node servers and benchmarks for the federated
// range-query engine.

#include <signal.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "fedrange/bench/attack.h"
#include "fedrange/bench/datagen.h"
#include "fedrange/bench/report.h"
#include "fedrange/bench/smc_compare.h"
#include "fedrange/bench/workload.h"
#include "fedrange/datamodel/cluster.h"
#include "fedrange/datamodel/storage.h"
#include "fedrange/dp/random.h"
#include "fedrange/federation/aggregator.h"
#include "fedrange/federation/node_config.h"
#include "fedrange/federation/provider.h"
#include "fedrange/federation/tcp.h"
#include "fedrange/metastore/metadata_io.h"

namespace fs = std::filesystem;

namespace fedrange {
namespace {

// Where the data for a local federation comes from.
struct SourceFlags {
  std::string preset = "adult";
  std::string csv;
  std::string data;  // directory of provider-* subdirectories
  int64_t rows = 400'000;
  uint64_t data_seed = 1;
  int providers = 4;
};

// Engine settings shared by most subcommands.
struct EngineFlags {
  std::string config;
  uint64_t seed = 1;
  double sample_rate = 0.2;
  double epsilon = 1.0;
  double delta = 1e-3;
  std::string hp = "0.1,0.1,0.8";
  int n_min = kDefaultNMin;
  bool smc = false;
  int capacity = 0;
  double capacity_fraction = 0.01;
};

struct OutputFlags {
  std::string out;
  std::string format = "table";
};

absl::StatusOr<BudgetSplit> ParseSplit(const std::string& text) {
  std::vector<std::string> parts = absl::StrSplit(text, ',');
  BudgetSplit split;
  if (parts.size() != 3 || !absl::SimpleAtod(parts[0], &split.overview) ||
      !absl::SimpleAtod(parts[1], &split.sampling) ||
      !absl::SimpleAtod(parts[2], &split.estimate)) {
    return absl::InvalidArgumentError(
        absl::StrCat("--hp expects three comma-separated fractions, got '", text, "'"));
  }
  return split;
}

void AddSourceFlags(CLI::App* app, SourceFlags& f) {
  app->add_option("--preset", f.preset, "Synthetic data preset")
      ->check(CLI::IsMember({"adult"}));
  app->add_option("--csv", f.csv, "CSV file with a header row (overrides --preset)");
  app->add_option("--data", f.data,
                  "Directory of provider-* data written by `ingest` (overrides --csv)");
  app->add_option("--rows", f.rows, "Rows generated for a preset");
  app->add_option("--data-seed", f.data_seed, "Seed for data generation and partitioning");
  app->add_option("--providers", f.providers, "Provider count for --preset and --csv")
      ->check(CLI::PositiveNumber);
}

void AddEngineFlags(CLI::App* app, EngineFlags& f) {
  app->add_option("--config", f.config, "Node configuration JSON")
      ->envname("FEDRANGE_CONFIG");
  app->add_option("--seed", f.seed, "Engine seed");
  app->add_option("--sr", f.sample_rate, "Sample rate in (0, 1)");
  app->add_option("--epsilon", f.epsilon, "Per-query epsilon");
  app->add_option("--delta", f.delta, "Per-query delta");
  app->add_option("--hp", f.hp, "Epsilon split: overview,sampling,estimate");
  app->add_option("--n-min", f.n_min, "Minimum candidate clusters before sampling");
  app->add_flag("--smc", f.smc, "Secure aggregation of the provider results");
  app->add_option("--capacity", f.capacity, "Cluster capacity S (0 derives it)");
  app->add_option("--capacity-fraction", f.capacity_fraction,
                  "S as a fraction of the mean per-provider tensor rows");
}

void AddOutputFlags(CLI::App* app, OutputFlags& f) {
  app->add_option("--out", f.out, "Report path (stdout when empty)");
  app->add_option("--format", f.format, "Report format")->check(CLI::IsMember({"csv", "table"}));
}

// Engine flags not given on the command line fall back to --config.
absl::StatusOr<FederationOptions> ResolveOptions(const CLI::App& app, EngineFlags& f) {
  FederationOptions o;
  absl::StatusOr<BudgetSplit> split = ParseSplit(f.hp);
  if (!split.ok()) return split.status();
  o.split = *split;
  if (!f.config.empty()) {
    absl::StatusOr<NodeConfig> config = LoadNodeConfig(f.config);
    if (!config.ok()) return config.status();
    if (app.count("--seed") == 0) f.seed = config->seed;
    if (app.count("--n-min") == 0 && config->n_min > 0) f.n_min = config->n_min;
    if (app.count("--hp") == 0) o.split = config->split;
    if (app.count("--smc") == 0) f.smc = config->smc_mode;
    o.mask_secret = config->mask_secret;
    o.aggregator_secret = config->aggregator_secret;
  }
  o.capacity = f.capacity;
  o.capacity_fraction = f.capacity_fraction;
  o.n_min = f.n_min;
  o.smc_mode = f.smc;
  o.seed = f.seed;
  return o;
}

std::vector<fs::path> ProviderDirs(const fs::path& root) {
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && entry.path().filename().string().rfind("provider-", 0) == 0) {
      dirs.push_back(entry.path());
    }
  }
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

absl::StatusOr<CountTensor> SourceTensor(const SourceFlags& s) {
  if (!s.csv.empty()) {
    absl::StatusOr<Table> table = ReadCsvTable(s.csv);
    if (!table.ok()) return table.status();
    std::vector<std::string> names;
    for (const Dimension& d : table->dimensions()) names.push_back(d.name);
    return BuildCountTensor(*table, names);
  }
  return AdultLikeTensor(s.rows, s.data_seed);
}

absl::StatusOr<std::unique_ptr<LocalFederation>> LoadFederation(const SourceFlags& s,
                                                                const FederationOptions& o) {
  if (!s.data.empty()) {
    std::vector<ProviderData> data;
    std::vector<ProviderMetadata> metadata;
    bool have_meta = true;
    for (const fs::path& dir : ProviderDirs(s.data)) {
      absl::StatusOr<ProviderData> d = ReadProviderData(dir);
      if (!d.ok()) return d.status();
      data.push_back(*std::move(d));
      if (fs::exists(dir / "meta")) {
        absl::StatusOr<ProviderMetadata> m = LoadMetadata(dir / "meta");
        if (!m.ok()) return m.status();
        metadata.push_back(*std::move(m));
      } else {
        have_meta = false;
      }
    }
    if (data.empty()) return absl::NotFoundError(absl::StrCat("no provider-* in ", s.data));
    if (!have_meta) return LocalFederation::FromProviderData(std::move(data), o);
    return LocalFederation::FromProviderData(std::move(data), o, std::move(metadata));
  }
  absl::StatusOr<CountTensor> tensor = SourceTensor(s);
  if (!tensor.ok()) return tensor.status();
  absl::StatusOr<std::vector<CountTensor>> parts =
      PartitionHorizontal(*tensor, s.providers, MixSeed(s.data_seed, 0x9a));
  if (!parts.ok()) return parts.status();
  return LocalFederation::Create(*parts, o);
}

absl::Status Emit(const Report& report, const OutputFlags& out) {
  absl::StatusOr<ReportFormat> format = ParseReportFormat(out.format);
  if (!format.ok()) return format.status();
  if (out.out.empty()) {
    std::cout << RenderReport(report, *format);
    return absl::OkStatus();
  }
  return EmitReport(report, out.out, *format);
}

// Blocks until SIGINT or SIGTERM, then stops `server`.
void ServeUntilSignal(TcpServer& server) {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&set, &sig);
    server.Stop();
  });
  server.Wait();
  waiter.detach();
}

absl::Status Ingest(const SourceFlags& s, const EngineFlags& e, const std::string& out) {
  absl::StatusOr<CountTensor> tensor = SourceTensor(s);
  if (!tensor.ok()) return tensor.status();
  absl::StatusOr<std::vector<CountTensor>> parts =
      PartitionHorizontal(*tensor, s.providers, MixSeed(s.data_seed, 0x9a));
  if (!parts.ok()) return parts.status();
  FederationOptions o;
  o.capacity = e.capacity;
  o.capacity_fraction = e.capacity_fraction;
  std::vector<size_t> rows;
  for (const CountTensor& t : *parts) rows.push_back(t.num_rows());
  const int capacity = DeriveCapacity(o, rows);
  for (size_t i = 0; i < parts->size(); ++i) {
    absl::StatusOr<std::vector<Cluster>> clusters =
        SplitIntoClusters((*parts)[i], capacity, ClusterOrder::kSortedByFirstDimension);
    if (!clusters.ok()) return clusters.status();
    ProviderData data{(*parts)[i].schema(), capacity, *std::move(clusters)};
    const fs::path dir = fs::path(out) / absl::StrCat("provider-", i);
    if (absl::Status st = WriteProviderData(dir, data); !st.ok()) return st;
    std::cout << dir.string() << ": " << (*parts)[i].num_rows() << " tensor rows in "
              << data.clusters.size() << " clusters of capacity " << capacity << "\n";
  }
  return absl::OkStatus();
}

absl::Status BuildMeta(const std::string& data_dir, std::string out, int n_min) {
  std::vector<fs::path> dirs = ProviderDirs(data_dir);
  if (dirs.empty()) dirs.push_back(data_dir);  // a single provider directory
  for (const fs::path& dir : dirs) {
    absl::StatusOr<ProviderData> data = ReadProviderData(dir);
    if (!data.ok()) return data.status();
    absl::StatusOr<ProviderMetadata> meta = BuildMetadata(data->clusters, data->capacity, n_min);
    if (!meta.ok()) return meta.status();
    const fs::path target = out.empty() || dirs.size() > 1 ? dir / "meta" : fs::path(out);
    if (absl::Status st = SaveMetadata(target, *meta); !st.ok()) return st;
    std::cout << target.string() << ": metadata for " << data->clusters.size() << " clusters\n";
  }
  return absl::OkStatus();
}

absl::Status ServeProvider(const std::string& config_path) {
  absl::StatusOr<NodeConfig> config = LoadNodeConfig(config_path);
  if (!config.ok()) return config.status();
  if (config->role != NodeRole::kProvider) {
    return absl::InvalidArgumentError("configuration is not for a provider");
  }
  absl::StatusOr<ProviderData> data = ReadProviderData(config->data_dir);
  if (!data.ok()) return data.status();
  const int n_min = config->n_min > 0 ? config->n_min : kDefaultNMin;
  absl::StatusOr<ProviderMetadata> meta =
      config->meta_dir.empty() ? BuildMetadata(data->clusters, data->capacity, n_min)
                               : LoadMetadata(config->meta_dir);
  if (!meta.ok()) return meta.status();
  absl::StatusOr<std::unique_ptr<ProviderNode>> node =
      ProviderNode::Create(ToProviderConfig(*config), data->schema,
                           ClusterStore(std::move(data->clusters)), *std::move(meta));
  if (!node.ok()) return node.status();
  ProviderNode* p = node->get();
  absl::StatusOr<std::unique_ptr<TcpServer>> server =
      TcpServer::Start(config->listen, [p](const Message& m) { return p->Handle(m); });
  if (!server.ok()) return server.status();
  std::cout << "provider " << config->provider_id << " listening on " << config->listen.host
            << ":" << (*server)->port() << std::endl;
  ServeUntilSignal(**server);
  return absl::OkStatus();
}

absl::Status ServeAggregator(const std::string& config_path) {
  absl::StatusOr<NodeConfig> config = LoadNodeConfig(config_path);
  if (!config.ok()) return config.status();
  if (config->role != NodeRole::kAggregator) {
    return absl::InvalidArgumentError("configuration is not for an aggregator");
  }
  std::vector<Aggregator::ProviderLink> links;
  for (size_t i = 0; i < config->peers.size(); ++i) {
    links.push_back({static_cast<int>(i), std::make_unique<TcpChannel>(config->peers[i])});
  }
  AggregatorConfig agg_config = ToAggregatorConfig(*config);
  if (agg_config.id_prefix.empty()) {
    // Query ids must never repeat for a provider seed, also across restarts.
    std::random_device rd;
    agg_config.id_prefix = absl::StrCat(absl::Hex((uint64_t{rd()} << 32) | rd()));
  }
  Aggregator aggregator(agg_config, std::move(links));
  AnalystFrontend frontend(&aggregator, config->analyst_policy);
  absl::StatusOr<std::unique_ptr<TcpServer>> server = TcpServer::Start(
      config->listen, [&frontend](const Message& m) { return frontend.Handle(m); });
  if (!server.ok()) return server.status();
  std::cout << "aggregator for " << config->peers.size() << " providers listening on "
            << config->listen.host << ":" << (*server)->port() << std::endl;
  ServeUntilSignal(**server);
  return absl::OkStatus();
}

struct WorkloadFlags {
  int m = 50;
  int n = 2;
  std::string aggregation = "COUNT";
  double min_width = 0.5;
  bool approx_only = true;
  std::string aggregator;  // host:port of a running aggregator
  std::string analyst = "analyst";
  double xi = 0.0;  // 0: enough for the whole workload
  double psi = 0.0;
};

absl::Status RunWorkloadCommand(const CLI::App& app, const SourceFlags& s, EngineFlags& e,
                                const WorkloadFlags& w, const OutputFlags& out) {
  absl::StatusOr<FederationOptions> o = ResolveOptions(app, e);
  if (!o.ok()) return o.status();
  absl::StatusOr<std::unique_ptr<LocalFederation>> fed = LoadFederation(s, *o);
  if (!fed.ok()) return fed.status();
  absl::StatusOr<Aggregation> agg = ParseAggregation(w.aggregation);
  if (!agg.ok()) return agg.status();
  WorkloadSpec spec;
  spec.m = w.m;
  spec.n = w.n;
  spec.aggregation = *agg;
  spec.sample_rate = e.sample_rate;
  spec.seed = e.seed;
  spec.min_width_fraction = w.min_width;
  absl::StatusOr<std::vector<RangeQuery>> queries = GenerateWorkload(
      spec, (*fed)->schema(), w.approx_only ? ApproximationFilter(**fed) : QueryFilter());
  if (!queries.ok()) return queries.status();
  const Budget per_query{e.epsilon, e.delta};
  const Baseline baseline = BaselineOf(**fed);
  MetricsReport metrics;
  if (!w.aggregator.empty()) {
    absl::StatusOr<Endpoint> endpoint = ParseEndpoint(w.aggregator);
    if (!endpoint.ok()) return endpoint.status();
    RemoteTarget target(*endpoint, w.analyst, absl::Seconds(30));
    metrics = RunWorkload(*queries, e.sample_rate, per_query, target, baseline, "remote");
  } else {
    const Budget total{w.xi > 0 ? w.xi : e.epsilon * w.m, w.psi > 0 ? w.psi : e.delta * w.m};
    Accountant accountant = Accountant::Sequential(total);
    LocalTarget target(fed->get(), &accountant);
    metrics = RunWorkload(*queries, e.sample_rate, per_query, target, baseline,
                          e.smc ? "smc" : "plain", fed->get());
  }
  return Emit(WorkloadReport(metrics), out);
}

struct AttackFlags {
  std::vector<std::string> qi{"workclass", "marital", "education"};
  std::string sa = "hours";
  std::vector<std::string> compositions{"sequential", "advanced"};
  std::vector<double> xi{1.0, 100.0};
  double psi = 1e-6;
  bool oracle = true;
};

absl::Status AttackCommand(const CLI::App& app, const SourceFlags& s, EngineFlags& e,
                           const AttackFlags& a, const OutputFlags& out) {
  absl::StatusOr<FederationOptions> o = ResolveOptions(app, e);
  if (!o.ok()) return o.status();
  absl::StatusOr<std::unique_ptr<LocalFederation>> fed = LoadFederation(s, *o);
  if (!fed.ok()) return fed.status();
  std::vector<AttackCell> cells;
  AttackConfig config;
  config.quasi_identifiers = a.qi;
  config.sensitive = a.sa;
  config.sample_rate = e.sample_rate;
  for (const std::string& name : a.compositions) {
    absl::StatusOr<AttackComposition> mode = ParseAttackComposition(name);
    if (!mode.ok()) return mode.status();
    for (double xi : a.xi) {
      config.composition = *mode;
      config.total = {xi, a.psi};
      absl::StatusOr<AttackResult> r = RunNbcAttack(config, **fed);
      if (!r.ok()) return r.status();
      cells.push_back({name, xi, a.psi, *r});
    }
  }
  if (a.oracle) {
    absl::StatusOr<AttackResult> r = RunNbcAttackNoiseless(config, **fed);
    if (!r.ok()) return r.status();
    cells.push_back({"noiseless", 0.0, 0.0, *r});
  }
  return Emit(AttackReport(cells), out);
}

absl::Status SmcCompareCommand(const CLI::App& app, const SourceFlags& s, EngineFlags& e,
                               const WorkloadFlags& w, int repetitions,
                               const OutputFlags& out) {
  absl::StatusOr<FederationOptions> o = ResolveOptions(app, e);
  if (!o.ok()) return o.status();
  o->smc_mode = false;
  absl::StatusOr<std::unique_ptr<LocalFederation>> plain = LoadFederation(s, *o);
  if (!plain.ok()) return plain.status();
  o->smc_mode = true;
  absl::StatusOr<std::unique_ptr<LocalFederation>> smc = LoadFederation(s, *o);
  if (!smc.ok()) return smc.status();
  WorkloadSpec spec;
  spec.m = w.m;
  spec.n = w.n;
  spec.seed = e.seed;
  spec.min_width_fraction = w.min_width;
  absl::StatusOr<std::vector<RangeQuery>> queries =
      GenerateWorkload(spec, (*plain)->schema(), ApproximationFilter(**plain));
  if (!queries.ok()) return queries.status();
  SmcCompareConfig config;
  config.repetitions = repetitions;
  config.sample_rate = e.sample_rate;
  config.per_query = {e.epsilon, e.delta};
  absl::StatusOr<std::vector<SmcNoiseRow>> rows = CompareSmcNoise(*queries, **plain, **smc, config);
  if (!rows.ok()) return rows.status();
  return Emit(SmcReport(*rows), out);
}

absl::Status ReportCommand(const std::string& in, const OutputFlags& out) {
  std::ifstream file(in);
  if (!file) return absl::NotFoundError(absl::StrCat("cannot open ", in));
  std::stringstream text;
  text << file.rdbuf();
  absl::StatusOr<Report> report = ParseCsvReport(text.str());
  if (!report.ok()) return report.status();
  return Emit(*report, out);
}

int Main(int argc, char** argv) {
  CLI::App app{"Federated approximate range queries with differential privacy"};
  app.require_subcommand(1);

  SourceFlags source;
  EngineFlags engine;
  OutputFlags output;
  WorkloadFlags workload;
  AttackFlags attack;
  std::string out_dir, in_path, meta_out;
  int repetitions = 100;

  CLI::App* ingest = app.add_subcommand("ingest", "Partition a data set and cut clusters");
  AddSourceFlags(ingest, source);
  ingest->add_option("--capacity", engine.capacity, "Cluster capacity S (0 derives it)");
  ingest->add_option("--capacity-fraction", engine.capacity_fraction,
                     "S as a fraction of the mean per-provider tensor rows");
  ingest->add_option("--out", out_dir, "Output directory")->required();

  CLI::App* build_meta = app.add_subcommand("build-meta", "Build provider metadata");
  build_meta->add_option("--data", in_path, "Provider directory or ingest output")->required();
  build_meta->add_option("--out", meta_out, "Metadata directory (single provider only)");
  build_meta->add_option("--n-min", engine.n_min, "Minimum candidate clusters");

  CLI::App* serve_provider = app.add_subcommand("serve-provider", "Run a provider node");
  serve_provider->add_option("--config", engine.config, "Node configuration JSON")
      ->envname("FEDRANGE_CONFIG")
      ->required();

  CLI::App* serve_aggregator = app.add_subcommand("serve-aggregator", "Run the aggregator");
  serve_aggregator->add_option("--config", engine.config, "Node configuration JSON")
      ->envname("FEDRANGE_CONFIG")
      ->required();

  CLI::App* run_workload = app.add_subcommand("run-workload", "Accuracy and speed-up");
  AddSourceFlags(run_workload, source);
  AddEngineFlags(run_workload, engine);
  AddOutputFlags(run_workload, output);
  run_workload->add_option("-m,--queries", workload.m, "Distinct queries");
  run_workload->add_option("-n,--dims", workload.n, "Dimensions per query");
  run_workload->add_option("--agg", workload.aggregation, "COUNT or SUM");
  run_workload->add_option("--min-width", workload.min_width,
                           "Smallest range width as a fraction of the domain");
  run_workload->add_option("--approx-only", workload.approx_only,
                           "Keep only queries every provider approximates");
  run_workload->add_option("--aggregator", workload.aggregator,
                           "host:port of a running aggregator (local federation otherwise)");
  run_workload->add_option("--analyst", workload.analyst, "Analyst name sent to the aggregator");
  run_workload->add_option("--xi", workload.xi, "Total epsilon of the local analyst");
  run_workload->add_option("--psi", workload.psi, "Total delta of the local analyst");

  CLI::App* attack_cmd = app.add_subcommand("attack", "Naive Bayes attribute inference");
  AddSourceFlags(attack_cmd, source);
  AddEngineFlags(attack_cmd, engine);
  AddOutputFlags(attack_cmd, output);
  attack_cmd->add_option("--qi", attack.qi, "Quasi-identifier dimensions");
  attack_cmd->add_option("--sa", attack.sa, "Sensitive dimension");
  attack_cmd->add_option("--composition", attack.compositions,
                         "sequential, advanced and/or coalition");
  attack_cmd->add_option("--xi", attack.xi, "Total epsilon values");
  attack_cmd->add_option("--psi", attack.psi, "Total delta");
  attack_cmd->add_option("--oracle", attack.oracle, "Also attack the noiseless oracle");

  CLI::App* smc_compare = app.add_subcommand("smc-compare", "Noise with and without SMC");
  AddSourceFlags(smc_compare, source);
  AddEngineFlags(smc_compare, engine);
  AddOutputFlags(smc_compare, output);
  smc_compare->add_option("-m,--queries", workload.m, "Distinct queries");
  smc_compare->add_option("-n,--dims", workload.n, "Dimensions per query");
  smc_compare->add_option("--min-width", workload.min_width,
                          "Smallest range width as a fraction of the domain");
  smc_compare->add_option("--repetitions", repetitions, "Runs per query and mode");

  CLI::App* report = app.add_subcommand("report", "Render a CSV report");
  report->add_option("--in", in_path, "CSV report")->required();
  AddOutputFlags(report, output);

  CLI11_PARSE(app, argc, argv);

  absl::Status status;
  if (ingest->parsed()) {
    status = Ingest(source, engine, out_dir);
  } else if (build_meta->parsed()) {
    status = BuildMeta(in_path, meta_out, engine.n_min);
  } else if (serve_provider->parsed()) {
    status = ServeProvider(engine.config);
  } else if (serve_aggregator->parsed()) {
    status = ServeAggregator(engine.config);
  } else if (run_workload->parsed()) {
    status = RunWorkloadCommand(*run_workload, source, engine, workload, output);
  } else if (attack_cmd->parsed()) {
    status = AttackCommand(*attack_cmd, source, engine, attack, output);
  } else if (smc_compare->parsed()) {
    status = SmcCompareCommand(*smc_compare, source, engine, workload, repetitions, output);
  } else if (report->parsed()) {
    status = ReportCommand(in_path, output);
  }
  if (!status.ok()) {
    std::cerr << "fedrange: " << status << "\n";
    return 1;
  }
  return 0;
}

}  // namespace
}  // namespace fedrange

int main(int argc, char** argv) { return fedrange::Main(argc, argv); }
