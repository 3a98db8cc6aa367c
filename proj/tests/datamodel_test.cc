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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "fedrange/datamodel/cluster.h"
#include "fedrange/datamodel/count_tensor.h"
#include "fedrange/datamodel/query.h"
#include "fedrange/datamodel/schema.h"
#include "fedrange/datamodel/storage.h"
#include "fedrange/dp/random.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace fedrange {
namespace {

using ::testing::ElementsAre;

Schema TwoDimSchema(int a, int b) {
  Schema s;
  s.dimensions = {IntegerDimension("a", 0, a - 1), IntegerDimension("b", 0, b - 1)};
  return s;
}

CountTensor RandomTensor(int rows, int a, int b, uint64_t seed) {
  Rng rng(seed);
  CountTensor t(TwoDimSchema(a, b));
  std::map<std::pair<int, int>, bool> seen;
  while (static_cast<int>(t.num_rows()) < rows) {
    const Rank x = static_cast<Rank>(rng.UniformInt(a));
    const Rank y = static_cast<Rank>(rng.UniformInt(b));
    if (seen[{x, y}]) continue;
    seen[{x, y}] = true;
    const std::vector<Rank> r = {x, y};
    EXPECT_TRUE(t.AppendRow(r, 1 + static_cast<int64_t>(rng.UniformInt(5))).ok());
  }
  return t;
}

// Row-by-row filter written independently of CompiledQuery.
double NaiveEvaluate(const CountTensor& t, Aggregation agg, int lo0, int hi0,
                     int lo1, int hi1) {
  double total = 0;
  for (size_t i = 0; i < t.num_rows(); ++i) {
    const auto r = t.row(i);
    if (r[0] >= lo0 && r[0] <= hi0 && r[1] >= lo1 && r[1] <= hi1) {
      total += agg == Aggregation::kCount ? 1.0 : static_cast<double>(t.measure(i));
    }
  }
  return total;
}

TEST(CountTensorTest, AggregatesOverService) {
  Dimension service{"Service", {"Cardio", "Urology"}};
  Dimension age = IntegerDimension("Age", 0, 99);
  Table table({service, age});
  for (auto [s, a] : std::vector<std::pair<int, int>>{{0, 35}, {0, 35}, {1, 40}}) {
    const std::vector<Rank> r = {s, a};
    ASSERT_TRUE(table.AppendRow(r).ok());
  }
  const std::vector<std::string> keep = {"Age"};
  absl::StatusOr<CountTensor> t = BuildCountTensor(table, keep);
  ASSERT_TRUE(t.ok()) << t.status();
  ASSERT_EQ(t->num_rows(), 2u);
  EXPECT_EQ(t->row(0)[0], 35);
  EXPECT_EQ(t->measure(0), 2);
  EXPECT_EQ(t->row(1)[0], 40);
  EXPECT_EQ(t->measure(1), 1);
  EXPECT_TRUE(t->Validate().ok());
}

TEST(CountTensorTest, IdentityAggregationAndMeasureSum) {
  Table table({IntegerDimension("x", 0, 9), IntegerDimension("y", 0, 9)});
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const std::vector<Rank> r = {static_cast<Rank>(rng.UniformInt(10)),
                                 static_cast<Rank>(rng.UniformInt(10))};
    ASSERT_TRUE(table.AppendRow(r).ok());
  }
  const std::vector<std::string> all = {"x", "y"};
  absl::StatusOr<CountTensor> t = BuildCountTensor(table, all);
  ASSERT_TRUE(t.ok());
  EXPECT_EQ(t->TotalMeasure(), 1000);

  Table distinct({IntegerDimension("x", 0, 9)});
  for (Rank v = 0; v < 10; ++v) ASSERT_TRUE(distinct.AppendRow({&v, 1}).ok());
  const std::vector<std::string> x = {"x"};
  absl::StatusOr<CountTensor> ones = BuildCountTensor(distinct, x);
  ASSERT_TRUE(ones.ok());
  for (size_t i = 0; i < ones->num_rows(); ++i) EXPECT_EQ(ones->measure(i), 1);
}

TEST(CountTensorTest, UnknownDimensionIsASchemaError) {
  Table table({IntegerDimension("x", 0, 9)});
  const std::vector<std::string> bad = {"nope"};
  EXPECT_EQ(BuildCountTensor(table, bad).status().code(), absl::StatusCode::kNotFound);
}

TEST(CountTensorTest, ValidateCatchesDuplicates) {
  CountTensor t(TwoDimSchema(3, 3));
  const std::vector<Rank> r = {1, 1};
  ASSERT_TRUE(t.AppendRow(r, 1).ok());
  ASSERT_TRUE(t.AppendRow(r, 2).ok());
  EXPECT_FALSE(t.Validate().ok());
  EXPECT_FALSE(t.AppendRow(r, 0).ok());
}

TEST(ClusterTest, SplitSizes) {
  CountTensor t = RandomTensor(10, 10, 10, 1);
  auto clusters = SplitIntoClusters(t, 4, ClusterOrder::kInsertion);
  ASSERT_TRUE(clusters.ok());
  std::vector<size_t> sizes;
  for (const Cluster& c : *clusters) sizes.push_back(c.size());
  EXPECT_THAT(sizes, ElementsAre(4, 4, 2));

  auto one = SplitIntoClusters(RandomTensor(4, 10, 10, 1), 100,
                               ClusterOrder::kSortedByFirstDimension);
  ASSERT_TRUE(one.ok());
  EXPECT_EQ(one->size(), 1u);
  EXPECT_EQ(SplitIntoClusters(t, 0, ClusterOrder::kInsertion).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(ClusterTest, SortedSplitPartitionsTheTensor) {
  CountTensor t = RandomTensor(10'000, 200, 200, 3);
  auto clusters = SplitIntoClusters(t, 100, ClusterOrder::kSortedByFirstDimension);
  ASSERT_TRUE(clusters.ok());
  ASSERT_EQ(clusters->size(), 100u);
  std::multiset<std::vector<Rank>> from_tensor;
  std::multiset<std::vector<Rank>> from_clusters;
  for (size_t i = 0; i < t.num_rows(); ++i) {
    from_tensor.insert({t.row(i).begin(), t.row(i).end()});
  }
  Rank previous = -1;
  for (const Cluster& c : *clusters) {
    for (size_t i = 0; i < c.size(); ++i) {
      from_clusters.insert({c.row(i).begin(), c.row(i).end()});
      EXPECT_GE(c.row(i)[0], previous);
      previous = c.row(i)[0];
    }
  }
  EXPECT_EQ(from_tensor, from_clusters);
}

TEST(PartitionTest, EvenDeterministicAndDisjoint) {
  CountTensor t = RandomTensor(400, 50, 50, 4);
  auto parts = PartitionHorizontal(t, 4, 77);
  ASSERT_TRUE(parts.ok());
  ASSERT_EQ(parts->size(), 4u);
  std::multiset<std::vector<Rank>> all;
  for (const CountTensor& p : *parts) {
    EXPECT_EQ(p.num_rows(), 100u);
    for (size_t i = 0; i < p.num_rows(); ++i) all.insert({p.row(i).begin(), p.row(i).end()});
  }
  EXPECT_EQ(all.size(), 400u);
  EXPECT_EQ(std::set<std::vector<Rank>>(all.begin(), all.end()).size(), 400u);

  auto again = PartitionHorizontal(t, 4, 77);
  for (int k = 0; k < 4; ++k) {
    ASSERT_EQ((*again)[k].num_rows(), (*parts)[k].num_rows());
    for (size_t i = 0; i < (*parts)[k].num_rows(); ++i) {
      EXPECT_TRUE(std::ranges::equal((*again)[k].row(i), (*parts)[k].row(i)));
    }
  }
  auto same = PartitionHorizontal(t, 1, 5);
  ASSERT_TRUE(same.ok());
  EXPECT_EQ((*same)[0].num_rows(), t.num_rows());
  EXPECT_FALSE(PartitionHorizontal(t, 0, 5).ok());

  auto uneven = PartitionHorizontal(RandomTensor(403, 50, 50, 4), 4, 1);
  size_t lo = 1000, hi = 0;
  for (const CountTensor& p : *uneven) {
    lo = std::min(lo, p.num_rows());
    hi = std::max(hi, p.num_rows());
  }
  EXPECT_LE(hi - lo, 1u);
}

TEST(QueryTest, CompileChecks) {
  const Schema s = TwoDimSchema(10, 10);
  RangeQuery q;
  EXPECT_FALSE(Compile(q, s).ok());
  q.ranges["a"] = {3, 2};
  EXPECT_FALSE(Compile(q, s).ok());
  q.ranges["a"] = {0, 10};
  EXPECT_FALSE(Compile(q, s).ok());
  q.ranges.clear();
  q.ranges["zzz"] = {0, 1};
  EXPECT_FALSE(Compile(q, s).ok());
  q.ranges.clear();
  q.ranges["b"] = {1, 2};
  q.ranges["a"] = {0, 4};
  absl::StatusOr<CompiledQuery> c = Compile(q, s);
  ASSERT_TRUE(c.ok());
  ASSERT_EQ(c->num_query_dims(), 2);
  EXPECT_EQ(c->ranges[0].dim, 0);
  EXPECT_EQ(c->ranges[1].dim, 1);
  EXPECT_EQ(*ParseAggregation("sum"), Aggregation::kSum);
  EXPECT_EQ(AggregationName(Aggregation::kCount), "COUNT");
}

TEST(EvaluateTest, MatchesNaiveFilterAndIsAdditive) {
  CountTensor t = RandomTensor(10'000, 200, 200, 8);
  auto clusters = SplitIntoClusters(t, 100, ClusterOrder::kSortedByFirstDimension);
  ASSERT_TRUE(clusters.ok());
  Rng rng(10);
  for (int i = 0; i < 50; ++i) {
    int a = rng.UniformInt(200), b = rng.UniformInt(200);
    int c = rng.UniformInt(200), d = rng.UniformInt(200);
    RangeQuery q;
    q.aggregation = i % 2 ? Aggregation::kCount : Aggregation::kSum;
    q.ranges["a"] = {std::min(a, b), std::max(a, b)};
    q.ranges["b"] = {std::min(c, d), std::max(c, d)};
    absl::StatusOr<CompiledQuery> cq = Compile(q, t.schema());
    ASSERT_TRUE(cq.ok());
    const double expected = NaiveEvaluate(t, q.aggregation, std::min(a, b),
                                          std::max(a, b), std::min(c, d),
                                          std::max(c, d));
    EXPECT_EQ(EvaluateExact(*cq, *clusters), expected);
    double sum = 0;
    for (const Cluster& cl : *clusters) sum += EvaluateOnCluster(*cq, cl);
    EXPECT_EQ(sum, expected);
  }
}

TEST(EvaluateTest, TrivialCases) {
  CountTensor t = RandomTensor(500, 20, 30, 9);
  auto clusters = SplitIntoClusters(t, 50, ClusterOrder::kInsertion);
  RangeQuery full;
  full.ranges["a"] = {0, 19};
  full.ranges["b"] = {0, 29};
  CompiledQuery cq = *Compile(full, t.schema());
  EXPECT_EQ(EvaluateExact(cq, *clusters), 500);
  EXPECT_EQ(EvaluateOnCluster(cq, (*clusters)[0]), 50);
  full.aggregation = Aggregation::kSum;
  EXPECT_EQ(EvaluateExact(*Compile(full, t.schema()), *clusters), t.TotalMeasure());
}

TEST(EvaluateTest, OneIndividualChangesAnswerByAtMostOne) {
  CountTensor t = RandomTensor(200, 20, 20, 12);
  RangeQuery q;
  q.ranges["a"] = {2, 15};
  q.ranges["b"] = {0, 9};
  for (Aggregation agg : {Aggregation::kCount, Aggregation::kSum}) {
    q.aggregation = agg;
    CompiledQuery cq = *Compile(q, t.schema());
    auto base = SplitIntoClusters(t, 1000, ClusterOrder::kInsertion);
    const double before = EvaluateExact(cq, *base);
    // +1 on an existing measure.
    CountTensor bumped(t.schema());
    for (size_t i = 0; i < t.num_rows(); ++i) {
      ASSERT_TRUE(bumped.AppendRow(t.row(i), t.measure(i) + (i == 0)).ok());
    }
    const double after =
        EvaluateExact(cq, *SplitIntoClusters(bumped, 1000, ClusterOrder::kInsertion));
    if (agg == Aggregation::kSum) {
      EXPECT_EQ(after - before, cq.Matches(t.row(0)) ? 1 : 0);
    } else {
      EXPECT_EQ(after, before);
    }
  }
}

TEST(ClusterStoreTest, CountsReads) {
  CountTensor t = RandomTensor(100, 20, 20, 1);
  ClusterStore store(*SplitIntoClusters(t, 10, ClusterOrder::kInsertion));
  RangeQuery q;
  q.ranges["a"] = {0, 19};
  CompiledQuery cq = *Compile(q, t.schema());
  EXPECT_EQ(store.Scan(cq, 3), 10);
  store.Scan(cq, 4);
  EXPECT_EQ(store.reads(), 2);
  store.ResetReads();
  EXPECT_EQ(store.reads(), 0);
}

TEST(StorageTest, RoundTrip) {
  const std::filesystem::path dir =
      std::filesystem::path(::testing::TempDir()) / "fedrange_storage_rt";
  std::filesystem::remove_all(dir);
  CountTensor t = RandomTensor(250, 30, 30, 5);
  ProviderData data;
  data.schema = t.schema();
  data.capacity = 40;
  data.clusters = *SplitIntoClusters(t, 40, ClusterOrder::kSortedByFirstDimension);
  ASSERT_TRUE(WriteProviderData(dir, data).ok());
  absl::StatusOr<ProviderData> back = ReadProviderData(dir);
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(back->capacity, 40);
  EXPECT_EQ(back->schema.num_dimensions(), 2);
  EXPECT_EQ(back->schema.dimensions[1].domain, data.schema.dimensions[1].domain);
  ASSERT_EQ(back->clusters.size(), data.clusters.size());
  for (size_t c = 0; c < data.clusters.size(); ++c) {
    ASSERT_EQ(back->clusters[c].size(), data.clusters[c].size());
    for (size_t i = 0; i < data.clusters[c].size(); ++i) {
      EXPECT_TRUE(std::ranges::equal(back->clusters[c].row(i), data.clusters[c].row(i)));
      EXPECT_EQ(back->clusters[c].measure(i), data.clusters[c].measure(i));
    }
  }
}

TEST(StorageTest, CorruptClusterFileIsReported) {
  const std::filesystem::path dir =
      std::filesystem::path(::testing::TempDir()) / "fedrange_storage_bad";
  std::filesystem::remove_all(dir);
  CountTensor t = RandomTensor(20, 5, 5, 5);
  ProviderData data{t.schema(), 10, *SplitIntoClusters(t, 10, ClusterOrder::kInsertion)};
  ASSERT_TRUE(WriteProviderData(dir, data).ok());
  std::ofstream(dir / "clusters" / "cluster-000001.csv", std::ios::app) << "1,2\n";
  absl::StatusOr<ProviderData> back = ReadProviderData(dir);
  EXPECT_EQ(back.status().code(), absl::StatusCode::kDataLoss);
  EXPECT_THAT(back.status().message(), ::testing::HasSubstr("cluster-000001.csv"));
}

}  // namespace
}  // namespace fedrange
