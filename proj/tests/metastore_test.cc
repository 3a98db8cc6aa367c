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
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "fedrange/datamodel/cluster.h"
#include "fedrange/datamodel/count_tensor.h"
#include "fedrange/datamodel/query.h"
#include "fedrange/dp/random.h"
#include "fedrange/metastore/metadata.h"
#include "fedrange/metastore/metadata_io.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace fedrange {
namespace {

using ::testing::HasSubstr;

Cluster MakeCluster(int id, int capacity, const std::vector<std::vector<Rank>>& rows) {
  Cluster c(id, capacity, static_cast<int>(rows.front().size()));
  for (const auto& r : rows) EXPECT_TRUE(c.AppendRow(r, 1).ok());
  return c;
}

Schema AgeSchema() {
  Schema s;
  s.dimensions = {IntegerDimension("Age", 0, 99)};
  return s;
}

std::vector<Cluster> RandomClusters(int count, int capacity, int dims, int domain,
                                    Rng& rng) {
  std::vector<Cluster> out;
  for (int c = 0; c < count; ++c) {
    Cluster cl(c, capacity, dims);
    const int rows = 1 + static_cast<int>(rng.UniformInt(capacity));
    std::vector<Rank> row(dims);
    for (int i = 0; i < rows; ++i) {
      for (Rank& v : row) v = static_cast<Rank>(rng.UniformInt(domain));
      EXPECT_TRUE(cl.AppendRow(row, 1).ok());
    }
    out.push_back(std::move(cl));
  }
  return out;
}

Schema UniformSchema(int dims, int domain) {
  Schema s;
  for (int d = 0; d < dims; ++d) {
    s.dimensions.push_back(IntegerDimension("d" + std::to_string(d), 0, domain - 1));
  }
  return s;
}

CompiledQuery RandomQuery(const Schema& s, int query_dims, Rng& rng) {
  RangeQuery q;
  std::vector<int> dims(s.num_dimensions());
  for (int d = 0; d < s.num_dimensions(); ++d) dims[d] = d;
  for (int k = 0; k < query_dims; ++k) {
    std::swap(dims[k], dims[k + rng.UniformInt(dims.size() - k)]);
    const int domain = s.dimensions[dims[k]].size();
    const Rank a = rng.UniformInt(domain);
    const Rank b = rng.UniformInt(domain);
    q.ranges[s.dimensions[dims[k]].name] = {std::min(a, b), std::max(a, b)};
  }
  return *Compile(q, s);
}

TEST(MetadataTest, ProportionExamples) {
  const std::vector<Cluster> clusters = {
      MakeCluster(0, 4, {{20}, {25}, {25}, {30}}),
      MakeCluster(1, 4, {{42}}),
      MakeCluster(2, 4, {{7}, {7}, {7}})};
  absl::StatusOr<ProviderMetadata> meta = BuildMetadata(clusters, 4);
  ASSERT_TRUE(meta.ok()) << meta.status();
  const ProportionTable& age = meta->tables[0];
  EXPECT_DOUBLE_EQ(*LookupRGeq(age, 0, 25), 0.75);
  EXPECT_DOUBLE_EQ(*LookupRGeq(age, 0, 22), 0.75);
  EXPECT_DOUBLE_EQ(*LookupRGeq(age, 0, 0), 1.0);
  EXPECT_DOUBLE_EQ(*LookupRGeq(age, 0, 31), 0.0);
  EXPECT_DOUBLE_EQ(*LookupRGeq(meta->tables[1], 0, 42), 0.25);
  EXPECT_EQ(meta->tables[2].entries(0).size(), 1u);
  EXPECT_DOUBLE_EQ(*LookupRGeq(meta->tables[2], 0, 7), 0.75);
  EXPECT_EQ(LookupRGeq(age, 3, 0).status().code(), absl::StatusCode::kNotFound);
  EXPECT_EQ(meta->global.clusters[0].per_dimension[0], (Interval{20, 30}));
  EXPECT_EQ(meta->global.n_min, kDefaultNMin);
}

TEST(MetadataTest, ApproxRClosedRange) {
  const std::vector<Cluster> clusters = {MakeCluster(0, 4, {{20}, {25}, {25}, {30}})};
  ProviderMetadata meta = *BuildMetadata(clusters, 4);
  RangeQuery q;
  q.ranges["Age"] = {25, 30};
  EXPECT_DOUBLE_EQ(ApproxR(*Compile(q, AgeSchema()), meta.tables[0]), 0.75);
  q.ranges["Age"] = {0, 99};
  EXPECT_DOUBLE_EQ(ApproxR(*Compile(q, AgeSchema()), meta.tables[0]), 1.0);
}

TEST(MetadataTest, RejectsOverfullClusters) {
  const std::vector<Cluster> clusters = {MakeCluster(0, 10, {{1}, {2}, {3}})};
  EXPECT_EQ(BuildMetadata(clusters, 2).status().code(),
            absl::StatusCode::kFailedPrecondition);
}

TEST(MetadataTest, FullDomainOnFullClusterIsOnePerDimension) {
  Rng rng(1);
  const Schema s = UniformSchema(3, 6);
  std::vector<Cluster> clusters = RandomClusters(1, 8, 3, 6, rng);
  const double rows = static_cast<double>(clusters[0].size());
  ProviderMetadata meta = *BuildMetadata(clusters, 8);
  RangeQuery q;
  q.ranges["d0"] = {0, 5};
  q.ranges["d2"] = {0, 5};
  EXPECT_NEAR(ApproxR(*Compile(q, s), meta.tables[0]), (rows / 8) * (rows / 8), 1e-15);
}

TEST(MetadataTest, SingleDimensionApproxIsExact) {
  Rng rng(2);
  const Schema s = UniformSchema(1, 30);
  std::vector<Cluster> clusters = RandomClusters(40, 25, 1, 30, rng);
  ProviderMetadata meta = *BuildMetadata(clusters, 25);
  for (int i = 0; i < 200; ++i) {
    const CompiledQuery q = RandomQuery(s, 1, rng);
    for (const Cluster& c : clusters) {
      EXPECT_NEAR(ApproxR(q, meta.tables[c.id()]) * 25, EvaluateOnCluster(q, c), 1e-9);
    }
  }
}

TEST(MetadataTest, CqMatchesBruteForceAndIsSound) {
  Rng rng(3);
  const Schema s = UniformSchema(3, 12);
  std::vector<Cluster> clusters = RandomClusters(100, 10, 3, 12, rng);
  ProviderMetadata meta = *BuildMetadata(clusters, 10);
  for (int i = 0; i < 200; ++i) {
    const CompiledQuery q = RandomQuery(s, 1 + i % 3, rng);
    std::vector<int> expected;
    for (const Cluster& c : clusters) {
      bool all = true;
      for (const auto& r : q.ranges) {
        Rank lo = c.row(0)[r.dim], hi = lo;
        for (size_t k = 0; k < c.size(); ++k) {
          lo = std::min(lo, c.row(k)[r.dim]);
          hi = std::max(hi, c.row(k)[r.dim]);
        }
        all = all && hi >= r.interval.lo && lo <= r.interval.hi;
      }
      if (all) expected.push_back(c.id());
    }
    const std::vector<int> got = IdentifyCQ(q, meta.global);
    EXPECT_EQ(got, expected);
    for (const Cluster& c : clusters) {
      if (EvaluateOnCluster(q, c) > 0) {
        EXPECT_TRUE(std::binary_search(got.begin(), got.end(), c.id()));
      }
    }
  }
}

TEST(MetadataTest, WideningIsMonotoneAndRStaysInUnitInterval) {
  Rng rng(4);
  const Schema s = UniformSchema(3, 10);
  std::vector<Cluster> clusters = RandomClusters(30, 12, 3, 10, rng);
  ProviderMetadata meta = *BuildMetadata(clusters, 12);
  for (int i = 0; i < 200; ++i) {
    CompiledQuery q = RandomQuery(s, 2, rng);
    CompiledQuery wide = q;
    for (auto& r : wide.ranges) {
      r.interval.lo = std::max(0, r.interval.lo - static_cast<Rank>(rng.UniformInt(3)));
      r.interval.hi = std::min(9, r.interval.hi + static_cast<Rank>(rng.UniformInt(3)));
    }
    const auto cq = IdentifyCQ(q, meta.global);
    const auto cq_wide = IdentifyCQ(wide, meta.global);
    EXPECT_TRUE(std::includes(cq_wide.begin(), cq_wide.end(), cq.begin(), cq.end()));
    for (const ProportionTable& t : meta.tables) {
      const double r = ApproxR(q, t);
      EXPECT_GE(r, 0.0);
      EXPECT_LE(r, 1.0);
      EXPECT_LE(r, ApproxR(wide, t) + 1e-15);
    }
  }
}

class MetadataIoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::path(::testing::TempDir()) /
           ::testing::UnitTest::GetInstance()->current_test_info()->name();
    std::filesystem::remove_all(dir_);
    Rng rng(5);
    clusters_ = RandomClusters(12, 15, 4, 20, rng);
    meta_ = *BuildMetadata(clusters_, 15, 7);
    ASSERT_TRUE(SaveMetadata(dir_, meta_).ok());
  }

  std::filesystem::path dir_;
  std::vector<Cluster> clusters_;
  ProviderMetadata meta_;
};

TEST_F(MetadataIoTest, RoundTripIsExact) {
  absl::StatusOr<ProviderMetadata> back = LoadMetadata(dir_);
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(*back, meta_);
  for (size_t c = 0; c < meta_.tables.size(); ++c) {
    for (int d = 0; d < 4; ++d) {
      for (Rank x = 0; x < 20; ++x) {
        EXPECT_EQ(*LookupRGeq(back->tables[c], d, x), *LookupRGeq(meta_.tables[c], d, x));
      }
    }
  }
}

TEST_F(MetadataIoTest, TruncatedClusterFileFailsWithClusterContext) {
  const auto path = dir_ / "cluster-000004.meta";
  std::string text;
  {
    std::ifstream in(path);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  std::ofstream(path, std::ios::trunc) << text.substr(0, text.size() / 2);
  absl::StatusOr<ProviderMetadata> back = LoadMetadata(dir_);
  EXPECT_EQ(back.status().code(), absl::StatusCode::kDataLoss);
  EXPECT_THAT(back.status().message(), HasSubstr("cluster 4"));
}

TEST_F(MetadataIoTest, TruncatedGlobalFileFails) {
  std::ofstream(dir_ / "global.meta", std::ios::trunc) << "fedrange-global 1\ncapacity 15\n";
  EXPECT_EQ(LoadMetadata(dir_).status().code(), absl::StatusCode::kDataLoss);
}

TEST(MetadataSizeTest, HundredClustersSixDimsFitsInTenMegabytes) {
  const std::filesystem::path dir =
      std::filesystem::path(::testing::TempDir()) / "fedrange_meta_size";
  std::filesystem::remove_all(dir);
  Rng rng(6);
  std::vector<Cluster> clusters;
  for (int c = 0; c < 100; ++c) {
    Cluster cl(c, 1000, 6);
    std::vector<Rank> row(6);
    for (int i = 0; i < 1000; ++i) {
      for (Rank& v : row) v = static_cast<Rank>(rng.UniformInt(100));
      ASSERT_TRUE(cl.AppendRow(row, 1).ok());
    }
    clusters.push_back(std::move(cl));
  }
  ASSERT_TRUE(SaveMetadata(dir, *BuildMetadata(clusters, 1000)).ok());
  uintmax_t bytes = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) bytes += e.file_size();
  EXPECT_LE(bytes, 10u * 1024 * 1024);
}

}  // namespace
}  // namespace fedrange
