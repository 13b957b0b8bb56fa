#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "datacurv/clustering.hpp"
#include "datacurv/errors.hpp"
#include "datacurv/union_find.hpp"
#include "oracles.hpp"

using namespace datacurv;

namespace {

PointRecord ok_record(std::size_t i, double c) {
  PointRecord r;
  r.index = i;
  r.dimension = 2;
  r.curvature = c;
  return r;
}

std::vector<std::vector<double>> patch(double z, double x0, int per_side, double step) {
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < per_side; ++i)
    for (int j = 0; j < per_side; ++j) rows.push_back({x0 + i * step, j * step, z});
  return rows;
}

}  // namespace

TEST_SUITE("clustering") {

TEST_CASE("discretization") {
  CHECK(discretize_curvature(-5, 4, 0.5) == -4);
  CHECK(discretize_curvature(0.5, 4, 0.5) == 0);
  CHECK(discretize_curvature(-0.5, 4, 0.5) == 0);
  CHECK(discretize_curvature(0.51, 4, 0.5) == 4);
  CHECK(discretize_curvature(0.0, 4, 0.5) == 0);
}

TEST_CASE("discretization is odd and monotone") {
  CounterRng rng(1);
  double prev = -4;
  std::vector<double> cs;
  for (int i = 0; i < 200; ++i) cs.push_back(rng.uniform(-3, 3));
  std::sort(cs.begin(), cs.end());
  for (double c : cs) {
    const double a = discretize_curvature(c, 4, 0.5);
    CHECK(a >= prev);
    CHECK(discretize_curvature(-c, 4, 0.5) == -a);
    prev = a;
  }
}

TEST_CASE("embedding appends the level") {
  const PointCloud c = PointCloud::from_rows({{1, 2, 3}});
  const std::vector<double> a = {4};
  const PointCloud e = embed_with_curvature(c, a);
  CHECK(e.dim() == 4);
  CHECK(e.point(0)[3] == 4);
  CHECK(e.point(0)[0] == 1);
  const std::vector<double> wrong = {1, 2};
  CHECK_THROWS_AS(embed_with_curvature(c, wrong), DimensionMismatch);
}

TEST_CASE("zero levels keep distances; coincident points split by t") {
  const PointCloud c = testutil::random_cloud(30, 3, 2);
  const std::vector<double> zeros(30, 0.0);
  const PointCloud e = embed_with_curvature(c, zeros);
  for (std::size_t i = 0; i < 30; ++i)
    for (std::size_t j = 0; j < 30; ++j)
      CHECK(oracle::dist2(e.point(i), e.point(j)) == oracle::dist2(c.point(i), c.point(j)));

  const PointCloud twin = PointCloud::from_rows({{0.5, 0.5}, {0.5, 0.5}});
  const std::vector<double> levels = {0.0, 4.0};
  const PointCloud t = embed_with_curvature(twin, levels);
  CHECK(std::sqrt(oracle::dist2(t.point(0), t.point(1))) == 4.0);
}

TEST_CASE("single linkage examples") {
  const PointCloud line = PointCloud::from_rows({{0}, {1}, {3}});
  const ClusterLabeling l = single_linkage_components(line, 1.5);
  CHECK(l.labels == std::vector<int>{0, 0, 1});
  CHECK(l.sizes == std::vector<std::size_t>{2, 1});
  // strict threshold: a gap equal to d' does not link
  CHECK(single_linkage_components(line, 1.0).cluster_count() == 3);
  const PointCloud c = testutil::random_cloud(50, 2, 3);
  CHECK(single_linkage_components(c, diameter(c) + 1).cluster_count() == 1);
}

TEST_CASE("single linkage matches BFS components") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const PointCloud c = testutil::random_cloud(300, 3, seed);
    for (double d : {0.05, 0.1, 0.15, 0.2, 0.3, 0.5}) {
      const auto ref = oracle::bfs_components(c, d);
      const ClusterLabeling fast = single_linkage_components(c, d);
      const ClusterLabeling mst = single_linkage_components(c, d, true);
      CHECK(oracle::same_partition(fast.labels, ref));
      CHECK(fast.labels == mst.labels);
      CHECK(mst.merge_heights.size() == c.size() - mst.cluster_count());
      CHECK(std::is_sorted(mst.merge_heights.begin(), mst.merge_heights.end()));
      for (double h : mst.merge_heights) CHECK(h < d);
    }
  }
}

TEST_CASE("canonical labels: largest first, ties by smallest index") {
  const std::vector<std::size_t> comp = {7, 3, 3, 7, 9, 9, 5};
  const ClusterLabeling l = canonical_labeling(comp);
  CHECK(l.labels == std::vector<int>{0, 1, 1, 0, 2, 2, 3});
  CHECK(l.sizes == std::vector<std::size_t>{2, 2, 2, 1});
}

TEST_CASE("union find") {
  UnionFind uf(5);
  CHECK(uf.unite(0, 1));
  CHECK(uf.unite(3, 4));
  CHECK_FALSE(uf.unite(1, 0));
  CHECK(uf.find(0) == uf.find(1));
  CHECK(uf.find(2) != uf.find(3));
}

TEST_CASE("flat patch forms one cluster") {
  const PointCloud c = PointCloud::from_rows(patch(0, 0, 10, 0.1));
  std::vector<PointRecord> records;
  for (std::size_t i = 0; i < c.size(); ++i) records.push_back(ok_record(i, 0.01));
  const CurvatureClustering r = curvature_clustering(c, records, {});
  CHECK(r.labeling.cluster_count() == 1);
}

TEST_CASE("two patches separate through the curvature coordinate") {
  // gap g = 1 between patches; d' = 2 links across the gap in R^n but the
  // lifted distance sqrt(g^2 + t^2) = sqrt(17) exceeds d'.
  auto rows = patch(0, 0, 6, 0.2);
  const std::size_t first = rows.size();
  for (auto& r : patch(0, 2.0, 6, 0.2)) rows.push_back(r);
  const PointCloud c = PointCloud::from_rows(rows);
  std::vector<PointRecord> records;
  for (std::size_t i = 0; i < c.size(); ++i) records.push_back(ok_record(i, i < first ? 0.0 : 3.0));

  const CurvatureClustering split = curvature_clustering(c, records, {4.0, 0.5, 2.0});
  CHECK(split.labeling.cluster_count() == 2);
  CHECK(split.levels[0] == 0.0);
  CHECK(split.levels[first] == 4.0);

  const CurvatureClustering joined = curvature_clustering(c, records, {4.0, 0.5, 4.2});
  CHECK(joined.labeling.cluster_count() == 1);

  // flat everywhere: the same d' = 2 joins both patches
  for (auto& r : records) r.curvature = 0.0;
  CHECK(curvature_clustering(c, records, {4.0, 0.5, 2.0}).labeling.cluster_count() == 1);
}

TEST_CASE("failed points are flagged with level zero") {
  const PointCloud c = PointCloud::from_rows({{0, 0}, {0.1, 0}, {0.2, 0}});
  std::vector<PointRecord> records = {ok_record(0, 5.0), ok_record(1, 5.0), {}};
  records[2].index = 2;
  records[2].status = PointStatus::zero_dimension;
  records[2].curvature.reset();
  const CurvatureClustering r = curvature_clustering(c, records, {});
  CHECK(r.flagged == std::vector<bool>{false, false, true});
  CHECK(r.levels[2] == 0.0);
  CHECK(r.levels[0] == 4.0);
}

TEST_CASE("parameter validation and defaults") {
  const ClusterParams p = ClusterParams::with_default_link(4.0, 0.5);
  CHECK(p.link_distance == 2.0);
  CHECK(p.link_below_scale());
  const ClusterParams def;
  CHECK(def.scale == 4.0);
  CHECK(def.curvature_threshold == 0.5);
  CHECK(def.link_distance == 2.0);
  const PointCloud c = PointCloud::from_rows({{0, 0}});
  const std::vector<PointRecord> records = {ok_record(0, 0)};
  CHECK_THROWS_AS(curvature_clustering(c, records, {0.0, 0.5, 2.0}), InvalidArgument);
  CHECK_THROWS_AS(curvature_clustering(c, records, {4.0, 0.5, -1.0}), InvalidArgument);
}

TEST_CASE("labels are canonical under row shuffles") {
  const PointCloud c = testutil::random_cloud(200, 2, 8);
  const auto order = testutil::shuffled_order(c.size(), 9);
  const PointCloud p = c.permuted(order);
  const ClusterLabeling a = single_linkage_components(c, 0.12);
  const ClusterLabeling b = single_linkage_components(p, 0.12);
  std::vector<int> back(c.size());
  for (std::size_t k = 0; k < order.size(); ++k) back[order[k]] = b.labels[k];
  CHECK(oracle::same_partition(a.labels, back));
  CHECK(a.sizes == b.sizes);
}

}
