#include <doctest.h>

#include "intentbench/cluster.hpp"
#include "error_kind.hpp"
#include "intentbench/error.hpp"
#include "oracles.hpp"

using namespace intentbench;
using namespace intentbench::cluster;

namespace {

RowMatrix line_points(std::initializer_list<double> xs) {
  RowMatrix m(static_cast<Index>(xs.size()), 1);
  Index i = 0;
  for (double x : xs) m(i++, 0) = x;
  return m;
}


const oracle::Blobs& three_blobs() {
  static const auto b = oracle::gaussian_blobs({{0, 0}, {15, 0}, {7.5, 13}}, 20, 1.0, 2024);
  return b;
}

}  // namespace

TEST_CASE("single linkage merges the closest pair first") {
  const auto r = agglomerative(line_points({0, 1, 10}), 2, Linkage::Single);
  CHECK(r.assignments == std::vector<int>{0, 0, 1});
  CHECK(r.algorithm == "agglomerative-single");
}

TEST_CASE("every linkage recovers separated blobs") {
  for (auto l : {Linkage::Ward, Linkage::Average, Linkage::Complete, Linkage::Single}) {
    CAPTURE(to_string(l));
    const auto r = agglomerative(three_blobs().points, 3, l);
    CHECK(oracle::same_partition(r.assignments, three_blobs().labels));
  }
}

TEST_CASE("agglomerative boundary k") {
  const auto x = oracle::random_points(7, 2, 8);
  const auto one = agglomerative(x, 1);
  CHECK(std::all_of(one.assignments.begin(), one.assignments.end(), [](int a) { return a == 0; }));
  const auto all = agglomerative(x, 7);
  CHECK(std::set<int>(all.assignments.begin(), all.assignments.end()).size() == 7);
  CHECK(kind_of([&] { agglomerative(x, 8); }) == ErrorKind::Argument);
}

TEST_CASE("agglomerative ties break toward the smallest pair") {
  // Equal gaps: {0,1} merges before {1,2} and {2,3}.
  const auto r = agglomerative(line_points({0, 1, 2, 3}), 3, Linkage::Single);
  CHECK(r.assignments == std::vector<int>{0, 0, 1, 2});
}

TEST_CASE("ward merge cost matches the increase in within-cluster SSE") {
  // Ward on {0, 1, 5, 6, 20} to 2 clusters keeps the outlier alone.
  const auto r = agglomerative(line_points({0, 1, 5, 6, 20}), 2, Linkage::Ward);
  CHECK(r.assignments == std::vector<int>{0, 0, 0, 0, 1});
}

TEST_CASE("linkage names parse") {
  CHECK(parse_linkage("ward") == Linkage::Ward);
  CHECK(parse_linkage("average") == Linkage::Average);
  CHECK(parse_linkage("complete") == Linkage::Complete);
  CHECK(parse_linkage("single") == Linkage::Single);
  CHECK(kind_of([] { parse_linkage("median"); }) == ErrorKind::Argument);
}

TEST_CASE("clustering features are additive") {
  const auto x = oracle::random_points(10, 3, 6);
  auto cf = ClusteringFeature::of_point(x.row(0));
  CHECK(cf.count == 1);
  CHECK(cf.radius() == 0.0);
  CHECK((cf.centroid().transpose() - x.row(0)).norm() == 0.0);
  for (Index i = 1; i < 10; ++i) cf += ClusteringFeature::of_point(x.row(i));
  CHECK(cf.count == 10);
  CHECK((cf.linear_sum.transpose() - x.colwise().sum()).norm() < 1e-12);
  CHECK(cf.squared_sum == doctest::Approx(x.squaredNorm()).epsilon(1e-12));
  CHECK((cf.centroid().transpose() - x.colwise().mean()).norm() < 1e-12);
  std::vector<Index> rows(10);
  std::iota(rows.begin(), rows.end(), 0);
  CHECK(cf.radius() * cf.radius() * 10 == doctest::Approx(oracle::sse_of(x, rows)).epsilon(1e-10));
}

TEST_CASE("CF tree absorbs close points and splits full nodes") {
  CFTree tree(1, BirchConfig{0.5, 3});
  const auto x = line_points({0, 0.1, 10, 20, 30, 40, 50});
  std::vector<std::size_t> ids;
  for (Index i = 0; i < x.rows(); ++i) ids.push_back(tree.insert(x.row(i)));
  CHECK(ids[0] == ids[1]);
  CHECK(tree.leaf_entry_count() == 6);
  CHECK(tree.height() >= 2);
  const auto entries = tree.leaf_entries();
  std::size_t total = 0;
  for (const auto& e : entries) total += e.count;
  CHECK(total == 7);
  CHECK(entries[ids[0]].count == 2);
}

TEST_CASE("birch recovers blobs and rejects k above leaf count") {
  const auto r = birch(three_blobs().points, 0.5, 50, 3);
  CHECK(oracle::same_partition(r.assignments, three_blobs().labels));
  CHECK(kind_of([&] { birch(three_blobs().points, 1000.0, 50, 3); }) == ErrorKind::Degenerate);
  CHECK(kind_of([&] { BirchConfig{0.0, 50}.validate(); }) == ErrorKind::Argument);
  CHECK(kind_of([&] { BirchConfig{0.5, 1}.validate(); }) == ErrorKind::Argument);
}

TEST_CASE("spectral on a block diagonal affinity") {
  RowMatrix w = RowMatrix::Zero(6, 6);
  for (int b = 0; b < 2; ++b)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i != j) w(3 * b + i, 3 * b + j) = 1.0;
  CHECK(connected_components(w) == 2);
  const auto r = spectral_from_affinity(w, 2, KMeansConfig{});
  CHECK(r.assignments == std::vector<int>{0, 0, 0, 1, 1, 1});
  CHECK(r.warnings.empty());
}

TEST_CASE("spectral warns on extra components, rejects identical points") {
  RowMatrix w = RowMatrix::Zero(6, 6);
  for (int b = 0; b < 3; ++b) w(2 * b, 2 * b + 1) = w(2 * b + 1, 2 * b) = 1.0;
  const auto r = spectral_from_affinity(w, 2, KMeansConfig{});
  CHECK_FALSE(r.warnings.empty());
  CHECK(kind_of([] { spectral(RowMatrix::Ones(5, 2), 2, Affinity{}, 1); }) == ErrorKind::Degenerate);
}

TEST_CASE("affinity matrices are symmetric with a zero diagonal") {
  const auto x = oracle::random_points(15, 3, 21);
  for (const auto& w : {rbf_affinity(x), cosine_knn_affinity(x, 4)}) {
    CHECK((w - w.transpose()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(w.diagonal().cwiseAbs().maxCoeff() == 0.0);
    CHECK(w.minCoeff() >= 0.0);
    CHECK(w.maxCoeff() <= 1.0);
  }
  const auto knn = cosine_knn_affinity(x, 4);
  for (Index i = 0; i < x.rows(); ++i) CHECK((knn.row(i).array() > 0).count() >= 1);
}

TEST_CASE("spectral recovers blobs with both affinities") {
  const auto& b = three_blobs();
  CHECK(oracle::same_partition(spectral(b.points, 3, Affinity{}, 42).assignments, b.labels));
  // Shift so the blobs differ in direction, which is what cosine affinity sees.
  RowMatrix shifted = b.points.rowwise() + Eigen::RowVector2d(-7.5, -4.3);
  CHECK(oracle::same_partition(spectral(shifted, 3, Affinity{Affinity::Kind::CosineKnn, 10}, 42).assignments, b.labels));
}

TEST_CASE("dbscan finds dense groups and labels outliers noise") {
  const auto x = line_points({0, 0.1, 0.2, 5, 5.1, 5.2, 50});
  const auto r = dbscan(x, 0.15, 2);
  CHECK(r.k == 2);
  CHECK(r.assignments == std::vector<int>{0, 0, 0, 1, 1, 1, kNoise});
  // min_pts counts the point itself; eps is inclusive.
  const auto pair = dbscan(line_points({0, 1}), 1.0, 2);
  CHECK(pair.assignments == std::vector<int>{0, 0});
  const auto none = dbscan(line_points({0, 1}), 0.5, 2);
  CHECK(none.k == 0);
  CHECK(none.assignments == std::vector<int>{kNoise, kNoise});
  CHECK(kind_of([] { dbscan(RowMatrix::Ones(2, 1), 0.0, 2); }) == ErrorKind::Argument);
  CHECK(kind_of([] { dbscan(RowMatrix::Ones(2, 1), 1.0, 0); }) == ErrorKind::Argument);
}
