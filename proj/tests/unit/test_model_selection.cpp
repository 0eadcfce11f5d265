#include <doctest.h>

#include <numeric>

#include "intentbench/cluster.hpp"
#include "error_kind.hpp"
#include "intentbench/error.hpp"
#include "oracles.hpp"

using namespace intentbench;
using namespace intentbench::cluster;

namespace {


ClusterResult labeled(std::vector<int> a, int k) {
  ClusterResult r;
  r.assignments = std::move(a);
  r.k = k;
  return r;
}

AlgorithmSpec spec_for(Algorithm a) {
  AlgorithmSpec s;
  s.algorithm = a;
  return s;
}

}  // namespace

TEST_CASE("silhouette of two tight pairs") {
  RowMatrix x(4, 1);
  x << 0, 1, 10, 11;
  const double expected = (9.5 / 10.5 + 8.5 / 9.5) / 2.0;
  CHECK(silhouette(x, labeled({0, 0, 1, 1}, 2)) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("silhouette skips noise and scores singletons 0") {
  RowMatrix x(5, 1);
  x << 0, 1, 10, 11, 100;
  const double pairs = (9.5 / 10.5 + 8.5 / 9.5) / 2.0;
  CHECK(silhouette(x, labeled({0, 0, 1, 1, kNoise}, 2)) == doctest::Approx(pairs).epsilon(1e-14));
  CHECK(silhouette(x, labeled({0, 0, 1, 1, 2}, 3)) < pairs);
  CHECK(kind_of([&] { silhouette(x, labeled({0, 0, 0, 0, 0}, 1)); }) == ErrorKind::Argument);
}

TEST_CASE("select_k recovers the blob count") {
  const auto two = oracle::gaussian_blobs({{0, 0}, {15, 0}}, 20, 1.0, 5);
  const auto three = oracle::gaussian_blobs({{0, 0}, {15, 0}, {7.5, 13}}, 20, 1.0, 6);
  for (auto algo : {Algorithm::KMeans, Algorithm::Agglomerative}) {
    CAPTURE(to_string(algo));
    const auto s2 = select_k(two.points, spec_for(algo), {2, 8}, 42);
    const auto s3 = select_k(three.points, spec_for(algo), {2, 8}, 42);
    CHECK(s2.k == 2);
    CHECK(s3.k == 3);
    CHECK(s3.scores.size() == 7);
  }
}

TEST_CASE("select_k edge cases") {
  const auto x = oracle::random_points(10, 2, 3);
  const auto one = select_k(x, spec_for(Algorithm::KMeans), {4, 4}, 1);
  CHECK(one.k == 4);
  CHECK(kind_of([&] { select_k(x, spec_for(Algorithm::KMeans), {5, 4}, 1); }) == ErrorKind::Argument);
  CHECK(kind_of([&] { select_k(x, spec_for(Algorithm::KMeans), {2, 11}, 1); }) == ErrorKind::Argument);
  CHECK(kind_of([&] { select_k(x, spec_for(Algorithm::Dbscan), {2, 4}, 1); }) == ErrorKind::Argument);
}

TEST_CASE("run_algorithm dispatches every algorithm") {
  const auto b = oracle::gaussian_blobs({{0, 0}, {15, 0}, {7.5, 13}}, 20, 1.0, 2024);
  for (auto a : {Algorithm::KMeans, Algorithm::Bisecting, Algorithm::Agglomerative, Algorithm::Birch,
                 Algorithm::Spectral}) {
    CAPTURE(to_string(a));
    const auto r = run_algorithm(b.points, spec_for(a), 3);
    CHECK(r.k == 3);
    CHECK(oracle::same_partition(r.assignments, b.labels));
    CHECK(parse_algorithm(to_string(a)) == a);
  }
  auto db = spec_for(Algorithm::Dbscan);
  db.eps = 3.0;
  db.min_pts = 4;
  CHECK(run_algorithm(b.points, db, 0).k == 3);
  CHECK(kind_of([] { parse_algorithm("optics"); }) == ErrorKind::Argument);
}

TEST_CASE("clusterings are deterministic and equivariant under row permutation") {
  const auto b = oracle::gaussian_blobs({{0, 0}, {15, 0}, {7.5, 13}}, 20, 1.0, 77);
  std::vector<Index> perm(static_cast<std::size_t>(b.points.rows()));
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(3);
  std::shuffle(perm.begin(), perm.end(), rng);
  RowMatrix permuted(b.points.rows(), b.points.cols());
  for (std::size_t i = 0; i < perm.size(); ++i) permuted.row(static_cast<Index>(i)) = b.points.row(perm[i]);

  for (auto a : {Algorithm::KMeans, Algorithm::Bisecting, Algorithm::Agglomerative, Algorithm::Birch,
                 Algorithm::Spectral}) {
    CAPTURE(to_string(a));
    const auto r1 = run_algorithm(b.points, spec_for(a), 3);
    const auto r2 = run_algorithm(b.points, spec_for(a), 3);
    CHECK(r1.assignments == r2.assignments);
    const auto rp = run_algorithm(permuted, spec_for(a), 3);
    std::vector<int> unpermuted(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) unpermuted[static_cast<std::size_t>(perm[i])] = rp.assignments[i];
    CHECK(oracle::same_partition(unpermuted, r1.assignments));
  }
}
