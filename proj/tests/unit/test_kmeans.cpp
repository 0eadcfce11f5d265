#include <doctest.h>

#include <cstdlib>
#include <numeric>

#include "intentbench/cluster.hpp"
#include "error_kind.hpp"
#include "intentbench/error.hpp"
#include "intentbench/parallel.hpp"
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


}  // namespace

TEST_CASE("k-means++ draw probabilities are squared distances normalized") {
  const auto x = line_points({0, 1, 100});
  const std::vector<Index> first{0};
  const auto p = kmeanspp_probabilities(x, first);
  REQUIRE(p.size() == 3);
  CHECK(p[0] == 0.0);
  CHECK(p[1] == doctest::Approx(1.0 / 10001.0).epsilon(1e-14));
  CHECK(p[2] == doctest::Approx(10000.0 / 10001.0).epsilon(1e-14));

  const std::vector<Index> all{0, 1, 2};
  const auto none = kmeanspp_probabilities(x, all);
  CHECK(std::all_of(none.begin(), none.end(), [](double v) { return v == 0.0; }));
}

TEST_CASE("k-means++ seeding draws distinct rows of the input") {
  const auto x = oracle::random_points(30, 3, 1);
  const auto init = kmeans_pp_init(x, 5, 7);
  REQUIRE(init.points.rows() == 5);
  std::set<Index> rows;
  for (Index c = 0; c < 5; ++c) {
    for (Index i = 0; i < x.rows(); ++i)
      if (x.row(i) == init.points.row(c)) rows.insert(i);
  }
  CHECK(rows.size() == 5);
  CHECK(kmeans_pp_init(x, 5, 7).points == init.points);
}

TEST_CASE("k-means on well separated 1-d points") {
  const auto x = line_points({0, 0.1, 10, 10.1});
  const auto r = kmeans(x, 2);
  CHECK(r.k == 2);
  CHECK(r.assignments == std::vector<int>{0, 0, 1, 1});
  REQUIRE(r.barycenters.has_value());
  CHECK((*r.barycenters)(0, 0) == doctest::Approx(0.05));
  CHECK((*r.barycenters)(1, 0) == doctest::Approx(10.05));
  CHECK(kmeans_objective(x, r) == doctest::Approx(0.01).epsilon(1e-9));
  CHECK(r.seed == std::optional<std::uint64_t>(42));
}

TEST_CASE("k-means k=1 and k=n") {
  const auto x = oracle::random_points(12, 2, 3);
  const auto one = kmeans(x, 1);
  CHECK(std::all_of(one.assignments.begin(), one.assignments.end(), [](int a) { return a == 0; }));
  CHECK(((*one.barycenters).row(0) - x.colwise().mean()).norm() < 1e-12);

  const auto all = kmeans(x, 12);
  std::vector<int> expected(12);
  std::iota(expected.begin(), expected.end(), 0);
  CHECK(all.assignments == expected);
  CHECK(kmeans_objective(x, all) < 1e-20);
}

TEST_CASE("k-means argument checks") {
  const auto x = oracle::random_points(4, 2, 3);
  CHECK(kind_of([&] { kmeans(x, 0); }) == ErrorKind::Argument);
  CHECK(kind_of([&] { kmeans(x, 5); }) == ErrorKind::Argument);
  KMeansConfig bad;
  bad.restarts = 0;
  CHECK(kind_of([&] { kmeans(x, 2, bad); }) == ErrorKind::Argument);
  const RowMatrix same = RowMatrix::Ones(4, 2);
  CHECK(kind_of([&] { kmeans(same, 2); }) == ErrorKind::Degenerate);
}

TEST_CASE("lloyd objective never increases") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto x = oracle::random_points(40, 3, s);
    const auto run = lloyd(x, kmeans_pp_init(x, 4, s), KMeansConfig{});
    REQUIRE(run.objective_trace.size() >= 2);
    for (std::size_t t = 1; t < run.objective_trace.size(); ++t)
      CHECK(run.objective_trace[t] <= run.objective_trace[t - 1] * (1 + 1e-12) + 1e-12);
    CHECK(run.converged);
    CHECK(run.objective == doctest::Approx(oracle::sse_of(x, {}) + [&] {
            double s2 = 0;
            for (int c = 0; c < 4; ++c) {
              std::vector<Index> rows;
              for (Index i = 0; i < x.rows(); ++i)
                if (run.assignments[static_cast<std::size_t>(i)] == c) rows.push_back(i);
              s2 += oracle::sse_of(x, rows);
            }
            return s2;
          }()).epsilon(1e-10));
  }
}

TEST_CASE("k=2 restarts reach the exhaustive optimum on small sets") {
  KMeansConfig cfg;
  cfg.restarts = 20;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto x = oracle::random_points(8, 2, 100 + s);
    const auto best = oracle::best_two_partition(x);
    const auto r = kmeans(x, 2, cfg);
    CHECK(kmeans_objective(x, r) == doctest::Approx(best.cost).epsilon(1e-9));
  }
}

TEST_CASE("k-means is deterministic and seed sensitive only through the seed") {
  const auto x = oracle::random_points(60, 4, 11);
  KMeansConfig cfg;
  cfg.seed = 9;
  const auto a = kmeans(x, 5, cfg);
  const auto b = kmeans(x, 5, cfg);
  CHECK(a.assignments == b.assignments);
  CHECK(*a.barycenters == *b.barycenters);
}

TEST_CASE("bisecting k-means") {
  const auto blobs = oracle::gaussian_blobs({{0, 0}, {20, 0}, {0, 20}, {20, 20}}, 15, 1.0, 4);
  const auto r = bisecting_kmeans(blobs.points, 4);
  CHECK(r.k == 4);
  CHECK(oracle::same_partition(r.assignments, blobs.labels));
  CHECK(r.barycenters.has_value());
  const auto one = bisecting_kmeans(blobs.points, 1);
  CHECK(std::all_of(one.assignments.begin(), one.assignments.end(), [](int a) { return a == 0; }));
}

TEST_CASE("canonical labels follow first appearance") {
  ClusterResult r;
  r.assignments = {2, 2, kNoise, 0, 1};
  r.k = 3;
  RowMatrix bary(3, 1);
  bary << 10, 11, 12;
  r.barycenters = bary;
  canonicalize_labels(r);
  CHECK(r.assignments == std::vector<int>{0, 0, kNoise, 1, 2});
  CHECK((*r.barycenters)(0, 0) == 12);
  CHECK((*r.barycenters)(1, 0) == 10);
  CHECK((*r.barycenters)(2, 0) == 11);
}

TEST_CASE("result helpers") {
  const auto x = line_points({0, 2, 10, 5});
  const std::vector<int> a{0, 0, 1, kNoise};
  const auto c = compute_barycenters(x, a, 2);
  CHECK(c(0, 0) == 1.0);
  CHECK(c(1, 0) == 10.0);
  CHECK(within_cluster_sum_of_squares(x, a, c) == 2.0);
  CHECK(cluster_sizes(a, 2) == std::vector<std::size_t>{2, 1});
  CHECK(distinct_rows(line_points({1, 1, 2})) == 2);
}

TEST_CASE("parallel restarts match a single worker bit for bit") {
  const auto x = oracle::random_points(200, 5, 17);
  KMeansConfig cfg;
  cfg.restarts = 16;
  const auto parallel = kmeans(x, 6, cfg);
  ::setenv("INTENTBENCH_THREADS", "1", 1);
  CHECK(thread_budget() == 1);
  const auto sequential = kmeans(x, 6, cfg);
  ::unsetenv("INTENTBENCH_THREADS");
  CHECK(parallel.assignments == sequential.assignments);
  CHECK(*parallel.barycenters == *sequential.barycenters);
}

TEST_CASE("parallel_for runs every index once and rethrows the lowest failure") {
  std::vector<int> hits(100, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  try {
    parallel_for(50, [](std::size_t i) {
      if (i == 7 || i == 30) throw Error(ErrorKind::Numeric, "index " + std::to_string(i));
    });
    FAIL("should throw");
  } catch (const Error& e) {
    CHECK(std::string(e.what()) == "index 7");
  }
}
