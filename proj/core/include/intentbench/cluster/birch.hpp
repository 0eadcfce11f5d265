#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "intentbench/cluster/result.hpp"

namespace intentbench::cluster {

/// Clustering feature (N, LS, SS): count, linear sum, sum of squared norms.
struct ClusteringFeature {
  std::size_t count = 0;
  Eigen::VectorXd linear_sum;
  double squared_sum = 0.0;

  static ClusteringFeature of_point(const Eigen::Ref<const Eigen::RowVectorXd>& point);

  ClusteringFeature& operator+=(const ClusteringFeature& other);
  friend ClusteringFeature operator+(ClusteringFeature a, const ClusteringFeature& b) { return a += b; }

  Eigen::VectorXd centroid() const;
  /// Root mean squared distance of members to the centroid.
  double radius() const;
};

struct BirchConfig {
  double threshold = 0.5;
  int branching = 50;

  void validate() const;
};

/// CF tree over a stream of points. Every leaf entry carries a stable id
/// assigned at creation; insert() reports which entry absorbed the point.
class CFTree {
 public:
  CFTree(Index dim, BirchConfig config);
  ~CFTree();
  CFTree(CFTree&&) noexcept;
  CFTree& operator=(CFTree&&) noexcept;

  std::size_t insert(const Eigen::Ref<const Eigen::RowVectorXd>& point);

  /// Leaf entries indexed by their id.
  std::vector<ClusteringFeature> leaf_entries() const;
  std::size_t leaf_entry_count() const noexcept { return leaf_count_; }
  std::size_t height() const;

 private:
  struct Node;
  Index dim_;
  BirchConfig config_;
  std::unique_ptr<Node> root_;
  std::size_t leaf_count_ = 0;
};

/// CF-tree condensation followed by Ward agglomeration of leaf centroids into
/// k groups. Each row takes the group of the leaf entry that absorbed it.
ClusterResult birch(const RowMatrix& points, double threshold, int branching, int k);

}  // namespace intentbench::cluster
