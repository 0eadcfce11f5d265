#include "intentbench/cluster/birch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "intentbench/cluster/agglomerative.hpp"
#include "intentbench/error.hpp"

namespace intentbench::cluster {

ClusteringFeature ClusteringFeature::of_point(const Eigen::Ref<const Eigen::RowVectorXd>& point) {
  ClusteringFeature cf;
  cf.count = 1;
  cf.linear_sum = point.transpose();
  cf.squared_sum = point.squaredNorm();
  return cf;
}

ClusteringFeature& ClusteringFeature::operator+=(const ClusteringFeature& other) {
  if (count == 0) return *this = other;
  if (other.count == 0) return *this;
  count += other.count;
  linear_sum += other.linear_sum;
  squared_sum += other.squared_sum;
  return *this;
}

Eigen::VectorXd ClusteringFeature::centroid() const {
  return linear_sum / static_cast<double>(count);
}

double ClusteringFeature::radius() const {
  if (count == 0) return 0.0;
  const double n = static_cast<double>(count);
  const double variance = squared_sum / n - (linear_sum / n).squaredNorm();
  return std::sqrt(std::max(variance, 0.0));
}

void BirchConfig::validate() const {
  if (!(threshold > 0.0)) throw Error(ErrorKind::Argument, "birch: threshold must be > 0");
  if (branching < 2) throw Error(ErrorKind::Argument, "birch: branching factor must be >= 2");
}

struct CFTree::Node {
  struct Entry {
    ClusteringFeature cf;
    std::unique_ptr<Node> child;
    std::size_t leaf_id = 0;
  };

  bool leaf = true;
  std::vector<Entry> entries;

  ClusteringFeature summary() const {
    ClusteringFeature total;
    for (const auto& e : entries) total += e.cf;
    return total;
  }
};

namespace {

std::size_t closest_entry(const auto& entries, const Eigen::VectorXd& x) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const double d = (entries[i].cf.centroid() - x).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

}  // namespace

CFTree::CFTree(Index dim, BirchConfig config) : dim_(dim), config_(config), root_(std::make_unique<Node>()) {
  config_.validate();
}

CFTree::~CFTree() = default;
CFTree::CFTree(CFTree&&) noexcept = default;
CFTree& CFTree::operator=(CFTree&&) noexcept = default;

std::size_t CFTree::insert(const Eigen::Ref<const Eigen::RowVectorXd>& point) {
  if (point.size() != dim_) throw Error(ErrorKind::Argument, "birch: point dimension mismatch");
  const ClusteringFeature single = ClusteringFeature::of_point(point);
  const Eigen::VectorXd x = point.transpose();
  const auto branching = static_cast<std::size_t>(config_.branching);

  // Splits an overfull node around its two most distant entries; returns the new sibling.
  auto split = [](Node& node) {
    auto& entries = node.entries;
    std::size_t s1 = 0, s2 = 1;
    double widest = -1.0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      for (std::size_t j = i + 1; j < entries.size(); ++j) {
        const double d = (entries[i].cf.centroid() - entries[j].cf.centroid()).squaredNorm();
        if (d > widest) {
          widest = d;
          s1 = i;
          s2 = j;
        }
      }
    }
    const Eigen::VectorXd c1 = entries[s1].cf.centroid();
    const Eigen::VectorXd c2 = entries[s2].cf.centroid();
    auto sibling = std::make_unique<Node>();
    sibling->leaf = node.leaf;
    std::vector<Node::Entry> kept;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      bool to_sibling = i == s2;
      if (i != s1 && i != s2) {
        const Eigen::VectorXd c = entries[i].cf.centroid();
        to_sibling = (c - c2).squaredNorm() < (c - c1).squaredNorm();
      }
      (to_sibling ? sibling->entries : kept).push_back(std::move(entries[i]));
    }
    entries = std::move(kept);
    return sibling;
  };

  std::size_t absorbed_by = 0;
  auto descend = [&](auto&& self, Node& node) -> std::unique_ptr<Node> {
    if (node.leaf) {
      bool merged = false;
      if (!node.entries.empty()) {
        auto& entry = node.entries[closest_entry(node.entries, x)];
        const ClusteringFeature candidate = entry.cf + single;
        if (candidate.radius() <= config_.threshold) {
          entry.cf = candidate;
          absorbed_by = entry.leaf_id;
          merged = true;
        }
      }
      if (!merged) {
        absorbed_by = leaf_count_++;
        node.entries.push_back({single, nullptr, absorbed_by});
      }
    } else {
      auto& entry = node.entries[closest_entry(node.entries, x)];
      auto sibling = self(self, *entry.child);
      entry.cf = entry.child->summary();
      if (sibling) {
        ClusteringFeature cf = sibling->summary();
        node.entries.push_back({std::move(cf), std::move(sibling), 0});
      }
    }
    if (node.entries.size() > branching) return split(node);
    return nullptr;
  };

  if (auto sibling = descend(descend, *root_)) {
    auto root = std::make_unique<Node>();
    root->leaf = false;
    ClusteringFeature left = root_->summary();
    ClusteringFeature right = sibling->summary();
    root->entries.push_back({std::move(left), std::move(root_), 0});
    root->entries.push_back({std::move(right), std::move(sibling), 0});
    root_ = std::move(root);
  }
  return absorbed_by;
}

std::vector<ClusteringFeature> CFTree::leaf_entries() const {
  std::vector<ClusteringFeature> out(leaf_count_);
  auto walk = [&](auto&& self, const Node& node) -> void {
    for (const auto& e : node.entries) {
      if (node.leaf) {
        out[e.leaf_id] = e.cf;
      } else {
        self(self, *e.child);
      }
    }
  };
  walk(walk, *root_);
  return out;
}

std::size_t CFTree::height() const {
  std::size_t h = 1;
  for (const Node* node = root_.get(); !node->leaf; node = node->entries.front().child.get()) ++h;
  return h;
}

ClusterResult birch(const RowMatrix& points, double threshold, int branching, int k) {
  const BirchConfig config{threshold, branching};
  config.validate();
  require_k_in_range(k, points.rows(), "birch");

  CFTree tree(points.cols(), config);
  std::vector<std::size_t> entry_of(static_cast<std::size_t>(points.rows()));
  for (Index i = 0; i < points.rows(); ++i) entry_of[static_cast<std::size_t>(i)] = tree.insert(points.row(i));

  const auto entries = tree.leaf_entries();
  if (static_cast<std::size_t>(k) > entries.size()) {
    throw Error(ErrorKind::Degenerate, "birch: k=" + std::to_string(k) + " exceeds the " +
                                           std::to_string(entries.size()) +
                                           " CF leaf entries; use a smaller threshold");
  }

  RowMatrix centroids(static_cast<Index>(entries.size()), points.cols());
  for (std::size_t e = 0; e < entries.size(); ++e) {
    centroids.row(static_cast<Index>(e)) = entries[e].centroid().transpose();
  }
  const ClusterResult groups = agglomerative(centroids, k, Linkage::Ward);

  ClusterResult result;
  result.assignments.resize(entry_of.size());
  for (std::size_t i = 0; i < entry_of.size(); ++i) result.assignments[i] = groups.assignments[entry_of[i]];
  result.k = k;
  result.algorithm = "birch";
  canonicalize_labels(result);
  result.barycenters = compute_barycenters(points, result.assignments, k);
  return result;
}

}  // namespace intentbench::cluster
