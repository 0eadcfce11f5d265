#include "intentbench/cluster/agglomerative.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "intentbench/error.hpp"

namespace intentbench::cluster {

namespace {

/// Upper-triangular dissimilarity store over n slots.
class Condensed {
 public:
  explicit Condensed(std::size_t n) : n_(n), values_(n * (n - 1) / 2) {}

  double& operator()(std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    return values_[offset(i) + (j - i - 1)];
  }

 private:
  std::size_t offset(std::size_t i) const { return i * (2 * n_ - i - 1) / 2; }

  std::size_t n_;
  std::vector<double> values_;
};

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

}  // namespace

Linkage parse_linkage(std::string_view name) {
  if (name == "ward") return Linkage::Ward;
  if (name == "average") return Linkage::Average;
  if (name == "complete") return Linkage::Complete;
  if (name == "single") return Linkage::Single;
  throw Error(ErrorKind::Argument, "unknown linkage '" + std::string(name) + "'");
}

std::string_view to_string(Linkage linkage) noexcept {
  switch (linkage) {
    case Linkage::Ward: return "ward";
    case Linkage::Average: return "average";
    case Linkage::Complete: return "complete";
    case Linkage::Single: return "single";
  }
  return "ward";
}

ClusterResult agglomerative(const RowMatrix& points, int k, Linkage linkage) {
  require_k_in_range(k, points.rows(), "agglomerative");
  const auto n = static_cast<std::size_t>(points.rows());

  // Slot i always holds the cluster whose smallest member is row i.
  std::vector<std::size_t> owner(n);
  std::iota(owner.begin(), owner.end(), 0);

  if (n > 1 && static_cast<std::size_t>(k) < n) {
    Condensed dist(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double sq = (points.row(static_cast<Index>(i)) - points.row(static_cast<Index>(j))).squaredNorm();
        // Ward's update rule is exact on squared distances.
        dist(i, j) = linkage == Linkage::Ward ? sq : std::sqrt(sq);
      }
    }

    std::vector<bool> active(n, true);
    std::vector<double> size(n, 1.0);
    std::vector<std::size_t> nearest(n, kNone);
    std::vector<double> nearest_d(n, std::numeric_limits<double>::infinity());

    auto rescan = [&](std::size_t i) {
      nearest[i] = kNone;
      nearest_d[i] = std::numeric_limits<double>::infinity();
      for (std::size_t j = i + 1; j < n; ++j) {
        if (active[j] && dist(i, j) < nearest_d[i]) {
          nearest_d[i] = dist(i, j);
          nearest[i] = j;
        }
      }
    };
    for (std::size_t i = 0; i + 1 < n; ++i) rescan(i);

    for (std::size_t merges = n - static_cast<std::size_t>(k); merges > 0; --merges) {
      std::size_t a = kNone;
      for (std::size_t i = 0; i < n; ++i) {
        if (active[i] && nearest[i] != kNone && (a == kNone || nearest_d[i] < nearest_d[a])) a = i;
      }
      const std::size_t b = nearest[a];
      const double d_ab = nearest_d[a];
      const double na = size[a];
      const double nb = size[b];

      for (std::size_t m = 0; m < n; ++m) {
        if (!active[m] || m == a || m == b) continue;
        const double d_am = dist(a, m);
        const double d_bm = dist(b, m);
        double merged = 0.0;
        switch (linkage) {
          case Linkage::Single: merged = std::min(d_am, d_bm); break;
          case Linkage::Complete: merged = std::max(d_am, d_bm); break;
          case Linkage::Average: merged = (na * d_am + nb * d_bm) / (na + nb); break;
          case Linkage::Ward: {
            const double nm = size[m];
            merged = ((na + nm) * d_am + (nb + nm) * d_bm - nm * d_ab) / (na + nb + nm);
            break;
          }
        }
        dist(a, m) = merged;
      }

      active[b] = false;
      size[a] = na + nb;
      for (auto& o : owner) {
        if (o == b) o = a;
      }

      rescan(a);
      for (std::size_t m = 0; m < n; ++m) {
        if (!active[m] || m == a) continue;
        if (nearest[m] == a || nearest[m] == b) {
          rescan(m);
        } else if (m < a && dist(m, a) < nearest_d[m]) {
          nearest[m] = a;
          nearest_d[m] = dist(m, a);
        } else if (m < a && dist(m, a) == nearest_d[m] && a < nearest[m]) {
          nearest[m] = a;
        }
      }
    }
  }

  ClusterResult result;
  result.assignments.resize(n);
  for (std::size_t i = 0; i < n; ++i) result.assignments[i] = static_cast<int>(owner[i]);
  // Slot ids are row indices; compress them to 0..k-1 in first-appearance order.
  std::vector<int> compact(n, -1);
  int next = 0;
  for (auto& label : result.assignments) {
    auto& slot = compact[static_cast<std::size_t>(label)];
    if (slot < 0) slot = next++;
    label = slot;
  }
  result.k = k;
  result.algorithm = "agglomerative-" + std::string(to_string(linkage));
  result.barycenters = compute_barycenters(points, result.assignments, k);
  return result;
}

}  // namespace intentbench::cluster
