#include "intentbench/linear_assignment.hpp"

#include <algorithm>
#include <limits>

#include "intentbench/error.hpp"

namespace intentbench {

namespace {

/// Min-cost assignment of every row (rows <= cols), 1-based potentials.
std::vector<int> min_cost_rows(const std::vector<std::vector<std::int64_t>>& cost, std::size_t rows,
                               std::size_t cols) {
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> u(rows + 1, 0), v(cols + 1, 0);
  std::vector<std::size_t> match(cols + 1, 0), way(cols + 1, 0);

  for (std::size_t i = 1; i <= rows; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<std::int64_t> minv(cols + 1, kInf);
    std::vector<bool> used(cols + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = match[j0];
      std::int64_t delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= cols; ++j) {
        if (used[j]) continue;
        const std::int64_t reduced = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (reduced < minv[j]) {
          minv[j] = reduced;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= cols; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_to_col(rows, -1);
  for (std::size_t j = 1; j <= cols; ++j) {
    if (match[j] != 0) row_to_col[match[j] - 1] = static_cast<int>(j - 1);
  }
  return row_to_col;
}

}  // namespace

Assignment max_weight_assignment(const std::vector<std::vector<std::int64_t>>& weights) {
  Assignment result;
  const std::size_t rows = weights.size();
  if (rows == 0) return result;
  const std::size_t cols = weights.front().size();
  for (const auto& row : weights) {
    if (row.size() != cols) throw Error(ErrorKind::Argument, "assignment: ragged weight matrix");
  }
  result.row_to_col.assign(rows, -1);
  if (cols == 0) return result;

  std::int64_t top = 0;
  for (const auto& row : weights) {
    for (auto w : row) top = std::max(top, w);
  }

  const bool transpose = rows > cols;
  const std::size_t r = transpose ? cols : rows;
  const std::size_t c = transpose ? rows : cols;
  std::vector<std::vector<std::int64_t>> cost(r, std::vector<std::int64_t>(c));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) cost[i][j] = top - (transpose ? weights[j][i] : weights[i][j]);
  }
  const auto matched = min_cost_rows(cost, r, c);
  for (std::size_t i = 0; i < r; ++i) {
    const auto j = static_cast<std::size_t>(matched[i]);
    if (transpose) {
      result.row_to_col[j] = static_cast<int>(i);
    } else {
      result.row_to_col[i] = static_cast<int>(j);
    }
  }
  for (std::size_t i = 0; i < rows; ++i) {
    if (result.row_to_col[i] >= 0) result.total += weights[i][static_cast<std::size_t>(result.row_to_col[i])];
  }
  return result;
}

}  // namespace intentbench
