#pragma once

#include <cstdint>
#include <vector>

namespace intentbench {

struct Assignment {
  /// Column matched to each row, or -1 when the row is left unmatched.
  std::vector<int> row_to_col;
  std::int64_t total = 0;
};

/// Maximum-weight matching on a rectangular integer weight matrix
/// (Hungarian method with potentials, O(r^2 c)). Each row and each column is
/// used at most once; min(rows, cols) pairs are matched.
Assignment max_weight_assignment(const std::vector<std::vector<std::int64_t>>& weights);

}  // namespace intentbench
