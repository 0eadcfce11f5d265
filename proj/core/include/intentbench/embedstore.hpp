#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "intentbench/corpus.hpp"
#include "intentbench/matrix.hpp"

namespace intentbench::embed {

/// n x d embedding matrix; row i belongs to ids[i].
struct EmbeddingMatrix {
  std::vector<std::string> ids;
  RowMatrix data;
  bool normalized = false;

  Index rows() const noexcept { return data.rows(); }
  Index dim() const noexcept { return data.cols(); }

  /// Throws Validation when ids/rows disagree, ids repeat, d < 1, an entry is
  /// non-finite, or a row of a normalized matrix is off the unit sphere.
  void validate() const;
};

/// Header line {"dim": d, "count": n}, then {"id": ..., "vector": [...]} per row.
EmbeddingMatrix load_embeddings(const std::filesystem::path& path);
EmbeddingMatrix read_embeddings(std::istream& in, std::string_view source);

/// Coordinates are written with 17 significant digits so doubles round-trip exactly.
void save_embeddings(const EmbeddingMatrix& matrix, const std::filesystem::path& path);
void write_embeddings(const EmbeddingMatrix& matrix, std::ostream& out);

EmbeddingMatrix l2_normalize(const EmbeddingMatrix& matrix);

/// Rows reordered to `ids` order and restricted to that set.
EmbeddingMatrix align(const EmbeddingMatrix& matrix, std::span<const std::string> ids);
EmbeddingMatrix align(const EmbeddingMatrix& matrix, std::span<const corpus::UtteranceRecord> records);

}  // namespace intentbench::embed
