#include "intentbench/embedstore.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "intentbench/error.hpp"

namespace intentbench::embed {

namespace {

using nlohmann::json;

constexpr double kUnitNormTolerance = 1e-9;

[[noreturn]] void format_error(std::string_view source, std::size_t line, const std::string& what) {
  throw Error(ErrorKind::Parse, std::string(source) + ":" + std::to_string(line) + ": " + what);
}

json parse_object(const std::string& text, std::string_view source, std::size_t line) {
  json value;
  try {
    value = json::parse(text);
  } catch (const json::exception& e) {
    format_error(source, line, e.what());
  }
  if (!value.is_object()) format_error(source, line, "expected a JSON object");
  return value;
}

std::size_t non_negative(const json& object, const char* key, std::string_view source) {
  auto it = object.find(key);
  if (it == object.end() || !it->is_number_integer() || it->get<long long>() < 0) {
    format_error(source, 1, std::string("header requires non-negative integer '") + key + "'");
  }
  return it->get<std::size_t>();
}

}  // namespace

void EmbeddingMatrix::validate() const {
  if (static_cast<Index>(ids.size()) != data.rows()) {
    throw Error(ErrorKind::Validation, "embedding ids (" + std::to_string(ids.size()) +
                                           ") do not match row count (" +
                                           std::to_string(data.rows()) + ")");
  }
  if (data.cols() < 1) throw Error(ErrorKind::Validation, "embedding dimension must be >= 1");
  std::unordered_set<std::string_view> seen;
  for (Index i = 0; i < data.rows(); ++i) {
    if (!seen.insert(ids[i]).second) {
      throw Error(ErrorKind::Validation, "duplicate embedding id '" + ids[i] + "'");
    }
    if (!data.row(i).allFinite()) {
      throw Error(ErrorKind::Validation, "non-finite entry in embedding '" + ids[i] + "'");
    }
    if (normalized && std::abs(data.row(i).norm() - 1.0) > kUnitNormTolerance) {
      throw Error(ErrorKind::Validation, "embedding '" + ids[i] + "' is not unit norm");
    }
  }
}

EmbeddingMatrix read_embeddings(std::istream& in, std::string_view source) {
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.find_first_not_of(" \t\r") != std::string::npos) break;
  }
  if (line == 0 || text.find_first_not_of(" \t\r") == std::string::npos) {
    format_error(source, line == 0 ? 1 : line, "missing header line");
  }
  const json header = parse_object(text, source, line);
  const std::size_t dim = non_negative(header, "dim", source);
  const std::size_t count = non_negative(header, "count", source);
  if (dim < 1) format_error(source, line, "dim must be >= 1");

  EmbeddingMatrix matrix;
  matrix.data.resize(static_cast<Index>(count), static_cast<Index>(dim));
  matrix.ids.reserve(count);
  std::unordered_map<std::string, std::size_t> seen;

  std::size_t row = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (row == count) format_error(source, line, "more rows than header count " + std::to_string(count));
    const json record = parse_object(text, source, line);

    auto id = record.find("id");
    if (id == record.end() || !id->is_string()) format_error(source, line, "missing string 'id'");
    auto vector = record.find("vector");
    if (vector == record.end() || !vector->is_array()) format_error(source, line, "missing 'vector' array");
    if (vector->size() != dim) {
      format_error(source, line, "dimension mismatch: expected " + std::to_string(dim) + ", got " +
                                     std::to_string(vector->size()));
    }
    for (std::size_t j = 0; j < dim; ++j) {
      const auto& value = (*vector)[j];
      if (!value.is_number()) format_error(source, line, "non-numeric coordinate");
      const double x = value.get<double>();
      if (!std::isfinite(x)) format_error(source, line, "non-finite coordinate");
      matrix.data(static_cast<Index>(row), static_cast<Index>(j)) = x;
    }

    auto name = id->get<std::string>();
    if (!seen.emplace(name, line).second) {
      throw Error(ErrorKind::Validation, std::string(source) + ":" + std::to_string(line) +
                                             ": duplicate id '" + name + "'");
    }
    matrix.ids.push_back(std::move(name));
    ++row;
  }
  if (row != count) {
    format_error(source, line, "header count " + std::to_string(count) + " but " +
                                   std::to_string(row) + " rows");
  }
  return matrix;
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read embeddings " + path.string());
  return read_embeddings(in, path.string());
}

void write_embeddings(const EmbeddingMatrix& matrix, std::ostream& out) {
  matrix.validate();
  out << json{{"dim", matrix.dim()}, {"count", matrix.rows()}}.dump() << '\n';
  char buffer[32];
  for (Index i = 0; i < matrix.rows(); ++i) {
    out << "{\"id\":" << json(matrix.ids[i]).dump() << ",\"vector\":[";
    for (Index j = 0; j < matrix.dim(); ++j) {
      if (j > 0) out << ',';
      std::snprintf(buffer, sizeof buffer, "%.17g", matrix.data(i, j));
      out << buffer;
    }
    out << "]}\n";
  }
}

void save_embeddings(const EmbeddingMatrix& matrix, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write embeddings " + path.string());
  write_embeddings(matrix, out);
  out.flush();
  if (!out) throw Error(ErrorKind::Io, "failed writing embeddings " + path.string());
}

EmbeddingMatrix l2_normalize(const EmbeddingMatrix& matrix) {
  EmbeddingMatrix out = matrix;
  for (Index i = 0; i < out.rows(); ++i) {
    const double norm = out.data.row(i).norm();
    if (norm == 0.0) {
      throw Error(ErrorKind::Numeric, "cannot normalize zero-norm embedding '" + out.ids[i] + "'");
    }
    out.data.row(i) /= norm;
  }
  out.normalized = true;
  return out;
}

EmbeddingMatrix align(const EmbeddingMatrix& matrix, std::span<const std::string> ids) {
  std::unordered_map<std::string_view, Index> position;
  position.reserve(matrix.ids.size());
  for (Index i = 0; i < matrix.rows(); ++i) position.emplace(matrix.ids[i], i);

  std::vector<std::string> missing;
  for (const auto& id : ids) {
    if (!position.contains(id)) missing.push_back(id);
  }
  if (!missing.empty()) {
    std::string list;
    for (std::size_t i = 0; i < missing.size() && i < 20; ++i) list += (i ? ", " : "") + missing[i];
    if (missing.size() > 20) list += ", ...";
    throw Error(ErrorKind::Validation, std::to_string(missing.size()) +
                                           " utterance ids have no embedding: " + list);
  }

  EmbeddingMatrix out;
  out.normalized = matrix.normalized;
  out.ids.assign(ids.begin(), ids.end());
  out.data.resize(static_cast<Index>(ids.size()), matrix.dim());
  for (Index i = 0; i < out.data.rows(); ++i) out.data.row(i) = matrix.data.row(position.at(ids[i]));
  return out;
}

EmbeddingMatrix align(const EmbeddingMatrix& matrix, std::span<const corpus::UtteranceRecord> records) {
  std::vector<std::string> ids;
  ids.reserve(records.size());
  for (const auto& record : records) ids.push_back(record.utterance_id);
  return align(matrix, ids);
}

}  // namespace intentbench::embed
