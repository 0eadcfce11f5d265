#include "intentbench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include <json.hpp>

#include "intentbench/error.hpp"
#include "intentbench/linear_assignment.hpp"

namespace intentbench::metrics {

namespace {

double entropy(std::span<const std::int64_t> sums, double n) {
  double h = 0.0;
  for (auto s : sums) {
    if (s == 0) continue;
    const double p = static_cast<double>(s) / n;
    h -= p * std::log(p);
  }
  return h;
}

// Pair counts reach n^4 inside ari(); 64 bits overflow near n = 65k.
__extension__ using Wide = __int128;

Wide pairs(std::int64_t m) { return static_cast<Wide>(m) * (m - 1) / 2; }

}  // namespace

void LabelPair::validate() const {
  if (predicted.size() != reference.size()) {
    throw Error(ErrorKind::Argument, "label pair length mismatch: " + std::to_string(predicted.size()) +
                                         " predicted vs " + std::to_string(reference.size()) + " reference");
  }
  if (predicted.empty()) throw Error(ErrorKind::Argument, "label pair is empty");
  if (std::any_of(predicted.begin(), predicted.end(), [](int c) { return c < 0; })) {
    throw Error(ErrorKind::Argument, "label pair contains noise labels; resolve them first");
  }
}

std::vector<int> resolve_noise(std::span<const int> assignments) {
  int next = 0;
  for (int c : assignments) next = std::max(next, c + 1);
  std::vector<int> out(assignments.begin(), assignments.end());
  for (int& c : out) {
    if (c < 0) c = next++;
  }
  return out;
}

ContingencyTable contingency(const LabelPair& pair) {
  pair.validate();
  ContingencyTable table;
  std::unordered_map<int, std::size_t> row_of;
  std::unordered_map<std::string, std::size_t> col_of;
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  cells.reserve(pair.predicted.size());
  for (std::size_t i = 0; i < pair.predicted.size(); ++i) {
    auto [r, new_row] = row_of.try_emplace(pair.predicted[i], table.row_labels.size());
    if (new_row) table.row_labels.push_back(pair.predicted[i]);
    auto [c, new_col] = col_of.try_emplace(pair.reference[i], table.col_labels.size());
    if (new_col) table.col_labels.push_back(pair.reference[i]);
    cells.emplace_back(r->second, c->second);
  }
  table.counts.assign(table.rows(), std::vector<std::int64_t>(table.cols(), 0));
  table.row_sums.assign(table.rows(), 0);
  table.col_sums.assign(table.cols(), 0);
  for (auto [r, c] : cells) {
    ++table.counts[r][c];
    ++table.row_sums[r];
    ++table.col_sums[c];
  }
  table.total = static_cast<std::int64_t>(cells.size());
  return table;
}

double nmi(const LabelPair& pair) {
  const auto table = contingency(pair);
  const double n = static_cast<double>(table.total);
  const double hx = entropy(table.row_sums, n);
  const double hy = entropy(table.col_sums, n);
  if (table.rows() == 1 && table.cols() == 1) return 1.0;
  if (table.rows() == 1 || table.cols() == 1) return 0.0;

  double mi = 0.0;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    for (std::size_t j = 0; j < table.cols(); ++j) {
      const auto nij = table.counts[i][j];
      if (nij == 0) continue;
      const double joint = static_cast<double>(nij);
      mi += joint / n *
            std::log(n * joint / (static_cast<double>(table.row_sums[i]) * static_cast<double>(table.col_sums[j])));
    }
  }
  return std::clamp(mi / std::min(hx, hy), 0.0, 1.0);
}

double ari(const LabelPair& pair) {
  const auto table = contingency(pair);
  if (table.total < 2) throw Error(ErrorKind::Argument, "ari requires at least 2 examples");

  Wide index = 0;
  for (const auto& row : table.counts) {
    for (auto nij : row) index += pairs(nij);
  }
  Wide a = 0, b = 0;
  for (auto s : table.row_sums) a += pairs(s);
  for (auto s : table.col_sums) b += pairs(s);
  const Wide total = pairs(table.total);

  // Both sides scaled by 2 * C(n, 2) to stay in integers.
  const Wide numerator = 2 * index * total - 2 * a * b;
  const Wide denominator = (a + b) * total - 2 * a * b;
  if (denominator == 0) return 1.0;
  return static_cast<double>(static_cast<long double>(numerator) / static_cast<long double>(denominator));
}

std::map<int, std::string> many_to_one_map(const ContingencyTable& table) {
  std::map<int, std::string> mapping;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    const auto& row = table.counts[i];
    const auto best = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
    mapping.emplace(table.row_labels[i], table.col_labels[best]);
  }
  return mapping;
}

namespace {

/// Column each row is aligned to under the many-to-one map.
std::vector<std::size_t> majority_columns(const ContingencyTable& table) {
  std::vector<std::size_t> columns(table.rows());
  for (std::size_t i = 0; i < table.rows(); ++i) {
    const auto& row = table.counts[i];
    columns[i] = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return columns;
}

}  // namespace

PrecisionRecallF1 precision_recall_f1(const LabelPair& pair) {
  const auto table = contingency(pair);
  const auto aligned = majority_columns(table);

  std::vector<std::int64_t> predicted_as(table.cols(), 0);
  std::vector<std::int64_t> hits(table.cols(), 0);
  std::vector<bool> covered(table.cols(), false);
  for (std::size_t i = 0; i < table.rows(); ++i) {
    const auto j = aligned[i];
    covered[j] = true;
    predicted_as[j] += table.row_sums[i];
    hits[j] += table.counts[i][j];
  }

  PrecisionRecallF1 out;
  std::size_t labels = 0;
  for (std::size_t j = 0; j < table.cols(); ++j) {
    if (!covered[j]) continue;
    ++labels;
    out.precision += static_cast<double>(hits[j]) / static_cast<double>(predicted_as[j]);
    out.recall += static_cast<double>(hits[j]) / static_cast<double>(table.col_sums[j]);
  }
  out.precision /= static_cast<double>(labels);
  out.recall /= static_cast<double>(labels);
  const double sum = out.precision + out.recall;
  out.f1 = sum > 0.0 ? 2.0 * out.precision * out.recall / sum : 0.0;
  return out;
}

double example_coverage(const LabelPair& pair) {
  const auto table = contingency(pair);
  std::vector<bool> covered(table.cols(), false);
  for (auto j : majority_columns(table)) covered[j] = true;
  std::int64_t examples = 0;
  for (std::size_t j = 0; j < table.cols(); ++j) {
    if (covered[j]) examples += table.col_sums[j];
  }
  return static_cast<double>(examples) / static_cast<double>(table.total);
}

double hungarian_accuracy(const LabelPair& pair) {
  const auto table = contingency(pair);
  const auto matching = max_weight_assignment(table.counts);
  return static_cast<double>(matching.total) / static_cast<double>(table.total);
}

double many_to_one_accuracy(const LabelPair& pair) {
  const auto table = contingency(pair);
  const auto aligned = majority_columns(table);
  std::int64_t hits = 0;
  for (std::size_t i = 0; i < table.rows(); ++i) hits += table.counts[i][aligned[i]];
  return static_cast<double>(hits) / static_cast<double>(table.total);
}

MetricReport evaluate(const LabelPair& pair) {
  const auto table = contingency(pair);
  MetricReport report;
  report.nmi = nmi(pair);
  report.ari = ari(pair);
  report.acc = hungarian_accuracy(pair);
  const auto prf = precision_recall_f1(pair);
  report.precision = prf.precision;
  report.recall = prf.recall;
  report.f1 = prf.f1;
  report.example_coverage = example_coverage(pair);
  report.k_predicted = static_cast<int>(table.rows());
  report.k_reference = static_cast<int>(table.cols());
  return report;
}

std::string MetricReport::to_json() const {
  nlohmann::ordered_json j;
  j["nmi"] = nmi;
  j["ari"] = ari;
  j["acc"] = acc;
  j["precision"] = precision;
  j["recall"] = recall;
  j["f1"] = f1;
  j["example_coverage"] = example_coverage;
  j["k_predicted"] = k_predicted;
  j["k_reference"] = k_reference;
  return j.dump();
}

MetricReport MetricReport::from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    MetricReport r;
    r.nmi = j.at("nmi").get<double>();
    r.ari = j.at("ari").get<double>();
    r.acc = j.at("acc").get<double>();
    r.precision = j.at("precision").get<double>();
    r.recall = j.at("recall").get<double>();
    r.f1 = j.at("f1").get<double>();
    r.example_coverage = j.at("example_coverage").get<double>();
    r.k_predicted = j.at("k_predicted").get<int>();
    r.k_reference = j.at("k_reference").get<int>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("metric report: ") + e.what());
  }
}

double display(double fraction) { return std::round(fraction * 1000.0) / 10.0; }

std::string format_display(double fraction) {
  char buffer[32];
  double value = display(fraction);
  if (value == 0.0) value = 0.0;  // no "-0.0"
  std::snprintf(buffer, sizeof buffer, "%.1f", value);
  return buffer;
}

}  // namespace intentbench::metrics
