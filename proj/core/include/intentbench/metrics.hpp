#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace intentbench::metrics {

/// Predicted cluster per example alongside its reference intent.
struct LabelPair {
  std::vector<int> predicted;
  std::vector<std::string> reference;

  /// Equal non-zero lengths and no negative (noise) cluster ids.
  void validate() const;
};

/// Maps every noise entry (-1) to a fresh singleton cluster id above the
/// largest existing one; other ids are untouched.
std::vector<int> resolve_noise(std::span<const int> assignments);

/// Rows are predicted clusters and columns reference labels, each in order
/// of first appearance.
struct ContingencyTable {
  std::vector<int> row_labels;
  std::vector<std::string> col_labels;
  std::vector<std::vector<std::int64_t>> counts;
  std::vector<std::int64_t> row_sums;
  std::vector<std::int64_t> col_sums;
  std::int64_t total = 0;

  std::size_t rows() const noexcept { return row_labels.size(); }
  std::size_t cols() const noexcept { return col_labels.size(); }
};

ContingencyTable contingency(const LabelPair& pair);

/// I(X;Y) / min(H(X), H(Y)), natural log. 1 when both sides are a single
/// cluster, 0 when only one side is.
double nmi(const LabelPair& pair);

/// Adjusted Rand index from pair counts over the contingency table.
/// Degenerate (zero) denominators give 1. Requires n >= 2.
double ari(const LabelPair& pair);

/// Majority reference label for every predicted cluster; ties go to the
/// label that appears first.
std::map<int, std::string> many_to_one_map(const ContingencyTable& table);

struct PrecisionRecallF1 {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Macro averages over reference labels that receive at least one cluster
/// under the many-to-one map.
PrecisionRecallF1 precision_recall_f1(const LabelPair& pair);

/// Fraction of examples whose reference label receives at least one cluster.
double example_coverage(const LabelPair& pair);

/// Accuracy under the best one-to-one cluster/label matching.
double hungarian_accuracy(const LabelPair& pair);

/// Accuracy when every cluster predicts its majority label.
double many_to_one_accuracy(const LabelPair& pair);

/// Full metric suite. Values are fractions; use display() for the x100 view.
struct MetricReport {
  double nmi = 0.0;
  double ari = 0.0;
  double acc = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double example_coverage = 0.0;
  int k_predicted = 0;
  int k_reference = 0;

  /// Flat JSON object keyed by field name, full precision.
  std::string to_json() const;
  static MetricReport from_json(const std::string& text);
};

MetricReport evaluate(const LabelPair& pair);

/// x100, rounded to one decimal.
double display(double fraction);
/// display() formatted as "%.1f".
std::string format_display(double fraction);

}  // namespace intentbench::metrics
