#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "intentbench/cluster/model_selection.hpp"
#include "intentbench/corpus.hpp"
#include "intentbench/embedstore.hpp"
#include "intentbench/metrics.hpp"

namespace intentbench::pipeline {

enum class Task { IntentClustering, IntentInduction };

struct ExperimentConfig {
  Task task = Task::IntentClustering;
  std::filesystem::path transcripts;
  std::filesystem::path embeddings;
  std::optional<std::filesystem::path> predicted_acts;
  std::string act_name = "InformIntent";
  cluster::AlgorithmSpec algorithm;
  /// nullopt selects k by silhouette over k_range.
  std::optional<int> k;
  cluster::KRange k_range{5, 50};
  bool normalize = true;
  std::uint64_t seed = 42;
  /// Keep at most this many utterances per reference intent (corpus order).
  std::optional<int> per_intent_cap;
  std::filesystem::path output_dir;

  void validate() const;
};

/// Selected utterances with their aligned (and optionally normalized) rows.
struct PreparedData {
  std::vector<corpus::UtteranceRecord> records;
  embed::EmbeddingMatrix embeddings;
};

struct ExperimentResult {
  ExperimentConfig config;
  metrics::MetricReport report;
  cluster::ClusterResult clustering;
  std::vector<std::string> ids;
  /// Filled when k was chosen automatically.
  std::optional<cluster::KSelection> k_selection;
  std::chrono::duration<double> duration{0.0};
  std::vector<std::size_t> cluster_sizes;
  /// Records that carried a reference intent and were scored.
  std::size_t evaluated = 0;
};

/// Load transcripts, select turns for the task, align embeddings, normalize.
PreparedData prepare(const ExperimentConfig& config);

/// Cluster and evaluate already-prepared data; writes nothing.
ExperimentResult run_prepared(const ExperimentConfig& config, const PreparedData& data);

/// prepare + run_prepared + write_outputs into config.output_dir.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// assignments.jsonl, report.csv, report.md and result.json.
void write_outputs(const ExperimentResult& result, const std::filesystem::path& dir);

/// Header {"algorithm", "k", "seed"} then one {"id", "cluster"} per row.
void write_assignments(const ExperimentResult& result, const std::filesystem::path& path);

struct AssignmentsFile {
  std::string algorithm;
  int k = 0;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> ids;
  std::vector<int> clusters;
};
AssignmentsFile read_assignments(const std::filesystem::path& path);

struct SweepEntry {
  int k = 0;
  std::optional<ExperimentResult> result;
  std::string error;
};

/// One run per k over shared prepared data. A failing k is recorded and the
/// sweep continues. Per-k outputs go to output_dir/k_<k>/, plus sweep.csv.
std::vector<SweepEntry> sweep_k(const ExperimentConfig& config, std::span<const int> k_values);

/// "k,nmi,ari,f1,example_coverage" rows, fractions at full precision.
std::string render_sweep_csv(std::span<const SweepEntry> entries);

enum class ReportFormat { Markdown, Csv };

ReportFormat parse_report_format(std::string_view name);

/// One table row: identifying columns plus the metric report.
struct ReportRow {
  std::string method;
  std::string embedding;
  std::string task;
  std::string k_setting;
  metrics::MetricReport report;
};

ReportRow report_row(const ExperimentResult& result);
/// Reads the row back from a result.json written by write_outputs.
ReportRow read_report_row(const std::filesystem::path& result_json);

/// Rows sorted by (task, embedding, method, k setting); metrics x100, one decimal.
std::string render_report(std::vector<ReportRow> rows, ReportFormat format);
void emit_report(std::span<const ExperimentResult> results, ReportFormat format,
                 const std::filesystem::path& path);

/// Two-component PCA view of the rows and cluster barycenters.
struct Projection {
  RowMatrix coordinates;           // n x 2
  RowMatrix barycenter_coordinates;  // k x 2
  Eigen::Vector2d variances = Eigen::Vector2d::Zero();
  std::vector<std::string> warnings;
};

/// Centers the data and projects onto the top two principal axes. Axis
/// signs are fixed so the largest-magnitude loading is positive.
Projection project_2d(const RowMatrix& points, const cluster::ClusterResult& result);

/// CSV: id,x,y,cluster,is_barycenter
std::string render_projection_csv(const Projection& projection, std::span<const std::string> ids,
                                  const cluster::ClusterResult& result);

}  // namespace intentbench::pipeline
