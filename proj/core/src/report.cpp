#include <algorithm>
#include <fstream>
#include <tuple>

#include <json.hpp>

#include "intentbench/error.hpp"
#include "intentbench/pipeline.hpp"

namespace intentbench::pipeline {

namespace {

constexpr const char* kMetricColumns[] = {"NMI", "ARI", "ACC", "Precision", "Recall", "F1",
                                          "Example Coverage", "#K"};

std::vector<std::string> metric_cells(const metrics::MetricReport& r) {
  return {metrics::format_display(r.nmi),       metrics::format_display(r.ari),
          metrics::format_display(r.acc),       metrics::format_display(r.precision),
          metrics::format_display(r.recall),    metrics::format_display(r.f1),
          metrics::format_display(r.example_coverage), std::to_string(r.k_predicted)};
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n") == std::string::npos) return value;
  std::string quoted = "\"";
  for (char c : value) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
  if (name == "md" || name == "markdown") return ReportFormat::Markdown;
  if (name == "csv") return ReportFormat::Csv;
  throw Error(ErrorKind::Argument, "unknown report format '" + std::string(name) + "'");
}

ReportRow report_row(const ExperimentResult& result) {
  ReportRow row;
  row.method = result.clustering.algorithm.empty() ? std::string(cluster::to_string(result.config.algorithm.algorithm))
                                                   : result.clustering.algorithm;
  row.embedding = result.config.embeddings.stem().string();
  row.task = result.config.task == Task::IntentClustering ? "task1" : "task2";
  if (!result.config.algorithm.k_parameterized()) {
    row.k_setting = "n/a";
  } else {
    row.k_setting = result.config.k ? std::to_string(*result.config.k) : "auto";
  }
  row.report = result.report;
  return row;
}

ReportRow read_report_row(const std::filesystem::path& result_json) {
  std::ifstream in(result_json);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + result_json.string());
  try {
    const auto j = nlohmann::json::parse(in);
    ReportRow row;
    const auto& ident = j.at("row");
    row.method = ident.at("method").get<std::string>();
    row.embedding = ident.at("embedding").get<std::string>();
    row.task = ident.at("task").get<std::string>();
    row.k_setting = ident.at("k_setting").get<std::string>();
    row.report = metrics::MetricReport::from_json(j.at("metrics").dump());
    return row;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, result_json.string() + ": " + e.what());
  }
}

std::string render_report(std::vector<ReportRow> rows, ReportFormat format) {
  std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
    return std::tie(a.task, a.embedding, a.method, a.k_setting) <
           std::tie(b.task, b.embedding, b.method, b.k_setting);
  });

  std::string out;
  if (format == ReportFormat::Csv) {
    out += "Task,Embedding,Method,K Setting";
    for (const char* c : kMetricColumns) out += std::string(",") + c;
    out += '\n';
    for (const auto& row : rows) {
      out += csv_field(row.task) + ',' + csv_field(row.embedding) + ',' + csv_field(row.method) + ',' +
             csv_field(row.k_setting);
      for (const auto& cell : metric_cells(row.report)) out += ',' + cell;
      out += '\n';
    }
    return out;
  }

  out += "| Task | Embedding | Method | K Setting |";
  for (const char* c : kMetricColumns) out += std::string(" ") + c + " |";
  out += "\n|---|---|---|---|";
  for (std::size_t i = 0; i < std::size(kMetricColumns); ++i) out += "---:|";
  out += '\n';
  for (const auto& row : rows) {
    out += "| " + row.task + " | " + row.embedding + " | " + row.method + " | " + row.k_setting + " |";
    for (const auto& cell : metric_cells(row.report)) out += " " + cell + " |";
    out += '\n';
  }
  return out;
}

void emit_report(std::span<const ExperimentResult> results, ReportFormat format,
                 const std::filesystem::path& path) {
  if (results.empty()) throw Error(ErrorKind::Argument, "report: no results");
  std::vector<ReportRow> rows;
  rows.reserve(results.size());
  for (const auto& r : results) rows.push_back(report_row(r));
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write report " + path.string());
  out << render_report(std::move(rows), format);
  out.flush();
  if (!out) throw Error(ErrorKind::Io, "failed writing report " + path.string());
}

}  // namespace intentbench::pipeline
