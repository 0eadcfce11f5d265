#include "intentbench/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "intentbench/error.hpp"

namespace intentbench::pipeline {

namespace {

using nlohmann::ordered_json;

template <typename F>
auto staged(std::string_view stage, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    throw e.with_context(stage);
  }
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << contents;
  out.flush();
  if (!out) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

ordered_json config_json(const ExperimentConfig& config) {
  const auto& spec = config.algorithm;
  ordered_json params;
  switch (spec.algorithm) {
    case cluster::Algorithm::KMeans:
    case cluster::Algorithm::Bisecting:
      params["restarts"] = spec.kmeans.restarts;
      params["max_iter"] = spec.kmeans.max_iter;
      params["tol"] = spec.kmeans.tol;
      break;
    case cluster::Algorithm::Agglomerative:
      params["linkage"] = std::string(cluster::to_string(spec.linkage));
      break;
    case cluster::Algorithm::Birch:
      params["threshold"] = spec.birch.threshold;
      params["branching"] = spec.birch.branching;
      break;
    case cluster::Algorithm::Spectral:
      if (spec.affinity.kind == cluster::Affinity::Kind::Rbf) {
        params["affinity"] = "rbf";
      } else {
        params["affinity"] = "cosine-knn";
        params["neighbors"] = spec.affinity.neighbors;
      }
      break;
    case cluster::Algorithm::Dbscan:
      params["eps"] = spec.eps;
      params["min_pts"] = spec.min_pts;
      break;
  }

  ordered_json j;
  j["task"] = config.task == Task::IntentClustering ? 1 : 2;
  j["transcripts"] = config.transcripts.string();
  j["embeddings"] = config.embeddings.string();
  j["predicted_acts"] = config.predicted_acts ? ordered_json(config.predicted_acts->string()) : ordered_json();
  j["act_name"] = config.act_name;
  j["algorithm"] = std::string(cluster::to_string(spec.algorithm));
  j["algorithm_params"] = std::move(params);
  j["k"] = config.k ? ordered_json(*config.k) : ordered_json("auto");
  j["k_range"] = {config.k_range.lo, config.k_range.hi};
  j["normalize"] = config.normalize;
  j["seed"] = config.seed;
  j["per_intent_cap"] = config.per_intent_cap ? ordered_json(*config.per_intent_cap) : ordered_json();
  return j;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (task == Task::IntentInduction && !predicted_acts) {
    throw Error(ErrorKind::Validation, "intent induction requires a predicted dialog-act file");
  }
  if (act_name.empty()) throw Error(ErrorKind::Validation, "act name must be non-empty");
  if (!k && !algorithm.k_parameterized()) {
    throw Error(ErrorKind::Validation, "k=auto requires an algorithm that takes k");
  }
  if (k && *k < 1) throw Error(ErrorKind::Validation, "k must be positive");
  if (!k && k_range.lo > k_range.hi) throw Error(ErrorKind::Validation, "k range is empty");
  if (per_intent_cap && *per_intent_cap < 1) {
    throw Error(ErrorKind::Validation, "per-intent cap must be positive");
  }
}

PreparedData prepare(const ExperimentConfig& config) {
  config.validate();
  const auto dialogues = staged("load transcripts", [&] { return corpus::load_transcripts(config.transcripts); });

  corpus::ActSource source;
  source.act_name = config.act_name;
  std::optional<corpus::PredictedActs> predicted;
  if (config.task == Task::IntentInduction) {
    source.mode = corpus::ActMode::PredictedActs;
    predicted = staged("load predicted acts", [&] { return corpus::load_predicted_acts(*config.predicted_acts); });
  }

  PreparedData data;
  data.records = corpus::select_intent_turns(dialogues, source, predicted ? &*predicted : nullptr);
  if (config.per_intent_cap) {
    std::map<std::string, int> taken;
    std::erase_if(data.records, [&](const corpus::UtteranceRecord& r) {
      return r.reference_intent && ++taken[*r.reference_intent] > *config.per_intent_cap;
    });
  }
  if (data.records.empty()) {
    throw Error(ErrorKind::Validation, "select turns: no utterances carry act '" + config.act_name + "'");
  }

  const auto embeddings = staged("load embeddings", [&] { return embed::load_embeddings(config.embeddings); });
  data.embeddings = staged("align embeddings", [&] { return embed::align(embeddings, data.records); });
  if (config.normalize) {
    data.embeddings = staged("normalize", [&] { return embed::l2_normalize(data.embeddings); });
  }
  return data;
}

ExperimentResult run_prepared(const ExperimentConfig& config, const PreparedData& data) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();
  const RowMatrix& points = data.embeddings.data;

  ExperimentResult result;
  result.config = config;
  result.ids = data.embeddings.ids;

  cluster::AlgorithmSpec spec = config.algorithm;
  spec.kmeans.seed = config.seed;

  int k = config.k.value_or(0);
  if (!config.k) {
    const cluster::KRange range{std::max(config.k_range.lo, 2),
                                std::min<int>(config.k_range.hi, static_cast<int>(points.rows()))};
    result.k_selection = staged("select k", [&] { return cluster::select_k(points, spec, range, config.seed); });
    k = result.k_selection->k;
  }

  result.clustering = staged("cluster", [&] { return cluster::run_algorithm(points, spec, k); });
  result.clustering.seed = config.seed;
  result.cluster_sizes = cluster::cluster_sizes(result.clustering.assignments, result.clustering.k);

  metrics::LabelPair pair;
  const auto resolved = metrics::resolve_noise(result.clustering.assignments);
  for (std::size_t i = 0; i < data.records.size(); ++i) {
    if (!data.records[i].reference_intent) continue;
    pair.predicted.push_back(resolved[i]);
    pair.reference.push_back(*data.records[i].reference_intent);
  }
  result.evaluated = pair.predicted.size();
  if (result.evaluated == 0) {
    throw Error(ErrorKind::Validation, "evaluate: no selected utterance has a reference intent");
  }
  result.report = staged("evaluate", [&] { return metrics::evaluate(pair); });
  result.duration = std::chrono::steady_clock::now() - started;
  return result;
}

void write_assignments(const ExperimentResult& result, const std::filesystem::path& path) {
  std::string out;
  ordered_json header;
  header["algorithm"] = result.clustering.algorithm;
  header["k"] = result.clustering.k;
  header["seed"] = result.clustering.seed ? ordered_json(*result.clustering.seed) : ordered_json();
  out += header.dump() + '\n';
  for (std::size_t i = 0; i < result.ids.size(); ++i) {
    ordered_json row;
    row["id"] = result.ids[i];
    row["cluster"] = result.clustering.assignments[i];
    out += row.dump() + '\n';
  }
  write_file(path, out);
}

AssignmentsFile read_assignments(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read assignments " + path.string());
  AssignmentsFile file;
  std::string text;
  std::size_t line = 0;
  try {
    while (std::getline(in, text)) {
      ++line;
      if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
      const auto j = nlohmann::json::parse(text);
      if (file.algorithm.empty() && j.contains("algorithm")) {
        file.algorithm = j.at("algorithm").get<std::string>();
        file.k = j.at("k").get<int>();
        if (j.contains("seed") && !j.at("seed").is_null()) file.seed = j.at("seed").get<std::uint64_t>();
        continue;
      }
      file.ids.push_back(j.at("id").get<std::string>());
      file.clusters.push_back(j.at("cluster").get<int>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, path.string() + ":" + std::to_string(line) + ": " + e.what());
  }
  if (file.algorithm.empty()) throw Error(ErrorKind::Parse, path.string() + ": missing header line");
  return file;
}

void write_outputs(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create output directory " + dir.string() + ": " + ec.message());

  write_assignments(result, dir / "assignments.jsonl");
  const std::vector<ReportRow> rows{report_row(result)};
  write_file(dir / "report.csv", render_report(rows, ReportFormat::Csv));
  write_file(dir / "report.md", render_report(rows, ReportFormat::Markdown));

  const ReportRow row = rows.front();
  ordered_json j;
  j["config"] = config_json(result.config);
  j["row"] = {{"method", row.method}, {"embedding", row.embedding}, {"task", row.task}, {"k_setting", row.k_setting}};
  j["metrics"] = ordered_json::parse(result.report.to_json());
  if (result.k_selection) {
    ordered_json scores = ordered_json::array();
    for (auto [k, s] : result.k_selection->scores) scores.push_back({k, s});
    j["k_selection"] = {{"method", "silhouette"}, {"k", result.k_selection->k}, {"scores", std::move(scores)}};
  } else {
    j["k_selection"] = nullptr;
  }
  j["cluster_k"] = result.clustering.k;
  j["cluster_sizes"] = result.cluster_sizes;
  j["evaluated"] = result.evaluated;
  j["warnings"] = result.clustering.warnings;
  j["duration_seconds"] = result.duration.count();
  write_file(dir / "result.json", j.dump(2) + '\n');
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.output_dir.empty()) throw Error(ErrorKind::Validation, "output directory is required");
  const auto data = prepare(config);
  auto result = run_prepared(config, data);
  staged("write outputs", [&] {
    write_outputs(result, config.output_dir);
    return 0;
  });
  return result;
}

std::vector<SweepEntry> sweep_k(const ExperimentConfig& config, std::span<const int> k_values) {
  if (k_values.empty()) throw Error(ErrorKind::Argument, "sweep: no k values given");
  if (!config.algorithm.k_parameterized()) {
    throw Error(ErrorKind::Validation, "sweep: algorithm does not take k");
  }
  ExperimentConfig base = config;
  base.k = k_values.front();
  const auto data = prepare(base);

  std::vector<SweepEntry> entries;
  std::vector<ExperimentResult> succeeded;
  for (int k : k_values) {
    SweepEntry entry;
    entry.k = k;
    ExperimentConfig run = config;
    run.k = k;
    try {
      entry.result = run_prepared(run, data);
      if (!config.output_dir.empty()) {
        write_outputs(*entry.result, config.output_dir / ("k_" + std::to_string(k)));
      }
      succeeded.push_back(*entry.result);
    } catch (const Error& e) {
      entry.result.reset();
      entry.error = "k=" + std::to_string(k) + ": " + e.what();
    }
    entries.push_back(std::move(entry));
  }

  if (!config.output_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    write_file(config.output_dir / "sweep.csv", render_sweep_csv(entries));
    if (!succeeded.empty()) emit_report(succeeded, ReportFormat::Markdown, config.output_dir / "report.md");
  }
  return entries;
}

std::string render_sweep_csv(std::span<const SweepEntry> entries) {
  std::string out = "k,nmi,ari,f1,example_coverage,error\n";
  char buffer[160];
  for (const auto& e : entries) {
    if (e.result) {
      const auto& r = e.result->report;
      std::snprintf(buffer, sizeof buffer, "%d,%.17g,%.17g,%.17g,%.17g,\n", e.k, r.nmi, r.ari, r.f1,
                    r.example_coverage);
      out += buffer;
    } else {
      std::string error = e.error;
      std::replace(error.begin(), error.end(), '"', '\'');
      out += std::to_string(e.k) + ",,,,,\"" + error + "\"\n";
    }
  }
  return out;
}

}  // namespace intentbench::pipeline
