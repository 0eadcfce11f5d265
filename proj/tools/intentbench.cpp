// intentbench: run, sweep, report and project intent-clustering experiments.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "intentbench/error.hpp"
#include "intentbench/pipeline.hpp"

namespace fs = std::filesystem;
using namespace intentbench;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

struct RunOptions {
  int task = 1;
  std::string transcripts;
  std::string embeddings;
  std::string predicted_acts;
  std::string act_name = "InformIntent";
  std::string algo = "kmeans";
  std::string k = "auto";
  std::string k_range = "5,50";
  std::string linkage = "ward";
  double eps = 0.5;
  int min_pts = 5;
  double birch_threshold = 0.5;
  int branching = 50;
  std::string affinity = "rbf";
  int neighbors = 10;
  int restarts = 10;
  int max_iter = 300;
  double tol = 1e-6;
  bool no_normalize = false;
  std::uint64_t seed = 42;
  int per_intent_cap = 0;
  std::string out;
};

void add_run_options(CLI::App* app, RunOptions& o) {
  app->add_option("--task", o.task, "1 = intent clustering (gold acts), 2 = intent induction (predicted acts)")
      ->required()
      ->check(CLI::IsMember({1, 2}));
  app->add_option("--transcripts", o.transcripts, "Transcript JSONL")->required();
  app->add_option("--embeddings", o.embeddings, "Embedding JSONL")->required();
  app->add_option("--predicted-acts", o.predicted_acts, "Predicted dialog-act JSONL (task 2)");
  app->add_option("--act-name", o.act_name, "Dialog act marking intent turns");
  app->add_option("--algo", o.algo, "Clustering algorithm")
      ->check(CLI::IsMember({"kmeans", "bisecting", "agglomerative", "birch", "spectral", "dbscan"}));
  app->add_option("--k", o.k, "Number of clusters or 'auto'");
  app->add_option("--k-range", o.k_range, "Inclusive A,B range searched when --k auto");
  app->add_option("--linkage", o.linkage, "Agglomerative linkage")
      ->check(CLI::IsMember({"ward", "average", "complete", "single"}));
  app->add_option("--eps", o.eps, "DBSCAN neighborhood radius");
  app->add_option("--min-pts", o.min_pts, "DBSCAN core-point threshold");
  app->add_option("--birch-threshold", o.birch_threshold, "BIRCH leaf-entry radius threshold");
  app->add_option("--branching", o.branching, "BIRCH branching factor");
  app->add_option("--affinity", o.affinity, "Spectral affinity")->check(CLI::IsMember({"rbf", "knn"}));
  app->add_option("--neighbors", o.neighbors, "Neighbors for --affinity knn");
  app->add_option("--restarts", o.restarts, "K-means restarts");
  app->add_option("--max-iter", o.max_iter, "K-means iteration cap");
  app->add_option("--tol", o.tol, "K-means centroid-shift tolerance");
  app->add_flag("--no-normalize", o.no_normalize, "Cluster raw (not L2-normalized) embeddings");
  app->add_option("--seed", o.seed, "Random seed");
  app->add_option("--per-intent-cap", o.per_intent_cap, "Keep at most N utterances per reference intent");
  app->add_option("--out", o.out, "Output directory")->required();
}

std::vector<int> parse_int_list(const std::string& text, std::string_view what) {
  std::vector<int> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::Validation, std::string(what) + ": '" + item + "' is not an integer");
    }
  }
  if (values.empty()) throw Error(ErrorKind::Validation, std::string(what) + " is empty");
  return values;
}

pipeline::ExperimentConfig to_config(const RunOptions& o) {
  pipeline::ExperimentConfig config;
  config.task = o.task == 1 ? pipeline::Task::IntentClustering : pipeline::Task::IntentInduction;
  config.transcripts = o.transcripts;
  config.embeddings = o.embeddings;
  if (!o.predicted_acts.empty()) config.predicted_acts = o.predicted_acts;
  config.act_name = o.act_name;

  auto& spec = config.algorithm;
  spec.algorithm = cluster::parse_algorithm(o.algo);
  spec.linkage = cluster::parse_linkage(o.linkage);
  spec.eps = o.eps;
  spec.min_pts = o.min_pts;
  spec.birch = {o.birch_threshold, o.branching};
  spec.affinity.kind = o.affinity == "knn" ? cluster::Affinity::Kind::CosineKnn : cluster::Affinity::Kind::Rbf;
  spec.affinity.neighbors = o.neighbors;
  spec.kmeans.restarts = o.restarts;
  spec.kmeans.max_iter = o.max_iter;
  spec.kmeans.tol = o.tol;
  try {
    spec.kmeans.validate();
    spec.birch.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::Validation, e.what());
  }

  if (o.k == "auto") {
    config.k.reset();
  } else {
    config.k = parse_int_list(o.k, "--k").front();
  }
  const auto range = parse_int_list(o.k_range, "--k-range");
  if (range.size() != 2) throw Error(ErrorKind::Validation, "--k-range expects A,B");
  config.k_range = {range[0], range[1]};
  config.normalize = !o.no_normalize;
  config.seed = o.seed;
  if (o.per_intent_cap > 0) config.per_intent_cap = o.per_intent_cap;
  config.output_dir = o.out;
  return config;
}

void print_summary(const pipeline::ExperimentResult& result) {
  std::cout << pipeline::render_report({pipeline::report_row(result)}, pipeline::ReportFormat::Markdown);
  if (result.k_selection) {
    std::cout << "k selected by silhouette: " << result.k_selection->k << '\n';
  }
  for (const auto& w : result.clustering.warnings) std::cerr << "warning: " << w << '\n';
}

int cmd_run(const RunOptions& o) {
  const auto result = pipeline::run_experiment(to_config(o));
  print_summary(result);
  return 0;
}

int cmd_sweep(const RunOptions& o, const std::string& k_list) {
  const auto ks = parse_int_list(k_list, "--k-list");
  const auto entries = pipeline::sweep_k(to_config(o), ks);
  std::cout << pipeline::render_sweep_csv(entries);
  for (const auto& e : entries) {
    if (!e.result) std::cerr << "warning: " << e.error << '\n';
  }
  return 0;
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& format, const std::string& out) {
  std::vector<pipeline::ReportRow> rows;
  for (const auto& input : inputs) {
    fs::path path = input;
    if (fs::is_directory(path)) path /= "result.json";
    rows.push_back(pipeline::read_report_row(path));
  }
  const auto text = pipeline::render_report(std::move(rows), pipeline::parse_report_format(format));
  if (out.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream file(out, std::ios::binary | std::ios::trunc);
  if (!file || !(file << text)) throw Error(ErrorKind::Io, "cannot write report " + out);
  return 0;
}

int cmd_project(const std::string& embeddings, const std::string& assignments, const std::string& out,
                bool no_normalize) {
  const auto file = pipeline::read_assignments(assignments);
  auto matrix = embed::align(embed::load_embeddings(embeddings), file.ids);
  if (!no_normalize) matrix = embed::l2_normalize(matrix);

  cluster::ClusterResult result;
  result.assignments = file.clusters;
  result.k = file.k;
  result.algorithm = file.algorithm;
  const auto projection = pipeline::project_2d(matrix.data, result);
  for (const auto& w : projection.warnings) std::cerr << "warning: " << w << '\n';

  std::ofstream csv(out, std::ios::binary | std::ios::trunc);
  if (!csv || !(csv << pipeline::render_projection_csv(projection, matrix.ids, result))) {
    throw Error(ErrorKind::Io, "cannot write projection " + out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clustering and evaluation toolkit for dialogue intent induction"};
  app.require_subcommand(1);

  RunOptions run_options;
  auto* run = app.add_subcommand("run", "Run one clustering experiment");
  add_run_options(run, run_options);

  RunOptions sweep_options;
  std::string k_list;
  auto* sweep = app.add_subcommand("sweep", "Run one experiment per k and emit sweep.csv");
  add_run_options(sweep, sweep_options);
  sweep->add_option("--k-list", k_list, "Comma-separated k values")->required();

  std::string format = "md";
  std::vector<std::string> inputs;
  std::string report_out;
  auto* report = app.add_subcommand("report", "Tabulate result.json files");
  report->add_option("--format", format, "md or csv")->check(CLI::IsMember({"md", "csv"}));
  report->add_option("--results", inputs, "Result directories or result.json files")->required();
  report->add_option("--out", report_out, "Output file (default stdout)");

  std::string project_embeddings, project_assignments, project_out;
  bool project_raw = false;
  auto* project = app.add_subcommand("project", "Export a 2-D PCA projection for plotting");
  project->add_option("--embeddings", project_embeddings, "Embedding JSONL")->required();
  project->add_option("--assignments", project_assignments, "assignments.jsonl from run")->required();
  project->add_option("--out", project_out, "Output CSV")->required();
  project->add_flag("--no-normalize", project_raw, "Project raw embeddings");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*run) return cmd_run(run_options);
    if (*sweep) return cmd_sweep(sweep_options, k_list);
    if (*report) return cmd_report(inputs, format, report_out);
    if (*project) return cmd_project(project_embeddings, project_assignments, project_out, project_raw);
  } catch (const Error& e) {
    std::cerr << "intentbench: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return e.kind() == ErrorKind::Io ? kExitIo : kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "intentbench: " << e.what() << '\n';
    return kExitValidation;
  }
  return 0;
}
