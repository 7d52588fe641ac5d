#include "learngraph/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "learngraph/data_io.hpp"
#include "learngraph/errors.hpp"

namespace lg {

namespace fs = std::filesystem;
using json = nlohmann::json;

LogLevel log_level_from_env() {
  const char* env = std::getenv("LG_LOG_LEVEL");
  if (!env || !*env) return LogLevel::info;
  const std::string v = env;
  if (v == "error") return LogLevel::error;
  if (v == "info") return LogLevel::info;
  if (v == "debug") return LogLevel::debug;
  throw ConfigError("LG_LOG_LEVEL must be error, info or debug, got '" + v + "'");
}

namespace {

void write_json(const json& doc, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

json stats_json(const std::string& task, const Dataset& data, const std::vector<std::uint64_t>& seeds,
                const ClassifyStats& stats) {
  return json{{"task", task},        {"dataset", data.name}, {"seeds", seeds},
              {"per_seed", stats.per_seed}, {"mean", stats.mean}, {"std", stats.std}};
}

void prepare_out_dir(const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
}

}  // namespace

RunReport cmd_train(Task expected, const RunConfig& cfg, const fs::path& out_dir, bool cluster, LogLevel level) {
  if (cfg.train.task != expected) {
    throw ConfigError("config task is " + to_string(cfg.train.task) + " but the command runs " + to_string(expected));
  }
  if (cfg.seeds.empty()) throw ConfigError("no seeds configured");
  const Dataset data = load_dataset(cfg.dataset);
  if (expected == Task::refinement && !data.adjacency) {
    throw ConfigError("refinement needs edges.tsv in " + cfg.dataset.string());
  }
  if (!data.splits) throw ConfigError("dataset " + cfg.dataset.string() + " has no splits.json");
  prepare_out_dir(out_dir);

  std::ofstream log(out_dir / "train.log");
  if (!log) throw IoError("cannot write " + (out_dir / "train.log").string());

  RunReport report;
  ClusterScores cluster_sum;
  const Matrix* adjacency = data.adjacency ? &*data.adjacency : nullptr;
  for (std::size_t r = 0; r < cfg.seeds.size(); ++r) {
    const std::uint64_t seed = cfg.seeds[r];
    TrainConfig tc = cfg.train;
    tc.seed = seed;
    log << "# seed=" << seed << '\n';
    const auto start = std::chrono::steady_clock::now();
    TrainResult result = train(data.features, adjacency, tc, [&](const std::string& line) {
      log << line << '\n';
      if (level == LogLevel::debug) std::cerr << "[seed " << seed << "] " << line << '\n';
    });
    const double acc = train_gcn_classifier(result.learned, data, seed, cfg.classifier);
    report.accuracy.per_seed.push_back(acc);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    log << "# seed=" << seed << " accuracy=" << acc << " seconds=" << secs
        << " clamped_rows=" << result.diagnostics.clamped_rows << '\n';
    if (level != LogLevel::error) {
      std::cerr << "seed " << seed << ": test accuracy " << acc << " (" << secs << " s)\n";
    }
    if (cluster) {
      const ClusterScores s =
          eval_cluster(result.model, result.learned, data.features, data.labels, cfg.cluster_runs, seed);
      cluster_sum.cacc += s.cacc;
      cluster_sum.nmi += s.nmi;
      cluster_sum.f1 += s.f1;
      cluster_sum.ari += s.ari;
    }
    if (r == 0) {
      report.learned = std::move(result.learned);
      save_adjacency(report.learned, out_dir / "learned_adjacency.tsv");
    }
  }
  const double n = static_cast<double>(cfg.seeds.size());
  double mean = 0.0;
  for (double a : report.accuracy.per_seed) mean += a;
  mean /= n;
  double var = 0.0;
  for (double a : report.accuracy.per_seed) var += (a - mean) * (a - mean);
  report.accuracy.mean = mean;
  report.accuracy.std = std::sqrt(var / n);

  json doc = stats_json(to_string(expected), data, cfg.seeds, report.accuracy);
  if (cluster) {
    ClusterScores m{cluster_sum.cacc / n, cluster_sum.nmi / n, cluster_sum.f1 / n, cluster_sum.ari / n};
    report.clustering = m;
    doc["clustering"] = {{"cacc", m.cacc}, {"nmi", m.nmi}, {"f1", m.f1}, {"ari", m.ari}};
  }
  write_json(doc, out_dir / "metrics.json");
  log.flush();
  if (!log) throw IoError("write failed: " + (out_dir / "train.log").string());
  return report;
}

void cmd_perturb(const fs::path& dataset_dir, PerturbMode mode, double rate, std::uint64_t seed,
                 const fs::path& out_dir) {
  if (!(rate >= 0.0 && rate <= 0.9)) throw ConfigError("perturbation rate must lie in [0, 0.9]");
  const Dataset data = load_dataset(dataset_dir);
  if (!data.adjacency) throw ConfigError("dataset " + dataset_dir.string() + " has no edges.tsv to perturb");
  Rng rng(seed);
  const Matrix perturbed = perturb_edges(*data.adjacency, rate, mode, rng);
  prepare_out_dir(out_dir);
  for (const auto& entry : fs::directory_iterator(dataset_dir)) {
    if (!entry.is_regular_file() || entry.path().filename() == "edges.tsv") continue;
    fs::copy_file(entry.path(), out_dir / entry.path().filename(), fs::copy_options::overwrite_existing);
  }
  save_edges(perturbed, out_dir / "edges.tsv");
}

ClassifyStats cmd_eval(const RunConfig& cfg, const std::string& structure, const fs::path& out_dir) {
  const Dataset data = load_dataset(cfg.dataset);
  Matrix adjacency;
  if (structure == "identity") {
    adjacency = Matrix::identity(data.num_nodes());
  } else if (structure == "input") {
    if (!data.adjacency) throw ConfigError("dataset has no edges.tsv; use --adjacency identity or a file");
    adjacency = *data.adjacency;
  } else {
    adjacency = load_adjacency(structure);
  }
  const ClassifyStats stats = eval_classify(adjacency, data, cfg.seeds, cfg.classifier);
  prepare_out_dir(out_dir);
  json doc = stats_json("eval", data, cfg.seeds, stats);
  doc["structure"] = structure;
  write_json(doc, out_dir / "metrics.json");
  return stats;
}

}  // namespace lg
