#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "learngraph/config.hpp"
#include "learngraph/evaluation.hpp"

namespace lg {

enum class LogLevel { error, info, debug };

/// Reads LG_LOG_LEVEL; unset means info. Throws ConfigError on other values.
LogLevel log_level_from_env();

struct RunReport {
  ClassifyStats accuracy;
  std::optional<ClusterScores> clustering;
  Matrix learned;  // structure of the first seed
};

/// Trains one structure per configured seed, scores each with the downstream classifier
/// and writes learned_adjacency.tsv, metrics.json and train.log into `out_dir`.
/// `expected` must match the config task; refinement requires edges in the dataset.
RunReport cmd_train(Task expected, const RunConfig& cfg, const std::filesystem::path& out_dir, bool cluster,
                    LogLevel level = LogLevel::error);

/// Copies `dataset_dir` to `out_dir` with a perturbed edges.tsv. Throws ConfigError unless
/// 0 <= rate <= 0.9.
void cmd_perturb(const std::filesystem::path& dataset_dir, PerturbMode mode, double rate, std::uint64_t seed,
                 const std::filesystem::path& out_dir);

/// Scores a fixed structure: "identity", "input" (the dataset's own edges) or a path to an
/// adjacency file. Writes metrics.json into `out_dir`.
ClassifyStats cmd_eval(const RunConfig& cfg, const std::string& structure, const std::filesystem::path& out_dir);

}  // namespace lg
