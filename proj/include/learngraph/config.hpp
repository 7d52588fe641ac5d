#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "learngraph/evaluation.hpp"
#include "learngraph/trainer.hpp"

namespace lg {

/// Everything a CLI run needs: the training recipe plus dataset and evaluation settings.
struct RunConfig {
  TrainConfig train;
  std::filesystem::path dataset;      // resolved against the config file's directory
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  std::size_t cluster_runs = 10;
  ClassifierConfig classifier;
};

/// Parses `key = value` lines; `#` starts a comment. Throws ConfigError listing every
/// unknown key, and ConfigError naming the line for malformed values.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Applies a single `key`, `value` pair (also used for command-line overrides).
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value,
                      const std::filesystem::path& base_dir = {});

/// Names accepted by set_config_value.
const std::vector<std::string>& config_keys();

}  // namespace lg
