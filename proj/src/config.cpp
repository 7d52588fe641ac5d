#include "learngraph/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "learngraph/errors.hpp"

namespace lg {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("bad value for '" + key + "': '" + value + "'");
  }
  return out;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& key, const std::string& value) {
  std::vector<std::uint64_t> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) out.push_back(parse_number<std::uint64_t>(key, trim(item)));
  if (out.empty()) throw ConfigError("'" + key + "' needs at least one seed");
  return out;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "task",        "dataset",     "learner", "k",        "tau",          "c",
      "p_x_learner", "p_x_anchor",  "p_a",     "temperature", "epochs",    "lr",
      "d1",          "d2",          "seed",    "eval_every", "layers",     "seeds",
      "cluster_runs", "clf_hidden", "clf_lr",  "clf_weight_decay", "clf_dropout", "clf_epochs",
      "clf_patience"};
  return keys;
}

void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value,
                      const std::filesystem::path& base_dir) {
  TrainConfig& t = cfg.train;
  ClassifierConfig& clf = cfg.classifier;
  auto size = [&] { return parse_number<std::size_t>(key, value); };
  auto real = [&] { return parse_number<double>(key, value); };
  if (key == "task") t.task = parse_task(value);
  else if (key == "dataset") cfg.dataset = base_dir / value;
  else if (key == "learner") t.learner = parse_learner_kind(value);
  else if (key == "k") t.k = size();
  else if (key == "tau") t.tau = real();
  else if (key == "c") t.c = size();
  else if (key == "p_x_learner") t.p_x_learner = real();
  else if (key == "p_x_anchor") t.p_x_anchor = real();
  else if (key == "p_a") t.p_a = real();
  else if (key == "temperature") t.temperature = real();
  else if (key == "epochs") t.epochs = size();
  else if (key == "lr") t.lr = real();
  else if (key == "d1") t.d1 = size();
  else if (key == "d2") t.d2 = size();
  else if (key == "seed") cfg.seeds = {parse_number<std::uint64_t>(key, value)};
  else if (key == "seeds") cfg.seeds = parse_seed_list(key, value);
  else if (key == "eval_every") t.eval_every = size();
  else if (key == "layers") t.layers = size();
  else if (key == "cluster_runs") cfg.cluster_runs = size();
  else if (key == "clf_hidden") clf.hidden = size();
  else if (key == "clf_lr") clf.lr = real();
  else if (key == "clf_weight_decay") clf.weight_decay = real();
  else if (key == "clf_dropout") clf.dropout = real();
  else if (key == "clf_epochs") clf.max_epochs = size();
  else if (key == "clf_patience") clf.patience = size();
  else throw ConfigError("unknown config key '" + key + "'");
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  RunConfig cfg;
  std::vector<std::string> unknown;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  const auto& keys = config_keys();
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = trim(std::string_view(line).substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      unknown.push_back(key);
      continue;
    }
    try {
      set_config_value(cfg, key, value, base_dir);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!unknown.empty()) {
    std::string msg = "unknown config keys:";
    for (const auto& k : unknown) msg += " " + k;
    throw ConfigError(msg);
  }
  cfg.train.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path());
}

}  // namespace lg
