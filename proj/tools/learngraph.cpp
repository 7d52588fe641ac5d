#include <CLI11.hpp>
#include <iostream>

#include "learngraph/cli.hpp"
#include "learngraph/data_io.hpp"
#include "learngraph/errors.hpp"

namespace {

lg::RunConfig load_with_overrides(const std::string& path, const std::vector<std::string>& sets,
                                 const std::optional<std::uint64_t>& seed) {
  lg::RunConfig cfg = lg::load_config(path);
  for (const std::string& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw lg::ConfigError("--set expects key=value, got '" + kv + "'");
    lg::set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1), std::filesystem::current_path());
  }
  if (seed) cfg.seeds = {*seed};
  cfg.train.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph structure learning with a bootstrapped contrastive objective"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> sets;
  std::string out_dir = "out";
  bool cluster = false;
  std::string structure = "input";
  std::string dataset_dir, mode = "delete";
  double rate = 0.0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Run a single seed instead of the configured list");
    cmd->add_option("--out", out_dir, "Output directory");
    cmd->add_option("--set", sets, "Override a config entry, key=value (repeatable)");
  };

  auto* infer = app.add_subcommand("infer", "Learn a structure from features alone");
  infer->add_option("--config", config_path, "Config file")->required();
  add_common(infer);

  auto* refine = app.add_subcommand("refine", "Refine the dataset's given structure");
  refine->add_option("--config", config_path, "Config file")->required();
  refine->add_flag("--cluster", cluster, "Also report k-means clustering metrics");
  add_common(refine);

  auto* perturb = app.add_subcommand("perturb", "Write a copy of a dataset with perturbed edges");
  perturb->add_option("--dataset", dataset_dir, "Dataset directory")->required();
  perturb->add_option("--mode", mode, "delete or add")->check(CLI::IsMember({"delete", "add"}));
  perturb->add_option("--rate", rate, "Fraction of edges to modify, in [0, 0.9]")->required();
  add_common(perturb);

  auto* eval = app.add_subcommand("eval", "Score a fixed structure with the downstream classifier");
  eval->add_option("--config", config_path, "Config file")->required();
  eval->add_option("--adjacency", structure, "identity, input, or an adjacency file");
  add_common(eval);

  CLI11_PARSE(app, argc, argv);

  try {
    const lg::LogLevel level = lg::log_level_from_env();
    if (infer->parsed() || refine->parsed()) {
      const lg::Task task = infer->parsed() ? lg::Task::inference : lg::Task::refinement;
      const lg::RunReport report = lg::cmd_train(task, load_with_overrides(config_path, sets, seed), out_dir, cluster, level);
      if (level != lg::LogLevel::error) {
        std::cout << "mean accuracy " << report.accuracy.mean << " +- " << report.accuracy.std << '\n';
        if (report.clustering) {
          const auto& c = *report.clustering;
          std::cout << "clustering cacc " << c.cacc << " nmi " << c.nmi << " f1 " << c.f1 << " ari " << c.ari << '\n';
        }
      }
    } else if (perturb->parsed()) {
      lg::cmd_perturb(dataset_dir, lg::parse_perturb_mode(mode), rate, seed.value_or(0), out_dir);
    } else if (eval->parsed()) {
      const lg::ClassifyStats stats = lg::cmd_eval(load_with_overrides(config_path, sets, seed), structure, out_dir);
      if (level != lg::LogLevel::error) std::cout << "mean accuracy " << stats.mean << " +- " << stats.std << '\n';
    }
  } catch (const lg::ConfigError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
