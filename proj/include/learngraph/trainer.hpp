#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "learngraph/contrastive.hpp"
#include "learngraph/graph_learner.hpp"
#include "learngraph/post_process.hpp"

namespace lg {

enum class Task { inference, refinement };

Task parse_task(const std::string& name);
std::string to_string(Task task);

struct TrainConfig {
  Task task = Task::inference;
  LearnerKind learner = LearnerKind::fgp;
  std::size_t k = 30;
  double tau = 0.9999;
  std::size_t c = 1;  // bootstrap interval in iterations
  double p_x_learner = 0.6;
  double p_x_anchor = 0.6;
  double p_a = 0.0;
  double temperature = 0.2;
  std::size_t epochs = 1000;
  double lr = 0.01;
  std::size_t d1 = 512;
  std::size_t d2 = 64;
  std::uint64_t seed = 0;
  std::size_t eval_every = 1;  // log interval
  std::size_t layers = 2;      // metric learner depth

  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

/// First and second moment estimates for one parameter.
struct AdamMoments {
  Matrix m;
  Matrix v;
};

inline constexpr double kAdamBeta1 = 0.9;
inline constexpr double kAdamBeta2 = 0.999;
inline constexpr double kAdamEps = 1e-8;

/// One bias-corrected Adam update of `param` from `grad`. `step` counts from 1.
/// A nonzero `weight_decay` adds weight_decay * param to the gradient first.
void adam_step(Matrix& param, const Matrix& grad, AdamMoments& moments, double lr, std::size_t step,
               double weight_decay = 0.0);

/// Adam over a fixed parameter list, reading each Parameter::grad.
class Adam {
 public:
  Adam(std::vector<Parameter*> params, double lr, double weight_decay = 0.0);

  void step();
  std::size_t steps() const { return t_; }
  const std::vector<AdamMoments>& moments() const { return moments_; }

 private:
  std::vector<Parameter*> params_;
  std::vector<AdamMoments> moments_;
  double lr_;
  double weight_decay_;
  std::size_t t_ = 0;
};

/// Identity for inference; a copy of `adjacency` for refinement.
/// Throws ConfigError when refinement has no adjacency and ContractError when it is asymmetric.
Matrix init_anchor(Task task, const Matrix* adjacency, std::size_t n);

/// tau * anchor + (1 - tau) * learned, elementwise.
Matrix bootstrap_update(const Matrix& anchor, const Matrix& learned, double tau);

struct TrainResult {
  Matrix learned;  // final S, without augmentation
  Matrix anchor;
  ContrastiveModel model;
  std::unique_ptr<GraphLearner> learner;
  std::vector<double> losses;
  std::vector<std::string> log;
  ProcessDiagnostics diagnostics;
};

/// Called with every log line as it is produced.
using LogSink = std::function<void(const std::string&)>;

/// Runs cfg.epochs full-graph iterations of structure learning on `features`.
/// `adjacency` is the observed graph; refinement and the GNN learner need it.
/// Throws NumericalError if the loss becomes non-finite.
TrainResult train(const Matrix& features, const Matrix* adjacency, const TrainConfig& cfg,
                  const LogSink& sink = {});

/// Learner output after post-processing, without augmentation.
Matrix learned_adjacency(GraphLearner& learner, const Matrix& features, std::size_t k,
                         ProcessDiagnostics* diagnostics = nullptr);

}  // namespace lg
