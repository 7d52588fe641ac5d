#include "learngraph/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "learngraph/augment.hpp"
#include "learngraph/errors.hpp"

namespace lg {

Task parse_task(const std::string& name) {
  if (name == "inference") return Task::inference;
  if (name == "refinement") return Task::refinement;
  throw ConfigError("unknown task '" + name + "' (expected inference or refinement)");
}

std::string to_string(Task task) { return task == Task::inference ? "inference" : "refinement"; }

void TrainConfig::validate() const {
  auto probability = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ConfigError(std::string(name) + " must lie in [0, 1], got " + std::to_string(p));
    }
  };
  probability(tau, "tau");
  probability(p_x_learner, "p_x_learner");
  probability(p_x_anchor, "p_x_anchor");
  probability(p_a, "p_a");
  if (c < 1) throw ConfigError("c must be at least 1");
  if (epochs < 1) throw ConfigError("epochs must be at least 1");
  if (k < 1) throw ConfigError("k must be at least 1");
  if (!(temperature > 0.0)) throw ConfigError("temperature must be positive");
  if (!(lr > 0.0) || !std::isfinite(lr)) throw ConfigError("lr must be positive");
  if (d1 == 0 || d2 == 0) throw ConfigError("d1 and d2 must be positive");
  if (eval_every < 1) throw ConfigError("eval_every must be at least 1");
  if (layers < 1) throw ConfigError("layers must be at least 1");
}

void adam_step(Matrix& param, const Matrix& grad, AdamMoments& moments, double lr, std::size_t step,
               double weight_decay) {
  require_same_shape(param, grad, "adam_step");
  if (moments.m.empty() && !param.empty()) {
    moments.m = Matrix(param.rows(), param.cols());
    moments.v = Matrix(param.rows(), param.cols());
  }
  require_same_shape(param, moments.m, "adam_step moments");
  if (step < 1) throw ContractError("adam_step: step counts from 1");
  const double c1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(step));
  const double c2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(step));
  auto p = param.values();
  auto g = grad.values();
  auto m = moments.m.values();
  auto v = moments.v.values();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double gi = g[i] + weight_decay * p[i];
    m[i] = kAdamBeta1 * m[i] + (1.0 - kAdamBeta1) * gi;
    v[i] = kAdamBeta2 * v[i] + (1.0 - kAdamBeta2) * gi * gi;
    p[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + kAdamEps);
  }
}

Adam::Adam(std::vector<Parameter*> params, double lr, double weight_decay)
    : params_(std::move(params)), moments_(params_.size()), lr_(lr), weight_decay_(weight_decay) {}

void Adam::step() {
  ++t_;
  for (std::size_t i = 0; i < params_.size(); ++i)
    adam_step(params_[i]->value, params_[i]->grad, moments_[i], lr_, t_, weight_decay_);
}

Matrix init_anchor(Task task, const Matrix* adjacency, std::size_t n) {
  if (task == Task::inference) return Matrix::identity(n);
  if (!adjacency) throw ConfigError("refinement needs an input adjacency");
  if (!adjacency->is_square() || adjacency->rows() != n) {
    throw DimensionError("init_anchor: adjacency " + adjacency->shape_string() + " for " +
                         std::to_string(n) + " nodes");
  }
  if (!is_symmetric(*adjacency)) throw ContractError("init_anchor: adjacency must be symmetric");
  return *adjacency;
}

Matrix bootstrap_update(const Matrix& anchor, const Matrix& learned, double tau) {
  require_same_shape(anchor, learned, "bootstrap_update");
  Matrix out(anchor.rows(), anchor.cols());
  auto a = anchor.values();
  auto s = learned.values();
  auto o = out.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = tau * a[i] + (1.0 - tau) * s[i];
  return out;
}

Matrix learned_adjacency(GraphLearner& learner, const Matrix& features, std::size_t k,
                         ProcessDiagnostics* diagnostics) {
  Tape tape;
  Var sketch = learner.forward(tape, features);
  return process(sketch, k, learner.kind(), diagnostics).value();
}

namespace {

std::string format_line(std::size_t iter, double loss, double delta) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "iter=%zu loss=%.10g anchor_delta=%.6g", iter, loss, delta);
  return buf;
}

std::string grad_report(const std::vector<Parameter*>& params) {
  std::ostringstream out;
  for (const Parameter* p : params) out << ' ' << p->name << "=" << frobenius_norm(p->grad);
  return out.str();
}

}  // namespace

TrainResult train(const Matrix& features, const Matrix* adjacency, const TrainConfig& cfg,
                  const LogSink& sink) {
  cfg.validate();
  const std::size_t n = features.rows();
  if (n == 0 || features.cols() == 0) throw ConfigError("train: empty feature matrix");

  Rng rng(cfg.seed);
  TrainResult result;
  result.learner = init_learner(cfg.learner, features, adjacency, cfg.k, cfg.layers);
  result.model = init_contrastive_model(features.cols(), cfg.d1, cfg.d2, rng);
  result.anchor = init_anchor(cfg.task, adjacency, n);

  std::vector<Parameter*> params = result.learner->parameters();
  for (Parameter* p : result.model.parameters()) params.push_back(p);
  Adam optimizer(params, cfg.lr);
  const AugmentConfig aug{cfg.p_x_learner, cfg.p_x_anchor, cfg.p_a};

  auto emit = [&](std::string line) {
    if (sink) sink(line);
    result.log.push_back(std::move(line));
  };

  for (std::size_t iter = 1; iter <= cfg.epochs; ++iter) {
    Tape tape;
    Var sketch = result.learner->forward(tape, features);
    Var learned = process(sketch, cfg.k, cfg.learner, &result.diagnostics);
    AugmentedViews views = augment_views(learned, result.anchor, features, aug, rng);

    Var h_learner = gcn_encode(views.learner_adjacency, tape.constant(std::move(views.learner_features)),
                               result.model.encoder);
    Var z_learner = mlp_project(h_learner, result.model.projector);
    Var h_anchor = gcn_encode(tape.constant(std::move(views.anchor_adjacency)),
                              tape.constant(std::move(views.anchor_features)), result.model.encoder);
    Var z_anchor = mlp_project(h_anchor, result.model.projector);
    Var loss = nt_xent(z_learner, z_anchor, cfg.temperature);

    const double value = loss.value()(0, 0);
    tape.backward(loss);
    if (!std::isfinite(value)) {
      throw NumericalError("non-finite loss " + std::to_string(value) + " at iteration " +
                           std::to_string(iter) + "; grad norms:" + grad_report(params));
    }
    optimizer.step();
    result.losses.push_back(value);

    double delta = 0.0;
    if (iter % cfg.c == 0 && cfg.tau != 1.0) {
      Matrix next = bootstrap_update(result.anchor, learned.value(), cfg.tau);
      delta = max_abs_diff(next, result.anchor);
      result.anchor = std::move(next);
    }
    if (iter % cfg.eval_every == 0 || iter == 1 || iter == cfg.epochs) emit(format_line(iter, value, delta));
  }

  result.learned = learned_adjacency(*result.learner, features, cfg.k, &result.diagnostics);
  return result;
}

}  // namespace lg
