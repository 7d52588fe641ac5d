#include "learngraph/graph_learner.hpp"

#include <cmath>

#include "learngraph/errors.hpp"
#include "learngraph/knn.hpp"

namespace lg {

LearnerKind parse_learner_kind(const std::string& name) {
  if (name == "fgp") return LearnerKind::fgp;
  if (name == "attentive") return LearnerKind::attentive;
  if (name == "mlp") return LearnerKind::mlp;
  if (name == "gnn") return LearnerKind::gnn;
  throw ConfigError("unknown learner '" + name + "' (expected fgp, attentive, mlp or gnn)");
}

std::string to_string(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::fgp: return "fgp";
    case LearnerKind::attentive: return "attentive";
    case LearnerKind::mlp: return "mlp";
    case LearnerKind::gnn: return "gnn";
  }
  return "?";
}

namespace {

std::vector<Parameter> make_layers(std::vector<Matrix> weights, const char* prefix) {
  std::vector<Parameter> layers;
  layers.reserve(weights.size());
  for (std::size_t l = 0; l < weights.size(); ++l)
    layers.emplace_back(std::move(weights[l]), std::string(prefix) + std::to_string(l));
  return layers;
}

std::vector<Matrix> layer_values(const std::vector<Parameter>& layers) {
  std::vector<Matrix> out;
  out.reserve(layers.size());
  for (const auto& p : layers) out.push_back(p.value);
  return out;
}

std::vector<Parameter*> layer_pointers(std::vector<Parameter>& layers) {
  std::vector<Parameter*> out;
  for (auto& p : layers) out.push_back(&p);
  return out;
}

Activation layer_activation(std::size_t l, std::size_t count) {
  return l + 1 < count ? Activation::relu : Activation::identity;
}

Var propagate(const Var& prev, const Matrix& propagation, const Var& omega, Activation act) {
  Var p = prev.tape().constant(propagation);
  return activation(matmul(p, matmul(prev, omega)), act);
}

}  // namespace

FgpLearner::FgpLearner(Matrix omega) : omega_(std::move(omega), "omega") {
  if (!omega_.value.is_square()) {
    throw DimensionError("FgpLearner: omega must be square, got " + omega_.value.shape_string());
  }
}

Var FgpLearner::forward(Tape& tape, const Matrix&) {
  return activation(tape.parameter(omega_), Activation::elu);
}

std::unique_ptr<GraphLearner> FgpLearner::clone() const {
  return std::make_unique<FgpLearner>(omega_.value);
}

Var MetricLearner::forward(Tape& tape, const Matrix& features) {
  return cosine_similarity_matrix(embed(tape, features));
}

AttentiveLearner::AttentiveLearner(std::vector<Matrix> layer_weights)
    : layers_(make_layers(std::move(layer_weights), "attentive")) {
  if (layers_.empty()) throw ConfigError("AttentiveLearner: needs at least one layer");
  const std::size_t d = layers_.front().value.cols();
  for (const auto& p : layers_)
    if (p.value.rows() != 1 || p.value.cols() != d)
      throw DimensionError("AttentiveLearner: every layer must be 1x" + std::to_string(d));
}

Var AttentiveLearner::embed(Tape& tape, const Matrix& features) {
  Var e = tape.constant(features);
  for (std::size_t l = 0; l < layers_.size(); ++l)
    e = activation(mul_row(e, tape.parameter(layers_[l])), layer_activation(l, layers_.size()));
  return e;
}

std::vector<Parameter*> AttentiveLearner::parameters() { return layer_pointers(layers_); }

std::unique_ptr<GraphLearner> AttentiveLearner::clone() const {
  return std::make_unique<AttentiveLearner>(layer_values(layers_));
}

MlpLearner::MlpLearner(std::vector<Matrix> layer_weights)
    : layers_(make_layers(std::move(layer_weights), "mlp")) {
  if (layers_.empty()) throw ConfigError("MlpLearner: needs at least one layer");
  const std::size_t d = layers_.front().value.rows();
  for (const auto& p : layers_)
    if (p.value.rows() != d || p.value.cols() != d)
      throw DimensionError("MlpLearner: every layer must be " + std::to_string(d) + "x" + std::to_string(d));
}

Var MlpLearner::embed(Tape& tape, const Matrix& features) {
  Var e = tape.constant(features);
  for (std::size_t l = 0; l < layers_.size(); ++l)
    e = activation(matmul(e, tape.parameter(layers_[l])), layer_activation(l, layers_.size()));
  return e;
}

std::vector<Parameter*> MlpLearner::parameters() { return layer_pointers(layers_); }

std::unique_ptr<GraphLearner> MlpLearner::clone() const {
  return std::make_unique<MlpLearner>(layer_values(layers_));
}

GnnLearner::GnnLearner(std::vector<Matrix> layer_weights, const Matrix& base_adjacency)
    : layers_(make_layers(std::move(layer_weights), "gnn")),
      propagation_(gcn_propagation_matrix(base_adjacency)) {
  if (layers_.empty()) throw ConfigError("GnnLearner: needs at least one layer");
  const std::size_t d = layers_.front().value.rows();
  for (const auto& p : layers_)
    if (p.value.rows() != d || p.value.cols() != d)
      throw DimensionError("GnnLearner: every layer must be " + std::to_string(d) + "x" + std::to_string(d));
}

Var GnnLearner::embed(Tape& tape, const Matrix& features) {
  if (features.rows() != propagation_.rows()) {
    throw DimensionError("GnnLearner: features have " + std::to_string(features.rows()) +
                         " rows, adjacency has " + std::to_string(propagation_.rows()));
  }
  Var e = tape.constant(features);
  for (std::size_t l = 0; l < layers_.size(); ++l)
    e = propagate(e, propagation_, tape.parameter(layers_[l]), layer_activation(l, layers_.size()));
  return e;
}

std::vector<Parameter*> GnnLearner::parameters() { return layer_pointers(layers_); }

std::unique_ptr<GraphLearner> GnnLearner::clone() const {
  return std::make_unique<GnnLearner>(*this);
}

Matrix gcn_propagation_matrix(const Matrix& adjacency) {
  if (!adjacency.is_square()) {
    throw DimensionError("gcn propagation: adjacency must be square, got " + adjacency.shape_string());
  }
  const std::size_t n = adjacency.rows();
  std::vector<double> inv_sqrt(n);
  for (std::size_t i = 0; i < n; ++i) {
    double d = 1.0;
    for (double v : adjacency.row(i)) d += v;
    if (d <= 0.0) throw ContractError("gcn propagation: adjacency row " + std::to_string(i) + " has non-positive degree");
    inv_sqrt[i] = 1.0 / std::sqrt(d);
  }
  Matrix p(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    auto in = adjacency.row(i);
    auto out = p.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      const double a = in[j] + (i == j ? 1.0 : 0.0);
      out[j] = a == 0.0 ? 0.0 : a * (inv_sqrt[i] * inv_sqrt[j]);
    }
  }
  return p;
}

Var gnn_propagate(const Var& prev, const Matrix& adjacency, const Var& omega, Activation act) {
  return propagate(prev, gcn_propagation_matrix(adjacency), omega, act);
}

std::unique_ptr<GraphLearner> init_learner(LearnerKind kind, const Matrix& features,
                                           const Matrix* adjacency, std::size_t k,
                                           std::size_t layers) {
  const std::size_t n = features.rows();
  const std::size_t d = features.cols();
  if (n == 0 || d == 0) throw ConfigError("init_learner: empty feature matrix");
  if (k < 1 || k >= n) {
    throw ConfigError("init_learner: need 1 <= k < n, got k=" + std::to_string(k) +
                      " n=" + std::to_string(n));
  }
  if (layers < 1) throw ConfigError("init_learner: need at least one layer");
  switch (kind) {
    case LearnerKind::fgp: {
      Matrix omega = knn_affinity(features, k);
      for (double& v : omega.values()) v = elu_inverse(v);
      return std::make_unique<FgpLearner>(std::move(omega));
    }
    case LearnerKind::attentive:
      return std::make_unique<AttentiveLearner>(std::vector<Matrix>(layers, Matrix::ones(1, d)));
    case LearnerKind::mlp:
      return std::make_unique<MlpLearner>(std::vector<Matrix>(layers, Matrix::identity(d)));
    case LearnerKind::gnn:
      if (adjacency == nullptr) throw ConfigError("init_learner: the gnn learner needs an input adjacency");
      if (adjacency->rows() != n || adjacency->cols() != n) {
        throw DimensionError("init_learner: adjacency is " + adjacency->shape_string() + ", expected " +
                             std::to_string(n) + "x" + std::to_string(n));
      }
      return std::make_unique<GnnLearner>(std::vector<Matrix>(layers, Matrix::identity(d)), *adjacency);
  }
  throw ConfigError("init_learner: unknown learner kind");
}

}  // namespace lg
