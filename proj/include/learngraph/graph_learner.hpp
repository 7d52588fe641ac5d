#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "learngraph/autodiff.hpp"

namespace lg {

enum class LearnerKind { fgp, attentive, mlp, gnn };

LearnerKind parse_learner_kind(const std::string& name);
std::string to_string(LearnerKind kind);

/// Produces the sketched adjacency from learnable parameters.
class GraphLearner {
 public:
  virtual ~GraphLearner() = default;

  virtual LearnerKind kind() const = 0;
  /// Records the sketched n x n adjacency on `tape`.
  virtual Var forward(Tape& tape, const Matrix& features) = 0;
  virtual std::vector<Parameter*> parameters() = 0;
  virtual std::unique_ptr<GraphLearner> clone() const = 0;
};

/// One free parameter per adjacency entry, passed through elu.
class FgpLearner final : public GraphLearner {
 public:
  explicit FgpLearner(Matrix omega);

  LearnerKind kind() const override { return LearnerKind::fgp; }
  Var forward(Tape& tape, const Matrix& features) override;
  std::vector<Parameter*> parameters() override { return {&omega_}; }
  std::unique_ptr<GraphLearner> clone() const override;

  const Parameter& omega() const { return omega_; }

 private:
  Parameter omega_;
};

/// Shared base of the embedding-network learners: sketch = cosine(embed(X)).
class MetricLearner : public GraphLearner {
 public:
  Var forward(Tape& tape, const Matrix& features) override;
  /// Node embeddings E (n x d); relu between layers, last layer linear.
  virtual Var embed(Tape& tape, const Matrix& features) = 0;
};

/// Each layer rescales feature columns by a learnable vector.
class AttentiveLearner final : public MetricLearner {
 public:
  explicit AttentiveLearner(std::vector<Matrix> layer_weights);

  LearnerKind kind() const override { return LearnerKind::attentive; }
  Var embed(Tape& tape, const Matrix& features) override;
  std::vector<Parameter*> parameters() override;
  std::unique_ptr<GraphLearner> clone() const override;

 private:
  std::vector<Parameter> layers_;
};

/// Each layer is a d x d linear map.
class MlpLearner final : public MetricLearner {
 public:
  explicit MlpLearner(std::vector<Matrix> layer_weights);

  LearnerKind kind() const override { return LearnerKind::mlp; }
  Var embed(Tape& tape, const Matrix& features) override;
  std::vector<Parameter*> parameters() override;
  std::unique_ptr<GraphLearner> clone() const override;

 private:
  std::vector<Parameter> layers_;
};

/// GCN layers over a fixed input adjacency.
class GnnLearner final : public MetricLearner {
 public:
  GnnLearner(std::vector<Matrix> layer_weights, const Matrix& base_adjacency);

  LearnerKind kind() const override { return LearnerKind::gnn; }
  Var embed(Tape& tape, const Matrix& features) override;
  std::vector<Parameter*> parameters() override;
  std::unique_ptr<GraphLearner> clone() const override;

 private:
  std::vector<Parameter> layers_;
  Matrix propagation_;  // D~^{-1/2} (A + I) D~^{-1/2}
};

/// D~^{-1/2} (A + I) D~^{-1/2} for a nonnegative square A.
Matrix gcn_propagation_matrix(const Matrix& adjacency);

/// One GCN layer: act(P * prev * omega) with P = gcn_propagation_matrix(adjacency).
Var gnn_propagate(const Var& prev, const Matrix& adjacency, const Var& omega,
                  Activation act = Activation::identity);

/// Builds a learner whose first sketch reproduces the cosine kNN graph of X:
/// FGP stores the kNN affinities, Attentive starts from unit vectors, MLP and GNN
/// from identity matrices. `adjacency` is required for GNN and ignored otherwise.
/// Throws ConfigError when k >= n or a GNN learner has no adjacency.
std::unique_ptr<GraphLearner> init_learner(LearnerKind kind, const Matrix& features,
                                           const Matrix* adjacency, std::size_t k,
                                           std::size_t layers = 2);

}  // namespace lg
