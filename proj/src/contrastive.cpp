#include "learngraph/contrastive.hpp"

#include <cmath>

#include "learngraph/errors.hpp"
#include "learngraph/post_process.hpp"

namespace lg {

std::vector<Parameter*> ContrastiveModel::parameters() {
  return {&encoder.layer1, &encoder.layer2, &projector.layer1, &projector.layer2};
}

Matrix glorot_uniform(std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Matrix w(fan_in, fan_out);
  for (double& v : w.values()) v = rng.uniform(-bound, bound);
  return w;
}

ContrastiveModel init_contrastive_model(std::size_t input_dim, std::size_t d1, std::size_t d2, Rng& rng) {
  if (input_dim == 0 || d1 == 0 || d2 == 0) throw ConfigError("contrastive model: dimensions must be positive");
  ContrastiveModel m;
  m.encoder.layer1 = Parameter(glorot_uniform(input_dim, d1, rng), "encoder.layer1");
  m.encoder.layer2 = Parameter(glorot_uniform(d1, d1, rng), "encoder.layer2");
  m.projector.layer1 = Parameter(glorot_uniform(d1, d2, rng), "projector.layer1");
  m.projector.layer2 = Parameter(glorot_uniform(d2, d2, rng), "projector.layer2");
  return m;
}

namespace {

Var add_identity(const Var& a) {
  if (!a.value().is_square()) throw DimensionError("add_identity: input must be square, got " + a.value().shape_string());
  Matrix out = a.value();
  for (std::size_t i = 0; i < out.rows(); ++i) out(i, i) += 1.0;
  return a.tape().record(std::move(out), {a},
                         [](const Matrix&, const Matrix& g, std::span<Matrix* const> grads) {
                           if (grads[0]) *grads[0] += g;
                         });
}

Var nt_xent_from_similarity(const Var& similarity, double temperature) {
  const Matrix& s = similarity.value();
  const std::size_t n = s.rows();
  // Cosine similarities are bounded by 1, so a fixed shift of 1/t keeps every
  // exponent <= 0 and one exp per entry serves both softmax directions.
  const double shift = 1.0 / temperature;
  Matrix row_softmax(n, n);
  Matrix col_softmax(n, n);
  std::vector<double> row_lse(n), col_lse(n);
  std::vector<double> col_sum(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = s.row(i);
    auto e = row_softmax.row(i);
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      e[k] = std::exp(r[k] / temperature - shift);
      acc += e[k];
      col_sum[k] += e[k];
    }
    row_lse[i] = shift + std::log(acc);
    auto ce = col_softmax.row(i);
    for (std::size_t k = 0; k < n; ++k) {
      ce[k] = e[k];
      e[k] /= acc;
    }
  }
  for (std::size_t k = 0; k < n; ++k) col_lse[k] = shift + std::log(col_sum[k]);
  for (std::size_t i = 0; i < n; ++i) {
    auto ce = col_softmax.row(i);
    for (std::size_t k = 0; k < n; ++k) ce[k] /= col_sum[k];
  }

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double positive = s(i, i) / temperature;
    total += (positive - row_lse[i]) + (positive - col_lse[i]);
  }
  const double loss = -total / (2.0 * static_cast<double>(n));

  return similarity.tape().record(
      Matrix(1, 1, loss), {similarity},
      [row_softmax = std::move(row_softmax), col_softmax = std::move(col_softmax), temperature](
          const Matrix&, const Matrix& g, std::span<Matrix* const> grads) {
        if (!grads[0]) return;
        const std::size_t n = row_softmax.rows();
        const double c = g(0, 0) / (2.0 * static_cast<double>(n) * temperature);
        for (std::size_t i = 0; i < n; ++i) {
          auto out = grads[0]->row(i);
          for (std::size_t k = 0; k < n; ++k) {
            const double delta = i == k ? 2.0 : 0.0;
            out[k] += -c * (delta - row_softmax(i, k) - col_softmax(i, k));
          }
        }
      });
}

}  // namespace

Var gcn_normalize(const Var& adjacency) { return normalize_sym(add_identity(adjacency)); }

Var gcn_encode(const Var& adjacency, const Var& features, Encoder& encoder) {
  if (adjacency.rows() != features.rows()) {
    throw DimensionError("gcn_encode: adjacency " + adjacency.value().shape_string() + " vs features " +
                         features.value().shape_string());
  }
  Tape& tape = adjacency.tape();
  Var propagation = gcn_normalize(adjacency);
  Var hidden = activation(matmul(propagation, matmul(features, tape.parameter(encoder.layer1))),
                          Activation::relu);
  return matmul(propagation, matmul(hidden, tape.parameter(encoder.layer2)));
}

Var mlp_project(const Var& representations, Projector& projector) {
  Tape& tape = representations.tape();
  Var hidden = activation(matmul(representations, tape.parameter(projector.layer1)), Activation::relu);
  return matmul(hidden, tape.parameter(projector.layer2));
}

Var nt_xent(const Var& z_learner, const Var& z_anchor, double temperature) {
  if (!(temperature > 0.0)) throw ConfigError("nt_xent: temperature must be positive");
  require_same_shape(z_learner.value(), z_anchor.value(), "nt_xent");
  if (z_learner.rows() == 0) throw ContractError("nt_xent: no nodes");
  Var similarity = matmul_nt(row_normalize(z_learner), row_normalize(z_anchor));
  return nt_xent_from_similarity(similarity, temperature);
}

}  // namespace lg
