#include "learngraph/augment.hpp"

#include "learngraph/errors.hpp"

namespace lg {

namespace {

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ConfigError(std::string(what) + ": probability must lie in [0, 1], got " + std::to_string(p));
  }
}

}  // namespace

std::vector<std::uint8_t> draw_feature_mask(std::size_t dims, double p_mask, Rng& rng) {
  require_probability(p_mask, "feature_mask");
  std::vector<std::uint8_t> mask(dims);
  for (auto& m : mask) m = rng.bernoulli(p_mask) ? 0 : 1;
  return mask;
}

Matrix draw_edge_mask(std::size_t n, double p_drop, Rng& rng) {
  require_probability(p_drop, "edge_drop");
  Matrix mask(n, n, 1.0);
  if (p_drop == 0.0) return mask;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rng.bernoulli(p_drop)) {
        mask(i, j) = 0.0;
        mask(j, i) = 0.0;
      }
    }
  }
  return mask;
}

Matrix apply_feature_mask(const Matrix& features, const std::vector<std::uint8_t>& mask) {
  if (mask.size() != features.cols()) {
    throw DimensionError("feature mask has " + std::to_string(mask.size()) + " entries for " +
                         std::to_string(features.cols()) + " feature columns");
  }
  Matrix out = features;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto r = out.row(i);
    for (std::size_t j = 0; j < r.size(); ++j)
      if (!mask[j]) r[j] = 0.0;
  }
  return out;
}

Matrix feature_mask(const Matrix& features, double p_mask, Rng& rng) {
  return apply_feature_mask(features, draw_feature_mask(features.cols(), p_mask, rng));
}

Matrix edge_drop(const Matrix& adjacency, double p_drop, Rng& rng) {
  if (!is_symmetric(adjacency)) throw ContractError("edge_drop: adjacency must be symmetric");
  return hadamard(adjacency, draw_edge_mask(adjacency.rows(), p_drop, rng));
}

Var edge_drop(const Var& adjacency, double p_drop, Rng& rng) {
  if (!is_symmetric(adjacency.value())) throw ContractError("edge_drop: adjacency must be symmetric");
  if (p_drop == 0.0) return adjacency;
  Var mask = adjacency.tape().constant(draw_edge_mask(adjacency.rows(), p_drop, rng));
  return hadamard(adjacency, mask);
}

AugmentedViews augment_views(const Var& learned, const Matrix& anchor, const Matrix& features,
                             const AugmentConfig& cfg, Rng& rng) {
  if (learned.rows() != features.rows() || !anchor.same_shape(learned.value())) {
    throw DimensionError("augment_views: learned " + learned.value().shape_string() + ", anchor " +
                         anchor.shape_string() + ", features " + features.shape_string());
  }
  AugmentedViews views;
  views.learner_adjacency = edge_drop(learned, cfg.p_a, rng);
  views.learner_features = feature_mask(features, cfg.p_x_learner, rng);
  views.anchor_adjacency = edge_drop(anchor, cfg.p_a, rng);
  views.anchor_features = feature_mask(features, cfg.p_x_anchor, rng);
  return views;
}

}  // namespace lg
