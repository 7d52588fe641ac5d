#pragma once

#include <cstdint>
#include <vector>

#include "learngraph/autodiff.hpp"
#include "learngraph/rng.hpp"

namespace lg {

/// Column mask shared by every node: entry 0 with probability `p_mask`, else 1.
std::vector<std::uint8_t> draw_feature_mask(std::size_t dims, double p_mask, Rng& rng);

/// Symmetric 0/1 matrix over unordered pairs i < j: 0 with probability `p_drop`.
/// The diagonal is always 1.
Matrix draw_edge_mask(std::size_t n, double p_drop, Rng& rng);

Matrix apply_feature_mask(const Matrix& features, const std::vector<std::uint8_t>& mask);

/// Zeroes a shared random subset of feature columns. Requires 0 <= p_mask <= 1.
Matrix feature_mask(const Matrix& features, double p_mask, Rng& rng);

/// Drops random undirected edges of a symmetric adjacency; self loops are kept and the
/// result is not renormalized. Throws ContractError on an asymmetric input.
Matrix edge_drop(const Matrix& adjacency, double p_drop, Rng& rng);

/// Differentiable variant for the learner view: gradients pass through surviving entries.
Var edge_drop(const Var& adjacency, double p_drop, Rng& rng);

struct AugmentConfig {
  double p_x_learner = 0.0;
  double p_x_anchor = 0.0;
  double p_a = 0.0;
};

struct AugmentedViews {
  Var learner_adjacency;
  Matrix learner_features;
  Matrix anchor_adjacency;
  Matrix anchor_features;
};

/// Corrupts both views. Draw order: learner edges, learner features, anchor edges,
/// anchor features; every draw is independent.
AugmentedViews augment_views(const Var& learned, const Matrix& anchor, const Matrix& features,
                             const AugmentConfig& cfg, Rng& rng);

}  // namespace lg
