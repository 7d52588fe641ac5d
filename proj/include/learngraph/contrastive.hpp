#pragma once

#include <cstddef>
#include <vector>

#include "learngraph/autodiff.hpp"
#include "learngraph/rng.hpp"

namespace lg {

/// Two-layer GCN shared by the learner and anchor views.
struct Encoder {
  Parameter layer1;  // d x d1
  Parameter layer2;  // d1 x d1
};

/// Two-layer MLP head mapping representations into the contrastive space.
struct Projector {
  Parameter layer1;  // d1 x d2
  Parameter layer2;  // d2 x d2
};

struct ContrastiveModel {
  Encoder encoder;
  Projector projector;

  std::vector<Parameter*> parameters();
};

/// Uniform in +-sqrt(6 / (fan_in + fan_out)).
Matrix glorot_uniform(std::size_t fan_in, std::size_t fan_out, Rng& rng);

ContrastiveModel init_contrastive_model(std::size_t input_dim, std::size_t d1, std::size_t d2, Rng& rng);

/// D~^{-1/2} (A + I) D~^{-1/2}, differentiable in A. Rows whose degree is not positive
/// get their degree clamped to 1e-10.
Var gcn_normalize(const Var& adjacency);

/// H = P relu(P X W1) W2 with P = gcn_normalize(adjacency). Returns n x d1.
Var gcn_encode(const Var& adjacency, const Var& features, Encoder& encoder);

/// Z = relu(H W1) W2. Returns n x d2.
Var mlp_project(const Var& representations, Projector& projector);

/// Symmetric NT-Xent between two projection sets of the same nodes, negated so that
/// lower is better. The denominator runs over all n cross-view candidates including the
/// positive. Throws ConfigError when temperature <= 0.
Var nt_xent(const Var& z_learner, const Var& z_anchor, double temperature);

}  // namespace lg
