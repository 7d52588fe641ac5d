#pragma once

#include <cstddef>

#include "learngraph/matrix.hpp"

namespace lg {

/// Cosine kNN affinities before degree normalization: each row keeps its k most
/// similar nodes (self included, ties to the lower index), then relu and
/// symmetrization. Throws ConfigError unless 1 <= k < n.
Matrix knn_affinity(const Matrix& features, std::size_t k);

/// knn_affinity followed by symmetric degree normalization; the same pipeline the
/// post-processor applies to metric-learner sketches.
Matrix build_knn_graph(const Matrix& features, std::size_t k);

}  // namespace lg
