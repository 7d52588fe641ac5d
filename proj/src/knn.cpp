#include "learngraph/knn.hpp"

#include "learngraph/autodiff.hpp"
#include "learngraph/errors.hpp"
#include "learngraph/post_process.hpp"

namespace lg {

Matrix knn_affinity(const Matrix& features, std::size_t k) {
  if (features.rows() == 0) throw ConfigError("knn_affinity: empty feature matrix");
  if (k < 1 || k >= features.rows()) {
    throw ConfigError("knn graph: need 1 <= k < n, got k=" + std::to_string(k) +
                      " n=" + std::to_string(features.rows()));
  }
  Tape tape;
  Var sim = cosine_similarity_matrix(tape.constant(features));
  return activate_symmetrize(topk_sparsify(sim, k), LearnerKind::attentive).value();
}

Matrix build_knn_graph(const Matrix& features, std::size_t k) {
  Tape tape;
  return normalize_sym(tape.constant(knn_affinity(features, k))).value();
}

}  // namespace lg
