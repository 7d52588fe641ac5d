#pragma once

#include <cstddef>

#include "learngraph/autodiff.hpp"
#include "learngraph/graph_learner.hpp"

namespace lg {

/// Counters raised by the post-processing stages.
struct ProcessDiagnostics {
  /// Rows whose degree was <= 0 despite nonzero entries; their degree is clamped to 1e-10.
  std::size_t clamped_rows = 0;
  std::size_t sparsify_calls = 0;
};

inline constexpr double kDegreeFloor = 1e-10;

/// Keeps the k largest entries of every row (ties go to the lower column index) and zeroes
/// the rest. Gradients flow only through kept entries. Throws ConfigError unless 1 <= k < n.
Var topk_sparsify(const Var& sketch, std::size_t k, ProcessDiagnostics* diagnostics = nullptr);

/// (f(S) + f(S)^T) / 2 with f = elu for the FGP learner and relu otherwise.
Var activate_symmetrize(const Var& sparse, LearnerKind kind);

/// D^{-1/2} S D^{-1/2} with D the row sums. Zero-degree rows map to zero rows.
Var normalize_sym(const Var& sym, ProcessDiagnostics* diagnostics = nullptr);

/// Full pipeline: sparsify (skipped for FGP), activate, symmetrize, normalize.
Var process(const Var& sketch, std::size_t k, LearnerKind kind,
            ProcessDiagnostics* diagnostics = nullptr);

}  // namespace lg
