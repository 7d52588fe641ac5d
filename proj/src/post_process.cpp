#include "learngraph/post_process.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "learngraph/errors.hpp"

namespace lg {

Var topk_sparsify(const Var& sketch, std::size_t k, ProcessDiagnostics* diagnostics) {
  const Matrix& s = sketch.value();
  const std::size_t n = s.cols();
  if (!s.is_square()) throw DimensionError("topk_sparsify: input must be square, got " + s.shape_string());
  if (k < 1 || k >= n) {
    throw ConfigError("topk_sparsify: need 1 <= k < n, got k=" + std::to_string(k) +
                      " n=" + std::to_string(n));
  }
  if (diagnostics) ++diagnostics->sparsify_calls;

  // keep[i*k + r] = column of the r-th kept entry of row i
  std::vector<std::size_t> keep(s.rows() * k);
  std::vector<std::size_t> heap;
  heap.reserve(k);
  Matrix out(s.rows(), n);
  for (std::size_t i = 0; i < s.rows(); ++i) {
    auto row = s.row(i);
    // Min-heap on (value, lower index wins ties): the root is the weakest kept entry.
    auto better = [&](std::size_t a, std::size_t b) { return row[a] > row[b] || (row[a] == row[b] && a < b); };
    heap.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (heap.size() < k) {
        heap.push_back(j);
        std::push_heap(heap.begin(), heap.end(), better);
      } else if (better(j, heap.front())) {
        std::pop_heap(heap.begin(), heap.end(), better);
        heap.back() = j;
        std::push_heap(heap.begin(), heap.end(), better);
      }
    }
    std::sort(heap.begin(), heap.end());
    for (std::size_t r = 0; r < k; ++r) {
      keep[i * k + r] = heap[r];
      out(i, heap[r]) = row[heap[r]];
    }
  }
  return sketch.tape().record(
      std::move(out), {sketch},
      [keep = std::move(keep), k](const Matrix&, const Matrix& g, std::span<Matrix* const> grads) {
        if (!grads[0]) return;
        for (std::size_t i = 0; i < g.rows(); ++i)
          for (std::size_t r = 0; r < k; ++r) {
            const std::size_t j = keep[i * k + r];
            (*grads[0])(i, j) += g(i, j);
          }
      });
}

Var activate_symmetrize(const Var& sparse, LearnerKind kind) {
  const Matrix& s = sparse.value();
  if (!s.is_square()) {
    throw DimensionError("activate_symmetrize: input must be square, got " + s.shape_string());
  }
  const Activation act = kind == LearnerKind::fgp ? Activation::elu : Activation::relu;
  Matrix out = s;
  if (act == Activation::relu) {
    for (double& v : out.values()) v = activate(Activation::relu, v);
  } else {
    for (double& v : out.values()) v = activate(Activation::elu, v);
  }
  // a + a^T is exactly symmetric because addition commutes.
  const Matrix flipped = out.transposed();
  for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] = 0.5 * (out.values()[i] + flipped.values()[i]);
  return sparse.tape().record(
      std::move(out), {sparse},
      [sparse, act](const Matrix&, const Matrix& g, std::span<Matrix* const> grads) {
        if (!grads[0]) return;
        const Matrix gt = g.transposed();
        const auto x = sparse.value().values();
        auto out = grads[0]->values();
        auto run = [&](Activation a) {
          for (std::size_t i = 0; i < out.size(); ++i)
            out[i] += 0.5 * (g.values()[i] + gt.values()[i]) * activate_derivative(a, x[i]);
        };
        if (act == Activation::relu) run(Activation::relu);
        else run(Activation::elu);
      });
}

Var normalize_sym(const Var& sym, ProcessDiagnostics* diagnostics) {
  const Matrix& s = sym.value();
  if (!s.is_square()) throw DimensionError("normalize_sym: input must be square, got " + s.shape_string());
  const std::size_t n = s.rows();
  std::vector<double> degree(n);
  std::vector<double> inv_sqrt(n, 0.0);
  // active[i]: inv_sqrt[i] depends on the degree (not a zero row and not clamped)
  std::vector<char> active(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = s.row(i);
    degree[i] = std::accumulate(row.begin(), row.end(), 0.0);
    if (degree[i] > 0.0) {
      inv_sqrt[i] = 1.0 / std::sqrt(degree[i]);
      active[i] = 1;
    } else if (std::any_of(row.begin(), row.end(), [](double v) { return v != 0.0; })) {
      inv_sqrt[i] = 1.0 / std::sqrt(kDegreeFloor);
      if (diagnostics) ++diagnostics->clamped_rows;
    }
  }
  // For nonnegative input every entry is at most 1; rounding can overshoot by an ulp.
  const bool nonnegative = std::all_of(s.values().begin(), s.values().end(), [](double v) { return v >= 0.0; });
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    auto in = s.row(i);
    auto o = out.row(i);
    for (std::size_t j = 0; j < n; ++j) o[j] = in[j] * (inv_sqrt[i] * inv_sqrt[j]);
    if (nonnegative)
      for (double& v : o) v = std::min(v, 1.0);
  }
  return sym.tape().record(
      std::move(out), {sym},
      [sym, degree = std::move(degree), inv_sqrt = std::move(inv_sqrt),
       active = std::move(active)](const Matrix&, const Matrix& g, std::span<Matrix* const> grads) {
        if (!grads[0]) return;
        const Matrix& s = sym.value();
        const std::size_t n = s.rows();
        // out_ij = r_i s_ij r_j, r = d^{-1/2}, d_i = sum_j s_ij
        std::vector<double> dr(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
          auto gr = g.row(i);
          auto sr = s.row(i);
          double row_term = 0.0;
          for (std::size_t j = 0; j < n; ++j) {
            const double t = gr[j] * sr[j];
            row_term += t * inv_sqrt[j];
            dr[j] += t * inv_sqrt[i];
          }
          dr[i] += row_term;
        }
        std::vector<double> dd(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
          if (active[i]) dd[i] = dr[i] * (-0.5) * inv_sqrt[i] / degree[i];
        for (std::size_t i = 0; i < n; ++i) {
          auto gr = g.row(i);
          auto out = grads[0]->row(i);
          for (std::size_t j = 0; j < n; ++j) out[j] += gr[j] * inv_sqrt[i] * inv_sqrt[j] + dd[i];
        }
      });
}

Var process(const Var& sketch, std::size_t k, LearnerKind kind, ProcessDiagnostics* diagnostics) {
  Var sparse = kind == LearnerKind::fgp ? sketch : topk_sparsify(sketch, k, diagnostics);
  return normalize_sym(activate_symmetrize(sparse, kind), diagnostics);
}

}  // namespace lg
