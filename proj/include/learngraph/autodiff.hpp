#pragma once

#include <cmath>
#include <cstddef>
#include <deque>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "learngraph/matrix.hpp"

namespace lg {

/// A trainable tensor that outlives any single tape. `grad` holds dLoss/dValue
/// after the most recent Tape::backward that reached it.
struct Parameter {
  Parameter() = default;
  explicit Parameter(Matrix init, std::string name = {})
      : value(std::move(init)), grad(value.rows(), value.cols()), name(std::move(name)) {}

  Matrix value;
  Matrix grad;
  std::string name;
};

class Tape;

/// Handle to a node recorded on a Tape. Cheap to copy; valid until the tape is cleared.
class Var {
 public:
  Var() = default;

  const Matrix& value() const;
  /// Gradient from the last backward pass; zero when the node was not on a loss path.
  Matrix grad() const;
  bool requires_grad() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }

  Tape& tape() const { return *tape_; }
  std::size_t id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

/// Accumulates the upstream gradient into the gradients of the inputs.
/// `input_grads[i]` is null when input i does not require a gradient.
using BackwardFn = std::function<void(const Matrix& output, const Matrix& output_grad,
                                      std::span<Matrix* const> input_grads)>;

/// Records operations in execution order; backward() replays them in reverse.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Matrix value);
  /// A free leaf that collects a gradient (used for gradient checks).
  Var variable(Matrix value);
  /// Registers a parameter; the same Parameter maps to the same node on one tape.
  Var parameter(Parameter& p);

  /// Appends an op output. The backward rule is kept only when some input needs a gradient.
  Var record(Matrix value, std::vector<Var> inputs, BackwardFn backward);

  /// Reverse pass from a 1x1 loss. Overwrites the `grad` of every registered Parameter.
  void backward(const Var& loss);

  void clear();
  std::size_t size() const { return nodes_.size(); }

 private:
  friend class Var;

  struct Node {
    Matrix value;
    Matrix grad;
    std::vector<std::size_t> inputs;
    BackwardFn backward;
    bool requires_grad = false;
    Parameter* param = nullptr;
  };

  Var push(Node node);

  std::deque<Node> nodes_;
  std::unordered_map<const Parameter*, std::size_t> param_ids_;
};

enum class Activation { identity, relu, elu, tanh };

Activation parse_activation(const std::string& name);
std::string to_string(Activation a);

/// Scalar forms. relu'(0) is 0; elu uses alpha = 1.
inline double activate(Activation kind, double x) {
  switch (kind) {
    case Activation::identity: return x;
    case Activation::relu: return x > 0.0 || std::isnan(x) ? x : 0.0;
    case Activation::elu: return x >= 0.0 ? x : std::expm1(x);
    case Activation::tanh: return std::tanh(x);
  }
  return x;
}

inline double activate_derivative(Activation kind, double x) {
  switch (kind) {
    case Activation::identity: return 1.0;
    case Activation::relu: return x > 0.0 ? 1.0 : 0.0;
    case Activation::elu: return x >= 0.0 ? 1.0 : std::exp(x);
    case Activation::tanh: {
      const double t = std::tanh(x);
      return 1.0 - t * t;
    }
  }
  return 1.0;
}
/// Inverse of elu on (-1, inf).
double elu_inverse(double y);

// Differentiable ops. All inputs must share one tape.
Var matmul(const Var& a, const Var& b);
/// a * b^T
Var matmul_nt(const Var& a, const Var& b);
Var transpose(const Var& a);
Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var hadamard(const Var& a, const Var& b);
Var scale(const Var& a, double s);
/// Adds a 1 x c row vector to every row.
Var add_row(const Var& a, const Var& row);
/// Multiplies every row elementwise by a 1 x c row vector.
Var mul_row(const Var& a, const Var& row);
Var activation(const Var& a, Activation kind);
/// Scales each row to unit L2 norm; zero rows stay zero.
Var row_normalize(const Var& a);
/// Pairwise cosine similarity of the rows of `e` (n x n); zero-norm rows give 0.
Var cosine_similarity_matrix(const Var& e);
/// Sum of all entries as a 1x1 node.
Var sum(const Var& a);

}  // namespace lg
