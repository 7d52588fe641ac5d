#include "learngraph/autodiff.hpp"

#include <cmath>

#include "learngraph/errors.hpp"

namespace lg {

const Matrix& Var::value() const { return tape_->nodes_.at(id_).value; }

Matrix Var::grad() const {
  const auto& node = tape_->nodes_.at(id_);
  if (node.grad.empty()) return Matrix(node.value.rows(), node.value.cols());
  return node.grad;
}

bool Var::requires_grad() const { return tape_->nodes_.at(id_).requires_grad; }

Var Tape::push(Node node) {
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

Var Tape::constant(Matrix value) {
  Node n;
  n.value = std::move(value);
  return push(std::move(n));
}

Var Tape::variable(Matrix value) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = true;
  return push(std::move(n));
}

Var Tape::parameter(Parameter& p) {
  if (auto it = param_ids_.find(&p); it != param_ids_.end()) return Var(this, it->second);
  Node n;
  n.value = p.value;
  n.requires_grad = true;
  n.param = &p;
  Var v = push(std::move(n));
  param_ids_.emplace(&p, v.id());
  return v;
}

Var Tape::record(Matrix value, std::vector<Var> inputs, BackwardFn backward) {
  Node n;
  n.value = std::move(value);
  n.inputs.reserve(inputs.size());
  for (const Var& in : inputs) {
    if (in.tape_ != this) throw ContractError("Tape::record: input belongs to another tape");
    n.inputs.push_back(in.id_);
    n.requires_grad = n.requires_grad || nodes_[in.id_].requires_grad;
  }
  if (n.requires_grad) n.backward = std::move(backward);
  return push(std::move(n));
}

void Tape::backward(const Var& loss) {
  if (loss.tape_ != this) throw ContractError("Tape::backward: loss belongs to another tape");
  const Matrix& lv = nodes_[loss.id_].value;
  if (lv.rows() != 1 || lv.cols() != 1) {
    throw ContractError("Tape::backward: loss must be 1x1, got " + lv.shape_string());
  }
  for (auto& node : nodes_) node.grad = Matrix();
  nodes_[loss.id_].grad = Matrix(1, 1, 1.0);

  std::vector<Matrix*> input_grads;
  for (std::size_t id = loss.id_ + 1; id-- > 0;) {
    Node& node = nodes_[id];
    if (!node.requires_grad || node.grad.empty() || !node.backward) continue;
    input_grads.clear();
    for (std::size_t in : node.inputs) {
      Node& src = nodes_[in];
      if (!src.requires_grad) {
        input_grads.push_back(nullptr);
        continue;
      }
      if (src.grad.empty()) src.grad = Matrix(src.value.rows(), src.value.cols());
      input_grads.push_back(&src.grad);
    }
    node.backward(node.value, node.grad, input_grads);
  }

  for (auto& [param, id] : param_ids_) {
    Node& node = nodes_[id];
    auto* p = node.param;
    p->grad = node.grad.empty() ? Matrix(p->value.rows(), p->value.cols()) : node.grad;
  }
}

void Tape::clear() {
  nodes_.clear();
  param_ids_.clear();
}

Activation parse_activation(const std::string& name) {
  if (name == "identity") return Activation::identity;
  if (name == "relu") return Activation::relu;
  if (name == "elu") return Activation::elu;
  if (name == "tanh") return Activation::tanh;
  throw ConfigError("unknown activation '" + name + "'");
}

std::string to_string(Activation a) {
  switch (a) {
    case Activation::identity: return "identity";
    case Activation::relu: return "relu";
    case Activation::elu: return "elu";
    case Activation::tanh: return "tanh";
  }
  return "?";
}


double elu_inverse(double y) {
  if (y >= 0.0) return y;
  if (y <= -1.0) throw ContractError("elu_inverse: value must exceed -1");
  return std::log1p(y);
}

namespace {

void require_same_tape(const Var& a, const Var& b, const char* what) {
  if (&a.tape() != &b.tape()) throw ContractError(std::string(what) + ": operands on different tapes");
}

}  // namespace

Var matmul(const Var& a, const Var& b) {
  require_same_tape(a, b, "matmul");
  Matrix out = matmul(a.value(), b.value());
  return a.tape().record(std::move(out), {a, b},
                         [a, b](const Matrix&, const Matrix& g, std::span<Matrix* const> grads) {
                           if (grads[0]) gemm(g, Transpose::no, b.value(), Transpose::yes, 1.0, 1.0, *grads[0]);
                           if (grads[1]) matmul_accumulate(a.value(), Transpose::yes, g, Transpose::no, *grads[1]);
                         });
}

Var matmul_nt(const Var& a, const Var& b) {
  require_same_tape(a, b, "matmul_nt");
  Matrix out = a.id() == b.id() ? gram(a.value()) : matmul(a.value(), b.value(), Transpose::no, Transpose::yes);
  return a.tape().record(std::move(out), {a, b},
                         [a, b](const Matrix&, const Matrix& g, std::span<Matrix* const> grads) {
                           // out = a b^T: da = g b, db = g^T a
                           if (grads[0]) matmul_accumulate(g, Transpose::no, b.value(), Transpose::no, *grads[0]);
                           if (grads[1]) gemm(g, Transpose::yes, a.value(), Transpose::no, 1.0, 1.0, *grads[1]);
                         });
}

Var transpose(const Var& a) {
  return a.tape().record(a.value().transposed(), {a},
                         [](const Matrix&, const Matrix& g, std::span<Matrix* const> grads) {
                           if (grads[0]) *grads[0] += g.transposed();
                         });
}

Var add(const Var& a, const Var& b) {
  require_same_tape(a, b, "add");
  require_same_shape(a.value(), b.value(), "add");
  return a.tape().record(a.value() + b.value(), {a, b},
                         [](const Matrix&, const Matrix& g, std::span<Matrix* const> grads) {
                           if (grads[0]) *grads[0] += g;
                           if (grads[1]) *grads[1] += g;
                         });
}

Var sub(const Var& a, const Var& b) {
  require_same_tape(a, b, "sub");
  require_same_shape(a.value(), b.value(), "sub");
  return a.tape().record(a.value() - b.value(), {a, b},
                         [](const Matrix&, const Matrix& g, std::span<Matrix* const> grads) {
                           if (grads[0]) *grads[0] += g;
                           if (grads[1]) *grads[1] -= g;
                         });
}

Var hadamard(const Var& a, const Var& b) {
  require_same_tape(a, b, "hadamard");
  Matrix out = hadamard(a.value(), b.value());
  return a.tape().record(std::move(out), {a, b},
                         [a, b](const Matrix&, const Matrix& g, std::span<Matrix* const> grads) {
                           const std::size_t n = g.size();
                           if (grads[0]) {
                             double* ga = grads[0]->data();
                             const double* bv = b.value().data();
                             for (std::size_t i = 0; i < n; ++i) ga[i] += g.data()[i] * bv[i];
                           }
                           if (grads[1]) {
                             double* gb = grads[1]->data();
                             const double* av = a.value().data();
                             for (std::size_t i = 0; i < n; ++i) gb[i] += g.data()[i] * av[i];
                           }
                         });
}

Var scale(const Var& a, double s) {
  return a.tape().record(s * Matrix(a.value()), {a},
                         [s](const Matrix&, const Matrix& g, std::span<Matrix* const> grads) {
                           if (!grads[0]) return;
                           double* ga = grads[0]->data();
                           for (std::size_t i = 0; i < g.size(); ++i) ga[i] += s * g.data()[i];
                         });
}

Var add_row(const Var& a, const Var& row) {
  require_same_tape(a, row, "add_row");
  if (row.rows() != 1 || row.cols() != a.cols()) {
    throw DimensionError("add_row: row is " + row.value().shape_string() + ", matrix is " +
                         a.value().shape_string());
  }
  Matrix out = a.value();
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto r = out.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] += row.value()(0, j);
  }
  return a.tape().record(std::move(out), {a, row},
                         [](const Matrix&, const Matrix& g, std::span<Matrix* const> grads) {
                           if (grads[0]) *grads[0] += g;
                           if (grads[1]) {
                             for (std::size_t i = 0; i < g.rows(); ++i) {
                               auto r = g.row(i);
                               for (std::size_t j = 0; j < r.size(); ++j) (*grads[1])(0, j) += r[j];
                             }
                           }
                         });
}

Var mul_row(const Var& a, const Var& row) {
  require_same_tape(a, row, "mul_row");
  if (row.rows() != 1 || row.cols() != a.cols()) {
    throw DimensionError("mul_row: row is " + row.value().shape_string() + ", matrix is " +
                         a.value().shape_string());
  }
  Matrix out = a.value();
  const auto w = row.value().row(0);
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto r = out.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] *= w[j];
  }
  return a.tape().record(std::move(out), {a, row},
                         [a, row](const Matrix&, const Matrix& g, std::span<Matrix* const> grads) {
                           const auto w = row.value().row(0);
                           for (std::size_t i = 0; i < g.rows(); ++i) {
                             auto gr = g.row(i);
                             auto ar = a.value().row(i);
                             for (std::size_t j = 0; j < gr.size(); ++j) {
                               if (grads[0]) (*grads[0])(i, j) += gr[j] * w[j];
                               if (grads[1]) (*grads[1])(0, j) += gr[j] * ar[j];
                             }
                           }
                         });
}

Var activation(const Var& a, Activation kind) {
  Matrix out(a.rows(), a.cols());
  const double* x = a.value().data();
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = activate(kind, x[i]);
  return a.tape().record(std::move(out), {a},
                         [a, kind](const Matrix&, const Matrix& g, std::span<Matrix* const> grads) {
                           if (!grads[0]) return;
                           const double* x = a.value().data();
                           double* ga = grads[0]->data();
                           for (std::size_t i = 0; i < g.size(); ++i)
                             ga[i] += g.data()[i] * activate_derivative(kind, x[i]);
                         });
}

Var row_normalize(const Var& a) {
  const Matrix& x = a.value();
  Matrix out(x.rows(), x.cols());
  std::vector<double> norms(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    double s = 0.0;
    for (double v : x.row(i)) s += v * v;
    norms[i] = std::sqrt(s);
    if (norms[i] == 0.0) continue;
    auto o = out.row(i);
    auto r = x.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) o[j] = r[j] / norms[i];
  }
  return a.tape().record(
      std::move(out), {a},
      [norms = std::move(norms)](const Matrix& y, const Matrix& g, std::span<Matrix* const> grads) {
        if (!grads[0]) return;
        for (std::size_t i = 0; i < y.rows(); ++i) {
          if (norms[i] == 0.0) continue;
          auto yr = y.row(i);
          auto gr = g.row(i);
          double dot = 0.0;
          for (std::size_t j = 0; j < yr.size(); ++j) dot += yr[j] * gr[j];
          auto out = grads[0]->row(i);
          for (std::size_t j = 0; j < yr.size(); ++j) out[j] += (gr[j] - yr[j] * dot) / norms[i];
        }
      });
}

Var cosine_similarity_matrix(const Var& e) {
  Var unit = row_normalize(e);
  return matmul_nt(unit, unit);
}

Var sum(const Var& a) {
  return a.tape().record(Matrix(1, 1, lg::sum(a.value())), {a},
                         [](const Matrix&, const Matrix& g, std::span<Matrix* const> grads) {
                           if (!grads[0]) return;
                           const double s = g(0, 0);
                           for (double& v : grads[0]->values()) v += s;
                         });
}

}  // namespace lg
