#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace lg {

/// Dense row-major matrix of doubles.
///
/// Every role in the pipeline (features, sketched and processed adjacencies,
/// anchor graph, embeddings, projections, weights) is stored this way.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Matrix identity(std::size_t n);
  static Matrix ones(std::size_t rows, std::size_t cols) { return Matrix(rows, cols, 1.0); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }
  bool is_square() const { return rows_ == cols_; }
  bool same_shape(const Matrix& other) const { return rows_ == other.rows_ && cols_ == other.cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  void fill(double v);
  Matrix transposed() const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);

  std::string shape_string() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

enum class Transpose { no, yes };

/// c = alpha * op(a) * op(b) + beta * c. `c` must already have the result shape.
void gemm(const Matrix& a, Transpose ta, const Matrix& b, Transpose tb, double alpha, double beta,
          Matrix& c);

/// c += op(a) * op(b). Left operands that are mostly zero (adjacencies, bag-of-words
/// features) go through a row-sparse kernel when `b` is not transposed; the choice
/// depends only on the input, so results stay deterministic.
void matmul_accumulate(const Matrix& a, Transpose ta, const Matrix& b, Transpose tb, Matrix& c);

/// op(a) * op(b).
Matrix matmul(const Matrix& a, const Matrix& b, Transpose ta = Transpose::no,
              Transpose tb = Transpose::no);

/// a * a^T. Every entry sums over columns in the same order, so equal rows of `a` give
/// bitwise-equal entries wherever they sit.
Matrix gram(const Matrix& a);

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(double s, Matrix a);

/// Elementwise product.
Matrix hadamard(const Matrix& a, const Matrix& b);

bool all_finite(const Matrix& m);
bool is_symmetric(const Matrix& m, double tol = 0.0);
double max_abs_diff(const Matrix& a, const Matrix& b);
double frobenius_norm(const Matrix& m);
double sum(const Matrix& m);
std::size_t count_nonzero(const Matrix& m);
std::size_t count_nonzero_row(const Matrix& m, std::size_t i);

/// Throws DimensionError with `what` in the message unless shapes agree.
void require_same_shape(const Matrix& a, const Matrix& b, const char* what);

}  // namespace lg
