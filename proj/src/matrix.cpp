#include "learngraph/matrix.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "learngraph/errors.hpp"

namespace lg {

namespace {

// Below this fraction of nonzeros the row-sparse product beats dgemm.
constexpr double kSparseDensity = 0.05;

// c += a * b, skipping zero entries of a.
void sparse_left_matmul(const Matrix& a, const Matrix& b, Matrix& c) {
  const std::size_t n = b.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* out = c.data() + i * n;
    auto arow = a.row(i);
    for (std::size_t k = 0; k < arow.size(); ++k) {
      const double w = arow[k];
      if (w == 0.0) continue;
      const double* brow = b.data() + k * n;
      for (std::size_t j = 0; j < n; ++j) out[j] += w * brow[j];
    }
  }
}

// c += a^T * b, skipping zero entries of a.
void sparse_left_matmul_tn(const Matrix& a, const Matrix& b, Matrix& c) {
  const std::size_t n = b.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto arow = a.row(i);
    const double* brow = b.data() + i * n;
    for (std::size_t k = 0; k < arow.size(); ++k) {
      const double w = arow[k];
      if (w == 0.0) continue;
      double* out = c.data() + k * n;
      for (std::size_t j = 0; j < n; ++j) out[j] += w * brow[j];
    }
  }
}

bool mostly_zero(const Matrix& a) {
  if (a.size() < 4096) return false;
  const auto limit = static_cast<std::size_t>(kSparseDensity * static_cast<double>(a.size()));
  std::size_t nonzeros = 0;
  for (double v : a.values())
    if (v != 0.0 && ++nonzeros >= limit) return false;
  return true;
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw DimensionError("Matrix: " + std::to_string(rows) + "x" + std::to_string(cols) +
                         " needs " + std::to_string(rows * cols) + " entries, got " +
                         std::to_string(data_.size()));
  }
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw DimensionError("Matrix::from_rows: ragged rows");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Matrix(r, c, std::move(data));
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

void Matrix::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  constexpr std::size_t kBlock = 64;
  for (std::size_t ib = 0; ib < rows_; ib += kBlock) {
    const std::size_t ie = std::min(rows_, ib + kBlock);
    for (std::size_t jb = 0; jb < cols_; jb += kBlock) {
      const std::size_t je = std::min(cols_, jb + kBlock);
      for (std::size_t i = ib; i < ie; ++i)
        for (std::size_t j = jb; j < je; ++j) t.data_[j * rows_ + i] = data_[i * cols_ + j];
    }
  }
  return t;
}

Matrix& Matrix::operator+=(const Matrix& other) {
  require_same_shape(*this, other, "operator+=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  require_same_shape(*this, other, "operator-=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

std::string Matrix::shape_string() const {
  return std::to_string(rows_) + "x" + std::to_string(cols_);
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (!a.same_shape(b)) {
    throw DimensionError(std::string(what) + ": shape mismatch " + a.shape_string() + " vs " +
                         b.shape_string());
  }
}

void gemm(const Matrix& a, Transpose ta, const Matrix& b, Transpose tb, double alpha, double beta,
          Matrix& c) {
  const bool at = ta == Transpose::yes;
  const bool bt = tb == Transpose::yes;
  const std::size_t m = at ? a.cols() : a.rows();
  const std::size_t ka = at ? a.rows() : a.cols();
  const std::size_t kb = bt ? b.cols() : b.rows();
  const std::size_t n = bt ? b.rows() : b.cols();
  if (ka != kb) {
    throw DimensionError("matmul: inner dimensions differ (" + a.shape_string() +
                         (at ? "^T" : "") + " * " + b.shape_string() + (bt ? "^T" : "") + ")");
  }
  if (c.rows() != m || c.cols() != n) {
    throw DimensionError("gemm: output is " + c.shape_string() + ", expected " +
                         std::to_string(m) + "x" + std::to_string(n));
  }
  if (m == 0 || n == 0) return;
  if (ka == 0) {
    c *= beta;
    return;
  }
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Map<const RowMajor> ea(a.data(), static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.cols()));
  const Eigen::Map<const RowMajor> eb(b.data(), static_cast<Eigen::Index>(b.rows()), static_cast<Eigen::Index>(b.cols()));
  Eigen::Map<RowMajor> ec(c.data(), static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  auto run = [&](const auto& lhs, const auto& rhs) {
    if (beta == 0.0) {
      ec.noalias() = alpha * (lhs * rhs);
    } else {
      if (beta != 1.0) ec *= beta;
      ec.noalias() += alpha * (lhs * rhs);
    }
  };
  if (at && bt) run(ea.transpose(), eb.transpose());
  else if (at) run(ea.transpose(), eb);
  else if (bt) run(ea, eb.transpose());
  else run(ea, eb);
}

void matmul_accumulate(const Matrix& a, Transpose ta, const Matrix& b, Transpose tb, Matrix& c) {
  const bool at = ta == Transpose::yes;
  const std::size_t m = at ? a.cols() : a.rows();
  const std::size_t ka = at ? a.rows() : a.cols();
  const std::size_t kb = tb == Transpose::yes ? b.cols() : b.rows();
  const std::size_t n = tb == Transpose::yes ? b.rows() : b.cols();
  if (tb == Transpose::no && ka == kb && c.rows() == m && c.cols() == n && mostly_zero(a)) {
    if (at) {
      sparse_left_matmul_tn(a, b, c);
    } else {
      sparse_left_matmul(a, b, c);
    }
    return;
  }
  gemm(a, ta, b, tb, 1.0, 1.0, c);
}

Matrix gram(const Matrix& a) {
  const std::size_t n = a.rows();
  const Matrix t = a.transposed();
  Matrix out(n, n);
  // Upper triangle row by row, then mirrored; products commute, so the mirror is exact.
  for (std::size_t i = 0; i < n; ++i) {
    double* o = out.data() + i * n;
    auto arow = a.row(i);
    for (std::size_t k = 0; k < arow.size(); ++k) {
      const double w = arow[k];
      if (w == 0.0) continue;
      const double* trow = t.data() + k * n;
      for (std::size_t j = i; j < n; ++j) o[j] += w * trow[j];
    }
    for (std::size_t j = 0; j < i; ++j) o[j] = out(j, i);
  }
  return out;
}

Matrix matmul(const Matrix& a, const Matrix& b, Transpose ta, Transpose tb) {
  const std::size_t ka = ta == Transpose::yes ? a.rows() : a.cols();
  const std::size_t kb = tb == Transpose::yes ? b.cols() : b.rows();
  if (ka != kb) {
    throw DimensionError("matmul: inner dimensions differ (" + a.shape_string() +
                         (ta == Transpose::yes ? "^T" : "") + " * " + b.shape_string() +
                         (tb == Transpose::yes ? "^T" : "") + ")");
  }
  Matrix c(ta == Transpose::yes ? a.cols() : a.rows(), tb == Transpose::yes ? b.rows() : b.cols());
  matmul_accumulate(a, ta, b, tb, c);
  return c;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix hadamard(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "hadamard");
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] * b.data()[i];
  return out;
}

bool all_finite(const Matrix& m) {
  return std::all_of(m.values().begin(), m.values().end(), [](double v) { return std::isfinite(v); });
}

bool is_symmetric(const Matrix& m, double tol) {
  if (!m.is_square()) return false;
  constexpr std::size_t kBlock = 64;
  const std::size_t n = m.rows();
  for (std::size_t ib = 0; ib < n; ib += kBlock)
    for (std::size_t jb = ib; jb < n; jb += kBlock)
      for (std::size_t i = ib; i < std::min(n, ib + kBlock); ++i)
        for (std::size_t j = std::max(jb, i + 1); j < std::min(n, jb + kBlock); ++j)
          if (std::abs(m(i, j) - m(j, i)) > tol) return false;
  return true;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
  return d;
}

double frobenius_norm(const Matrix& m) {
  double s = 0.0;
  for (double v : m.values()) s += v * v;
  return std::sqrt(s);
}

double sum(const Matrix& m) { return std::accumulate(m.values().begin(), m.values().end(), 0.0); }

std::size_t count_nonzero(const Matrix& m) {
  return static_cast<std::size_t>(
      std::count_if(m.values().begin(), m.values().end(), [](double v) { return v != 0.0; }));
}

std::size_t count_nonzero_row(const Matrix& m, std::size_t i) {
  auto r = m.row(i);
  return static_cast<std::size_t>(std::count_if(r.begin(), r.end(), [](double v) { return v != 0.0; }));
}

}  // namespace lg
