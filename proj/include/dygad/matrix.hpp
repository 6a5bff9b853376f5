#pragma once

#include <cmath>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace dygad {

// Dense row-major matrix of doubles. This is the only tensor rank used in
// the numerics; higher-rank tensors are stored as stacked row blocks with
// shape metadata kept by their owner.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, 0.0) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("Matrix: negative dimension");
  }

  static Matrix zeros(int rows, int cols) { return Matrix(rows, cols); }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const int r = static_cast<int>(rows.size());
    const int c = r == 0 ? 0 : static_cast<int>(rows.begin()->size());
    Matrix m(r, c);
    int i = 0;
    for (const auto& row : rows) {
      if (static_cast<int>(row.size()) != c) throw std::invalid_argument("Matrix::from_rows: ragged rows");
      int j = 0;
      for (double v : row) m(i, j++) = v;
      ++i;
    }
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return data_.empty(); }
  std::size_t size() const { return data_.size(); }

  double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  double operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  double* row(int r) { return data_.data() + static_cast<std::size_t>(r) * cols_; }
  const double* row(int r) const { return data_.data() + static_cast<std::size_t>(r) * cols_; }

  void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

  void add_inplace(const Matrix& o) {
    check_same_shape(o, "add_inplace");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  }

  void add_scaled_inplace(const Matrix& o, double k) {
    check_same_shape(o, "add_scaled_inplace");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += k * o.data_[i];
  }

  bool all_finite() const {
    for (double v : data_) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

  bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  bool operator==(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_; }

 private:
  void check_same_shape(const Matrix& o, const char* where) const {
    if (!same_shape(o)) throw std::invalid_argument(std::string(where) + ": shape mismatch");
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// C = A * B
Matrix matmul(const Matrix& a, const Matrix& b);
// C = A * B^T
Matrix matmul_nt(const Matrix& a, const Matrix& b);
// C = A^T * B
Matrix matmul_tn(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& a);
Matrix add(const Matrix& a, const Matrix& b);
Matrix sub(const Matrix& a, const Matrix& b);
Matrix hadamard(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, double k);

Matrix relu(const Matrix& a);
Matrix tanh_elem(const Matrix& a);
Matrix sigmoid_elem(const Matrix& a);

Matrix slice_cols(const Matrix& a, int c0, int c1);
Matrix slice_rows(const Matrix& a, int r0, int r1);
Matrix concat_cols(const Matrix& a, const Matrix& b);
Matrix gather_rows(const Matrix& a, const std::vector<int>& idx);

// Softmax across each row.
Matrix row_softmax(const Matrix& a);
// L2 norm of every row.
std::vector<double> row_norms(const Matrix& a);
// Rows rescaled to sum 1 (rows with zero sum stay zero).
Matrix row_normalize_sum(const Matrix& a);
// Rows rescaled to unit L2 norm (zero rows stay zero).
Matrix row_normalize_l2(const Matrix& a);

double sum_all(const Matrix& a);
double fro_norm(const Matrix& a);
double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace dygad
