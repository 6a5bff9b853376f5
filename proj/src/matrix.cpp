#include "dygad/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "dygad/common.hpp"

namespace dygad {

namespace {

void check(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
  check(a.cols() == b.rows(), "matmul: shape mismatch");
  Matrix c(a.rows(), b.cols());
  const int K = a.cols(), N = b.cols();
  parallel_for(a.rows(), [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      double* ci = c.row(i);
      const double* ai = a.row(i);
      for (int k = 0; k < K; ++k) {
        const double aik = ai[k];
        if (aik == 0.0) continue;
        const double* bk = b.row(k);
        for (int j = 0; j < N; ++j) ci[j] += aik * bk[j];
      }
    }
  });
  return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  check(a.cols() == b.cols(), "matmul_nt: shape mismatch");
  Matrix c(a.rows(), b.rows());
  const int K = a.cols(), N = b.rows();
  parallel_for(a.rows(), [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      const double* ai = a.row(i);
      double* ci = c.row(i);
      for (int j = 0; j < N; ++j) {
        const double* bj = b.row(j);
        double acc = 0.0;
        for (int k = 0; k < K; ++k) acc += ai[k] * bj[k];
        ci[j] = acc;
      }
    }
  });
  return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  check(a.rows() == b.rows(), "matmul_tn: shape mismatch");
  Matrix c(a.cols(), b.cols());
  const int K = a.rows(), N = b.cols();
  // c[i][j] = sum_k a[k][i] * b[k][j]; parallel over output rows i.
  parallel_for(a.cols(), [&](int begin, int end) {
    for (int k = 0; k < K; ++k) {
      const double* ak = a.row(k);
      const double* bk = b.row(k);
      for (int i = begin; i < end; ++i) {
        const double aki = ak[i];
        if (aki == 0.0) continue;
        double* ci = c.row(i);
        for (int j = 0; j < N; ++j) ci[j] += aki * bk[j];
      }
    }
  });
  return c;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

Matrix add(const Matrix& a, const Matrix& b) {
  check(a.same_shape(b), "add: shape mismatch");
  Matrix c = a;
  c.add_inplace(b);
  return c;
}

Matrix sub(const Matrix& a, const Matrix& b) {
  check(a.same_shape(b), "sub: shape mismatch");
  Matrix c = a;
  c.add_scaled_inplace(b, -1.0);
  return c;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  check(a.same_shape(b), "hadamard: shape mismatch");
  Matrix c(a.rows(), a.cols());
  const double* pa = a.data();
  const double* pb = b.data();
  double* pc = c.data();
  for (std::size_t i = 0; i < a.size(); ++i) pc[i] = pa[i] * pb[i];
  return c;
}

Matrix scale(const Matrix& a, double k) {
  Matrix c(a.rows(), a.cols());
  const double* pa = a.data();
  double* pc = c.data();
  for (std::size_t i = 0; i < a.size(); ++i) pc[i] = k * pa[i];
  return c;
}

Matrix relu(const Matrix& a) {
  Matrix c(a.rows(), a.cols());
  const double* pa = a.data();
  double* pc = c.data();
  for (std::size_t i = 0; i < a.size(); ++i) pc[i] = pa[i] > 0.0 ? pa[i] : 0.0;
  return c;
}

Matrix tanh_elem(const Matrix& a) {
  Matrix c(a.rows(), a.cols());
  const double* pa = a.data();
  double* pc = c.data();
  for (std::size_t i = 0; i < a.size(); ++i) pc[i] = std::tanh(pa[i]);
  return c;
}

Matrix sigmoid_elem(const Matrix& a) {
  Matrix c(a.rows(), a.cols());
  const double* pa = a.data();
  double* pc = c.data();
  for (std::size_t i = 0; i < a.size(); ++i) pc[i] = 1.0 / (1.0 + std::exp(-pa[i]));
  return c;
}

Matrix slice_cols(const Matrix& a, int c0, int c1) {
  check(0 <= c0 && c0 <= c1 && c1 <= a.cols(), "slice_cols: bad range");
  Matrix c(a.rows(), c1 - c0);
  for (int i = 0; i < a.rows(); ++i)
    for (int j = c0; j < c1; ++j) c(i, j - c0) = a(i, j);
  return c;
}

Matrix slice_rows(const Matrix& a, int r0, int r1) {
  check(0 <= r0 && r0 <= r1 && r1 <= a.rows(), "slice_rows: bad range");
  Matrix c(r1 - r0, a.cols());
  for (int i = r0; i < r1; ++i)
    for (int j = 0; j < a.cols(); ++j) c(i - r0, j) = a(i, j);
  return c;
}

Matrix concat_cols(const Matrix& a, const Matrix& b) {
  check(a.rows() == b.rows(), "concat_cols: row mismatch");
  Matrix c(a.rows(), a.cols() + b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
    for (int j = 0; j < b.cols(); ++j) c(i, a.cols() + j) = b(i, j);
  }
  return c;
}

Matrix gather_rows(const Matrix& a, const std::vector<int>& idx) {
  Matrix c(static_cast<int>(idx.size()), a.cols());
  for (int i = 0; i < static_cast<int>(idx.size()); ++i) {
    check(idx[i] >= 0 && idx[i] < a.rows(), "gather_rows: index out of range");
    for (int j = 0; j < a.cols(); ++j) c(i, j) = a(idx[i], j);
  }
  return c;
}

Matrix row_softmax(const Matrix& a) {
  Matrix c(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i) {
    const double* ai = a.row(i);
    double* ci = c.row(i);
    double mx = ai[0];
    for (int j = 1; j < a.cols(); ++j) mx = std::max(mx, ai[j]);
    double denom = 0.0;
    for (int j = 0; j < a.cols(); ++j) {
      ci[j] = std::exp(ai[j] - mx);
      denom += ci[j];
    }
    for (int j = 0; j < a.cols(); ++j) ci[j] /= denom;
  }
  return c;
}

std::vector<double> row_norms(const Matrix& a) {
  std::vector<double> out(a.rows(), 0.0);
  for (int i = 0; i < a.rows(); ++i) {
    const double* ai = a.row(i);
    double acc = 0.0;
    for (int j = 0; j < a.cols(); ++j) acc += ai[j] * ai[j];
    out[i] = std::sqrt(acc);
  }
  return out;
}

Matrix row_normalize_sum(const Matrix& a) {
  Matrix c = a;
  for (int i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < a.cols(); ++j) s += c(i, j);
    if (s != 0.0) {
      for (int j = 0; j < a.cols(); ++j) c(i, j) /= s;
    }
  }
  return c;
}

Matrix row_normalize_l2(const Matrix& a) {
  Matrix c = a;
  for (int i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < a.cols(); ++j) s += c(i, j) * c(i, j);
    s = std::sqrt(s);
    if (s != 0.0) {
      for (int j = 0; j < a.cols(); ++j) c(i, j) /= s;
    }
  }
  return c;
}

double sum_all(const Matrix& a) {
  double s = 0.0;
  const double* p = a.data();
  for (std::size_t i = 0; i < a.size(); ++i) s += p[i];
  return s;
}

double fro_norm(const Matrix& a) {
  double s = 0.0;
  const double* p = a.data();
  for (std::size_t i = 0; i < a.size(); ++i) s += p[i] * p[i];
  return std::sqrt(s);
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

}  // namespace dygad
