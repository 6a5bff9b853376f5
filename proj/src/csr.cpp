#include "dygad/csr.hpp"

#include <algorithm>
#include <stdexcept>

#include "dygad/common.hpp"

namespace dygad {

CsrMatrix CsrMatrix::from_coo(int rows, int cols, std::vector<std::tuple<int, int, double>> entries) {
  for (const auto& [r, c, v] : entries) {
    if (r < 0 || r >= rows || c < 0 || c >= cols)
      throw std::invalid_argument("CsrMatrix::from_coo: entry out of range");
  }
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
  });
  CsrMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.row_ptr.assign(rows + 1, 0);
  for (std::size_t i = 0; i < entries.size();) {
    const int r = std::get<0>(entries[i]);
    const int c = std::get<1>(entries[i]);
    double v = 0.0;
    while (i < entries.size() && std::get<0>(entries[i]) == r && std::get<1>(entries[i]) == c) {
      v += std::get<2>(entries[i]);
      ++i;
    }
    m.col_idx.push_back(c);
    m.vals.push_back(v);
    m.row_ptr[r + 1] = static_cast<int>(m.col_idx.size());
  }
  // rows without entries inherit the previous offset
  for (int r = 1; r <= rows; ++r) m.row_ptr[r] = std::max(m.row_ptr[r], m.row_ptr[r - 1]);
  return m;
}

Matrix CsrMatrix::to_dense() const {
  Matrix d(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) d(r, col_idx[k]) = vals[k];
  return d;
}

double CsrMatrix::at(int r, int c) const {
  const auto begin = col_idx.begin() + row_ptr[r];
  const auto end = col_idx.begin() + row_ptr[r + 1];
  const auto it = std::lower_bound(begin, end, c);
  if (it == end || *it != c) return 0.0;
  return vals[it - col_idx.begin()];
}

Matrix spmm(const CsrMatrix& s, const Matrix& x) {
  if (s.cols != x.rows()) throw std::invalid_argument("spmm: shape mismatch");
  Matrix y(s.rows, x.cols());
  const int D = x.cols();
  parallel_for(s.rows, [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      double* yi = y.row(i);
      for (int k = s.row_ptr[i]; k < s.row_ptr[i + 1]; ++k) {
        const double v = s.vals[k];
        const double* xr = x.row(s.col_idx[k]);
        for (int d = 0; d < D; ++d) yi[d] += v * xr[d];
      }
    }
  });
  return y;
}

Matrix spmm_t(const CsrMatrix& s, const Matrix& x) {
  if (s.rows != x.rows()) throw std::invalid_argument("spmm_t: shape mismatch");
  Matrix y(s.cols, x.cols());
  const int D = x.cols();
  for (int i = 0; i < s.rows; ++i) {
    const double* xi = x.row(i);
    for (int k = s.row_ptr[i]; k < s.row_ptr[i + 1]; ++k) {
      double* yr = y.row(s.col_idx[k]);
      const double v = s.vals[k];
      for (int d = 0; d < D; ++d) yr[d] += v * xi[d];
    }
  }
  return y;
}

}  // namespace dygad
