#pragma once

#include <tuple>
#include <vector>

#include "dygad/matrix.hpp"

namespace dygad {

// Compressed sparse row matrix with sorted column indices per row.
struct CsrMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> row_ptr;  // size rows + 1
  std::vector<int> col_idx;
  std::vector<double> vals;

  int nnz() const { return static_cast<int>(col_idx.size()); }

  // Entries need not be sorted or unique; duplicates are summed.
  static CsrMatrix from_coo(int rows, int cols, std::vector<std::tuple<int, int, double>> entries);

  Matrix to_dense() const;
  double at(int r, int c) const;  // 0 when absent
};

// y = S * x
Matrix spmm(const CsrMatrix& s, const Matrix& x);
// y = S^T * x
Matrix spmm_t(const CsrMatrix& s, const Matrix& x);

}  // namespace dygad
