#include "dygad/tape.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace dygad::ad {

Var Tape::push(Matrix value, bool requires_grad, std::function<void()> back) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = requires_grad;
  n.back = std::move(back);
  nodes_.push_back(std::move(n));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

Matrix& Tape::grad_ref(int id) {
  Node& n = nodes_[id];
  if (n.grad.empty()) n.grad = Matrix::zeros(n.value.rows(), n.value.cols());
  return n.grad;
}

Matrix Tape::grad(Var v) const {
  const Node& n = nodes_[v.id];
  if (n.grad.empty()) return Matrix::zeros(n.value.rows(), n.value.cols());
  return n.grad;
}

void Tape::check_same_shape(Var a, Var b, const char* where) const {
  if (!value(a).same_shape(value(b))) throw std::invalid_argument(std::string(where) + ": shape mismatch");
}

Var Tape::leaf(Matrix value, bool requires_grad) { return push(std::move(value), requires_grad, nullptr); }

Var Tape::scalar(double v) {
  Matrix m(1, 1);
  m(0, 0) = v;
  return leaf(std::move(m), false);
}

Var Tape::add(Var a, Var b) {
  check_same_shape(a, b, "tape add");
  const bool rg = requires_grad(a) || requires_grad(b);
  Var out{size()};
  return push(dygad::add(value(a), value(b)), rg, [this, a, b, out]() {
    const Matrix& g = nodes_[out.id].grad;
    if (requires_grad(a)) grad_ref(a.id).add_inplace(g);
    if (requires_grad(b)) grad_ref(b.id).add_inplace(g);
  });
}

Var Tape::sub(Var a, Var b) {
  check_same_shape(a, b, "tape sub");
  const bool rg = requires_grad(a) || requires_grad(b);
  Var out{size()};
  return push(dygad::sub(value(a), value(b)), rg, [this, a, b, out]() {
    const Matrix& g = nodes_[out.id].grad;
    if (requires_grad(a)) grad_ref(a.id).add_inplace(g);
    if (requires_grad(b)) grad_ref(b.id).add_scaled_inplace(g, -1.0);
  });
}

Var Tape::hadamard(Var a, Var b) {
  check_same_shape(a, b, "tape hadamard");
  const bool rg = requires_grad(a) || requires_grad(b);
  Var out{size()};
  return push(dygad::hadamard(value(a), value(b)), rg, [this, a, b, out]() {
    const Matrix& g = nodes_[out.id].grad;
    if (requires_grad(a)) grad_ref(a.id).add_inplace(dygad::hadamard(g, value(b)));
    if (requires_grad(b)) grad_ref(b.id).add_inplace(dygad::hadamard(g, value(a)));
  });
}

Var Tape::affine(Var a, double k, double c) {
  Matrix v = scale(value(a), k);
  if (c != 0.0) {
    for (std::size_t i = 0; i < v.size(); ++i) v.data()[i] += c;
  }
  const bool rg = requires_grad(a);
  Var out{size()};
  return push(std::move(v), rg, [this, a, k, out]() {
    if (requires_grad(a)) grad_ref(a.id).add_scaled_inplace(nodes_[out.id].grad, k);
  });
}

Var Tape::matmul(Var a, Var b) {
  const bool rg = requires_grad(a) || requires_grad(b);
  Var out{size()};
  return push(dygad::matmul(value(a), value(b)), rg, [this, a, b, out]() {
    const Matrix& g = nodes_[out.id].grad;
    if (requires_grad(a)) grad_ref(a.id).add_inplace(dygad::matmul_nt(g, value(b)));
    if (requires_grad(b)) grad_ref(b.id).add_inplace(dygad::matmul_tn(value(a), g));
  });
}

Var Tape::matmul_nt(Var a, Var b) {
  const bool rg = requires_grad(a) || requires_grad(b);
  Var out{size()};
  return push(dygad::matmul_nt(value(a), value(b)), rg, [this, a, b, out]() {
    const Matrix& g = nodes_[out.id].grad;
    if (requires_grad(a)) grad_ref(a.id).add_inplace(dygad::matmul(g, value(b)));
    if (requires_grad(b)) grad_ref(b.id).add_inplace(dygad::matmul_tn(g, value(a)));
  });
}

Var Tape::transpose(Var a) {
  const bool rg = requires_grad(a);
  Var out{size()};
  return push(dygad::transpose(value(a)), rg, [this, a, out]() {
    if (requires_grad(a)) grad_ref(a.id).add_inplace(dygad::transpose(nodes_[out.id].grad));
  });
}

Var Tape::spmm(const CsrMatrix* s, Var x, bool symmetric) {
  const bool rg = requires_grad(x);
  Var out{size()};
  return push(dygad::spmm(*s, value(x)), rg, [this, s, x, symmetric, out]() {
    if (!requires_grad(x)) return;
    const Matrix& g = nodes_[out.id].grad;
    grad_ref(x.id).add_inplace(symmetric ? dygad::spmm(*s, g) : dygad::spmm_t(*s, g));
  });
}

Var Tape::relu(Var a) {
  const bool rg = requires_grad(a);
  Var out{size()};
  return push(dygad::relu(value(a)), rg, [this, a, out]() {
    if (!requires_grad(a)) return;
    const Matrix& g = nodes_[out.id].grad;
    const Matrix& v = value(a);
    Matrix& ga = grad_ref(a.id);
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v.data()[i] > 0.0) ga.data()[i] += g.data()[i];
    }
  });
}

Var Tape::tanh_(Var a) {
  const bool rg = requires_grad(a);
  Var out{size()};
  return push(tanh_elem(value(a)), rg, [this, a, out]() {
    if (!requires_grad(a)) return;
    const Matrix& g = nodes_[out.id].grad;
    const Matrix& y = nodes_[out.id].value;
    Matrix& ga = grad_ref(a.id);
    for (std::size_t i = 0; i < y.size(); ++i) ga.data()[i] += g.data()[i] * (1.0 - y.data()[i] * y.data()[i]);
  });
}

Var Tape::sigmoid_(Var a) {
  const bool rg = requires_grad(a);
  Var out{size()};
  return push(sigmoid_elem(value(a)), rg, [this, a, out]() {
    if (!requires_grad(a)) return;
    const Matrix& g = nodes_[out.id].grad;
    const Matrix& y = nodes_[out.id].value;
    Matrix& ga = grad_ref(a.id);
    for (std::size_t i = 0; i < y.size(); ++i) ga.data()[i] += g.data()[i] * y.data()[i] * (1.0 - y.data()[i]);
  });
}

Var Tape::slice_cols(Var a, int c0, int c1) {
  const bool rg = requires_grad(a);
  Var out{size()};
  return push(dygad::slice_cols(value(a), c0, c1), rg, [this, a, c0, c1, out]() {
    if (!requires_grad(a)) return;
    const Matrix& g = nodes_[out.id].grad;
    Matrix& ga = grad_ref(a.id);
    for (int i = 0; i < g.rows(); ++i)
      for (int j = c0; j < c1; ++j) ga(i, j) += g(i, j - c0);
  });
}

Var Tape::slice_rows(Var a, int r0, int r1) {
  const bool rg = requires_grad(a);
  Var out{size()};
  return push(dygad::slice_rows(value(a), r0, r1), rg, [this, a, r0, r1, out]() {
    if (!requires_grad(a)) return;
    const Matrix& g = nodes_[out.id].grad;
    Matrix& ga = grad_ref(a.id);
    for (int i = r0; i < r1; ++i)
      for (int j = 0; j < g.cols(); ++j) ga(i, j) += g(i - r0, j);
  });
}

Var Tape::concat_cols(Var a, Var b) {
  const bool rg = requires_grad(a) || requires_grad(b);
  const int ca = value(a).cols();
  Var out{size()};
  return push(dygad::concat_cols(value(a), value(b)), rg, [this, a, b, ca, out]() {
    const Matrix& g = nodes_[out.id].grad;
    if (requires_grad(a)) {
      Matrix& ga = grad_ref(a.id);
      for (int i = 0; i < ga.rows(); ++i)
        for (int j = 0; j < ga.cols(); ++j) ga(i, j) += g(i, j);
    }
    if (requires_grad(b)) {
      Matrix& gb = grad_ref(b.id);
      for (int i = 0; i < gb.rows(); ++i)
        for (int j = 0; j < gb.cols(); ++j) gb(i, j) += g(i, ca + j);
    }
  });
}

Var Tape::stack_rows(const std::vector<Var>& parts) {
  if (parts.empty()) throw std::invalid_argument("stack_rows: empty");
  int rows = 0;
  bool rg = false;
  const int cols = value(parts[0]).cols();
  for (Var p : parts) {
    if (value(p).cols() != cols) throw std::invalid_argument("stack_rows: column mismatch");
    rows += value(p).rows();
    rg = rg || requires_grad(p);
  }
  Matrix v(rows, cols);
  int at = 0;
  for (Var p : parts) {
    const Matrix& m = value(p);
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < cols; ++j) v(at + i, j) = m(i, j);
    at += m.rows();
  }
  Var out{size()};
  std::vector<Var> parts_copy = parts;
  return push(std::move(v), rg, [this, parts_copy, out]() {
    const Matrix& g = nodes_[out.id].grad;
    int r0 = 0;
    for (Var p : parts_copy) {
      const int nr = value(p).rows();
      if (requires_grad(p)) {
        Matrix& gp = grad_ref(p.id);
        for (int i = 0; i < nr; ++i)
          for (int j = 0; j < g.cols(); ++j) gp(i, j) += g(r0 + i, j);
      }
      r0 += nr;
    }
  });
}

Var Tape::gather_rows(Var a, std::vector<int> idx) {
  const bool rg = requires_grad(a);
  Var out{size()};
  Matrix v = dygad::gather_rows(value(a), idx);
  return push(std::move(v), rg, [this, a, idx = std::move(idx), out]() {
    if (!requires_grad(a)) return;
    const Matrix& g = nodes_[out.id].grad;
    Matrix& ga = grad_ref(a.id);
    for (int i = 0; i < g.rows(); ++i)
      for (int j = 0; j < g.cols(); ++j) ga(idx[i], j) += g(i, j);
  });
}

Var Tape::add_rowvec(Var a, Var bias) {
  if (value(bias).rows() != 1 || value(bias).cols() != value(a).cols())
    throw std::invalid_argument("add_rowvec: bias must be 1 x cols(a)");
  Matrix v = value(a);
  for (int i = 0; i < v.rows(); ++i)
    for (int j = 0; j < v.cols(); ++j) v(i, j) += value(bias)(0, j);
  const bool rg = requires_grad(a) || requires_grad(bias);
  Var out{size()};
  return push(std::move(v), rg, [this, a, bias, out]() {
    const Matrix& g = nodes_[out.id].grad;
    if (requires_grad(a)) grad_ref(a.id).add_inplace(g);
    if (requires_grad(bias)) {
      Matrix& gb = grad_ref(bias.id);
      for (int i = 0; i < g.rows(); ++i)
        for (int j = 0; j < g.cols(); ++j) gb(0, j) += g(i, j);
    }
  });
}

Var Tape::row_softmax(Var a) {
  const bool rg = requires_grad(a);
  Var out{size()};
  return push(dygad::row_softmax(value(a)), rg, [this, a, out]() {
    if (!requires_grad(a)) return;
    const Matrix& g = nodes_[out.id].grad;
    const Matrix& y = nodes_[out.id].value;
    Matrix& ga = grad_ref(a.id);
    // dL/dx_j = y_j * (g_j - sum_k g_k y_k)
    for (int i = 0; i < y.rows(); ++i) {
      double dot = 0.0;
      for (int j = 0; j < y.cols(); ++j) dot += g(i, j) * y(i, j);
      for (int j = 0; j < y.cols(); ++j) ga(i, j) += y(i, j) * (g(i, j) - dot);
    }
  });
}

Var Tape::mul_mask(Var a, Matrix mask) {
  if (!value(a).same_shape(mask)) throw std::invalid_argument("mul_mask: shape mismatch");
  const bool rg = requires_grad(a);
  Matrix v = dygad::hadamard(value(a), mask);
  Var out{size()};
  return push(std::move(v), rg, [this, a, mask = std::move(mask), out]() {
    if (!requires_grad(a)) return;
    grad_ref(a.id).add_inplace(dygad::hadamard(nodes_[out.id].grad, mask));
  });
}

Var Tape::row_normalize_sum(Var a) {
  const bool rg = requires_grad(a);
  Var out{size()};
  return push(dygad::row_normalize_sum(value(a)), rg, [this, a, out]() {
    if (!requires_grad(a)) return;
    const Matrix& g = nodes_[out.id].grad;
    const Matrix& x = value(a);
    Matrix& ga = grad_ref(a.id);
    // y_j = x_j / s; dL/dx_j = (g_j - sum_k g_k y_k) / s
    for (int i = 0; i < x.rows(); ++i) {
      double s = 0.0;
      for (int j = 0; j < x.cols(); ++j) s += x(i, j);
      if (s == 0.0) continue;
      const Matrix& y = nodes_[out.id].value;
      double dot = 0.0;
      for (int j = 0; j < x.cols(); ++j) dot += g(i, j) * y(i, j);
      for (int j = 0; j < x.cols(); ++j) ga(i, j) += (g(i, j) - dot) / s;
    }
  });
}

Var Tape::row_normalize_l2(Var a) {
  const bool rg = requires_grad(a);
  Var out{size()};
  return push(dygad::row_normalize_l2(value(a)), rg, [this, a, out]() {
    if (!requires_grad(a)) return;
    const Matrix& g = nodes_[out.id].grad;
    const Matrix& x = value(a);
    const Matrix& y = nodes_[out.id].value;
    Matrix& ga = grad_ref(a.id);
    // y = x/|x|; dL/dx = (g - (g.y) y) / |x|
    for (int i = 0; i < x.rows(); ++i) {
      double n2 = 0.0;
      for (int j = 0; j < x.cols(); ++j) n2 += x(i, j) * x(i, j);
      const double n = std::sqrt(n2);
      if (n == 0.0) continue;
      double dot = 0.0;
      for (int j = 0; j < x.cols(); ++j) dot += g(i, j) * y(i, j);
      for (int j = 0; j < x.cols(); ++j) ga(i, j) += (g(i, j) - dot * y(i, j)) / n;
    }
  });
}

Var Tape::row_norms(Var a) {
  const Matrix& x = value(a);
  Matrix v(x.rows(), 1);
  const auto norms = dygad::row_norms(x);
  for (int i = 0; i < x.rows(); ++i) v(i, 0) = norms[i];
  const bool rg = requires_grad(a);
  Var out{size()};
  return push(std::move(v), rg, [this, a, out]() {
    if (!requires_grad(a)) return;
    const Matrix& g = nodes_[out.id].grad;
    const Matrix& x = value(a);
    const Matrix& n = nodes_[out.id].value;
    Matrix& ga = grad_ref(a.id);
    for (int i = 0; i < x.rows(); ++i) {
      if (n(i, 0) == 0.0) continue;  // subgradient 0 at the kink
      const double k = g(i, 0) / n(i, 0);
      for (int j = 0; j < x.cols(); ++j) ga(i, j) += k * x(i, j);
    }
  });
}

Var Tape::row_dot(Var a, Var b) {
  check_same_shape(a, b, "row_dot");
  const Matrix& x = value(a);
  const Matrix& y = value(b);
  Matrix v(x.rows(), 1);
  for (int i = 0; i < x.rows(); ++i) {
    double acc = 0.0;
    for (int j = 0; j < x.cols(); ++j) acc += x(i, j) * y(i, j);
    v(i, 0) = acc;
  }
  const bool rg = requires_grad(a) || requires_grad(b);
  Var out{size()};
  return push(std::move(v), rg, [this, a, b, out]() {
    const Matrix& g = nodes_[out.id].grad;
    if (requires_grad(a)) {
      Matrix& ga = grad_ref(a.id);
      const Matrix& y = value(b);
      for (int i = 0; i < ga.rows(); ++i)
        for (int j = 0; j < ga.cols(); ++j) ga(i, j) += g(i, 0) * y(i, j);
    }
    if (requires_grad(b)) {
      Matrix& gb = grad_ref(b.id);
      const Matrix& x = value(a);
      for (int i = 0; i < gb.rows(); ++i)
        for (int j = 0; j < gb.cols(); ++j) gb(i, j) += g(i, 0) * x(i, j);
    }
  });
}

Var Tape::sum(Var a) {
  Matrix v(1, 1);
  v(0, 0) = sum_all(value(a));
  const bool rg = requires_grad(a);
  Var out{size()};
  return push(std::move(v), rg, [this, a, out]() {
    if (!requires_grad(a)) return;
    const double g = nodes_[out.id].grad(0, 0);
    Matrix& ga = grad_ref(a.id);
    for (std::size_t i = 0; i < ga.size(); ++i) ga.data()[i] += g;
  });
}

Var Tape::fro_norm(Var a) {
  Matrix v(1, 1);
  v(0, 0) = dygad::fro_norm(value(a));
  const bool rg = requires_grad(a);
  Var out{size()};
  return push(std::move(v), rg, [this, a, out]() {
    if (!requires_grad(a)) return;
    const double n = nodes_[out.id].value(0, 0);
    if (n == 0.0) return;  // subgradient 0 at the kink
    const double k = nodes_[out.id].grad(0, 0) / n;
    grad_ref(a.id).add_scaled_inplace(value(a), k);
  });
}

void Tape::backward(Var scalar_out) {
  const Matrix& v = value(scalar_out);
  if (v.rows() != 1 || v.cols() != 1) throw std::invalid_argument("backward: output must be scalar");
  Matrix seed(1, 1);
  seed(0, 0) = 1.0;
  grad_ref(scalar_out.id) = std::move(seed);
  for (int i = scalar_out.id; i >= 0; --i) {
    Node& n = nodes_[i];
    if (!n.requires_grad || !n.back || n.grad.empty()) continue;
    n.back();
  }
}

Var glu(Tape& t, Var e, int d) {
  if (t.value(e).cols() != 2 * d) throw std::invalid_argument("glu: expected 2d channels");
  Var lin = t.slice_cols(e, 0, d);
  Var gate = t.slice_cols(e, d, 2 * d);
  return t.hadamard(t.tanh_(lin), t.sigmoid_(gate));
}

}  // namespace dygad::ad
