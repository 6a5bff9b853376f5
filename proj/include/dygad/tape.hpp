#pragma once

#include <functional>
#include <vector>

#include "dygad/csr.hpp"
#include "dygad/matrix.hpp"

namespace dygad::ad {

struct Var {
  int id = -1;
  bool valid() const { return id >= 0; }
};

// Reverse-mode tape over dense matrices. Nodes are created in topological
// order; backward() walks them in reverse, accumulating into lazily
// allocated gradient buffers. Scalars are 1x1 matrices.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var leaf(Matrix value, bool requires_grad = false);
  Var constant(Matrix value) { return leaf(std::move(value), false); }
  Var scalar(double v);

  const Matrix& value(Var v) const { return nodes_[v.id].value; }
  bool requires_grad(Var v) const { return nodes_[v.id].requires_grad; }
  // Zero-filled when the node never received a pull.
  Matrix grad(Var v) const;

  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var hadamard(Var a, Var b);
  // k*x + c elementwise
  Var affine(Var a, double k, double c);
  Var matmul(Var a, Var b);
  Var matmul_nt(Var a, Var b);
  Var transpose(Var a);
  // Sparse operator applied from the left; `symmetric` selects the cheap
  // backward path (S^T == S).
  Var spmm(const CsrMatrix* s, Var x, bool symmetric);
  Var relu(Var a);
  Var tanh_(Var a);
  Var sigmoid_(Var a);
  Var slice_cols(Var a, int c0, int c1);
  Var slice_rows(Var a, int r0, int r1);
  Var concat_cols(Var a, Var b);
  Var stack_rows(const std::vector<Var>& parts);
  Var gather_rows(Var a, std::vector<int> idx);
  // Broadcast: adds a 1xC row vector to every row of a.
  Var add_rowvec(Var a, Var bias);
  Var row_softmax(Var a);
  // Hadamard with a constant matrix (e.g. a top-k mask).
  Var mul_mask(Var a, Matrix mask);
  Var row_normalize_sum(Var a);
  Var row_normalize_l2(Var a);
  // Qx1 column of row L2 norms; zero rows get zero gradient.
  Var row_norms(Var a);
  // Qx1 column of row dot products of a and b.
  Var row_dot(Var a, Var b);
  Var sum(Var a);
  // sqrt(sum of squares); gradient 0 at exactly 0.
  Var fro_norm(Var a);

  void backward(Var scalar_out);

  int size() const { return static_cast<int>(nodes_.size()); }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    bool requires_grad = false;
    std::function<void()> back;  // pulls this node's grad into its inputs
  };

  Var push(Matrix value, bool requires_grad, std::function<void()> back);
  Matrix& grad_ref(int id);
  bool has_grad(int id) const { return !nodes_[id].grad.empty(); }
  void check_same_shape(Var a, Var b, const char* where) const;

  std::vector<Node> nodes_;
};

// tanh(E[:, :d]) * sigmoid(E[:, d:2d]) — the gate used by the temporal
// convolution stacks.
Var glu(Tape& t, Var e, int d);

}  // namespace dygad::ad
