#pragma once

#include <cstdint>
#include <vector>

#include "npr/mat.hpp"

namespace npr {

// Reverse-mode tape over dense matrices. Nodes are recorded in topological
// order with eager forward evaluation; backward() runs one reverse sweep and
// fills adjoints for every node a gradient can reach. log and exp clamp
// their arguments to keep values representable; any clamp raises the tape's
// saturation flag.
class Tape {
 public:
  enum class Op : std::uint8_t {
    Leaf,
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    MatMul,
    AddCol,
    Tanh,
    Exp,
    Log,
    Softplus,
    Sum,
    SliceRows,
    ConcatRows,
  };

  struct Node {
    Op op = Op::Leaf;
    std::vector<int> in;
    Mat value;
    Mat adjoint;
    bool needs_grad = false;
    int arg0 = 0;  // SliceRows: first row
    int arg1 = 0;  // SliceRows: one past last row
  };

  int leaf(Mat value, bool requires_grad);
  int constant(Mat value) { return leaf(std::move(value), false); }
  int constant(double value) { return leaf(Mat(1, 1, value), false); }

  int add(int a, int b);
  int sub(int a, int b);
  int mul(int a, int b);  // elementwise
  int div(int a, int b);  // elementwise
  int neg(int a);
  int matmul(int a, int b);
  int addcol(int m, int v);  // broadcast column vector v over the columns of m
  int tanh_(int a);
  int exp_(int a);
  int log_(int a);
  int softplus(int a);
  int sum(int a);  // all entries -> 1x1
  int slice_rows(int a, int r0, int r1);
  int concat_rows(const std::vector<int>& parts);

  // Adjoint of `root` seeded with 1; root must be 1x1.
  void backward(int root);

  const Mat& val(int id) const { return nodes_[static_cast<std::size_t>(id)].value; }
  // Zero-sized if the node was not reached by backward().
  const Mat& grad(int id) const { return nodes_[static_cast<std::size_t>(id)].adjoint; }
  bool needs_grad(int id) const { return nodes_[static_cast<std::size_t>(id)].needs_grad; }

  bool saturated() const { return saturated_; }
  void clear_saturation() { saturated_ = false; }

  int size() const { return static_cast<int>(nodes_.size()); }
  // Drop every node recorded at or after `mark`. Callers must discard ids
  // obtained after the mark.
  void truncate(int mark) { nodes_.resize(static_cast<std::size_t>(mark)); }

 private:
  int push(Node n);
  Node& at(int id) { return nodes_[static_cast<std::size_t>(id)]; }
  void ensure_adjoint(int id);

  std::vector<Node> nodes_;
  bool saturated_ = false;
};

}  // namespace npr
