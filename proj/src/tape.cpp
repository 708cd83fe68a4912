#include "npr/tape.hpp"

#include <cmath>
#include <string>

#include "npr/errors.hpp"
#include "npr/parallel.hpp"

namespace npr {

namespace {

constexpr double kLogFloor = 1e-300;
constexpr double kLogCeil = 1e300;
// ln(1e300); exp arguments outside +-this are clamped.
const double kExpClamp = std::log(1e300);

double softplus_scalar(double x) {
  if (x > 35.0) return x;
  if (x < -35.0) return std::exp(x);
  return std::log1p(std::exp(x));
}

double sigmoid_scalar(double x) {
  if (x >= 0.0) {
    const double e = std::exp(-x);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

int Tape::push(Node n) {
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

void Tape::ensure_adjoint(int id) {
  Node& n = at(id);
  if (n.adjoint.size() == 0 && n.value.size() != 0) {
    n.adjoint = Mat(n.value.rows, n.value.cols);
  }
}

int Tape::leaf(Mat value, bool requires_grad) {
  Node n;
  n.op = Op::Leaf;
  n.value = std::move(value);
  n.needs_grad = requires_grad;
  return push(n);
}

static void check_same_shape(const Mat& a, const Mat& b, const char* what) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(what) + ": shapes " + std::to_string(a.rows) + "x" +
                     std::to_string(a.cols) + " vs " + std::to_string(b.rows) + "x" +
                     std::to_string(b.cols));
  }
}

int Tape::add(int a, int b) {
  const Mat& va = val(a);
  const Mat& vb = val(b);
  check_same_shape(va, vb, "add");
  Node n;
  n.op = Op::Add;
  n.in = {a, b};
  n.value = va;
  for (std::size_t i = 0; i < n.value.size(); ++i) n.value.d[i] += vb.d[i];
  n.needs_grad = needs_grad(a) || needs_grad(b);
  return push(std::move(n));
}

int Tape::sub(int a, int b) {
  const Mat& va = val(a);
  const Mat& vb = val(b);
  check_same_shape(va, vb, "sub");
  Node n;
  n.op = Op::Sub;
  n.in = {a, b};
  n.value = va;
  for (std::size_t i = 0; i < n.value.size(); ++i) n.value.d[i] -= vb.d[i];
  n.needs_grad = needs_grad(a) || needs_grad(b);
  return push(std::move(n));
}

int Tape::mul(int a, int b) {
  const Mat& va = val(a);
  const Mat& vb = val(b);
  check_same_shape(va, vb, "mul");
  Node n;
  n.op = Op::Mul;
  n.in = {a, b};
  n.value = va;
  for (std::size_t i = 0; i < n.value.size(); ++i) n.value.d[i] *= vb.d[i];
  n.needs_grad = needs_grad(a) || needs_grad(b);
  return push(std::move(n));
}

int Tape::div(int a, int b) {
  const Mat& va = val(a);
  const Mat& vb = val(b);
  check_same_shape(va, vb, "div");
  Node n;
  n.op = Op::Div;
  n.in = {a, b};
  n.value = va;
  for (std::size_t i = 0; i < n.value.size(); ++i) n.value.d[i] /= vb.d[i];
  n.needs_grad = needs_grad(a) || needs_grad(b);
  return push(std::move(n));
}

int Tape::neg(int a) {
  Node n;
  n.op = Op::Neg;
  n.in = {a};
  n.value = val(a);
  for (double& v : n.value.d) v = -v;
  n.needs_grad = needs_grad(a);
  return push(std::move(n));
}

int Tape::matmul(int a, int b) {
  Node n;
  n.op = Op::MatMul;
  n.in = {a, b};
  n.value = npr::matmul(val(a), val(b));
  n.needs_grad = needs_grad(a) || needs_grad(b);
  return push(std::move(n));
}

int Tape::addcol(int m, int v) {
  const Mat& vm = val(m);
  const Mat& vv = val(v);
  if (vv.cols != 1 || vv.rows != vm.rows) {
    throw ShapeError("addcol: vector must be " + std::to_string(vm.rows) + "x1, got " +
                     std::to_string(vv.rows) + "x" + std::to_string(vv.cols));
  }
  Node n;
  n.op = Op::AddCol;
  n.in = {m, v};
  n.value = vm;
  for (int r = 0; r < vm.rows; ++r) {
    double* row = n.value.row_ptr(r);
    const double bias = vv.d[static_cast<std::size_t>(r)];
    for (int c = 0; c < vm.cols; ++c) row[c] += bias;
  }
  n.needs_grad = needs_grad(m) || needs_grad(v);
  return push(std::move(n));
}

int Tape::tanh_(int a) {
  Node n;
  n.op = Op::Tanh;
  n.in = {a};
  n.value = val(a);
  for (double& v : n.value.d) v = std::tanh(v);
  n.needs_grad = needs_grad(a);
  return push(std::move(n));
}

int Tape::exp_(int a) {
  Node n;
  n.op = Op::Exp;
  n.in = {a};
  n.value = val(a);
  for (double& v : n.value.d) {
    if (v > kExpClamp) {
      v = kExpClamp;
      saturated_ = true;
    } else if (v < -kExpClamp) {
      v = -kExpClamp;
      saturated_ = true;
    }
    v = std::exp(v);
  }
  n.needs_grad = needs_grad(a);
  return push(std::move(n));
}

int Tape::log_(int a) {
  Node n;
  n.op = Op::Log;
  n.in = {a};
  n.value = val(a);
  for (double& v : n.value.d) {
    if (v < kLogFloor) {
      v = kLogFloor;
      saturated_ = true;
    } else if (v > kLogCeil) {
      v = kLogCeil;
      saturated_ = true;
    }
    v = std::log(v);
  }
  n.needs_grad = needs_grad(a);
  return push(std::move(n));
}

int Tape::softplus(int a) {
  Node n;
  n.op = Op::Softplus;
  n.in = {a};
  n.value = val(a);
  for (double& v : n.value.d) v = softplus_scalar(v);
  n.needs_grad = needs_grad(a);
  return push(std::move(n));
}

int Tape::sum(int a) {
  Node n;
  n.op = Op::Sum;
  n.in = {a};
  n.value = Mat(1, 1);
  double acc = 0.0;
  for (double v : val(a).d) acc += v;
  n.value.d[0] = acc;
  n.needs_grad = needs_grad(a);
  return push(std::move(n));
}

int Tape::slice_rows(int a, int r0, int r1) {
  const Mat& va = val(a);
  if (r0 < 0 || r1 > va.rows || r0 >= r1) {
    throw ShapeError("slice_rows: range [" + std::to_string(r0) + ", " + std::to_string(r1) +
                     ") out of " + std::to_string(va.rows) + " rows");
  }
  Node n;
  n.op = Op::SliceRows;
  n.in = {a};
  n.arg0 = r0;
  n.arg1 = r1;
  n.value = Mat(r1 - r0, va.cols);
  for (int r = r0; r < r1; ++r)
    for (int c = 0; c < va.cols; ++c) n.value(r - r0, c) = va(r, c);
  n.needs_grad = needs_grad(a);
  return push(std::move(n));
}

int Tape::concat_rows(const std::vector<int>& parts) {
  if (parts.empty()) throw ShapeError("concat_rows: no parts");
  int total = 0;
  const int cols = val(parts[0]).cols;
  for (int id : parts) {
    if (val(id).cols != cols) throw ShapeError("concat_rows: column counts differ");
    total += val(id).rows;
  }
  Node n;
  n.op = Op::ConcatRows;
  n.in = parts;
  n.value = Mat(total, cols);
  int r = 0;
  for (int id : parts) {
    const Mat& v = val(id);
    for (int i = 0; i < v.rows; ++i, ++r)
      for (int c = 0; c < cols; ++c) n.value(r, c) = v(i, c);
    n.needs_grad = n.needs_grad || needs_grad(id);
  }
  return push(std::move(n));
}

void Tape::backward(int root) {
  if (!val(root).is_scalar()) {
    throw ShapeError("backward: root must be a 1x1 scalar");
  }
  ensure_adjoint(root);
  at(root).adjoint.d[0] = 1.0;

  for (int id = root; id >= 0; --id) {
    Node& n = at(id);
    if (!n.needs_grad || n.adjoint.size() == 0) continue;
    const Mat& g = n.adjoint;
    switch (n.op) {
      case Op::Leaf:
        break;
      case Op::Add: {
        for (int s = 0; s < 2; ++s) {
          const int in = n.in[static_cast<std::size_t>(s)];
          if (!needs_grad(in)) continue;
          ensure_adjoint(in);
          Mat& ga = at(in).adjoint;
          for (std::size_t i = 0; i < g.size(); ++i) ga.d[i] += g.d[i];
        }
        break;
      }
      case Op::Sub: {
        if (needs_grad(n.in[0])) {
          ensure_adjoint(n.in[0]);
          Mat& ga = at(n.in[0]).adjoint;
          for (std::size_t i = 0; i < g.size(); ++i) ga.d[i] += g.d[i];
        }
        if (needs_grad(n.in[1])) {
          ensure_adjoint(n.in[1]);
          Mat& gb = at(n.in[1]).adjoint;
          for (std::size_t i = 0; i < g.size(); ++i) gb.d[i] -= g.d[i];
        }
        break;
      }
      case Op::Mul: {
        const Mat& va = val(n.in[0]);
        const Mat& vb = val(n.in[1]);
        if (needs_grad(n.in[0])) {
          ensure_adjoint(n.in[0]);
          Mat& ga = at(n.in[0]).adjoint;
          for (std::size_t i = 0; i < g.size(); ++i) ga.d[i] += g.d[i] * vb.d[i];
        }
        if (needs_grad(n.in[1])) {
          ensure_adjoint(n.in[1]);
          Mat& gb = at(n.in[1]).adjoint;
          for (std::size_t i = 0; i < g.size(); ++i) gb.d[i] += g.d[i] * va.d[i];
        }
        break;
      }
      case Op::Div: {
        const Mat& va = val(n.in[0]);
        const Mat& vb = val(n.in[1]);
        if (needs_grad(n.in[0])) {
          ensure_adjoint(n.in[0]);
          Mat& ga = at(n.in[0]).adjoint;
          for (std::size_t i = 0; i < g.size(); ++i) ga.d[i] += g.d[i] / vb.d[i];
        }
        if (needs_grad(n.in[1])) {
          ensure_adjoint(n.in[1]);
          Mat& gb = at(n.in[1]).adjoint;
          for (std::size_t i = 0; i < g.size(); ++i)
            gb.d[i] -= g.d[i] * va.d[i] / (vb.d[i] * vb.d[i]);
        }
        break;
      }
      case Op::Neg: {
        if (needs_grad(n.in[0])) {
          ensure_adjoint(n.in[0]);
          Mat& ga = at(n.in[0]).adjoint;
          for (std::size_t i = 0; i < g.size(); ++i) ga.d[i] -= g.d[i];
        }
        break;
      }
      case Op::MatMul: {
        const int ia = n.in[0], ib = n.in[1];
        const Mat& va = val(ia);
        const Mat& vb = val(ib);
        if (needs_grad(ia)) {
          ensure_adjoint(ia);
          Mat& ga = at(ia).adjoint;
          // dA = G * B^T, accumulated row-parallel.
          par::parallel_for(va.rows, [&](int i) {
            const double* grow = g.row_ptr(i);
            double* garow = ga.row_ptr(i);
            for (int k = 0; k < vb.rows; ++k) {
              const double* brow = vb.row_ptr(k);
              double acc = 0.0;
              for (int j = 0; j < vb.cols; ++j) acc += grow[j] * brow[j];
              garow[k] += acc;
            }
          });
        }
        if (needs_grad(ib)) {
          ensure_adjoint(ib);
          Mat& gb = at(ib).adjoint;
          // dB = A^T * G, accumulated row-parallel over B's rows.
          par::parallel_for(vb.rows, [&](int k) {
            double* gbrow = gb.row_ptr(k);
            for (int i = 0; i < va.rows; ++i) {
              const double aik = va(i, k);
              if (aik == 0.0) continue;
              const double* grow = g.row_ptr(i);
              for (int j = 0; j < vb.cols; ++j) gbrow[j] += aik * grow[j];
            }
          });
        }
        break;
      }
      case Op::AddCol: {
        if (needs_grad(n.in[0])) {
          ensure_adjoint(n.in[0]);
          Mat& gm = at(n.in[0]).adjoint;
          for (std::size_t i = 0; i < g.size(); ++i) gm.d[i] += g.d[i];
        }
        if (needs_grad(n.in[1])) {
          ensure_adjoint(n.in[1]);
          Mat& gv = at(n.in[1]).adjoint;
          for (int r = 0; r < g.rows; ++r) {
            const double* grow = g.row_ptr(r);
            double acc = 0.0;
            for (int c = 0; c < g.cols; ++c) acc += grow[c];
            gv.d[static_cast<std::size_t>(r)] += acc;
          }
        }
        break;
      }
      case Op::Tanh: {
        if (needs_grad(n.in[0])) {
          ensure_adjoint(n.in[0]);
          Mat& ga = at(n.in[0]).adjoint;
          for (std::size_t i = 0; i < g.size(); ++i) {
            const double t = n.value.d[i];
            ga.d[i] += g.d[i] * (1.0 - t * t);
          }
        }
        break;
      }
      case Op::Exp: {
        if (needs_grad(n.in[0])) {
          ensure_adjoint(n.in[0]);
          Mat& ga = at(n.in[0]).adjoint;
          const Mat& va = val(n.in[0]);
          for (std::size_t i = 0; i < g.size(); ++i) {
            // Zero slope once the argument is clamped.
            if (va.d[i] > kExpClamp || va.d[i] < -kExpClamp) continue;
            ga.d[i] += g.d[i] * n.value.d[i];
          }
        }
        break;
      }
      case Op::Log: {
        if (needs_grad(n.in[0])) {
          ensure_adjoint(n.in[0]);
          Mat& ga = at(n.in[0]).adjoint;
          const Mat& va = val(n.in[0]);
          for (std::size_t i = 0; i < g.size(); ++i) {
            if (va.d[i] < kLogFloor || va.d[i] > kLogCeil) continue;
            ga.d[i] += g.d[i] / va.d[i];
          }
        }
        break;
      }
      case Op::Softplus: {
        if (needs_grad(n.in[0])) {
          ensure_adjoint(n.in[0]);
          Mat& ga = at(n.in[0]).adjoint;
          const Mat& va = val(n.in[0]);
          for (std::size_t i = 0; i < g.size(); ++i)
            ga.d[i] += g.d[i] * sigmoid_scalar(va.d[i]);
        }
        break;
      }
      case Op::Sum: {
        if (needs_grad(n.in[0])) {
          ensure_adjoint(n.in[0]);
          Mat& ga = at(n.in[0]).adjoint;
          const double gs = g.d[0];
          for (double& v : ga.d) v += gs;
        }
        break;
      }
      case Op::SliceRows: {
        if (needs_grad(n.in[0])) {
          ensure_adjoint(n.in[0]);
          Mat& ga = at(n.in[0]).adjoint;
          for (int r = 0; r < g.rows; ++r)
            for (int c = 0; c < g.cols; ++c) ga(r + n.arg0, c) += g(r, c);
        }
        break;
      }
      case Op::ConcatRows: {
        int r = 0;
        for (int id_in : n.in) {
          const int nrows = val(id_in).rows;
          if (needs_grad(id_in)) {
            ensure_adjoint(id_in);
            Mat& ga = at(id_in).adjoint;
            for (int i = 0; i < nrows; ++i)
              for (int c = 0; c < g.cols; ++c) ga(i, c) += g(r + i, c);
          }
          r += nrows;
        }
        break;
      }
    }
  }
}

}  // namespace npr
