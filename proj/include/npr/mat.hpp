#pragma once

#include <cmath>
#include <initializer_list>
#include <vector>

namespace npr {

// Dense row-major matrix of doubles. Column vectors are n x 1 matrices.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> d;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), d(static_cast<std::size_t>(r) * c, 0.0) {}
  Mat(int r, int c, double fill)
      : rows(r), cols(c), d(static_cast<std::size_t>(r) * c, fill) {}

  static Mat col(std::initializer_list<double> vals) {
    Mat m(static_cast<int>(vals.size()), 1);
    int i = 0;
    for (double v : vals) m.d[i++] = v;
    return m;
  }
  static Mat col(const std::vector<double>& vals) {
    Mat m(static_cast<int>(vals.size()), 1);
    m.d = vals;
    return m;
  }
  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  double& operator()(int r, int c) { return d[static_cast<std::size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return d[static_cast<std::size_t>(r) * cols + c]; }

  double* row_ptr(int r) { return d.data() + static_cast<std::size_t>(r) * cols; }
  const double* row_ptr(int r) const { return d.data() + static_cast<std::size_t>(r) * cols; }

  std::size_t size() const { return d.size(); }
  bool same_shape(const Mat& o) const { return rows == o.rows && cols == o.cols; }
  bool is_scalar() const { return rows == 1 && cols == 1; }
  double scalar() const { return d[0]; }

  bool all_finite() const {
    for (double v : d)
      if (!std::isfinite(v)) return false;
    return true;
  }

  Mat column(int c) const {
    Mat out(rows, 1);
    for (int r = 0; r < rows; ++r) out.d[r] = (*this)(r, c);
    return out;
  }
  void set_column(int c, const Mat& v) {
    for (int r = 0; r < rows; ++r) (*this)(r, c) = v.d[r];
  }
};

// Reference product: plain serial loops, kept as the ground truth the
// OpenMP kernel is tested against.
Mat matmul_ref(const Mat& a, const Mat& b);

// Row-parallel product. Each output element accumulates in the same k order
// as the reference, so the two agree bit for bit for any thread count.
Mat matmul(const Mat& a, const Mat& b);

}  // namespace npr
