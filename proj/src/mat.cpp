#include "npr/mat.hpp"

#include "npr/errors.hpp"
#include "npr/parallel.hpp"

namespace npr {

static void check_mm(const Mat& a, const Mat& b) {
  if (a.cols != b.rows) {
    throw ShapeError("matmul: inner dimensions differ (" + std::to_string(a.rows) + "x" +
                     std::to_string(a.cols) + " * " + std::to_string(b.rows) + "x" +
                     std::to_string(b.cols) + ")");
  }
}

Mat matmul_ref(const Mat& a, const Mat& b) {
  check_mm(a, b);
  Mat c(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) {
    const double* arow = a.row_ptr(i);
    double* crow = c.row_ptr(i);
    for (int k = 0; k < a.cols; ++k) {
      const double aik = arow[k];
      if (aik == 0.0) continue;
      const double* brow = b.row_ptr(k);
      for (int j = 0; j < b.cols; ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

Mat matmul(const Mat& a, const Mat& b) {
  check_mm(a, b);
  Mat c(a.rows, b.cols);
  const int rows = a.rows, inner = a.cols, cols = b.cols;
  par::parallel_for(rows, [&](int i) {
    const double* arow = a.row_ptr(i);
    double* crow = c.row_ptr(i);
    for (int k = 0; k < inner; ++k) {
      const double aik = arow[k];
      if (aik == 0.0) continue;
      const double* brow = b.row_ptr(k);
      for (int j = 0; j < cols; ++j) crow[j] += aik * brow[j];
    }
  });
  return c;
}

}  // namespace npr
