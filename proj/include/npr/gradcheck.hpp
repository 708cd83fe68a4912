#pragma once

#include <functional>
#include <string>
#include <vector>

namespace npr {

struct ValueGrad {
  double value = 0.0;
  std::vector<double> grad;
};

// A scalar function of a flat parameter vector that also reports its
// analytic gradient.
using DiffFn = std::function<ValueGrad(const std::vector<double>&)>;

struct GradCheckReport {
  bool ok = false;                 // false if any probe was non-finite
  double max_rel_err = 0.0;        // max_i |analytic_i - central_i| / (|central_i| + 1e-12)
  int worst_coordinate = -1;
  std::string message;
};

// Central finite differences against the analytic gradient at `point`.
GradCheckReport grad_check(const DiffFn& f, const std::vector<double>& point, double step);

}  // namespace npr
