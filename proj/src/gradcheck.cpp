#include "npr/gradcheck.hpp"

#include <cmath>

namespace npr {

GradCheckReport grad_check(const DiffFn& f, const std::vector<double>& point, double step) {
  GradCheckReport report;
  const ValueGrad at_point = f(point);
  if (!std::isfinite(at_point.value)) {
    report.message = "non-finite value at the evaluation point";
    return report;
  }
  if (at_point.grad.size() != point.size()) {
    report.message = "gradient size does not match the parameter vector";
    return report;
  }

  std::vector<double> probe = point;
  for (std::size_t i = 0; i < point.size(); ++i) {
    probe[i] = point[i] + step;
    const double up = f(probe).value;
    probe[i] = point[i] - step;
    const double down = f(probe).value;
    probe[i] = point[i];
    if (!std::isfinite(up) || !std::isfinite(down)) {
      report.ok = false;
      report.worst_coordinate = static_cast<int>(i);
      report.message = "non-finite probe at coordinate " + std::to_string(i);
      return report;
    }
    const double central = (up - down) / (2.0 * step);
    const double rel =
        std::fabs(at_point.grad[i] - central) / (std::fabs(central) + 1e-12);
    if (rel > report.max_rel_err) {
      report.max_rel_err = rel;
      report.worst_coordinate = static_cast<int>(i);
    }
  }
  report.ok = true;
  return report;
}

}  // namespace npr
