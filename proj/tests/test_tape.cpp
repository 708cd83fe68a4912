#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "npr/errors.hpp"
#include "npr/gradcheck.hpp"
#include "npr/mlp.hpp"
#include "npr/rng.hpp"
#include "npr/tape.hpp"

using namespace npr;

TEST_CASE("zero-weight network maps everything to zero") {
  Mlp mlp = Mlp::zeros({3, 4, 2});
  const Mat out = mlp_eval(mlp, Mat::col({0.7, -1.2, 2.0}));
  REQUIRE(out.rows == 2);
  CHECK(out.d[0] == 0.0);
  CHECK(out.d[1] == 0.0);
}

TEST_CASE("identity linear layer passes the input through") {
  Mlp mlp = Mlp::zeros({2, 2});
  mlp.weights[0] = Mat::identity(2);
  const Mat out = mlp_eval(mlp, Mat::col({1.0, 2.0}));
  CHECK(out.d[0] == 1.0);
  CHECK(out.d[1] == 2.0);
}

TEST_CASE("1-2-1 tanh network matches a hand evaluation") {
  Mlp mlp = Mlp::zeros({1, 2, 1});
  mlp.weights[0](0, 0) = 0.3;
  mlp.weights[0](1, 0) = -0.5;
  mlp.biases[0].d = {0.1, 0.2};
  mlp.weights[1](0, 0) = 0.7;
  mlp.weights[1](0, 1) = -0.4;
  mlp.biases[1].d = {0.05};

  const double x = 0.6;
  // Independent evaluation of the two-layer composition.
  const double h0 = std::tanh(0.3 * x + 0.1);
  const double h1 = std::tanh(-0.5 * x + 0.2);
  const double expected = 0.7 * h0 - 0.4 * h1 + 0.05;

  const Mat out = mlp_eval(mlp, Mat::col({x}));
  CHECK(out.d[0] == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("mlp_forward rejects mismatched input length") {
  Mlp mlp = Mlp::zeros({3, 2});
  CHECK_THROWS_AS(mlp_eval(mlp, Mat::col({1.0, 2.0})), ShapeError);
}

TEST_CASE("backward of w^2 at w=3 gives 6, constants give 0") {
  Tape tape;
  const int w = tape.leaf(Mat(1, 1, 3.0), true);
  const int c = tape.leaf(Mat(1, 1, 5.0), true);
  const int y = tape.mul(w, w);
  tape.backward(y);
  CHECK(tape.grad(w).d[0] == 6.0);
  CHECK(tape.grad(c).size() == 0);  // unreachable from the root
}

TEST_CASE("backward rejects a non-scalar root") {
  Tape tape;
  const int a = tape.leaf(Mat(2, 1, 1.0), true);
  CHECK_THROWS_AS(tape.backward(a), ShapeError);
}

TEST_CASE("tape evaluation is deterministic") {
  Rng rng(3);
  Mlp mlp = Mlp::make({4, 16, 3}, rng);
  Mat in(4, 5);
  for (double& v : in.d) v = rng.normal();
  const Mat a = mlp_eval(mlp, in);
  const Mat b = mlp_eval(mlp, in);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.d[i] == b.d[i]);
}

TEST_CASE("saturation flag raises on clamped log and exp") {
  Tape tape;
  const int tiny = tape.constant(Mat(1, 1, 0.0));
  tape.log_(tiny);
  CHECK(tape.saturated());
  tape.clear_saturation();
  const int huge = tape.constant(Mat(1, 1, 1e308));
  tape.exp_(huge);
  CHECK(tape.saturated());
}

namespace {

// Builds f(params) from a tape expression, for grad_check.
DiffFn tape_fn(const std::function<int(Tape&, const std::vector<int>&)>& build,
               const std::vector<int>& shape_rows, const std::vector<int>& shape_cols) {
  return [=](const std::vector<double>& flat) {
    Tape tape;
    std::vector<int> ids;
    std::size_t off = 0;
    for (std::size_t p = 0; p < shape_rows.size(); ++p) {
      Mat m(shape_rows[p], shape_cols[p]);
      for (double& v : m.d) v = flat[off++];
      ids.push_back(tape.leaf(std::move(m), true));
    }
    const int root = build(tape, ids);
    tape.backward(root);
    ValueGrad vg;
    vg.value = tape.val(root).d[0];
    for (int id : ids) {
      const Mat& g = tape.grad(id);
      if (g.size() == 0) {
        vg.grad.insert(vg.grad.end(), tape.val(id).size(), 0.0);
      } else {
        vg.grad.insert(vg.grad.end(), g.d.begin(), g.d.end());
      }
    }
    return vg;
  };
}

}  // namespace

TEST_CASE("every primitive passes finite differences over random probes") {
  Rng rng(91);
  int probes = 0;
  while (probes < 100) {
    const int which = static_cast<int>(rng.next_u64() % 10);
    std::vector<int> rows, cols;
    std::function<int(Tape&, const std::vector<int>&)> build;
    switch (which) {
      case 0:  // add + mul + sum
        rows = {3, 3};
        cols = {2, 2};
        build = [](Tape& t, const std::vector<int>& p) {
          return t.sum(t.mul(t.add(p[0], p[1]), p[0]));
        };
        break;
      case 1:  // sub + div
        rows = {2, 2};
        cols = {3, 3};
        build = [](Tape& t, const std::vector<int>& p) {
          const int shifted = t.add(t.mul(p[1], p[1]), t.constant(Mat(2, 3, 2.0)));
          return t.sum(t.div(t.sub(p[0], p[1]), shifted));
        };
        break;
      case 2:  // matmul
        rows = {3, 4};
        cols = {4, 2};
        build = [](Tape& t, const std::vector<int>& p) { return t.sum(t.matmul(p[0], p[1])); };
        break;
      case 3:  // addcol
        rows = {3, 3};
        cols = {5, 1};
        build = [](Tape& t, const std::vector<int>& p) {
          return t.sum(t.tanh_(t.addcol(p[0], p[1])));
        };
        break;
      case 4:  // tanh
        rows = {4};
        cols = {3};
        build = [](Tape& t, const std::vector<int>& p) { return t.sum(t.tanh_(p[0])); };
        break;
      case 5:  // exp
        rows = {3};
        cols = {3};
        build = [](Tape& t, const std::vector<int>& p) { return t.sum(t.exp_(p[0])); };
        break;
      case 6:  // log of a positive expression
        rows = {3};
        cols = {3};
        build = [](Tape& t, const std::vector<int>& p) {
          return t.sum(t.log_(t.add(t.mul(p[0], p[0]), t.constant(Mat(3, 3, 0.5)))));
        };
        break;
      case 7:  // softplus
        rows = {4};
        cols = {2};
        build = [](Tape& t, const std::vector<int>& p) { return t.sum(t.softplus(p[0])); };
        break;
      case 8:  // slice + neg
        rows = {5};
        cols = {2};
        build = [](Tape& t, const std::vector<int>& p) {
          return t.sum(t.neg(t.slice_rows(p[0], 1, 4)));
        };
        break;
      default:  // concat
        rows = {2, 3};
        cols = {2, 2};
        build = [](Tape& t, const std::vector<int>& p) {
          const int c = t.concat_rows({p[0], p[1], p[0]});
          return t.sum(t.mul(c, c));
        };
        break;
    }
    std::size_t total = 0;
    for (std::size_t i = 0; i < rows.size(); ++i)
      total += static_cast<std::size_t>(rows[i]) * static_cast<std::size_t>(cols[i]);
    std::vector<double> point(total);
    for (double& v : point) v = rng.normal() * 0.8;
    const auto report = grad_check(tape_fn(build, rows, cols), point, 1e-5);
    REQUIRE(report.ok);
    CHECK(report.max_rel_err < 1e-4);
    ++probes;
  }
}

TEST_CASE("random 2-layer network gradient matches finite differences") {
  Rng rng(17);
  Mlp mlp = Mlp::make({3, 8, 1}, rng);
  Mat input(3, 1);
  for (double& v : input.d) v = rng.normal();

  std::vector<double> point;
  for (const Mat& w : mlp.weights) point.insert(point.end(), w.d.begin(), w.d.end());
  for (const Mat& b : mlp.biases) point.insert(point.end(), b.d.begin(), b.d.end());

  const DiffFn f = [&](const std::vector<double>& flat) {
    Mlp local = mlp;
    std::size_t off = 0;
    for (Mat& w : local.weights)
      for (double& v : w.d) v = flat[off++];
    for (Mat& b : local.biases)
      for (double& v : b.d) v = flat[off++];
    Tape tape;
    const MlpOnTape m = push_mlp(tape, local, true);
    const int out = mlp_forward(tape, m, tape.constant(input));
    const int loss = tape.sum(tape.mul(out, out));
    tape.backward(loss);
    ValueGrad vg;
    vg.value = tape.val(loss).d[0];
    for (int id : m.weight_ids) vg.grad.insert(vg.grad.end(), tape.grad(id).d.begin(), tape.grad(id).d.end());
    for (int id : m.bias_ids) vg.grad.insert(vg.grad.end(), tape.grad(id).d.begin(), tape.grad(id).d.end());
    return vg;
  };

  const auto report = grad_check(f, point, 1e-5);
  REQUIRE(report.ok);
  CHECK(report.max_rel_err < 1e-4);
}

TEST_CASE("grad_check on sum of squares is tight") {
  const DiffFn f = [](const std::vector<double>& p) {
    ValueGrad vg;
    for (double x : p) {
      vg.value += x * x;
      vg.grad.push_back(2.0 * x);
    }
    return vg;
  };
  const auto report = grad_check(f, {0.3, -1.7, 2.2}, 1e-5);
  REQUIRE(report.ok);
  CHECK(report.max_rel_err < 1e-6);
}

TEST_CASE("grad_check on the tractable-toy training loss") {
  // L(t1, t2) = log t1 + log t2 + (t1^2 + t2^2) / (2 t1^2 t2^2),
  // dL/dt1 = 1/t1 - 1/t1^3 and symmetrically for t2.
  const DiffFn f = [](const std::vector<double>& p) {
    const double t1 = p[0], t2 = p[1];
    ValueGrad vg;
    vg.value = std::log(t1) + std::log(t2) + (t1 * t1 + t2 * t2) / (2.0 * t1 * t1 * t2 * t2);
    vg.grad = {1.0 / t1 - 1.0 / (t1 * t1 * t1), 1.0 / t2 - 1.0 / (t2 * t2 * t2)};
    return vg;
  };
  const auto report = grad_check(f, {1.5, 0.8}, 1e-5);
  REQUIRE(report.ok);
  CHECK(report.max_rel_err < 1e-5);
}

TEST_CASE("grad_check flags a sign-flipped gradient") {
  const DiffFn f = [](const std::vector<double>& p) {
    ValueGrad vg;
    vg.value = p[0] * p[0];
    vg.grad = {-2.0 * p[0]};  // deliberately wrong
    return vg;
  };
  const auto report = grad_check(f, {1.3}, 1e-5);
  REQUIRE(report.ok);
  CHECK(report.max_rel_err == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("grad_check reports a non-finite probe") {
  const DiffFn f = [](const std::vector<double>& p) {
    ValueGrad vg;
    vg.value = std::log(p[0]);
    vg.grad = {1.0 / p[0]};
    return vg;
  };
  const auto report = grad_check(f, {1e-6}, 1e-5);  // probe crosses zero
  CHECK(!report.ok);
  CHECK(report.worst_coordinate == 0);
}
