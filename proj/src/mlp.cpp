#include "npr/mlp.hpp"

#include <cmath>
#include <string>

#include "npr/errors.hpp"

namespace npr {

Mlp Mlp::make(const std::vector<int>& widths, Rng& rng) {
  if (widths.size() < 2) throw ConfigError("mlp needs at least input and output widths");
  Mlp m;
  m.widths = widths;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    const int fan_in = widths[l];
    const int fan_out = widths[l + 1];
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Mat w(fan_out, fan_in);
    for (double& v : w.d) v = rng.uniform(-bound, bound);
    m.weights.push_back(std::move(w));
    m.biases.emplace_back(fan_out, 1);
  }
  return m;
}

Mlp Mlp::zeros(const std::vector<int>& widths) {
  if (widths.size() < 2) throw ConfigError("mlp needs at least input and output widths");
  Mlp m;
  m.widths = widths;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    m.weights.emplace_back(widths[l + 1], widths[l]);
    m.biases.emplace_back(widths[l + 1], 1);
  }
  return m;
}

void Mlp::zero_output_layer() {
  Mat& w = weights.back();
  for (double& v : w.d) v = 0.0;
  Mat& b = biases.back();
  for (double& v : b.d) v = 0.0;
}

MlpOnTape push_mlp(Tape& tape, const Mlp& mlp, bool trainable) {
  MlpOnTape out;
  out.mlp = &mlp;
  for (int l = 0; l < mlp.n_layers(); ++l) {
    out.weight_ids.push_back(tape.leaf(mlp.weights[static_cast<std::size_t>(l)], trainable));
    out.bias_ids.push_back(tape.leaf(mlp.biases[static_cast<std::size_t>(l)], trainable));
  }
  return out;
}

int mlp_forward(Tape& tape, const MlpOnTape& m, int input_node) {
  const Mlp& mlp = *m.mlp;
  if (tape.val(input_node).rows != mlp.input_dim()) {
    throw ShapeError("mlp_forward: input has " + std::to_string(tape.val(input_node).rows) +
                     " rows, expected " + std::to_string(mlp.input_dim()));
  }
  int h = input_node;
  for (int l = 0; l < mlp.n_layers(); ++l) {
    int w = m.weight_ids[static_cast<std::size_t>(l)];
    if (!mlp.masks.empty() && mlp.masks[static_cast<std::size_t>(l)].size() != 0) {
      const int mask = tape.constant(mlp.masks[static_cast<std::size_t>(l)]);
      w = tape.mul(w, mask);
    }
    h = tape.addcol(tape.matmul(w, h), m.bias_ids[static_cast<std::size_t>(l)]);
    const bool last = l + 1 == mlp.n_layers();
    if (!last || mlp.tanh_output) h = tape.tanh_(h);
  }
  return h;
}

Mat mlp_eval(const Mlp& mlp, const Mat& input) {
  Tape tape;
  const MlpOnTape m = push_mlp(tape, mlp, false);
  const int out = mlp_forward(tape, m, tape.constant(input));
  return tape.val(out);
}

}  // namespace npr
