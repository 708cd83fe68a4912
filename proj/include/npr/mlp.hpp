#pragma once

#include <vector>

#include "npr/mat.hpp"
#include "npr/rng.hpp"
#include "npr/tape.hpp"

namespace npr {

// Fully connected network with tanh hidden activations and a linear output
// layer. Layers may carry fixed binary masks on their weights (used for the
// autoregressive conditioners in the density module).
struct Mlp {
  std::vector<int> widths;  // e.g. {2, 50, 50, 4}
  std::vector<Mat> weights;  // weights[l]: widths[l+1] x widths[l]
  std::vector<Mat> biases;   // biases[l]: widths[l+1] x 1
  std::vector<Mat> masks;    // empty, or one mask per layer (empty Mat = dense)
  bool tanh_output = false;

  int n_layers() const { return static_cast<int>(weights.size()); }
  int input_dim() const { return widths.front(); }
  int output_dim() const { return widths.back(); }

  // Xavier-uniform initialisation.
  static Mlp make(const std::vector<int>& widths, Rng& rng);
  static Mlp zeros(const std::vector<int>& widths);

  // Zero the last layer so the network starts as the constant-zero map.
  void zero_output_layer();
};

// Parameter node ids of an Mlp pushed onto a tape.
struct MlpOnTape {
  const Mlp* mlp = nullptr;
  std::vector<int> weight_ids;
  std::vector<int> bias_ids;
};

MlpOnTape push_mlp(Tape& tape, const Mlp& mlp, bool trainable);

// Forward pass; input is (input_dim x batch). Throws ShapeError on a
// dimension mismatch.
int mlp_forward(Tape& tape, const MlpOnTape& m, int input_node);

// Convenience: forward pass on a scratch tape without gradients.
Mat mlp_eval(const Mlp& mlp, const Mat& input);

}  // namespace npr
