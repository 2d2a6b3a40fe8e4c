#pragma once

#include "sislab/errors.hpp"
#include "sislab/rng.hpp"
#include "sislab/types.hpp"

#include <vector>

namespace sislab {

// Fully connected net: ELU on hidden layers, linear output. ELU keeps the
// map continuously differentiable, which the smoothness assumption of the
// training analysis needs.
struct MlpSpec {
  Index input_dim = 1;
  std::vector<Index> hidden_dims = {64, 64};
  Index output_dim = 1;
};

// Slice map of one layer inside the flat parameter vector.
struct LayerSlice {
  Index w_offset = 0; // out x in, column-major
  Index b_offset = 0;
  Index in = 0;
  Index out = 0;
};

struct MlpLayout {
  std::vector<LayerSlice> layers;
  Index total = 0;
};

MlpLayout make_layout(const MlpSpec& spec);
Index param_count(const MlpSpec& spec);

// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) for weights and biases.
Vec init_params(const MlpSpec& spec, Rng& rng);

inline Scalar elu(Scalar z) { return z > 0.0 ? z : std::expm1(z); }
inline Scalar elu_grad(Scalar z) { return z > 0.0 ? 1.0 : std::exp(z); }

// Per-layer intermediates kept for the backward pass. `pre` holds the
// pre-activation Z of every layer, `act` the post-activation A (act.back()
// is the network output).
struct MlpWorkspace {
  std::vector<Mat> pre;
  std::vector<Mat> act;
};

// Batch forward: x is input_dim x batch, returns output_dim x batch.
Mat mlp_forward(const MlpSpec& spec, const Vec& params, const Mat& x,
                MlpWorkspace* ws = nullptr);

Vec mlp_forward(const MlpSpec& spec, const Vec& params, const Vec& x);

// Exact reverse-mode gradients of the forward map. `upstream` is
// output_dim x batch; param_grads accumulates the sum over batch columns.
// Requires the workspace filled by the matching forward call.
void mlp_backward(const MlpSpec& spec, const Vec& params, const Mat& x,
                  const MlpWorkspace& ws, const Mat& upstream,
                  Vec& param_grads, Mat* input_grad = nullptr);

// Single-sample convenience matching the workspace-free contract.
void mlp_backward(const MlpSpec& spec, const Vec& params, const Vec& x,
                  const Vec& upstream, Vec& param_grads, Vec* input_grad = nullptr);

} // namespace sislab
