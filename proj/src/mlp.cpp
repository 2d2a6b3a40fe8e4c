#include "sislab/nn/mlp.hpp"

#include <cmath>
#include <string>

namespace sislab {

namespace {

std::vector<Index> dims_of(const MlpSpec& spec) {
  std::vector<Index> dims;
  dims.push_back(spec.input_dim);
  for (Index h : spec.hidden_dims) dims.push_back(h);
  dims.push_back(spec.output_dim);
  return dims;
}

void check_spec(const MlpSpec& spec) {
  if (spec.input_dim < 1 || spec.output_dim < 1)
    throw ConfigError("mlp: input and output dims must be >= 1");
  for (Index h : spec.hidden_dims)
    if (h < 1) throw ConfigError("mlp: hidden dims must be >= 1");
}

using ConstWMap = Eigen::Map<const Mat>;
using ConstBMap = Eigen::Map<const Vec>;
using WMap = Eigen::Map<Mat>;
using BMap = Eigen::Map<Vec>;

} // namespace

MlpLayout make_layout(const MlpSpec& spec) {
  check_spec(spec);
  MlpLayout layout;
  const auto dims = dims_of(spec);
  Index offset = 0;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    LayerSlice s;
    s.in = dims[l];
    s.out = dims[l + 1];
    s.w_offset = offset;
    offset += s.in * s.out;
    s.b_offset = offset;
    offset += s.out;
    layout.layers.push_back(s);
  }
  layout.total = offset;
  return layout;
}

Index param_count(const MlpSpec& spec) { return make_layout(spec).total; }

Vec init_params(const MlpSpec& spec, Rng& rng) {
  const MlpLayout layout = make_layout(spec);
  Vec params(layout.total);
  for (const LayerSlice& s : layout.layers) {
    const Scalar bound = 1.0 / std::sqrt(static_cast<Scalar>(s.in));
    for (Index i = 0; i < s.in * s.out; ++i)
      params(s.w_offset + i) = rng.uniform(-bound, bound);
    for (Index i = 0; i < s.out; ++i)
      params(s.b_offset + i) = rng.uniform(-bound, bound);
  }
  return params;
}

Mat mlp_forward(const MlpSpec& spec, const Vec& params, const Mat& x,
                MlpWorkspace* ws) {
  const MlpLayout layout = make_layout(spec);
  if (params.size() != layout.total)
    throw ConfigError("mlp_forward: parameter vector has length " +
                      std::to_string(params.size()) + ", spec needs " +
                      std::to_string(layout.total));
  if (x.rows() != spec.input_dim)
    throw ConfigError("mlp_forward: input has " + std::to_string(x.rows()) +
                      " rows, spec expects " + std::to_string(spec.input_dim));

  const std::size_t n_layers = layout.layers.size();
  if (ws) {
    ws->pre.resize(n_layers);
    ws->act.resize(n_layers);
    const Mat* below = &x;
    for (std::size_t l = 0; l < n_layers; ++l) {
      const LayerSlice& s = layout.layers[l];
      ConstWMap w(params.data() + s.w_offset, s.out, s.in);
      ConstBMap b(params.data() + s.b_offset, s.out);
      Mat& z = ws->pre[l];
      z.noalias() = w * (*below);
      z.colwise() += b;
      if (l + 1 < n_layers)
        ws->act[l] = z.unaryExpr([](Scalar v) { return elu(v); });
      else
        ws->act[l] = z;
      below = &ws->act[l];
    }
    return ws->act.back();
  }

  Mat a = x;
  for (std::size_t l = 0; l < n_layers; ++l) {
    const LayerSlice& s = layout.layers[l];
    ConstWMap w(params.data() + s.w_offset, s.out, s.in);
    ConstBMap b(params.data() + s.b_offset, s.out);
    Mat z = (w * a).colwise() + b;
    if (l + 1 < n_layers)
      a = z.unaryExpr([](Scalar v) { return elu(v); });
    else
      a = std::move(z);
  }
  return a;
}

Vec mlp_forward(const MlpSpec& spec, const Vec& params, const Vec& x) {
  return mlp_forward(spec, params, Mat(x), nullptr).col(0);
}

void mlp_backward(const MlpSpec& spec, const Vec& params, const Mat& x,
                  const MlpWorkspace& ws, const Mat& upstream,
                  Vec& param_grads, Mat* input_grad) {
  const MlpLayout layout = make_layout(spec);
  const std::size_t n_layers = layout.layers.size();
  if (upstream.rows() != spec.output_dim)
    throw ConfigError("mlp_backward: upstream has " +
                      std::to_string(upstream.rows()) + " rows, spec outputs " +
                      std::to_string(spec.output_dim));
  if (ws.act.size() != n_layers)
    throw UsageError("mlp_backward: workspace does not match spec");

  if (param_grads.size() != layout.total) param_grads.resize(layout.total);
  param_grads.setZero();

  Mat delta = upstream; // gradient w.r.t. layer pre-activation, top down
  for (std::size_t li = n_layers; li-- > 0;) {
    const LayerSlice& s = layout.layers[li];
    const bool hidden = li + 1 < n_layers;
    if (hidden)
      delta.array() *= ws.pre[li].unaryExpr([](Scalar v) { return elu_grad(v); }).array();

    const Mat& below = li == 0 ? x : ws.act[li - 1];
    WMap dw(param_grads.data() + s.w_offset, s.out, s.in);
    BMap db(param_grads.data() + s.b_offset, s.out);
    dw.noalias() = delta * below.transpose();
    db = delta.rowwise().sum();

    if (li > 0 || input_grad) {
      ConstWMap w(params.data() + s.w_offset, s.out, s.in);
      Mat next = w.transpose() * delta;
      if (li == 0) {
        *input_grad = std::move(next);
        break;
      }
      delta = std::move(next);
    }
  }
}

void mlp_backward(const MlpSpec& spec, const Vec& params, const Vec& x,
                  const Vec& upstream, Vec& param_grads, Vec* input_grad) {
  MlpWorkspace ws;
  mlp_forward(spec, params, Mat(x), &ws);
  Mat ig;
  mlp_backward(spec, params, Mat(x), ws, Mat(upstream), param_grads,
               input_grad ? &ig : nullptr);
  if (input_grad) *input_grad = ig.col(0);
}

} // namespace sislab
