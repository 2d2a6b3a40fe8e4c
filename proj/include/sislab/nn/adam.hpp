#pragma once

#include "sislab/types.hpp"

#include <cstdint>

namespace sislab {

struct AdamState {
  Vec m;
  Vec v;
  std::uint64_t t = 0;
  Scalar beta1 = 0.9;
  Scalar beta2 = 0.999;
  Scalar eps = 1e-8;

  static AdamState zeros(Index n) {
    AdamState s;
    s.m = Vec::Zero(n);
    s.v = Vec::Zero(n);
    return s;
  }
};

// Adam step with the norm-clipped effective rate
//   beta_bar = min(base_lr, base_lr / ||D||)
// applied to the bias-corrected preconditioned direction D, so the
// parameter displacement of any single step is bounded by base_lr.
//
// Returns false (and leaves params/state untouched) when the gradient is
// not finite; the caller decides whether to log or abort.
bool adam_clipped_step(Vec& params, const Vec& grads, AdamState& state,
                       Scalar base_lr, Scalar* step_norm = nullptr);

// Scalar-parameter variant (entropy temperature).
bool adam_clipped_step_scalar(Scalar& param, Scalar grad, AdamState& state,
                              Scalar base_lr, Scalar* step_norm = nullptr);

} // namespace sislab
