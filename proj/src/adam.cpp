#include "sislab/nn/adam.hpp"

#include "sislab/errors.hpp"

#include <cmath>
#include <string>

namespace sislab {

bool adam_clipped_step(Vec& params, const Vec& grads, AdamState& state,
                       Scalar base_lr, Scalar* step_norm) {
  if (params.size() != grads.size() || params.size() != state.m.size())
    throw ConfigError("adam_clipped_step: size mismatch (params " +
                      std::to_string(params.size()) + ", grads " +
                      std::to_string(grads.size()) + ", state " +
                      std::to_string(state.m.size()) + ")");
  if (!grads.allFinite()) return false;

  state.t += 1;
  state.m = state.beta1 * state.m + (1.0 - state.beta1) * grads;
  state.v = state.beta2 * state.v + (1.0 - state.beta2) * grads.cwiseProduct(grads);

  const Scalar c1 = 1.0 - std::pow(state.beta1, static_cast<Scalar>(state.t));
  const Scalar c2 = 1.0 - std::pow(state.beta2, static_cast<Scalar>(state.t));
  const Vec direction =
      (state.m / c1).cwiseQuotient(((state.v / c2).cwiseSqrt().array() + state.eps).matrix());

  const Scalar norm = direction.norm();
  const Scalar rate = norm > 1.0 ? base_lr / norm : base_lr;
  params.noalias() -= rate * direction;
  if (step_norm) *step_norm = rate * norm;
  return true;
}

bool adam_clipped_step_scalar(Scalar& param, Scalar grad, AdamState& state,
                              Scalar base_lr, Scalar* step_norm) {
  if (state.m.size() != 1)
    throw ConfigError("adam_clipped_step_scalar: state must hold one slot");
  if (!std::isfinite(grad)) return false;

  state.t += 1;
  state.m(0) = state.beta1 * state.m(0) + (1.0 - state.beta1) * grad;
  state.v(0) = state.beta2 * state.v(0) + (1.0 - state.beta2) * grad * grad;
  const Scalar c1 = 1.0 - std::pow(state.beta1, static_cast<Scalar>(state.t));
  const Scalar c2 = 1.0 - std::pow(state.beta2, static_cast<Scalar>(state.t));
  const Scalar d = (state.m(0) / c1) / (std::sqrt(state.v(0) / c2) + state.eps);
  const Scalar norm = std::abs(d);
  const Scalar rate = norm > 1.0 ? base_lr / norm : base_lr;
  param -= rate * d;
  if (step_norm) *step_norm = rate * norm;
  return true;
}

} // namespace sislab
