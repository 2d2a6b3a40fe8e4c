#pragma once

#include "sislab/nn/adam.hpp"
#include "sislab/nn/mlp.hpp"
#include "sislab/rng.hpp"
#include "sislab/types.hpp"

#include <vector>

namespace sislab {

// Policy theta, twin reward critics w1/w2 with target copies, constraint
// critic over (s, a), statewise multiplier xi, and the entropy temperature
// as log(alpha).
struct NetworkBundle {
  MlpSpec policy_spec;   // obs -> [mean; log_std], output 2 * act_dim
  MlpSpec critic_spec;   // obs + act -> scalar
  MlpSpec scalar_spec;   // obs -> scalar (multiplier)

  Vec policy;
  Vec q1, q2;
  Vec q1_target, q2_target;
  Vec qc;          // constraint critic
  Vec multiplier;  // pre-activation network; lambda = min(softplus(out), lambda_max)
  Scalar log_alpha = 0.0;

  AdamState policy_opt, q1_opt, q2_opt, qc_opt, multiplier_opt, alpha_opt;

  Scalar alpha() const { return std::exp(log_alpha); }
};

NetworkBundle make_networks(Index obs_dim, Index act_dim,
                            const std::vector<Index>& hidden_dims, Scalar alpha_init,
                            Rng& rng);

// lambda(s) = min(softplus(y), lambda_max); the bounded activation keeps the
// multiplier inside its compact set, matching the clipped-multiplier lemma.
Scalar bounded_multiplier(Scalar y, Scalar lambda_max);
// d lambda / dy (zero on the clamped branch).
Scalar bounded_multiplier_grad(Scalar y, Scalar lambda_max);

} // namespace sislab
