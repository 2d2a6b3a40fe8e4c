#include "sislab/train/networks.hpp"

#include <cmath>

namespace sislab {

NetworkBundle make_networks(Index obs_dim, Index act_dim,
                            const std::vector<Index>& hidden_dims, Scalar alpha_init,
                            Rng& rng) {
  NetworkBundle nets;
  nets.policy_spec = MlpSpec{obs_dim, hidden_dims, 2 * act_dim};
  nets.critic_spec = MlpSpec{obs_dim + act_dim, hidden_dims, 1};
  nets.scalar_spec = MlpSpec{obs_dim, hidden_dims, 1};

  nets.policy = init_params(nets.policy_spec, rng);
  nets.q1 = init_params(nets.critic_spec, rng);
  nets.q2 = init_params(nets.critic_spec, rng);
  nets.q1_target = nets.q1;
  nets.q2_target = nets.q2;
  nets.qc = init_params(nets.critic_spec, rng);
  nets.multiplier = init_params(nets.scalar_spec, rng);
  nets.log_alpha = std::log(alpha_init);

  nets.policy_opt = AdamState::zeros(nets.policy.size());
  nets.q1_opt = AdamState::zeros(nets.q1.size());
  nets.q2_opt = AdamState::zeros(nets.q2.size());
  nets.qc_opt = AdamState::zeros(nets.qc.size());
  nets.multiplier_opt = AdamState::zeros(nets.multiplier.size());
  nets.alpha_opt = AdamState::zeros(1);
  return nets;
}

Scalar bounded_multiplier(Scalar y, Scalar lambda_max) {
  const Scalar sp = y > 0.0 ? y + std::log1p(std::exp(-y)) : std::log1p(std::exp(y));
  return std::min(sp, lambda_max);
}

Scalar bounded_multiplier_grad(Scalar y, Scalar lambda_max) {
  const Scalar sp = y > 0.0 ? y + std::log1p(std::exp(-y)) : std::log1p(std::exp(y));
  if (sp >= lambda_max) return 0.0;
  return 1.0 / (1.0 + std::exp(-y)); // sigmoid
}

} // namespace sislab
