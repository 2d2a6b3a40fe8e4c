#pragma once

#include "sislab/env/point_env.hpp"
#include "sislab/index/safety_index.hpp"
#include "sislab/nn/schedule.hpp"
#include "sislab/train/networks.hpp"
#include "sislab/train/replay_buffer.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sislab {

// Default anneal horizon (gradient steps) for the learning-rate ramps.
inline constexpr std::uint64_t kAnnealHorizon = 3000000;

struct TrainerConfig {
  Scalar gamma = 0.99;
  Index batch_size = 128;
  int m_pi = 3;      // policy update interval (gradient steps)
  int m_lambda = 12; // multiplier ascent interval
  int m_phi = 24;    // certificate (SIS) interval
  Scalar tau = 0.005;
  Scalar lambda_max = 100.0;
  Scalar constraint_margin = 0.0; // d_c in the multiplier objective
  Scalar target_entropy = -2.0;
  Scalar alpha_init = 0.2;
  std::size_t buffer_capacity = 100000;
  std::uint64_t warmup_steps = 1000; // uniform-random action steps
  // Gradient steps per environment step; the reference setup computed
  // gradients on several parallel learners per sampled step.
  int updates_per_env_step = 6;
  std::uint64_t eval_interval = 2000; // env steps between evaluations
  int eval_episodes = 10;
  std::vector<Index> hidden_dims = {64, 64};
  bool sis_enabled = true;
  // Linear anneal endpoints over a fixed reference horizon of gradient
  // steps; shorter runs sample the head of the ramp. total_steps == 0
  // means "anneal over the whole run" and is resolved when train() knows
  // the step budget.
  LrSchedule actor_lr{3e-5, 1e-6, kAnnealHorizon};
  LrSchedule critic_lr{8e-5, 1e-6, kAnnealHorizon};
  LrSchedule multiplier_lr{5e-6, 5e-6, kAnnealHorizon};
  LrSchedule alpha_lr{8e-5, 8e-6, kAnnealHorizon};
  LrSchedule sis_lr{8e-6, 1e-6, kAnnealHorizon};
};

void validate(const TrainerConfig& config);

// y = r + gamma * (1 - done) * (min target Q - alpha * log pi(a'|s')).
inline Scalar soft_bellman_target(Scalar reward, Scalar gamma, Scalar done,
                                  Scalar target_min, Scalar alpha, Scalar logp_next) {
  return reward + gamma * (1.0 - done) * (target_min - alpha * logp_next);
}

// Max observed per-update displacement excess over the scheduled rate, per
// parameter group. The clipped-step contract requires every excess <= 0 up
// to float rounding.
struct GroupStepStats {
  std::uint64_t updates = 0;
  Scalar max_excess = -1.0;
};

struct StepTracker {
  GroupStepStats policy, q1, q2, qc, multiplier, zeta, alpha;
  Scalar max_excess() const;
};

struct EvalRecord {
  std::uint64_t env_step = 0;
  std::uint64_t grad_step = 0;
  Scalar return_mean = 0.0;
  Scalar return_std = 0.0;
  Scalar cost_sum = 0.0;        // summed over the evaluation episodes
  Scalar violations_mean = 0.0; // mean per-episode count of delta_phi >= 0
  Scalar sigma = 0.0, n = 0.0, k = 0.0;
  Scalar lambda_mean = 0.0;
  Scalar alpha = 0.0;
  Scalar loss_q = 0.0, loss_qc = 0.0, loss_pi = 0.0, obj_lambda = 0.0;
  Scalar sis_batch_loss = 0.0;
  std::vector<Scalar> episode_costs;
  std::vector<int> episode_violations;
};

struct TrainResult {
  std::vector<EvalRecord> evals;
  std::uint64_t env_steps = 0;
  std::uint64_t grad_steps = 0;
  std::uint64_t rejected_updates = 0;
  std::uint64_t skipped_sis_samples = 0;
};

// FAC-SIS: soft actor-critic backbone, a constraint critic regressed onto
// the one-step certificate residual, a statewise multiplier network, and
// three-timescale delayed updates of policy / multiplier / certificate.
class Trainer {
 public:
  Trainer(TrainerConfig config, EnvConfig env_config, SafetyIndexParams zeta0,
          std::uint64_t seed);

  using EvalCallback = std::function<void(const EvalRecord&)>;
  TrainResult train(std::uint64_t total_env_steps, const EvalCallback& on_eval = {});

  // One environment interaction: act (uniform during warmup, sampled from
  // the policy after), step, push the enriched transition.
  Transition collect_step();

  // Update primitives, exposed for tests. Each consumes trainer RNG noise.
  std::pair<Scalar, Scalar> update_reward_critics(const TransitionBatch& batch);
  Scalar update_constraint_critic(const TransitionBatch& batch);
  Scalar update_policy(const TransitionBatch& batch);
  Scalar update_multiplier(const TransitionBatch& batch);
  void update_sis(const TransitionBatch& batch);
  Scalar update_temperature(const TransitionBatch& batch);

  // Runs the delayed-update pattern once (critics + temperature always;
  // policy / multiplier / SIS on their intervals).
  void gradient_step();

  // Full policy-objective gradient on a frozen batch and noise, without
  // applying it. lambda_max_override < 0 keeps the configured bound.
  Vec compute_policy_gradient(const TransitionBatch& batch, const Mat& noise,
                              Scalar lambda_max_override = -1.0) const;

  EvalRecord evaluate();

  Action greedy_action(const Vec& obs) const;
  std::function<Action(const Vec&)> greedy_policy() const; // snapshot

  // Multiplier network output for a single observation.
  Scalar lambda_at(const Vec& obs) const;

  const NetworkBundle& networks() const { return nets_; }
  NetworkBundle& networks() { return nets_; }
  const SafetyIndexParams& zeta() const { return zeta_; }
  void set_zeta(const SafetyIndexParams& z) { zeta_ = project_params(z); }
  const AdamState& zeta_opt() const { return zeta_opt_; }
  AdamState& zeta_opt() { return zeta_opt_; }
  const ReplayBuffer& buffer() const { return buffer_; }
  ReplayBuffer& buffer() { return buffer_; }
  const StepTracker& step_tracker() const { return tracker_; }
  const TrainerConfig& config() const { return config_; }
  const EnvConfig& env_config() const { return env_config_; }
  std::uint64_t env_steps() const { return env_steps_; }
  std::uint64_t grad_steps() const { return grad_steps_; }
  void set_counters(std::uint64_t env_steps, std::uint64_t grad_steps);
  Rng& rng() { return rng_; }

 private:
  void resolve_schedule_totals(std::uint64_t total_env_steps);
  void record_step(GroupStepStats& stats, bool accepted, Scalar step_norm, Scalar rate);
  Vec policy_gradient_impl(const TransitionBatch& batch, const Mat& noise,
                           Scalar lambda_max_override, Scalar* loss_out,
                           Scalar* lambda_mean_out) const;

  TrainerConfig config_;
  EnvConfig env_config_;
  SafetyIndexParams zeta_;
  AdamState zeta_opt_;
  Rng rng_;
  NetworkBundle nets_;
  ReplayBuffer buffer_;
  EnvState env_state_;
  StepTracker tracker_;
  std::uint64_t seed_ = 0;
  std::uint64_t env_steps_ = 0;
  std::uint64_t grad_steps_ = 0;
  std::uint64_t eval_count_ = 0;
  std::uint64_t rejected_updates_ = 0;
  std::uint64_t consecutive_rejections_ = 0;
  std::uint64_t skipped_sis_samples_ = 0;
  Scalar last_loss_q_ = 0.0, last_loss_qc_ = 0.0, last_loss_pi_ = 0.0;
  Scalar last_obj_lambda_ = 0.0, last_lambda_mean_ = 0.0;
};

// Unconstrained soft-policy gradient on the same batch and noise; reference
// route for the reduction check (no multiplier or constraint critic touched).
Vec sac_policy_gradient(const NetworkBundle& nets, const TransitionBatch& batch,
                        const Mat& noise);

// Complementary-slackness fixture for the clipped-multiplier identity:
// sum_i lambda_i * dphi_i must equal lambda_max * sum_i [dphi_i]^+ when
// lambda_i = lambda_max exactly on violations and lambda_i * dphi_i = 0
// elsewhere.
struct Lemma2Fixture {
  std::vector<std::pair<KinematicPair, KinematicPair>> transitions;
  std::vector<Scalar> lambdas;
};

std::pair<Scalar, Scalar> lemma2_fixture_check(const Lemma2Fixture& fixture,
                                               const SafetyIndexParams& zeta,
                                               Scalar lambda_max);

} // namespace sislab
