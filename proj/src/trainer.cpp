#include "sislab/train/trainer.hpp"

#include "sislab/errors.hpp"
#include "sislab/nn/gaussian_policy.hpp"
#include "sislab/nn/polyak.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sislab {

namespace {

Mat concat_rows(const Mat& top, const Mat& bottom) {
  Mat out(top.rows() + bottom.rows(), top.cols());
  out.topRows(top.rows()) = top;
  out.bottomRows(bottom.rows()) = bottom;
  return out;
}

constexpr std::uint64_t kMaxConsecutiveRejections = 100;

} // namespace

void validate(const TrainerConfig& config) {
  if (!(config.gamma > 0.0 && config.gamma < 1.0))
    throw ConfigError("trainer: gamma must be in (0, 1)");
  if (config.batch_size < 1) throw ConfigError("trainer: batch_size must be >= 1");
  if (!(config.m_pi >= 1 && config.m_pi < config.m_lambda && config.m_lambda < config.m_phi))
    throw ConfigError("trainer: update intervals must satisfy m_pi < m_lambda < m_phi");
  if (!(config.tau > 0.0 && config.tau <= 1.0))
    throw ConfigError("trainer: tau must be in (0, 1]");
  if (config.lambda_max < 0.0) throw ConfigError("trainer: lambda_max must be >= 0");
  if (!(config.alpha_init > 0.0)) throw ConfigError("trainer: alpha_init must be > 0");
  if (config.buffer_capacity < static_cast<std::size_t>(config.batch_size))
    throw ConfigError("trainer: buffer capacity below batch size");
  if (config.updates_per_env_step < 1)
    throw ConfigError("trainer: updates_per_env_step must be >= 1");
  if (config.eval_interval < 1) throw ConfigError("trainer: eval_interval must be >= 1");
  if (config.eval_episodes < 1) throw ConfigError("trainer: eval_episodes must be >= 1");
  if (config.hidden_dims.empty()) throw ConfigError("trainer: hidden_dims must be nonempty");
}

Scalar StepTracker::max_excess() const {
  Scalar m = -1.0;
  for (const GroupStepStats* g : {&policy, &q1, &q2, &qc, &multiplier, &zeta, &alpha})
    if (g->updates > 0) m = std::max(m, g->max_excess);
  return m;
}

Trainer::Trainer(TrainerConfig config, EnvConfig env_config, SafetyIndexParams zeta0,
                 std::uint64_t seed)
    : config_(std::move(config)),
      env_config_(env_config),
      zeta_(project_params(zeta0)),
      zeta_opt_(AdamState::zeros(3)),
      rng_(derive_seed(seed, 0)),
      nets_(make_networks(kObsDim, kActionDim, config_.hidden_dims, config_.alpha_init, rng_)),
      buffer_(config_.buffer_capacity, kObsDim, kActionDim),
      seed_(seed) {
  validate(config_);
  validate(env_config_);
  env_state_ = reset(env_config_, rng_);
}

void Trainer::resolve_schedule_totals(std::uint64_t total_env_steps) {
  const std::uint64_t planned =
      total_env_steps > config_.warmup_steps
          ? (total_env_steps - config_.warmup_steps) *
                static_cast<std::uint64_t>(config_.updates_per_env_step)
          : 1;
  for (LrSchedule* s : {&config_.actor_lr, &config_.critic_lr, &config_.multiplier_lr,
                        &config_.alpha_lr, &config_.sis_lr})
    if (s->total_steps == 0) s->total_steps = std::max<std::uint64_t>(planned, 1);
}

void Trainer::record_step(GroupStepStats& stats, bool accepted, Scalar step_norm,
                          Scalar rate) {
  if (!accepted) {
    ++rejected_updates_;
    ++consecutive_rejections_;
    if (consecutive_rejections_ > kMaxConsecutiveRejections)
      throw NumericalError(
          "trainer: non-finite gradient cascade (" +
          std::to_string(consecutive_rejections_) + " consecutive rejected updates, " +
          std::to_string(grad_steps_) + " gradient steps, zeta sigma=" +
          std::to_string(zeta_.sigma) + " n=" + std::to_string(zeta_.n) +
          " k=" + std::to_string(zeta_.k) + ")");
    return;
  }
  consecutive_rejections_ = 0;
  ++stats.updates;
  stats.max_excess = std::max(stats.max_excess, step_norm - rate);
}

Transition Trainer::collect_step() {
  Action act;
  if (env_steps_ < config_.warmup_steps) {
    act.u_rot = rng_.uniform(-1.0, 1.0);
    act.u_acc = rng_.uniform(-1.0, 1.0);
  } else {
    const Vec obs = observe(env_state_, env_config_);
    const Vec raw = mlp_forward(nets_.policy_spec, nets_.policy, obs);
    const GaussianHeadOutput head = split_head_single(raw);
    Vec noise(kActionDim);
    rng_.fill_normal(noise);
    Vec a;
    Scalar logp;
    sample_squashed_gaussian(head, noise, a, logp);
    act.u_rot = a(0);
    act.u_acc = a(1);
  }

  Transition t;
  t.obs = observe(env_state_, env_config_);
  t.kin = distance_features(env_state_);
  t.action = Vec2(act.u_rot, act.u_acc);
  auto [next_state, result] = step(env_state_, act, env_config_);
  t.reward = result.reward;
  t.next_obs = result.observation;
  t.done = result.done;
  t.kin_next = result.kinematics;
  buffer_.push(t);

  env_state_ = result.done ? reset(env_config_, rng_) : next_state;
  ++env_steps_;
  return t;
}

std::pair<Scalar, Scalar> Trainer::update_reward_critics(const TransitionBatch& batch) {
  const Index b = batch.size();
  const Scalar alpha = nets_.alpha();

  // a' ~ pi(.|s') for the soft Bellman target.
  Mat noise(kActionDim, b);
  rng_.fill_normal(noise);
  const Mat raw = mlp_forward(nets_.policy_spec, nets_.policy, batch.next_obs);
  const GaussianHeadBatch head = split_head(raw);
  const SquashedSample next_a = sample_squashed_gaussian(head, noise);

  const Mat x_next = concat_rows(batch.next_obs, next_a.action);
  const Mat t1 = mlp_forward(nets_.critic_spec, nets_.q1_target, x_next);
  const Mat t2 = mlp_forward(nets_.critic_spec, nets_.q2_target, x_next);

  Vec y(b);
  for (Index j = 0; j < b; ++j)
    y(j) = soft_bellman_target(batch.reward(j), config_.gamma, batch.done(j),
                               std::min(t1(0, j), t2(0, j)), alpha, next_a.log_prob(j));

  const Mat x = concat_rows(batch.obs, batch.action);
  const Scalar inv_b = 1.0 / static_cast<Scalar>(b);
  const Scalar lr = lr_at(config_.critic_lr, grad_steps_);
  Scalar losses[2];
  Vec* params[2] = {&nets_.q1, &nets_.q2};
  AdamState* opts[2] = {&nets_.q1_opt, &nets_.q2_opt};
  GroupStepStats* stats[2] = {&tracker_.q1, &tracker_.q2};
  for (int c = 0; c < 2; ++c) {
    MlpWorkspace ws;
    const Mat qv = mlp_forward(nets_.critic_spec, *params[c], x, &ws);
    const Vec err = qv.row(0).transpose() - y;
    losses[c] = err.squaredNorm() * inv_b;
    const Mat upstream = (2.0 * inv_b) * err.transpose();
    Vec grads;
    mlp_backward(nets_.critic_spec, *params[c], x, ws, upstream, grads);
    Scalar sn = 0.0;
    const bool ok = adam_clipped_step(*params[c], grads, *opts[c], lr, &sn);
    record_step(*stats[c], ok, sn, lr);
  }

  polyak_update(nets_.q1_target, nets_.q1, config_.tau);
  polyak_update(nets_.q2_target, nets_.q2, config_.tau);
  last_loss_q_ = 0.5 * (losses[0] + losses[1]);
  return {losses[0], losses[1]};
}

Scalar Trainer::update_constraint_critic(const TransitionBatch& batch) {
  const Index b = batch.size();
  // Regression target recomputed under the current zeta every call; no
  // bootstrapping, the residual is a one-step quantity.
  Vec z(b);
  for (Index j = 0; j < b; ++j)
    z(j) = delta_phi(zeta_, batch.kin[j], batch.kin_next[j]);

  const Mat x = concat_rows(batch.obs, batch.action);
  MlpWorkspace ws;
  const Mat qv = mlp_forward(nets_.critic_spec, nets_.qc, x, &ws);
  const Vec err = qv.row(0).transpose() - z;
  const Scalar inv_b = 1.0 / static_cast<Scalar>(b);
  const Scalar loss = err.squaredNorm() * inv_b;
  const Mat upstream = (2.0 * inv_b) * err.transpose();
  Vec grads;
  mlp_backward(nets_.critic_spec, nets_.qc, x, ws, upstream, grads);
  const Scalar lr = lr_at(config_.critic_lr, grad_steps_);
  Scalar sn = 0.0;
  const bool ok = adam_clipped_step(nets_.qc, grads, nets_.qc_opt, lr, &sn);
  record_step(tracker_.qc, ok, sn, lr);
  last_loss_qc_ = loss;
  return loss;
}

Vec Trainer::compute_policy_gradient(const TransitionBatch& batch, const Mat& noise,
                                     Scalar lambda_max_override) const {
  return policy_gradient_impl(batch, noise, lambda_max_override, nullptr, nullptr);
}

Vec Trainer::policy_gradient_impl(const TransitionBatch& batch, const Mat& noise,
                                  Scalar lambda_max_override, Scalar* loss_out,
                                  Scalar* lambda_mean_out) const {
  const Index b = batch.size();
  const Scalar alpha = nets_.alpha();
  const Scalar lambda_max =
      lambda_max_override >= 0.0 ? lambda_max_override : config_.lambda_max;
  const Scalar inv_b = 1.0 / static_cast<Scalar>(b);

  MlpWorkspace ws_pi;
  const Mat raw = mlp_forward(nets_.policy_spec, nets_.policy, batch.obs, &ws_pi);
  const GaussianHeadBatch head = split_head(raw);
  const SquashedSample sample = sample_squashed_gaussian(head, noise);

  const Mat x = concat_rows(batch.obs, sample.action);

  MlpWorkspace ws_q1, ws_q2;
  const Mat q1v = mlp_forward(nets_.critic_spec, nets_.q1, x, &ws_q1);
  const Mat q2v = mlp_forward(nets_.critic_spec, nets_.q2, x, &ws_q2);

  // -d(min Q)/da: route the upstream through the column-wise argmin critic.
  Mat up1 = Mat::Zero(1, b), up2 = Mat::Zero(1, b);
  for (Index j = 0; j < b; ++j)
    (q1v(0, j) <= q2v(0, j) ? up1 : up2)(0, j) = -inv_b;
  Vec scratch;
  Mat ig1, ig2;
  mlp_backward(nets_.critic_spec, nets_.q1, x, ws_q1, up1, scratch, &ig1);
  mlp_backward(nets_.critic_spec, nets_.q2, x, ws_q2, up2, scratch, &ig2);
  Mat g_action = ig1.bottomRows(kActionDim) + ig2.bottomRows(kActionDim);

  // + lambda(s) * dQc/da, multiplier treated as a constant.
  MlpWorkspace ws_qc;
  const Mat qcv = mlp_forward(nets_.critic_spec, nets_.qc, x, &ws_qc);
  const Mat y_mult = mlp_forward(nets_.scalar_spec, nets_.multiplier, batch.obs);
  Mat up_qc(1, b);
  Scalar loss = 0.0, lam_acc = 0.0;
  for (Index j = 0; j < b; ++j) {
    const Scalar lam = bounded_multiplier(y_mult(0, j), lambda_max);
    up_qc(0, j) = lam * inv_b;
    loss += alpha * sample.log_prob(j) - std::min(q1v(0, j), q2v(0, j)) + lam * qcv(0, j);
    lam_acc += lam;
  }
  Mat ig_qc;
  mlp_backward(nets_.critic_spec, nets_.qc, x, ws_qc, up_qc, scratch, &ig_qc);
  g_action += ig_qc.bottomRows(kActionDim);

  if (loss_out) *loss_out = loss * inv_b;
  if (lambda_mean_out) *lambda_mean_out = lam_acc * inv_b;

  const Vec alpha_coeff = Vec::Constant(b, alpha * inv_b);
  const Mat head_grad = squashed_head_gradient(head, noise, sample, g_action, alpha_coeff);

  Vec grads;
  mlp_backward(nets_.policy_spec, nets_.policy, batch.obs, ws_pi, head_grad, grads);
  return grads;
}

Scalar Trainer::update_policy(const TransitionBatch& batch) {
  Mat noise(kActionDim, batch.size());
  rng_.fill_normal(noise);

  Scalar loss = 0.0;
  const Vec grads =
      policy_gradient_impl(batch, noise, -1.0, &loss, &last_lambda_mean_);

  const Scalar lr = lr_at(config_.actor_lr, grad_steps_);
  Scalar sn = 0.0;
  const bool ok = adam_clipped_step(nets_.policy, grads, nets_.policy_opt, lr, &sn);
  record_step(tracker_.policy, ok, sn, lr);
  last_loss_pi_ = loss;
  return loss;
}

Scalar Trainer::update_multiplier(const TransitionBatch& batch) {
  const Index b = batch.size();
  const Scalar inv_b = 1.0 / static_cast<Scalar>(b);

  // a resampled from the current policy.
  Mat noise(kActionDim, b);
  rng_.fill_normal(noise);
  const Mat raw = mlp_forward(nets_.policy_spec, nets_.policy, batch.obs);
  const GaussianHeadBatch head = split_head(raw);
  const SquashedSample sample = sample_squashed_gaussian(head, noise);
  const Mat x = concat_rows(batch.obs, sample.action);
  const Mat qcv = mlp_forward(nets_.critic_spec, nets_.qc, x);

  MlpWorkspace ws;
  const Mat y = mlp_forward(nets_.scalar_spec, nets_.multiplier, batch.obs, &ws);

  Scalar objective = 0.0;
  Mat upstream(1, b); // gradient of -J (descent on the negated ascent objective)
  for (Index j = 0; j < b; ++j) {
    const Scalar lam = bounded_multiplier(y(0, j), config_.lambda_max);
    const Scalar slack = qcv(0, j) - config_.constraint_margin;
    objective += lam * slack;
    upstream(0, j) = -slack * bounded_multiplier_grad(y(0, j), config_.lambda_max) * inv_b;
  }
  objective *= inv_b;

  Vec grads;
  mlp_backward(nets_.scalar_spec, nets_.multiplier, batch.obs, ws, upstream, grads);
  const Scalar lr = lr_at(config_.multiplier_lr, grad_steps_);
  Scalar sn = 0.0;
  const bool ok = adam_clipped_step(nets_.multiplier, grads, nets_.multiplier_opt, lr, &sn);
  record_step(tracker_.multiplier, ok, sn, lr);
  last_obj_lambda_ = objective;
  return objective;
}

void Trainer::update_sis(const TransitionBatch& batch) {
  const Index b = batch.size();
  const Mat y = mlp_forward(nets_.scalar_spec, nets_.multiplier, batch.obs);

  Vec3 g = Vec3::Zero();
  Index used = 0;
  for (Index j = 0; j < b; ++j) {
    if (!(batch.kin[j].d > 0.0) || !(batch.kin_next[j].d > 0.0)) {
      ++skipped_sis_samples_;
      continue;
    }
    const Scalar lam = bounded_multiplier(y(0, j), config_.lambda_max);
    g += lam * grad_delta_phi(zeta_, batch.kin[j], batch.kin_next[j]);
    ++used;
  }
  if (used == 0) return;
  g /= static_cast<Scalar>(b);

  Vec zeta_vec(3);
  zeta_vec << zeta_.sigma, zeta_.n, zeta_.k;
  const Scalar lr = lr_at(config_.sis_lr, grad_steps_);
  Scalar sn = 0.0;
  const bool ok = adam_clipped_step(zeta_vec, Vec(g), zeta_opt_, lr, &sn);
  record_step(tracker_.zeta, ok, sn, lr);
  if (ok) {
    zeta_.sigma = zeta_vec(0);
    zeta_.n = zeta_vec(1);
    zeta_.k = zeta_vec(2);
    zeta_ = project_params(zeta_);
  }
}

Scalar Trainer::update_temperature(const TransitionBatch& batch) {
  const Index b = batch.size();
  Mat noise(kActionDim, b);
  rng_.fill_normal(noise);
  const Mat raw = mlp_forward(nets_.policy_spec, nets_.policy, batch.obs);
  const GaussianHeadBatch head = split_head(raw);
  const SquashedSample sample = sample_squashed_gaussian(head, noise);

  // J(log a) = E[-alpha (log pi + H_bar)], log pi detached.
  const Scalar mean_term =
      (sample.log_prob.array() + config_.target_entropy).mean();
  const Scalar grad = -nets_.alpha() * mean_term;
  const Scalar lr = lr_at(config_.alpha_lr, grad_steps_);
  Scalar sn = 0.0;
  const bool ok = adam_clipped_step_scalar(nets_.log_alpha, grad, nets_.alpha_opt, lr, &sn);
  record_step(tracker_.alpha, ok, sn, lr);
  return nets_.alpha();
}

void Trainer::gradient_step() {
  const TransitionBatch batch = buffer_.sample(config_.batch_size, rng_);
  update_reward_critics(batch);
  update_constraint_critic(batch);
  update_temperature(batch);
  const std::uint64_t k = grad_steps_;
  if (k % static_cast<std::uint64_t>(config_.m_pi) == 0) update_policy(batch);
  if (k % static_cast<std::uint64_t>(config_.m_lambda) == 0) update_multiplier(batch);
  if (config_.sis_enabled && k % static_cast<std::uint64_t>(config_.m_phi) == 0)
    update_sis(batch);
  ++grad_steps_;
}

Action Trainer::greedy_action(const Vec& obs) const {
  const Vec raw = mlp_forward(nets_.policy_spec, nets_.policy, obs);
  const GaussianHeadOutput head = split_head_single(raw);
  return Action{std::tanh(head.mean(0)), std::tanh(head.mean(1))};
}

std::function<Action(const Vec&)> Trainer::greedy_policy() const {
  // Snapshot copies so the callable stays valid and immutable.
  const MlpSpec spec = nets_.policy_spec;
  const Vec params = nets_.policy;
  return [spec, params](const Vec& obs) {
    const Vec raw = mlp_forward(spec, params, obs);
    const GaussianHeadOutput head = split_head_single(raw);
    return Action{std::tanh(head.mean(0)), std::tanh(head.mean(1))};
  };
}

Scalar Trainer::lambda_at(const Vec& obs) const {
  const Vec y = mlp_forward(nets_.scalar_spec, nets_.multiplier, obs);
  return bounded_multiplier(y(0), config_.lambda_max);
}

EvalRecord Trainer::evaluate() {
  EvalRecord rec;
  rec.env_step = env_steps_;
  rec.grad_step = grad_steps_;
  rec.sigma = zeta_.sigma;
  rec.n = zeta_.n;
  rec.k = zeta_.k;
  rec.alpha = nets_.alpha();
  rec.lambda_mean = last_lambda_mean_;
  rec.loss_q = last_loss_q_;
  rec.loss_qc = last_loss_qc_;
  rec.loss_pi = last_loss_pi_;
  rec.obj_lambda = last_obj_lambda_;

  std::vector<Scalar> returns;
  Scalar sis_acc = 0.0;
  int sis_count = 0;
  for (int ep = 0; ep < config_.eval_episodes; ++ep) {
    Rng eval_rng(derive_seed(seed_, 0xE5A1000ULL + eval_count_ * 1000 + static_cast<std::uint64_t>(ep)));
    EnvState s = reset(env_config_, eval_rng);
    Scalar ep_return = 0.0, ep_cost = 0.0;
    int ep_violations = 0;
    while (s.step < env_config_.max_steps) {
      const KinematicPair kin = distance_features(s);
      const Action a = greedy_action(observe(s, env_config_));
      auto [next, result] = step(s, a, env_config_);
      ep_return += result.reward;
      ep_cost += result.cost;
      const Scalar dphi = delta_phi(zeta_, kin, result.kinematics);
      if (constraint_violated(dphi)) ++ep_violations;
      sis_acc += std::max(dphi, 0.0);
      ++sis_count;
      s = next;
    }
    returns.push_back(ep_return);
    rec.episode_costs.push_back(ep_cost);
    rec.episode_violations.push_back(ep_violations);
    rec.cost_sum += ep_cost;
  }
  Scalar mean = 0.0;
  for (Scalar r : returns) mean += r;
  mean /= static_cast<Scalar>(returns.size());
  Scalar var = 0.0;
  for (Scalar r : returns) var += (r - mean) * (r - mean);
  var /= static_cast<Scalar>(returns.size());
  rec.return_mean = mean;
  rec.return_std = std::sqrt(var);
  Scalar vmean = 0.0;
  for (int v : rec.episode_violations) vmean += v;
  rec.violations_mean = vmean / static_cast<Scalar>(rec.episode_violations.size());
  rec.sis_batch_loss = sis_count > 0 ? sis_acc / static_cast<Scalar>(sis_count) : 0.0;
  ++eval_count_;
  return rec;
}

TrainResult Trainer::train(std::uint64_t total_env_steps, const EvalCallback& on_eval) {
  resolve_schedule_totals(total_env_steps);
  TrainResult result;
  const std::uint64_t start = env_steps_;
  while (env_steps_ < start + total_env_steps) {
    collect_step();
    const bool learning = env_steps_ > config_.warmup_steps &&
                          buffer_.size() >= static_cast<std::size_t>(config_.batch_size);
    if (learning)
      for (int u = 0; u < config_.updates_per_env_step; ++u) gradient_step();
    if (env_steps_ % config_.eval_interval == 0) {
      EvalRecord rec = evaluate();
      if (on_eval) on_eval(rec);
      result.evals.push_back(std::move(rec));
    }
  }
  result.env_steps = env_steps_;
  result.grad_steps = grad_steps_;
  result.rejected_updates = rejected_updates_;
  result.skipped_sis_samples = skipped_sis_samples_;
  return result;
}

void Trainer::set_counters(std::uint64_t env_steps, std::uint64_t grad_steps) {
  env_steps_ = env_steps;
  grad_steps_ = grad_steps;
}

Vec sac_policy_gradient(const NetworkBundle& nets, const TransitionBatch& batch,
                        const Mat& noise) {
  const Index b = batch.size();
  const Scalar alpha = nets.alpha();
  const Scalar inv_b = 1.0 / static_cast<Scalar>(b);

  MlpWorkspace ws_pi;
  const Mat raw = mlp_forward(nets.policy_spec, nets.policy, batch.obs, &ws_pi);
  const GaussianHeadBatch head = split_head(raw);
  const SquashedSample sample = sample_squashed_gaussian(head, noise);

  const Mat x = concat_rows(batch.obs, sample.action);
  MlpWorkspace ws_q1, ws_q2;
  const Mat q1v = mlp_forward(nets.critic_spec, nets.q1, x, &ws_q1);
  const Mat q2v = mlp_forward(nets.critic_spec, nets.q2, x, &ws_q2);

  Mat up1 = Mat::Zero(1, b), up2 = Mat::Zero(1, b);
  for (Index j = 0; j < b; ++j)
    (q1v(0, j) <= q2v(0, j) ? up1 : up2)(0, j) = -inv_b;
  Vec scratch;
  Mat ig1, ig2;
  mlp_backward(nets.critic_spec, nets.q1, x, ws_q1, up1, scratch, &ig1);
  mlp_backward(nets.critic_spec, nets.q2, x, ws_q2, up2, scratch, &ig2);
  const Mat g_action = ig1.bottomRows(kActionDim) + ig2.bottomRows(kActionDim);

  const Vec alpha_coeff = Vec::Constant(b, alpha * inv_b);
  const Mat head_grad = squashed_head_gradient(head, noise, sample, g_action, alpha_coeff);

  Vec grads;
  mlp_backward(nets.policy_spec, nets.policy, batch.obs, ws_pi, head_grad, grads);
  return grads;
}

std::pair<Scalar, Scalar> lemma2_fixture_check(const Lemma2Fixture& fixture,
                                               const SafetyIndexParams& zeta,
                                               Scalar lambda_max) {
  if (fixture.transitions.size() != fixture.lambdas.size())
    throw UsageError("lemma2 fixture: transitions/lambdas length mismatch");
  if (fixture.transitions.empty())
    throw UsageError("lemma2 fixture: empty batch");

  Scalar lhs = 0.0, positive_sum = 0.0;
  for (std::size_t i = 0; i < fixture.transitions.size(); ++i) {
    const auto& [kp, kp_next] = fixture.transitions[i];
    const Scalar dphi = delta_phi(zeta, kp, kp_next);
    const Scalar lam = fixture.lambdas[i];
    if (dphi > 0.0) {
      if (lam != lambda_max)
        throw UsageError("lemma2 fixture: violating state must carry lambda_max");
    } else if (lam * dphi != 0.0) {
      throw UsageError("lemma2 fixture: complementary slackness violated");
    }
    lhs += lam * dphi;
    positive_sum += std::max(dphi, 0.0);
  }
  return {lhs, lambda_max * positive_sum};
}

} // namespace sislab
