#include "sislab/env/point_env.hpp"

#include "sislab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sislab {

namespace {
constexpr Scalar kPi = 3.141592653589793238462643383279;
}

void validate(const EnvConfig& config) {
  if (!(config.dt > 0.0)) throw ConfigError("env: dt must be > 0");
  if (config.max_steps < 1) throw ConfigError("env: max_steps must be >= 1");
  if (!(config.hazard_radius > 0.0)) throw ConfigError("env: hazard_radius must be > 0");
  if (!(config.v_max > 0.0 && config.omega_max > 0.0 && config.a_max > 0.0))
    throw ConfigError("env: speed, rotation and acceleration bounds must be > 0");
  if (config.init_distribution < 1 || config.init_distribution > 3)
    throw ConfigError("env: init_distribution must be 1, 2 or 3 (got " +
                      std::to_string(config.init_distribution) + ")");
  if (!(config.goal_time > 0.0)) throw ConfigError("env: goal_time must be > 0");
}

Scalar wrap_angle(Scalar a) {
  Scalar r = std::fmod(a + kPi, 2.0 * kPi);
  if (r <= 0.0) r += 2.0 * kPi;
  return r - kPi;
}

EnvState reset(const EnvConfig& config, Rng& rng) {
  validate(config);
  EnvState s;
  // Uniform boxes per initial-distribution index; hazard x is fixed at 0 in
  // all three. Draw order is part of the determinism contract.
  switch (config.init_distribution) {
    case 1:
      s.x = 0.0;
      s.y = rng.uniform(-1.5, -1.0);
      s.heading = rng.uniform(-kPi / 4.0, kPi / 4.0);
      s.hazard_x = 0.0;
      s.hazard_y = rng.uniform(0.5, 1.0);
      break;
    case 2:
      s.x = 0.0;
      s.y = rng.uniform(-1.5, -0.5);
      s.heading = rng.uniform(-kPi / 4.0, kPi / 4.0);
      s.hazard_x = 0.0;
      s.hazard_y = rng.uniform(0.5, 1.5);
      break;
    case 3:
      s.x = rng.uniform(-0.5, 0.5);
      s.y = rng.uniform(-1.5, -0.5);
      s.heading = rng.uniform(-kPi / 4.0, kPi / 4.0);
      s.hazard_x = 0.0;
      s.hazard_y = rng.uniform(0.5, 1.0);
      break;
    default:
      throw ConfigError("env: unknown init_distribution");
  }
  s.speed = 0.0;
  s.step = 0;
  return s;
}

EnvState advance_kinematics(const EnvState& state, const Action& action,
                            const EnvConfig& config) {
  const Scalar u_rot = std::clamp(action.u_rot, -1.0, 1.0);
  const Scalar u_acc = std::clamp(action.u_acc, -1.0, 1.0);

  EnvState next = state;
  next.heading = wrap_angle(state.heading + config.omega_max * u_rot * config.dt);
  next.speed = std::clamp(state.speed + config.a_max * u_acc * config.dt, 0.0, config.v_max);
  next.x = state.x + next.speed * std::sin(next.heading) * config.dt;
  next.y = state.y + next.speed * std::cos(next.heading) * config.dt;
  next.step = state.step + 1;
  return next;
}

std::pair<EnvState, StepResult> step(const EnvState& state, const Action& action,
                                     const EnvConfig& config) {
  if (state.step >= config.max_steps)
    throw UsageError("env: stepping a finished episode");
  EnvState next = advance_kinematics(state, action, config);
  StepResult result;
  result.observation = observe(next, config);
  result.reward = reward(next, config);
  result.cost = cost(next, config);
  result.done = next.step >= config.max_steps;
  result.kinematics = distance_features(next);
  return {next, result};
}

KinematicPair distance_features(const EnvState& state) {
  const Scalar rx = state.x - state.hazard_x;
  const Scalar ry = state.y - state.hazard_y;
  const Scalar d = std::sqrt(rx * rx + ry * ry);
  if (d == 0.0) return KinematicPair{0.0, -state.speed};
  const Scalar vx = state.speed * std::sin(state.heading);
  const Scalar vy = state.speed * std::cos(state.heading);
  return KinematicPair{d, (rx * vx + ry * vy) / d};
}

Vec observe(const EnvState& state, const EnvConfig& config) {
  const KinematicPair kp = distance_features(state);
  Vec obs(kObsDim);
  obs(0) = config.goal_x - state.x;
  obs(1) = config.goal_y - state.y;
  obs(2) = std::cos(state.heading);
  obs(3) = std::sin(state.heading);
  obs(4) = state.speed;
  obs(5) = kp.d;
  obs(6) = kp.d_dot;
  return obs;
}

Scalar bearing_to_goal(const EnvState& state, const EnvConfig& config) {
  // Angle of the goal direction in the same +y-referenced convention.
  return std::atan2(config.goal_x - state.x, config.goal_y - state.y);
}

Scalar target_speed(const EnvState& state, const EnvConfig& config) {
  const Scalar dx = config.goal_x - state.x;
  const Scalar dy = config.goal_y - state.y;
  const Scalar dist = std::sqrt(dx * dx + dy * dy);
  return std::min(dist / config.goal_time, config.v_max);
}

Scalar reward(const EnvState& state, const EnvConfig& config) {
  const Scalar heading_err = wrap_angle(state.heading - bearing_to_goal(state, config));
  const Scalar speed_err = state.speed - target_speed(state, config);
  return -config.w_heading * std::abs(heading_err) - config.w_speed * std::abs(speed_err);
}

int cost(const EnvState& state, const EnvConfig& config) {
  return distance_features(state).d < config.hazard_radius ? 1 : 0;
}

Scalar tracking_error(const EnvState& state, const EnvConfig& config) {
  const Scalar heading_err = wrap_angle(state.heading - bearing_to_goal(state, config));
  return std::abs(heading_err) + std::abs(state.speed - target_speed(state, config));
}

} // namespace sislab
