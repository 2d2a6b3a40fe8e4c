#pragma once

#include "sislab/index/safety_index.hpp"
#include "sislab/rng.hpp"
#include "sislab/types.hpp"

namespace sislab {

inline constexpr Index kObsDim = 7;
inline constexpr Index kActionDim = 2;

struct EnvConfig {
  Scalar goal_x = 0.0;
  Scalar goal_y = 5.0;
  Scalar hazard_radius = 0.5; // d_min
  Scalar dt = 0.1;
  int max_steps = 120;
  Scalar v_max = 2.0;
  Scalar omega_max = 1.5707963267948966; // pi/2 rad/s
  Scalar a_max = 1.0;
  int init_distribution = 1; // 1, 2 or 3
  Scalar w_heading = 1.0;
  Scalar w_speed = 1.0;
  // Time (s) the target-speed profile allows for reaching the goal.
  Scalar goal_time = 5.0;
};

void validate(const EnvConfig& config);

// Heading is measured from the +y axis (the goal direction at the start
// boxes), wrapped to (-pi, pi]. Motion: x += v*sin(h)*dt, y += v*cos(h)*dt.
struct EnvState {
  Scalar x = 0.0;
  Scalar y = 0.0;
  Scalar heading = 0.0;
  Scalar speed = 0.0;
  Scalar hazard_x = 0.0;
  Scalar hazard_y = 0.0;
  int step = 0;
};

// Normalized inputs in [-1, 1]; scaled by omega_max / a_max inside step().
struct Action {
  Scalar u_rot = 0.0;
  Scalar u_acc = 0.0;
};

struct StepResult {
  Vec observation; // of the post-step state
  Scalar reward = 0.0;
  int cost = 0; // 1 iff d < d_min
  bool done = false;
  KinematicPair kinematics; // of the post-step state
};

Scalar wrap_angle(Scalar a); // to (-pi, pi]

EnvState reset(const EnvConfig& config, Rng& rng);

// Pure unicycle Euler update; shared by the environment and the
// feasibility oracle so both simulate identical dynamics.
EnvState advance_kinematics(const EnvState& state, const Action& action,
                            const EnvConfig& config);

std::pair<EnvState, StepResult> step(const EnvState& state, const Action& action,
                                     const EnvConfig& config);

// d = |agent - hazard|, d_dot = radial velocity component. At exact overlap
// returns (0, -speed), the worst case.
KinematicPair distance_features(const EnvState& state);

// Observation: [goal_dx, goal_dy, cos(heading), sin(heading), speed, d, d_dot]
Vec observe(const EnvState& state, const EnvConfig& config);

Scalar reward(const EnvState& state, const EnvConfig& config);
int cost(const EnvState& state, const EnvConfig& config);

Scalar bearing_to_goal(const EnvState& state, const EnvConfig& config);
Scalar target_speed(const EnvState& state, const EnvConfig& config);

// |heading error| + |speed - v_target|, the two tracked quantities of the
// reward with unit weights.
Scalar tracking_error(const EnvState& state, const EnvConfig& config);

} // namespace sislab
