#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "synth/dsl.hpp"
#include "synth/eval.hpp"
#include "synth/term.hpp"

namespace synth {

// Policy boundary: observation -> raw action (clipped to [-1, 1] at the
// environment). Backed by a program, an MLP, or any callable fixture.
using Oracle = std::function<double(const Obs&)>;

struct PendulumParams {
  double dt = 0.05;
  double gravity = 10.0;
  double mass = 1.0;
  double length = 1.0;
  double max_torque = 2.0;  // action in [-1,1] scales to [-max_torque, max_torque]
  double max_speed = 8.0;
  int episode_steps = 200;
};

// theta = 0 is upright; theta is unwrapped, theta_dot clipped to +-max_speed.
struct PendulumState {
  double theta = 0.0;
  double theta_dot = 0.0;
};

// ((theta + pi) mod 2pi) - pi, in [-pi, pi).
double wrap_angle(double theta);

// Observation (x1, x2, x3) = (cos theta, sin theta, theta_dot).
Obs observe(const PendulumState& s);

// r = -(wrap(theta)^2 + 0.1 theta_dot^2 + 0.001 u^2) for applied torque u;
// zero exactly at the balanced, torque-free fixed point.
double reward(double theta, double theta_dot, double torque);

// Semi-implicit Euler step; action is clipped, scaled to torque, and the
// reward is computed on the pre-step state.
PendulumState step(const PendulumState& s, double action, const PendulumParams& p,
                   double* reward_out = nullptr);

struct TrajStep {
  PendulumState state;  // pre-step state
  Obs obs;
  double action = 0.0;  // clipped action actually applied
  double reward = 0.0;
};

struct Trajectory {
  std::vector<TrajStep> steps;
  double ret = 0.0;  // sum of rewards
};

Trajectory rollout(const Oracle& policy, PendulumState s0, const PendulumParams& p);

// Evaluation-protocol initial state: theta in [pi/2, 3pi/2], theta_dot in [-1, 1].
PendulumState sample_start_state(std::uint64_t seed);

struct PolicyStats {
  double mean_return = 0.0;
  double max_return = 0.0;
  double min_return = 0.0;
  int balanced = 0;  // rollouts holding |wrap(theta)|<0.2, |theta_dot|<1 over the last 50 steps
  int rollouts = 0;
};

PolicyStats evaluate_policy(const Oracle& policy, int rollouts, std::uint64_t seed,
                            const PendulumParams& p = {}, int jobs = 1);

bool trajectory_balanced(const Trajectory& traj);

// The handcrafted swing-up/balance policy, parsed against the pendulum DSL.
TermPtr expert_program(const Dsl& dsl);

// Program-backed oracle.
Oracle make_term_oracle(TermPtr t, const Dsl& dsl);

struct HeatmapCell {
  double theta;
  double theta_dot;
  double action;
};

// Policy actions over a theta x theta_dot grid, theta in [-pi, pi),
// theta_dot in [-max_speed, max_speed]; row-major, theta-major order.
std::vector<HeatmapCell> heatmap(const Oracle& policy, int theta_cells,
                                 int theta_dot_cells, const PendulumParams& p = {});

}  // namespace synth
