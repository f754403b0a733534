#include "synth/pendulum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "synth/parallel.hpp"
#include "synth/rng.hpp"

namespace synth {

namespace {

constexpr double kPi = 3.14159265358979323846;

double clip(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

}  // namespace

double wrap_angle(double theta) {
  double w = std::fmod(theta + kPi, 2.0 * kPi);
  if (w < 0) w += 2.0 * kPi;
  return w - kPi;
}

Obs observe(const PendulumState& s) {
  return Obs{std::cos(s.theta), std::sin(s.theta), s.theta_dot};
}

double reward(double theta, double theta_dot, double torque) {
  double a = wrap_angle(theta);
  return -(a * a + 0.1 * theta_dot * theta_dot + 0.001 * torque * torque);
}

PendulumState step(const PendulumState& s, double action, const PendulumParams& p,
                   double* reward_out) {
  double u = p.max_torque * clip(action, -1.0, 1.0);
  if (reward_out) *reward_out = reward(s.theta, s.theta_dot, u);
  double ml2 = p.mass * p.length * p.length;
  double accel = 1.5 * p.gravity / p.length * std::sin(s.theta) + 3.0 / ml2 * u;
  PendulumState out;
  out.theta_dot = clip(s.theta_dot + accel * p.dt, -p.max_speed, p.max_speed);
  out.theta = s.theta + out.theta_dot * p.dt;
  return out;
}

Trajectory rollout(const Oracle& policy, PendulumState s0, const PendulumParams& p) {
  Trajectory traj;
  traj.steps.reserve(p.episode_steps);
  PendulumState s = s0;
  for (int t = 0; t < p.episode_steps; ++t) {
    TrajStep rec;
    rec.state = s;
    rec.obs = observe(s);
    rec.action = clip(policy(rec.obs), -1.0, 1.0);
    s = step(s, rec.action, p, &rec.reward);
    traj.ret += rec.reward;
    traj.steps.push_back(std::move(rec));
  }
  return traj;
}

PendulumState sample_start_state(std::uint64_t seed) {
  Rng rng(seed);
  PendulumState s;
  s.theta = rng.uniform(kPi / 2.0, 3.0 * kPi / 2.0);
  s.theta_dot = rng.uniform(-1.0, 1.0);
  return s;
}

bool trajectory_balanced(const Trajectory& traj) {
  if (traj.steps.size() < 50) return false;
  for (std::size_t i = traj.steps.size() - 50; i < traj.steps.size(); ++i) {
    const PendulumState& s = traj.steps[i].state;
    if (std::abs(wrap_angle(s.theta)) >= 0.2 || std::abs(s.theta_dot) >= 1.0) {
      return false;
    }
  }
  return true;
}

PolicyStats evaluate_policy(const Oracle& policy, int rollouts, std::uint64_t seed,
                            const PendulumParams& p, int jobs) {
  std::vector<double> returns(rollouts);
  std::vector<char> balanced(rollouts);
  parallel_for(rollouts, jobs, [&](std::size_t i) {
    PendulumState s0 = sample_start_state(derive_seed(seed, 0x65766c70ULL, i));
    Trajectory traj = rollout(policy, s0, p);
    returns[i] = traj.ret;
    balanced[i] = trajectory_balanced(traj) ? 1 : 0;
  });
  PolicyStats stats;
  stats.rollouts = rollouts;
  if (rollouts == 0) return stats;
  stats.max_return = returns[0];
  stats.min_return = returns[0];
  double sum = 0.0;
  for (int i = 0; i < rollouts; ++i) {
    sum += returns[i];
    stats.max_return = std::max(stats.max_return, returns[i]);
    stats.min_return = std::min(stats.min_return, returns[i]);
    stats.balanced += balanced[i];
  }
  stats.mean_return = sum / rollouts;
  return stats;
}

TermPtr expert_program(const Dsl& dsl) {
  static const char* kText =
      "((if ((gt x1) 0.6)) ((sub ((mul x2) -6)) x3)) "
      "(sign ((mul ((sub ((add ((mul 0.5) (sqr x3))) ((mul ten) ((sub x1) 1)))) 8)) "
      "((mul -1) x3)))";
  return parse_program(kText, dsl, 3);
}

Oracle make_term_oracle(TermPtr t, const Dsl& dsl) {
  return [t = std::move(t), &dsl](const Obs& obs) -> double {
    auto v = evaluate(t, dsl, obs);
    if (!v || v->kind != Value::Kind::F) {
      throw std::runtime_error("policy program did not produce a finite Float");
    }
    return v->f;
  };
}

std::vector<HeatmapCell> heatmap(const Oracle& policy, int theta_cells,
                                 int theta_dot_cells, const PendulumParams& p) {
  if (theta_cells < 1 || theta_dot_cells < 1) {
    throw std::invalid_argument("heatmap: grid must be at least 1x1");
  }
  std::vector<HeatmapCell> cells;
  cells.reserve(static_cast<std::size_t>(theta_cells) * theta_dot_cells);
  for (int i = 0; i < theta_cells; ++i) {
    double theta = -kPi + 2.0 * kPi * i / theta_cells;  // [-pi, pi)
    for (int j = 0; j < theta_dot_cells; ++j) {
      double theta_dot =
          theta_dot_cells == 1
              ? 0.0
              : -p.max_speed + 2.0 * p.max_speed * j / (theta_dot_cells - 1);
      PendulumState s{theta, theta_dot};
      double action = clip(policy(observe(s)), -1.0, 1.0);
      cells.push_back(HeatmapCell{theta, theta_dot, action});
    }
  }
  return cells;
}

}  // namespace synth
