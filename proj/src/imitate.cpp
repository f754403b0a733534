#include "synth/imitate.hpp"

#include <algorithm>
#include <stdexcept>

#include "synth/rng.hpp"

namespace synth {

namespace {

double clip_unit(double v) { return std::min(std::max(v, -1.0), 1.0); }

}  // namespace

std::vector<Trajectory> collect_trajectories(const Oracle& policy,
                                             const PendulumParams& env, int count,
                                             std::uint64_t seed) {
  std::vector<Trajectory> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    PendulumState s0 = sample_start_state(derive_seed(seed, 0x726f6c6cULL, i));
    out.push_back(rollout(policy, s0, env));
  }
  return out;
}

std::vector<Obs> trajectory_states(const std::vector<Trajectory>& trajs) {
  std::vector<Obs> states;
  for (const auto& traj : trajs) {
    for (const auto& step : traj.steps) states.push_back(step.obs);
  }
  return states;
}

Dataset label_with_expert(const std::vector<Obs>& states, const Oracle& expert) {
  Dataset data;
  data.rows.reserve(states.size());
  for (const Obs& obs : states) {
    data.rows.push_back(Dataset::Row{obs, clip_unit(expert(obs))});
  }
  return data;
}

ImitationResult run_imitation(const Oracle& expert, const Dsl& dsl,
                              const ImitationConfig& cfg, TermPtr p_init) {
  ImitationResult result;

  auto expert_trajs = collect_trajectories(expert, cfg.env, cfg.expert_trajectories,
                                           derive_seed(cfg.seed, 0, 0));
  Dataset initial_data = label_with_expert(trajectory_states(expert_trajs), expert);
  Dataset data = initial_data;

  TermPtr current = p_init;
  for (int round = 0; round <= cfg.rounds; ++round) {
    if (round > 0) {
      // DAgger correction: visit states under the learned policy, label with
      // the expert, and aggregate.
      Oracle learner = make_term_oracle(current, dsl);
      auto policy_trajs = collect_trajectories(
          learner, cfg.env, cfg.policy_trajectories, derive_seed(cfg.seed, round, 1));
      Dataset corrections = label_with_expert(trajectory_states(policy_trajs), expert);
      if (cfg.aggregate == ImitationConfig::Aggregate::Initial) {
        data = initial_data;
      }
      data.rows.insert(data.rows.end(), corrections.rows.begin(),
                       corrections.rows.end());
    }

    ImitationRound rec;
    rec.round = round;
    rec.started_from = current;
    rec.dataset_size = data.size();
    rec.search = iterate_search(dsl, current, data, cfg.search);
    rec.policy = rec.search.back().best;
    if (!rec.policy) {
      throw std::runtime_error(
          "imitation: search produced no program (depth bound admits no term of "
          "the target type)");
    }
    rec.loss = rec.search.back().loss;
    rec.evaluated = rec.search.total_evaluated();
    rec.stats = evaluate_policy(make_term_oracle(rec.policy, dsl), cfg.eval_rollouts,
                                derive_seed(cfg.seed, round, 2), cfg.env,
                                cfg.search.jobs);
    current = rec.policy;
    result.rounds.push_back(std::move(rec));
  }
  return result;
}

}  // namespace synth
