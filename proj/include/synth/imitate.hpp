#pragma once

#include <cstdint>
#include <vector>

#include "synth/dsl.hpp"
#include "synth/eval.hpp"
#include "synth/neighborhood.hpp"
#include "synth/pendulum.hpp"
#include "synth/term.hpp"

namespace synth {

struct ImitationConfig {
  int expert_trajectories = 5;  // N
  int policy_trajectories = 2;  // M per round
  int rounds = 10;              // K

  enum class Aggregate { Full, Initial } aggregate = Aggregate::Full;

  SearchConfig search;  // search.max_iterations caps the per-round descent
  PendulumParams env;
  std::uint64_t seed = 0;
  int eval_rollouts = 100;
};

// `count` full-episode rollouts from the evaluation start-state distribution.
std::vector<Trajectory> collect_trajectories(const Oracle& policy,
                                             const PendulumParams& env, int count,
                                             std::uint64_t seed);

// Pairs every state's observation with the expert's (clipped) action,
// regardless of which policy visited the state.
Dataset label_with_expert(const std::vector<Obs>& states, const Oracle& expert);

std::vector<Obs> trajectory_states(const std::vector<Trajectory>& trajs);

struct ImitationRound {
  int round = 0;
  TermPtr started_from;  // warm-start program (null on round 0 from empty)
  TermPtr policy;
  double loss = 0.0;
  long evaluated = 0;
  std::size_t dataset_size = 0;
  PolicyStats stats;
  SearchTrace search;
};

struct ImitationResult {
  std::vector<ImitationRound> rounds;
};

// Dataset-aggregation imitation: round 0 fits the expert dataset from
// p_init (or from scratch); each later round rolls out the current policy,
// expert-labels the visited states, aggregates, and searches again warm-started
// from the previous program.
ImitationResult run_imitation(const Oracle& expert, const Dsl& dsl,
                              const ImitationConfig& cfg, TermPtr p_init = nullptr);

}  // namespace synth
