#pragma once

#include <string>
#include <vector>

#include "offrl/plugin.hpp"
#include "offrl/rng.hpp"

namespace offrl {

// A batch of K reward tables sharing the dataset's (S, A) shape.
struct RewardSet {
  std::vector<std::vector<double>> rewards;  // K tables, each [s][a]
  std::vector<std::string> labels;

  int size() const { return static_cast<int>(rewards.size()); }
  void validate(int num_states, int num_actions) const;

  // K tables with i.i.d. uniform [0,1] entries.
  static RewardSet random(int count, int num_states, int num_actions,
                          RngStream rng);
};

RewardSet load_reward_set(const std::string& path);
void save_reward_set(const RewardSet& rewards, const std::string& path);

struct TaskResult {
  Policy policy;
  std::vector<double> suboptimality;  // element-wise V*_1 - V^pi_1 on truth
  double sup_suboptimality = 0.0;
};

// Fits one plug-in model from the exploration data (the (s,a,s') triples
// are the only stochastic input) and plans each task's reward on it. The
// truth MDP is used only to score the returned policies. Output for task k
// is bit-identical to running the single-task pipeline on reward r_k.
std::vector<TaskResult> task_agnostic_learn(const EpisodeDataset& data,
                                            const RewardSet& rewards,
                                            const TabularMdp& truth);

// Plans optimally on (P_hat, r) at query time; a pure function of its
// arguments, so any reward can be handled after the fact.
Policy reward_free_plan(const EmpiricalModel& model,
                        std::span<const double> reward);

}  // namespace offrl
