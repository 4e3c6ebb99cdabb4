#include "offrl/multitask.hpp"

#include <algorithm>

#include <json.hpp>

#include "offrl/io.hpp"
#include "offrl/uniform_ope.hpp"

namespace offrl {

using nlohmann::json;

void RewardSet::validate(int num_states, int num_actions) const {
  if (rewards.empty()) throw ValidationError("reward set: K must be >= 1");
  const std::size_t expected =
      static_cast<std::size_t>(num_states) * num_actions;
  for (std::size_t k = 0; k < rewards.size(); ++k) {
    if (rewards[k].size() != expected)
      throw ValidationError("reward " + std::to_string(k) + ": expected " +
                            std::to_string(expected) + " entries");
    for (const double rv : rewards[k])
      if (rv < 0.0 || rv > 1.0)
        throw ValidationError("reward " + std::to_string(k) + ": entry " +
                              std::to_string(rv) + " outside [0,1]");
  }
}

RewardSet RewardSet::random(int count, int num_states, int num_actions,
                            RngStream rng) {
  RewardSet out;
  out.rewards.resize(count);
  out.labels.resize(count);
  for (int k = 0; k < count; ++k) {
    Xoshiro256 gen(rng.at(rng.stream_index + static_cast<std::uint64_t>(k)));
    auto& r = out.rewards[k];
    r.resize(static_cast<std::size_t>(num_states) * num_actions);
    for (auto& v : r) v = gen.next_double();
    out.labels[k] = "random_" + std::to_string(k);
  }
  return out;
}

RewardSet load_reward_set(const std::string& path) {
  json doc = json::parse(read_file(path), nullptr, false);
  if (doc.is_discarded() || !doc.is_array())
    throw ValidationError("rewards file: expected a JSON list of SxA arrays");
  RewardSet out;
  for (std::size_t k = 0; k < doc.size(); ++k) {
    const json& table = doc[k];
    if (!table.is_array() || table.empty() || !table[0].is_array())
      throw ValidationError("rewards[" + std::to_string(k) +
                            "]: expected an SxA array");
    std::vector<double> flat;
    for (const auto& row : table)
      for (const auto& v : row) {
        if (!v.is_number())
          throw ValidationError("rewards[" + std::to_string(k) +
                                "]: non-numeric entry");
        flat.push_back(v.get<double>());
      }
    out.rewards.push_back(std::move(flat));
    out.labels.push_back("task_" + std::to_string(k));
  }
  if (out.rewards.empty())
    throw ValidationError("rewards file: empty list");
  return out;
}

void save_reward_set(const RewardSet& rewards, const std::string& path) {
  // Shape is recovered on load from the row structure, so we need S here;
  // reward tables are stored row-per-state with labels dropped.
  json doc = json::array();
  for (const auto& r : rewards.rewards) doc.push_back(r);
  write_file(path, doc.dump());
}

std::vector<TaskResult> task_agnostic_learn(const EpisodeDataset& data,
                                            const RewardSet& rewards,
                                            const TabularMdp& truth) {
  rewards.validate(truth.num_states, truth.num_actions);
  const EmpiricalModel model = fit_plugin(data, truth);
  std::vector<TaskResult> out;
  out.reserve(rewards.rewards.size());
  for (const auto& reward : rewards.rewards) {
    TaskResult task;
    task.policy = reward_free_plan(model, reward);
    const TabularMdp task_truth = with_reward(truth, reward);
    task.suboptimality = learning_suboptimality(task_truth, task.policy);
    for (const double v : task.suboptimality)
      task.sup_suboptimality = std::max(task.sup_suboptimality, std::abs(v));
    out.push_back(std::move(task));
  }
  return out;
}

Policy reward_free_plan(const EmpiricalModel& model,
                        std::span<const double> reward) {
  for (const double rv : reward)
    if (rv < 0.0 || rv > 1.0)
      throw ValidationError("reward entry " + std::to_string(rv) +
                            " outside [0,1]");
  TabularMdp mdp = to_mdp(model);
  mdp.reward.assign(reward.begin(), reward.end());
  if (mdp.reward.size() !=
      static_cast<std::size_t>(model.num_states) * model.num_actions)
    throw ValidationError("reward table has wrong size");
  return plan_optimal(mdp).policy;
}

}  // namespace offrl
