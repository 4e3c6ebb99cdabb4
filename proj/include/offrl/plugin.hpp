#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "offrl/mdp.hpp"
#include "offrl/trajectory.hpp"

namespace offrl {

// Counts and maximum-likelihood transition estimate aggregated over all
// steps of all episodes. Rows never visited fall back to the uniform 1/S
// row. The mean reward is copied from the true MDP (known by assumption).
struct EmpiricalModel {
  int num_states = 0;
  int num_actions = 0;
  int horizon = 0;
  std::int64_t num_episodes = 0;
  std::vector<std::int64_t> visit_counts;       // [s][a]
  std::vector<std::int64_t> transition_counts;  // [s][a][s']
  std::vector<double> p_hat;                    // [s][a][s']
  std::vector<double> d1_hat;                   // [s]
  std::vector<double> reward;                   // [s][a]

  std::int64_t count(int s, int a) const {
    return visit_counts[static_cast<std::size_t>(s) * num_actions + a];
  }
  std::span<const double> p_hat_row(int s, int a) const {
    return {p_hat.data() + (static_cast<std::size_t>(s) * num_actions + a) *
                               static_cast<std::size_t>(num_states),
            static_cast<std::size_t>(num_states)};
  }
  int unvisited_rows() const;
};

// Tallies counts over the dataset and normalizes. `shape` supplies (S, A, H)
// and the known reward table; its transition kernel is not read.
EmpiricalModel fit_plugin(const EpisodeDataset& data, const TabularMdp& shape);

// The empirical MDP: P_hat in lieu of P, d1_hat in lieu of d1.
// Throws if the model was fit on zero episodes.
TabularMdp to_mdp(const EmpiricalModel& model);

// Per-row l1 distances ||P_hat(.|s,a) - P(.|s,a)||_1, laid out [s][a].
std::vector<double> l1_row_error(const EmpiricalModel& model,
                                 const TabularMdp& truth);
double max_l1_row_error(const EmpiricalModel& model, const TabularMdp& truth);

// Model dump: JSON with counts, P_hat, d1_hat and reward; round-trippable.
std::string model_to_json(const EmpiricalModel& model);
EmpiricalModel parse_model(const std::string& json_text);
void save_model(const EmpiricalModel& model, const std::string& path);
EmpiricalModel load_model(const std::string& path);

}  // namespace offrl
