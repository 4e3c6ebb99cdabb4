#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "offrl/mdp.hpp"
#include "offrl/rng.hpp"

namespace offrl {

struct Transition {
  int state = 0;
  int action = 0;
  int next_state = 0;

  bool operator==(const Transition&) const = default;
};

// An offline dataset of n length-H episodes collected under a behavior
// policy. Rewards are not stored: the mean reward table is known and is
// carried by the MDP shape. Immutable after construction.
struct EpisodeDataset {
  int num_states = 0;
  int num_actions = 0;
  int horizon = 0;
  std::uint64_t base_seed = 0;
  std::vector<std::vector<Transition>> episodes;

  // Checks index ranges, per-episode length and state chaining.
  void validate() const;

  bool operator==(const EpisodeDataset&) const = default;
};

// Draws n episodes: s_1 ~ d1, a_t ~ mu_t(.|s_t), s_{t+1} ~ P(.|s_t,a_t).
// Episode i uses stream (rng.base_seed, rng.stream_index + i), so output is
// a pure function of the arguments, prefix-stable in n, and parallelizable.
EpisodeDataset roll_episodes(const TabularMdp& mdp, const Policy& mu, int n,
                             RngStream rng);

// Dataset file: a JSON header line with the meta fields, then one episode
// per line as a JSON array of [s, a, s'] triples. Round-trips bit-exactly.
std::string dataset_to_text(const EpisodeDataset& data);
EpisodeDataset parse_dataset(const std::string& text);
void save_dataset(const EpisodeDataset& data, const std::string& path);
EpisodeDataset load_dataset(const std::string& path);

}  // namespace offrl
