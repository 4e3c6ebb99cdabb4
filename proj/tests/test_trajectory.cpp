#include <doctest.h>

#include <cmath>

#include "offrl/trajectory.hpp"
#include "support/oracles.hpp"

using namespace offrl;
namespace ot = offrl::testing;

TEST_CASE("deterministic system produces one fixed path") {
  TabularMdp mdp;
  mdp.num_states = 3;
  mdp.num_actions = 2;
  mdp.horizon = 4;
  mdp.transition.assign(3 * 2 * 3, 0.0);
  for (int s = 0; s < 3; ++s)
    for (int a = 0; a < 2; ++a)
      mdp.transition[mdp.row_offset(s, a) + (s + 1) % 3] = 1.0;
  mdp.reward.assign(6, 0.0);
  mdp.initial = {0, 0, 1};
  mdp.validate();
  const Policy mu = Policy::deterministic(4, 3, 2, std::vector<int>(12, 1));
  const EpisodeDataset data = roll_episodes(mdp, mu, 50, {9, 0});
  const std::vector<Transition> expected = {
      {2, 1, 0}, {0, 1, 1}, {1, 1, 2}, {2, 1, 0}};
  for (const auto& ep : data.episodes) CHECK(ep == expected);
}

TEST_CASE("identical streams reproduce byte-identical datasets") {
  Xoshiro256 gen({31, 0});
  const TabularMdp mdp = ot::random_mdp(3, 2, 5, gen);
  const Policy mu = ot::random_stochastic_policy(5, 3, 2, gen);
  const EpisodeDataset a = roll_episodes(mdp, mu, 200, {42, 7});
  const EpisodeDataset b = roll_episodes(mdp, mu, 200, {42, 7});
  CHECK(a == b);
  CHECK(dataset_to_text(a) == dataset_to_text(b));
  const EpisodeDataset c = roll_episodes(mdp, mu, 200, {43, 7});
  CHECK(a != c);
}

TEST_CASE("episode streams are prefix-stable in n") {
  Xoshiro256 gen({32, 0});
  const TabularMdp mdp = ot::random_mdp(2, 2, 3, gen);
  const Policy mu = ot::random_stochastic_policy(3, 2, 2, gen);
  const EpisodeDataset small = roll_episodes(mdp, mu, 100, {5, 0});
  const EpisodeDataset large = roll_episodes(mdp, mu, 1000, {5, 0});
  for (int i = 0; i < 100; ++i) CHECK(small.episodes[i] == large.episodes[i]);
}

TEST_CASE("uniform 2x2x2 frequencies match the occupancy oracle") {
  TabularMdp mdp;
  mdp.num_states = 2;
  mdp.num_actions = 2;
  mdp.horizon = 2;
  mdp.transition.assign(2 * 2 * 2, 0.5);
  mdp.reward.assign(4, 0.5);
  mdp.initial.assign(2, 0.5);
  mdp.validate();
  const Policy mu = Policy::uniform(2, 2, 2);
  const OccupancyTable occ = occupancy(mdp, mu);
  const int n = 1'000'000;
  const EpisodeDataset data = roll_episodes(mdp, mu, n, {123, 0});
  std::vector<std::int64_t> counts(2 * 2 * 2, 0);
  for (const auto& ep : data.episodes)
    for (int t = 0; t < 2; ++t)
      ++counts[(static_cast<std::size_t>(t) * 2 + ep[t].state) * 2 + ep[t].action];
  for (int t = 0; t < 2; ++t)
    for (int s = 0; s < 2; ++s)
      for (int a = 0; a < 2; ++a) {
        const double p = occ.at(t, s, a);
        const double freq =
            static_cast<double>(counts[(static_cast<std::size_t>(t) * 2 + s) * 2 + a]) / n;
        CHECK(std::abs(freq - p) <= 3.0 * std::sqrt(p * (1 - p) / n));
      }
}

TEST_CASE("state chaining and count consistency hold for generated data") {
  Xoshiro256 gen({33, 0});
  const TabularMdp mdp = ot::random_mdp(4, 3, 6, gen);
  const Policy mu = ot::random_stochastic_policy(6, 4, 3, gen);
  const EpisodeDataset data = roll_episodes(mdp, mu, 500, {8, 0});
  CHECK_NOTHROW(data.validate());
  std::int64_t total = 0;
  for (const auto& ep : data.episodes) total += static_cast<std::int64_t>(ep.size());
  CHECK(total == 500 * 6);
}

TEST_CASE("dataset file round-trips bit-exactly") {
  Xoshiro256 gen({34, 0});
  const TabularMdp mdp = ot::random_mdp(3, 2, 4, gen);
  const Policy mu = ot::random_stochastic_policy(4, 3, 2, gen);
  const EpisodeDataset data = roll_episodes(mdp, mu, 64, {77, 3});
  const std::string text = dataset_to_text(data);
  const EpisodeDataset back = parse_dataset(text);
  CHECK(back == data);
  CHECK(dataset_to_text(back) == text);
}

TEST_CASE("dataset parser rejects inconsistent files") {
  CHECK_THROWS_AS(parse_dataset(""), ValidationError);
  CHECK_THROWS_WITH_AS(
      parse_dataset("{\"S\":2,\"A\":2,\"H\":1,\"base_seed\":0,\"n\":2}\n[[0,0,1]]\n"),
      doctest::Contains("header says n=2"), ValidationError);
  // Broken chaining inside an episode.
  CHECK_THROWS_WITH_AS(
      parse_dataset(
          "{\"S\":2,\"A\":2,\"H\":2,\"base_seed\":0,\"n\":1}\n[[0,0,1],[0,0,1]]\n"),
      doctest::Contains("chaining"), ValidationError);
}
