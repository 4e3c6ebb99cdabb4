#include "offrl/trajectory.hpp"

#include <sstream>

#include <json.hpp>

#include "offrl/io.hpp"

namespace offrl {

using nlohmann::json;

void EpisodeDataset::validate() const {
  for (std::size_t i = 0; i < episodes.size(); ++i) {
    const auto& ep = episodes[i];
    if (static_cast<int>(ep.size()) != horizon)
      throw ValidationError("episode " + std::to_string(i) + ": has " +
                            std::to_string(ep.size()) + " transitions, expected " +
                            std::to_string(horizon));
    for (std::size_t t = 0; t < ep.size(); ++t) {
      const auto& tr = ep[t];
      if (tr.state < 0 || tr.state >= num_states || tr.next_state < 0 ||
          tr.next_state >= num_states || tr.action < 0 || tr.action >= num_actions)
        throw ValidationError("episode " + std::to_string(i) + " step " +
                              std::to_string(t) + ": index out of range");
      if (t + 1 < ep.size() && tr.next_state != ep[t + 1].state)
        throw ValidationError("episode " + std::to_string(i) + " step " +
                              std::to_string(t) + ": broken state chaining");
    }
  }
}

EpisodeDataset roll_episodes(const TabularMdp& mdp, const Policy& mu, int n,
                             RngStream rng) {
  if (n < 1) throw ValidationError("n must be >= 1");
  if (mu.horizon != mdp.horizon || mu.num_states != mdp.num_states ||
      mu.num_actions != mdp.num_actions)
    throw ValidationError("behavior policy dimensions do not match MDP");
  EpisodeDataset data{mdp.num_states, mdp.num_actions, mdp.horizon,
                      rng.base_seed, {}};
  data.episodes.resize(n);
  for (int i = 0; i < n; ++i) {
    Xoshiro256 gen(rng.at(rng.stream_index + static_cast<std::uint64_t>(i)));
    auto& ep = data.episodes[i];
    ep.reserve(mdp.horizon);
    int s = gen.sample_categorical(mdp.initial);
    for (int t = 0; t < mdp.horizon; ++t) {
      const int a = gen.sample_categorical(mu.row(t, s));
      const int s2 = gen.sample_categorical(mdp.row(s, a));
      ep.push_back({s, a, s2});
      s = s2;
    }
  }
  return data;
}

std::string dataset_to_text(const EpisodeDataset& data) {
  json header;
  header["S"] = data.num_states;
  header["A"] = data.num_actions;
  header["H"] = data.horizon;
  header["base_seed"] = data.base_seed;
  header["n"] = data.episodes.size();
  std::ostringstream out;
  out << header.dump() << "\n";
  for (const auto& ep : data.episodes) {
    json line = json::array();
    for (const auto& tr : ep)
      line.push_back(json::array({tr.state, tr.action, tr.next_state}));
    out << line.dump() << "\n";
  }
  return out.str();
}

EpisodeDataset parse_dataset(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("dataset: empty file");
  json header = json::parse(line, nullptr, false);
  if (header.is_discarded() || !header.is_object())
    throw ValidationError("dataset header: not valid JSON");
  EpisodeDataset data;
  try {
    data.num_states = header.at("S").get<int>();
    data.num_actions = header.at("A").get<int>();
    data.horizon = header.at("H").get<int>();
    data.base_seed = header.at("base_seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("dataset header: ") + e.what());
  }
  const auto n = header.at("n").get<std::size_t>();
  data.episodes.reserve(n);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json ep = json::parse(line, nullptr, false);
    if (ep.is_discarded() || !ep.is_array())
      throw ValidationError("dataset line " + std::to_string(lineno) +
                            ": not a JSON array");
    std::vector<Transition> steps;
    steps.reserve(ep.size());
    for (const auto& tr : ep) {
      if (!tr.is_array() || tr.size() != 3)
        throw ValidationError("dataset line " + std::to_string(lineno) +
                              ": expected [s, a, s'] triples");
      steps.push_back({tr[0].get<int>(), tr[1].get<int>(), tr[2].get<int>()});
    }
    data.episodes.push_back(std::move(steps));
  }
  if (data.episodes.size() != n)
    throw ValidationError("dataset: header says n=" + std::to_string(n) +
                          " but found " + std::to_string(data.episodes.size()) +
                          " episodes");
  data.validate();
  return data;
}

void save_dataset(const EpisodeDataset& data, const std::string& path) {
  write_file(path, dataset_to_text(data));
}

EpisodeDataset load_dataset(const std::string& path) {
  return parse_dataset(read_file(path));
}

}  // namespace offrl
