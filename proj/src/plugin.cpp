#include "offrl/plugin.hpp"

#include <cmath>

#include <json.hpp>

#include "offrl/io.hpp"

namespace offrl {

using nlohmann::json;

int EmpiricalModel::unvisited_rows() const {
  int count = 0;
  for (const auto c : visit_counts)
    if (c == 0) ++count;
  return count;
}

EmpiricalModel fit_plugin(const EpisodeDataset& data, const TabularMdp& shape) {
  if (data.num_states != shape.num_states ||
      data.num_actions != shape.num_actions || data.horizon != shape.horizon)
    throw ValidationError("dataset meta does not match the MDP shape");
  const int S = shape.num_states, A = shape.num_actions;
  EmpiricalModel model{S, A, shape.horizon,
                       static_cast<std::int64_t>(data.episodes.size()),
                       {}, {}, {}, {}, shape.reward};
  model.visit_counts.assign(static_cast<std::size_t>(S) * A, 0);
  model.transition_counts.assign(static_cast<std::size_t>(S) * A * S, 0);
  std::vector<std::int64_t> initial_counts(S, 0);
  for (const auto& ep : data.episodes) {
    if (!ep.empty()) ++initial_counts[ep.front().state];
    for (const auto& tr : ep) {
      const std::size_t row = static_cast<std::size_t>(tr.state) * A + tr.action;
      ++model.visit_counts[row];
      ++model.transition_counts[row * S + tr.next_state];
    }
  }
  model.p_hat.assign(static_cast<std::size_t>(S) * A * S, 0.0);
  for (std::size_t row = 0; row < model.visit_counts.size(); ++row) {
    const std::int64_t n_sa = model.visit_counts[row];
    if (n_sa > 0) {
      for (int s2 = 0; s2 < S; ++s2)
        model.p_hat[row * S + s2] =
            static_cast<double>(model.transition_counts[row * S + s2]) /
            static_cast<double>(n_sa);
    } else {
      for (int s2 = 0; s2 < S; ++s2) model.p_hat[row * S + s2] = 1.0 / S;
    }
  }
  model.d1_hat.assign(S, 0.0);
  if (model.num_episodes > 0)
    for (int s = 0; s < S; ++s)
      model.d1_hat[s] = static_cast<double>(initial_counts[s]) /
                        static_cast<double>(model.num_episodes);
  return model;
}

TabularMdp to_mdp(const EmpiricalModel& model) {
  if (model.num_episodes == 0)
    throw ValidationError("empirical model fit on zero episodes; d1_hat degenerate");
  TabularMdp mdp{model.num_states, model.num_actions, model.horizon,
                 model.p_hat, model.reward, model.d1_hat};
  mdp.validate();
  return mdp;
}

std::vector<double> l1_row_error(const EmpiricalModel& model,
                                 const TabularMdp& truth) {
  if (model.num_states != truth.num_states ||
      model.num_actions != truth.num_actions)
    throw ValidationError("model and truth shapes do not match");
  const int S = model.num_states, A = model.num_actions;
  std::vector<double> out(static_cast<std::size_t>(S) * A, 0.0);
  for (int s = 0; s < S; ++s)
    for (int a = 0; a < A; ++a) {
      const auto est = model.p_hat_row(s, a);
      const auto tru = truth.row(s, a);
      double l1 = 0.0;
      for (int s2 = 0; s2 < S; ++s2) l1 += std::abs(est[s2] - tru[s2]);
      out[static_cast<std::size_t>(s) * A + a] = l1;
    }
  return out;
}

double max_l1_row_error(const EmpiricalModel& model, const TabularMdp& truth) {
  double m = 0.0;
  for (const double e : l1_row_error(model, truth)) m = std::max(m, e);
  return m;
}

std::string model_to_json(const EmpiricalModel& model) {
  json doc;
  doc["S"] = model.num_states;
  doc["A"] = model.num_actions;
  doc["H"] = model.horizon;
  doc["n"] = model.num_episodes;
  doc["n_sa"] = model.visit_counts;
  doc["n_s_sa"] = model.transition_counts;
  doc["P_hat"] = model.p_hat;
  doc["d1_hat"] = model.d1_hat;
  doc["r"] = model.reward;
  return doc.dump();
}

EmpiricalModel parse_model(const std::string& json_text) {
  json doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded()) throw ValidationError("model file: not valid JSON");
  EmpiricalModel model;
  try {
    model.num_states = doc.at("S").get<int>();
    model.num_actions = doc.at("A").get<int>();
    model.horizon = doc.at("H").get<int>();
    model.num_episodes = doc.at("n").get<std::int64_t>();
    model.visit_counts = doc.at("n_sa").get<std::vector<std::int64_t>>();
    model.transition_counts = doc.at("n_s_sa").get<std::vector<std::int64_t>>();
    model.p_hat = doc.at("P_hat").get<std::vector<double>>();
    model.d1_hat = doc.at("d1_hat").get<std::vector<double>>();
    model.reward = doc.at("r").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("model file: ") + e.what());
  }
  const std::size_t S = model.num_states, A = model.num_actions;
  if (model.visit_counts.size() != S * A ||
      model.transition_counts.size() != S * A * S ||
      model.p_hat.size() != S * A * S || model.d1_hat.size() != S ||
      model.reward.size() != S * A)
    throw ValidationError("model file: tensor sizes inconsistent with S, A");
  for (std::size_t row = 0; row < S * A; ++row) {
    std::int64_t total = 0;
    for (std::size_t s2 = 0; s2 < S; ++s2)
      total += model.transition_counts[row * S + s2];
    if (total != model.visit_counts[row])
      throw ValidationError("model file: n_s_sa row " + std::to_string(row) +
                            " does not sum to n_sa");
  }
  return model;
}

void save_model(const EmpiricalModel& model, const std::string& path) {
  write_file(path, model_to_json(model));
}

EmpiricalModel load_model(const std::string& path) {
  return parse_model(read_file(path));
}

}  // namespace offrl
