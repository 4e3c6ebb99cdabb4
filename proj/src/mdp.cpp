#include "offrl/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

namespace offrl {

namespace {

void check_distribution(std::span<const double> row, const std::string& where,
                        double tol) {
  double sum = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (row[i] < 0.0) {
      throw ValidationError(where + "[" + std::to_string(i) +
                            "]: negative probability " + std::to_string(row[i]));
    }
    sum += row[i];
  }
  if (std::abs(sum - 1.0) > tol) {
    throw ValidationError(where + ": row sums to " + std::to_string(sum) +
                          ", expected 1 within " + std::to_string(tol));
  }
}

void check_dims_match(const TabularMdp& mdp, const Policy& pi) {
  if (pi.horizon != mdp.horizon || pi.num_states != mdp.num_states ||
      pi.num_actions != mdp.num_actions) {
    throw ValidationError(
        "policy dimensions (H=" + std::to_string(pi.horizon) +
        ", S=" + std::to_string(pi.num_states) +
        ", A=" + std::to_string(pi.num_actions) + ") do not match MDP (H=" +
        std::to_string(mdp.horizon) + ", S=" + std::to_string(mdp.num_states) +
        ", A=" + std::to_string(mdp.num_actions) + ")");
  }
}

}  // namespace

void TabularMdp::validate() const {
  if (num_states <= 0 || num_actions <= 0 || horizon <= 0)
    throw ValidationError("S, A, H must all be positive");
  const std::size_t s = num_states, a = num_actions;
  if (transition.size() != s * a * s)
    throw ValidationError("P: expected " + std::to_string(s * a * s) +
                          " entries, got " + std::to_string(transition.size()));
  if (reward.size() != s * a)
    throw ValidationError("r: expected " + std::to_string(s * a) +
                          " entries, got " + std::to_string(reward.size()));
  if (initial.size() != s)
    throw ValidationError("d1: expected " + std::to_string(s) +
                          " entries, got " + std::to_string(initial.size()));
  for (int si = 0; si < num_states; ++si)
    for (int ai = 0; ai < num_actions; ++ai)
      check_distribution(row(si, ai),
                         "P[" + std::to_string(si) + "][" + std::to_string(ai) + "]",
                         kProbTol);
  check_distribution(initial, "d1", kProbTol);
  for (int si = 0; si < num_states; ++si)
    for (int ai = 0; ai < num_actions; ++ai) {
      const double rv = r(si, ai);
      if (rv < 0.0 || rv > 1.0)
        throw ValidationError("r[" + std::to_string(si) + "][" +
                              std::to_string(ai) + "]: value " +
                              std::to_string(rv) + " outside [0,1]");
    }
}

TabularMdp with_reward(const TabularMdp& mdp, std::span<const double> reward) {
  if (reward.size() != mdp.reward.size())
    throw ValidationError("replacement reward has wrong size");
  TabularMdp out = mdp;
  out.reward.assign(reward.begin(), reward.end());
  for (double rv : out.reward)
    if (rv < 0.0 || rv > 1.0)
      throw ValidationError("replacement reward entry " + std::to_string(rv) +
                            " outside [0,1]");
  return out;
}

void Policy::set_action(int h, int s, int a) {
  const std::size_t base = row_offset(h, s);
  std::fill_n(probs.begin() + base, num_actions, 0.0);
  probs[base + a] = 1.0;
}

int Policy::argmax_action(int h, int s) const {
  const auto r = row(h, s);
  int best = 0;
  for (int a = 1; a < num_actions; ++a)
    if (r[a] > r[best]) best = a;
  return best;
}

Policy Policy::uniform(int horizon, int num_states, int num_actions) {
  Policy pi{horizon, num_states, num_actions, {}};
  pi.probs.assign(static_cast<std::size_t>(horizon) * num_states * num_actions,
                  1.0 / num_actions);
  return pi;
}

Policy Policy::deterministic(int horizon, int num_states, int num_actions,
                             std::span<const int> actions) {
  if (actions.size() != static_cast<std::size_t>(horizon) * num_states)
    throw ValidationError("deterministic policy: expected H*S action entries");
  Policy pi{horizon, num_states, num_actions, {}};
  pi.probs.assign(static_cast<std::size_t>(horizon) * num_states * num_actions, 0.0);
  for (int h = 0; h < horizon; ++h)
    for (int s = 0; s < num_states; ++s) {
      const int a = actions[static_cast<std::size_t>(h) * num_states + s];
      if (a < 0 || a >= num_actions)
        throw ValidationError("deterministic policy: action index " +
                              std::to_string(a) + " out of range");
      pi.probs[pi.row_offset(h, s) + a] = 1.0;
    }
  return pi;
}

void Policy::validate() const {
  if (num_states <= 0 || num_actions <= 0 || horizon <= 0)
    throw ValidationError("policy: S, A, H must all be positive");
  if (probs.size() !=
      static_cast<std::size_t>(horizon) * num_states * num_actions)
    throw ValidationError("probs: expected " +
                          std::to_string(static_cast<std::size_t>(horizon) *
                                         num_states * num_actions) +
                          " entries, got " + std::to_string(probs.size()));
  for (int h = 0; h < horizon; ++h)
    for (int s = 0; s < num_states; ++s)
      check_distribution(row(h, s),
                         "probs[" + std::to_string(h) + "][" + std::to_string(s) + "]",
                         kProbTol);
}

ValueTable evaluate_policy(const TabularMdp& mdp, const Policy& pi) {
  check_dims_match(mdp, pi);
  const int S = mdp.num_states, A = mdp.num_actions, H = mdp.horizon;
  ValueTable out{H, S, A, {}, {}};
  out.v.assign(static_cast<std::size_t>(H + 1) * S, 0.0);
  out.q.assign(static_cast<std::size_t>(H + 1) * S * A, 0.0);
  for (int h = H - 1; h >= 0; --h) {
    const double* vnext = out.v.data() + static_cast<std::size_t>(h + 1) * S;
    for (int s = 0; s < S; ++s) {
      double vs = 0.0;
      for (int a = 0; a < A; ++a) {
        const auto p = mdp.row(s, a);
        double backup = 0.0;
        for (int s2 = 0; s2 < S; ++s2) backup += p[s2] * vnext[s2];
        const double qv = mdp.r(s, a) + backup;
        out.q[(static_cast<std::size_t>(h) * S + s) * A + a] = qv;
        vs += pi.prob(h, s, a) * qv;
      }
      out.v[static_cast<std::size_t>(h) * S + s] = vs;
    }
  }
  return out;
}

PlanResult plan_optimal(const TabularMdp& mdp) {
  const int S = mdp.num_states, A = mdp.num_actions, H = mdp.horizon;
  ValueTable values{H, S, A, {}, {}};
  values.v.assign(static_cast<std::size_t>(H + 1) * S, 0.0);
  values.q.assign(static_cast<std::size_t>(H + 1) * S * A, 0.0);
  Policy greedy{H, S, A, {}};
  greedy.probs.assign(static_cast<std::size_t>(H) * S * A, 0.0);
  for (int h = H - 1; h >= 0; --h) {
    const double* vnext = values.v.data() + static_cast<std::size_t>(h + 1) * S;
    for (int s = 0; s < S; ++s) {
      int best = 0;
      double best_q = 0.0;
      for (int a = 0; a < A; ++a) {
        const auto p = mdp.row(s, a);
        double backup = 0.0;
        for (int s2 = 0; s2 < S; ++s2) backup += p[s2] * vnext[s2];
        const double qv = mdp.r(s, a) + backup;
        values.q[(static_cast<std::size_t>(h) * S + s) * A + a] = qv;
        if (a == 0 || qv > best_q) {
          best_q = qv;
          best = a;
        }
      }
      values.v[static_cast<std::size_t>(h) * S + s] = best_q;
      greedy.probs[greedy.row_offset(h, s) + best] = 1.0;
    }
  }
  return {std::move(values), std::move(greedy)};
}

OccupancyTable occupancy(const TabularMdp& mdp, const Policy& pi) {
  check_dims_match(mdp, pi);
  const int S = mdp.num_states, A = mdp.num_actions, H = mdp.horizon;
  OccupancyTable out{H, S, A, {}};
  out.d.assign(static_cast<std::size_t>(H) * S * A, 0.0);
  std::vector<double> state_marginal(mdp.initial.begin(), mdp.initial.end());
  std::vector<double> next_marginal(S, 0.0);
  for (int t = 0; t < H; ++t) {
    double* dt = out.d.data() + static_cast<std::size_t>(t) * S * A;
    for (int s = 0; s < S; ++s)
      for (int a = 0; a < A; ++a)
        dt[static_cast<std::size_t>(s) * A + a] = state_marginal[s] * pi.prob(t, s, a);
    if (t + 1 < H) {
      std::fill(next_marginal.begin(), next_marginal.end(), 0.0);
      for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a) {
          const double w = dt[static_cast<std::size_t>(s) * A + a];
          if (w == 0.0) continue;
          const auto p = mdp.row(s, a);
          for (int s2 = 0; s2 < S; ++s2) next_marginal[s2] += w * p[s2];
        }
      state_marginal = next_marginal;
    }
  }
  return out;
}

MinimalOccupancy minimal_occupancy(const TabularMdp& mdp, const Policy& mu) {
  const OccupancyTable occ = occupancy(mdp, mu);
  const int S = mdp.num_states, A = mdp.num_actions, H = mdp.horizon;
  MinimalOccupancy out;
  double min_positive = -1.0;
  for (int t = 0; t < H; ++t)
    for (int s = 0; s < S; ++s)
      for (int a = 0; a < A; ++a) {
        const double d = occ.at(t, s, a);
        if (d > 0.0 && (min_positive < 0.0 || d < min_positive)) min_positive = d;
      }
  if (min_positive < 0.0)
    throw ValidationError("all occupancies are zero; initial distribution invalid");
  out.value = min_positive;
  for (int s = 0; s < S; ++s) {
    double total = 0.0;
    for (int t = 0; t < H; ++t)
      for (int a = 0; a < A; ++a) total += occ.at(t, s, a);
    if (total == 0.0) {
      out.has_unvisited_state = true;
      break;
    }
  }
  return out;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace offrl
