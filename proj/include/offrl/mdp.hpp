#pragma once

#include <span>
#include <vector>

#include "offrl/common.hpp"

namespace offrl {

// Finite-horizon MDP with a single transition kernel shared by every step
// (time-homogeneous) and a known mean reward table r(s,a) in [0,1].
// Instances are immutable by convention once validate() has passed and are
// safe for concurrent shared reads.
struct TabularMdp {
  int num_states = 0;
  int num_actions = 0;
  int horizon = 0;
  std::vector<double> transition;  // [s][a][s'], row-major
  std::vector<double> reward;      // [s][a]
  std::vector<double> initial;     // [s]

  std::size_t row_offset(int s, int a) const {
    return (static_cast<std::size_t>(s) * num_actions + a) *
           static_cast<std::size_t>(num_states);
  }
  double p(int s, int a, int s2) const { return transition[row_offset(s, a) + s2]; }
  std::span<const double> row(int s, int a) const {
    return {transition.data() + row_offset(s, a),
            static_cast<std::size_t>(num_states)};
  }
  double r(int s, int a) const {
    return reward[static_cast<std::size_t>(s) * num_actions + a];
  }

  // Throws ValidationError naming the offending entry.
  void validate() const;
};

// Returns a copy of `mdp` with the reward table replaced (entries in [0,1]).
TabularMdp with_reward(const TabularMdp& mdp, std::span<const double> reward);

// Per-step action distributions, one row per (h, s). Deterministic policies
// store one-hot rows so both kinds share the same evaluation path.
struct Policy {
  int horizon = 0;
  int num_states = 0;
  int num_actions = 0;
  std::vector<double> probs;  // [h][s][a]

  std::size_t row_offset(int h, int s) const {
    return (static_cast<std::size_t>(h) * num_states + s) *
           static_cast<std::size_t>(num_actions);
  }
  double prob(int h, int s, int a) const { return probs[row_offset(h, s) + a]; }
  std::span<const double> row(int h, int s) const {
    return {probs.data() + row_offset(h, s),
            static_cast<std::size_t>(num_actions)};
  }
  // Overwrites the (h, s) row with a one-hot at `a`.
  void set_action(int h, int s, int a);
  // Index of the largest probability (smallest index on ties).
  int argmax_action(int h, int s) const;

  static Policy uniform(int horizon, int num_states, int num_actions);
  // actions is laid out [h][s].
  static Policy deterministic(int horizon, int num_states, int num_actions,
                              std::span<const int> actions);

  void validate() const;

  bool operator==(const Policy& other) const = default;
};

// V and Q tables for steps 0..H; row H is the all-zero terminal convention.
struct ValueTable {
  int horizon = 0;
  int num_states = 0;
  int num_actions = 0;
  std::vector<double> v;  // [(H+1)][s]
  std::vector<double> q;  // [(H+1)][s][a]

  double value(int h, int s) const {
    return v[static_cast<std::size_t>(h) * num_states + s];
  }
  double qvalue(int h, int s, int a) const {
    return q[(static_cast<std::size_t>(h) * num_states + s) * num_actions + a];
  }
  std::span<const double> value_row(int h) const {
    return {v.data() + static_cast<std::size_t>(h) * num_states,
            static_cast<std::size_t>(num_states)};
  }
};

// Marginal state-action occupancy d_t(s,a) for t in [0, H).
struct OccupancyTable {
  int horizon = 0;
  int num_states = 0;
  int num_actions = 0;
  std::vector<double> d;  // [t][s][a]

  double at(int t, int s, int a) const {
    return d[(static_cast<std::size_t>(t) * num_states + s) * num_actions + a];
  }
};

struct PlanResult {
  ValueTable values;
  Policy policy;  // deterministic greedy, smallest action index on ties
};

struct MinimalOccupancy {
  double value = 0.0;            // min over positive d_t(s,a)
  bool has_unvisited_state = false;  // some state has d_t(s) == 0 at every t
};

// Backward-induction evaluation of a fixed policy:
//   Q_h(s,a) = r(s,a) + P(.|s,a) V_{h+1},  V_h(s) = sum_a pi_h(a|s) Q_h(s,a).
ValueTable evaluate_policy(const TabularMdp& mdp, const Policy& pi);

// Bellman optimality backup with greedy action extraction.
PlanResult plan_optimal(const TabularMdp& mdp);

// Forward recursion d_1 = d1 (x) pi_1, d_{t+1} = (d_t P) (x) pi_{t+1}.
OccupancyTable occupancy(const TabularMdp& mdp, const Policy& pi);

// Minimum positive marginal occupancy of the behavior policy; pairs whose
// occupancy is zero at every step are excluded. Also reports whether any
// state is never visited (a coverage diagnostic, not a precondition).
MinimalOccupancy minimal_occupancy(const TabularMdp& mdp, const Policy& mu);

double max_abs_diff(std::span<const double> a, std::span<const double> b);

}  // namespace offrl
