#pragma once

#include <vector>

#include "offrl/mdp.hpp"

namespace offrl {

// MDP with a step-indexed reward table. Absorbing constructions pay the
// sequence u_t at the absorbing state, so the reward must carry a time
// index; entries live in [0, H] rather than [0, 1].
struct TimedRewardMdp {
  int num_states = 0;
  int num_actions = 0;
  int horizon = 0;
  std::vector<double> transition;  // [s][a][s'], shared by all steps
  std::vector<double> reward;      // [h][s][a]
  std::vector<double> initial;     // [s]

  std::size_t row_offset(int s, int a) const {
    return (static_cast<std::size_t>(s) * num_actions + a) *
           static_cast<std::size_t>(num_states);
  }
  std::span<const double> row(int s, int a) const {
    return {transition.data() + row_offset(s, a),
            static_cast<std::size_t>(num_states)};
  }
  double r(int h, int s, int a) const {
    return reward[(static_cast<std::size_t>(h) * num_states + s) * num_actions + a];
  }

  void validate() const;
};

// Widening adapter: copies the stationary reward into every step.
TimedRewardMdp widen(const TabularMdp& mdp);

struct AbsorbingSpec {
  TabularMdp base;
  int absorb_state = 0;
  std::vector<double> u;  // one reward per step, each in [0, H]
};

// The s-absorbing MDP: identical to the base except that `absorb_state`
// self-loops under every action and pays u_t at step t.
TimedRewardMdp build_absorbing(const AbsorbingSpec& spec);

// Bellman optimality backup for step-indexed rewards.
PlanResult plan_optimal(const TimedRewardMdp& mdp);
ValueTable evaluate_policy(const TimedRewardMdp& mdp, const Policy& pi);

// The singleton choice u*_t = V*_t(s) - V*_{t+1}(s). All entries are
// nonnegative for stationary transitions with r >= 0; entries below -1e-12
// raise, smaller negatives are rounded up to zero.
std::vector<double> singleton_u(const TabularMdp& mdp, int state);

struct IdentityReport {
  double max_deviation = 0.0;
  bool pass = false;
};

// Plans on the singleton-absorbing MDP M_{s,{u*_t}} and checks that its
// optimal values match the base MDP's at every (h, s'). The identity is
// exact, so a deviation above `tol` signals an implementation bug.
IdentityReport verify_singleton_identity(const TabularMdp& mdp, int state,
                                         double tol = 1e-10);

struct QDiffReport {
  double lhs = 0.0;   // max_h ||Q*_{h,{s,u}} - Q*_{h,{s,u2}}||_inf
  double rhs = 0.0;   // H * max_t |u_t - u2_t|
  double ratio = 0.0; // lhs / rhs, 0 when rhs == 0
  bool pass = false;
};

// Checks the Lipschitz bound between two absorbing reward sequences by
// planning on both MDPs exactly.
QDiffReport q_diff_bound_check(const TabularMdp& mdp, int state,
                               const std::vector<double>& u,
                               const std::vector<double>& u2);

}  // namespace offrl
