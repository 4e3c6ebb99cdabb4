#pragma once

#include <cstdint>
#include <vector>

#include "offrl/mdp.hpp"
#include "offrl/plugin.hpp"
#include "offrl/rng.hpp"

namespace offrl {

enum class PolicyClassKind { global_exhaustive, global_sampled, local };

struct PolicyClassSpec {
  PolicyClassKind kind = PolicyClassKind::global_exhaustive;
  int sample_count = 0;       // M, for sampled modes
  double eps_opt = 0.0;       // local class radius
  std::int64_t enumeration_cap = 10'000'000;
  RngStream rng;
};

struct UniformErrorReport {
  double sup_error = 0.0;
  Policy argmax_policy;
  std::int64_t class_size_examined = 0;
  bool exhaustive = false;
  // Set when the examined set is a sample, so sup_error only lower-bounds
  // the class supremum.
  bool lower_bound_only = false;
  // Local classes wider than sqrt(H/S) leave the regime the local-class
  // guarantee is stated for; flagged, not rejected.
  bool eps_opt_beyond_theory = false;
  std::vector<double> per_policy_errors;  // filled in small exhaustive runs
};

// Number of deterministic non-stationary policies A^(S*H), saturated at
// `cap + 1` to avoid overflow.
std::int64_t deterministic_policy_count(int horizon, int num_states,
                                        int num_actions, std::int64_t cap);

// The index-th policy in the mixed-radix enumeration of the global class.
Policy nth_deterministic_policy(std::int64_t index, int horizon, int num_states,
                                int num_actions);

// ||Q_hat^pi_1 - Q^pi_1||_inf: step-1 Q gap between the empirical MDP and
// the truth, maximized over all (s,a).
double policy_q1_error(const TabularMdp& truth, const TabularMdp& model_mdp,
                       const Policy& pi);

// sup over the examined deterministic non-stationary policies of the step-1
// Q error. Exhaustive mode is exact over the global class; sampled mode is a
// flagged lower bound.
UniformErrorReport global_uniform_error(const TabularMdp& truth,
                                        const EmpiricalModel& model,
                                        const PolicyClassSpec& spec);

// Greedy planning on the empirical MDP (deterministic via the smallest-index
// tie-break).
PlanResult empirical_optimal(const EmpiricalModel& model);

struct LocalClassSample {
  std::vector<Policy> policies;  // always starts with the empirical optimum
  bool budget_exhausted = false;
};

// Rejection-samples up to `count` distinct members of the local class: all
// policies whose values on the empirical MDP stay within eps_opt of the
// empirical optimum at every step. Candidates are action perturbations of
// the empirical optimum at a geometric number of (h,s) sites, optionally
// mixed toward the uniform policy; every candidate is verified against the
// defining inequality before acceptance. Budget: 50 * count draws.
LocalClassSample sample_local_class(const EmpiricalModel& model, double eps_opt,
                                    int count, RngStream rng);

// sup over the supplied local-class members of the step-1 Q error. Each
// policy's membership is re-verified; a violation names the offender.
UniformErrorReport local_uniform_error(const TabularMdp& truth,
                                       const EmpiricalModel& model,
                                       const std::vector<Policy>& policies,
                                       double eps_opt);

// Element-wise V*_1 - V^pi_1 on the true MDP (all entries >= 0 up to
// rounding, since V* dominates).
std::vector<double> learning_suboptimality(const TabularMdp& truth,
                                           const Policy& pi_hat);

// sup over binary reward vectors rho in {0,1}^S of |(p - q) . rho|, in
// closed form: max(sum of positive deviations, sum of negative deviations).
// Always >= 0.5 * ||p - q||_1.
double binary_reward_sup(std::span<const double> p, std::span<const double> q);

struct LowerBoundDemoReport {
  double sup_exhaustive = 0.0;     // exhaustive global sup at step H-1
  double sup_binary_reward = 0.0;  // sup over rows of binary_reward_sup
  double max_half_l1 = 0.0;        // sup over rows of 0.5 * l1 distance
  std::int64_t class_size = 0;
  bool chain_holds = false;
};

// The H=2 reduction: installs the reward family (1, 0, ...) over actions,
// enumerates the global class exhaustively, and checks
//   sup_pi ||Qhat^pi_{H-1} - Q^pi_{H-1}||_inf
//     == sup_{s,a} binary_reward_sup(Phat_{s,a}, P_{s,a})
//     >= sup_{s,a} 0.5 ||Phat_{s,a} - P_{s,a}||_1.
LowerBoundDemoReport lower_bound_demo(const TabularMdp& truth,
                                      const EmpiricalModel& model);

}  // namespace offrl
