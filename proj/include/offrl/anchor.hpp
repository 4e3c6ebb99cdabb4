#pragma once

#include <string>
#include <utility>
#include <vector>

#include "offrl/mdp.hpp"
#include "offrl/rng.hpp"

namespace offrl {

// Linear MDP whose transition factors as P(s'|s,a) = sum_k phi_k(s,a) psi_k(s'),
// with a set of anchor (s,a) pairs whose features convexly span every other
// feature vector. psi is ground truth held for simulation only; estimation
// touches the model solely through samples drawn at the anchors.
struct AnchorInstance {
  int num_states = 0;
  int num_actions = 0;
  int feature_dim = 0;
  int horizon = 0;
  std::vector<double> phi;     // [(s*A + a)][k]
  std::vector<double> psi;     // [k][s']
  std::vector<std::pair<int, int>> anchors;
  std::vector<double> reward;  // [s][a]

  std::span<const double> feature(int s, int a) const {
    return {phi.data() + (static_cast<std::size_t>(s) * num_actions + a) *
                             static_cast<std::size_t>(feature_dim),
            static_cast<std::size_t>(feature_dim)};
  }
  // The exact row sum_k phi_k(s,a) psi_k(.).
  std::vector<double> transition_row(int s, int a) const;
  double r(int s, int a) const {
    return reward[static_cast<std::size_t>(s) * num_actions + a];
  }

  // Checks that every row is a valid distribution (within 1e-10) and every
  // feature vector is representable over the anchors (residual <= 1e-9).
  void validate() const;

  // Seeded simulation instance: anchor features are perturbed basis vectors,
  // every other feature is a random convex combination of them, and psi rows
  // are random distributions, so the anchor property holds by construction.
  static AnchorInstance random(int num_states, int num_actions, int num_anchors,
                               int horizon, RngStream rng);
};

std::string anchor_instance_to_json(const AnchorInstance& instance);
AnchorInstance parse_anchor_instance(const std::string& json_text);
AnchorInstance load_anchor_instance(const std::string& path);
void save_anchor_instance(const AnchorInstance& instance, const std::string& path);

// Simplex-constrained least squares: the lambda >= 0, sum(lambda) = 1
// minimizing ||sum_k lambda_k anchor_phi_k - target_phi||. Solved by an
// active-set scheme over the nonnegativity constraints with exact KKT
// subproblem solves. Throws when the best residual exceeds residual_tol
// (the anchor assumption fails for this pair).
std::vector<double> solve_lambda(const std::vector<std::vector<double>>& anchor_phis,
                                 std::span<const double> target_phi,
                                 double residual_tol = 1e-9);

// Empirical anchor rows plus the coefficient cache mapping each (s,a) onto
// the anchors. lambda is empty until resolved.
struct AnchorModel {
  int num_samples = 0;
  std::vector<double> anchor_rows;  // [k][s']
  std::vector<double> lambda;       // [(s*A + a)][k], empty until resolved

  std::span<const double> row(int k, int num_states) const {
    return {anchor_rows.data() + static_cast<std::size_t>(k) * num_states,
            static_cast<std::size_t>(num_states)};
  }
};

// Draws N next-states from each anchor's true row; anchor k uses stream
// (rng.base_seed, rng.stream_index + k). Rows are count/N frequencies.
AnchorModel sample_anchors(const AnchorInstance& instance, int num_samples,
                           RngStream rng);

// Solves lambda for every (s,a) against the anchor features and stores the
// cache in the model. Deterministic, so repeat calls rebuild identical maps.
void resolve_lambdas(AnchorModel& model, const AnchorInstance& instance);

// sample_anchors + resolve_lambdas.
AnchorModel make_anchor_model(const AnchorInstance& instance, int num_samples,
                              RngStream rng);
// Model whose anchor rows are the exact transition rows (the N -> infinity
// limit), for zero-error checks.
AnchorModel exact_anchor_model(const AnchorInstance& instance);

// P_hat(.|s,a) = sum_k lambda_k^{s,a} P_hat_K(.|anchor_k). Nonnegative and
// sums to 1 within 1e-9 because both factors are simplex-valued.
std::vector<double> plugin_transition(const AnchorModel& model,
                                      const AnchorInstance& instance, int s,
                                      int a);

struct AnchorPlanReport {
  Policy policy;
  double q1_suboptimality = 0.0;  // ||Q*_1 - Q^{pi_hat}_1||_inf on the truth
  double v1_suboptimality = 0.0;
};

// Builds the empirical tabular MDP from plugin rows, plans greedily on it
// and scores the resulting policy against the exact instance.
AnchorPlanReport anchor_plan(const AnchorModel& model,
                             const AnchorInstance& instance);

struct RecoverReport {
  double lhs = 0.0;  // sum_k lambda_k sqrt(Var_{P_k}(V))
  double rhs = 0.0;  // sqrt(Var_{P_{s,a}}(V))
  bool pass = false;
};

// Checks the anchor-weighted root-variance domination for one (s,a) and a
// value vector V, with lambda resolved against the true anchor rows.
RecoverReport recover_lemma_check(const AnchorInstance& instance, int s, int a,
                                  std::span<const double> values);

}  // namespace offrl
