#include <doctest.h>

#include <cmath>

#include "offrl/uniform_ope.hpp"
#include "support/oracles.hpp"

using namespace offrl;
namespace ot = offrl::testing;

namespace {

EmpiricalModel exact_model_for(const TabularMdp& mdp) {
  EmpiricalModel model;
  model.num_states = mdp.num_states;
  model.num_actions = mdp.num_actions;
  model.horizon = mdp.horizon;
  model.num_episodes = 1;
  model.visit_counts.assign(
      static_cast<std::size_t>(mdp.num_states) * mdp.num_actions, 1);
  model.transition_counts.assign(mdp.transition.size(), 0);
  model.p_hat = mdp.transition;
  model.d1_hat = mdp.initial;
  model.reward = mdp.reward;
  return model;
}

EmpiricalModel fitted_model(const TabularMdp& mdp, int n, std::uint64_t seed) {
  const Policy mu =
      Policy::uniform(mdp.horizon, mdp.num_states, mdp.num_actions);
  return fit_plugin(roll_episodes(mdp, mu, n, {seed, 0}), mdp);
}

}  // namespace

TEST_CASE("global uniform error is zero for the exact model") {
  Xoshiro256 gen({51, 0});
  const TabularMdp mdp = ot::random_mdp(2, 2, 2, gen);
  const UniformErrorReport report =
      global_uniform_error(mdp, exact_model_for(mdp), {});
  CHECK(report.sup_error == 0.0);
  CHECK(report.exhaustive);
  CHECK(report.class_size_examined == 16);
}

TEST_CASE("exhaustive global error equals the per-policy brute force max") {
  Xoshiro256 gen({52, 0});
  const TabularMdp mdp = ot::random_mdp(2, 2, 2, gen);
  const EmpiricalModel model = fitted_model(mdp, 12, 5);
  const UniformErrorReport report = global_uniform_error(mdp, model, {});
  const TabularMdp model_mdp = to_mdp(model);
  double expected = 0.0;
  for (std::int64_t i = 0; i < 16; ++i) {
    const Policy pi = nth_deterministic_policy(i, 2, 2, 2);
    expected = std::max(expected, policy_q1_error(mdp, model_mdp, pi));
  }
  CHECK(report.sup_error == expected);
  CHECK(report.per_policy_errors.size() == 16);
  for (const double e : report.per_policy_errors) CHECK(report.sup_error >= e);
  // The recorded argmax policy reproduces the supremum.
  CHECK(policy_q1_error(mdp, model_mdp, report.argmax_policy) == report.sup_error);
}

TEST_CASE("sampled global error lower-bounds the exhaustive one") {
  Xoshiro256 gen({53, 0});
  const TabularMdp mdp = ot::random_mdp(2, 2, 2, gen);
  const EmpiricalModel model = fitted_model(mdp, 8, 6);
  const UniformErrorReport full = global_uniform_error(mdp, model, {});
  PolicyClassSpec sampled;
  sampled.kind = PolicyClassKind::global_sampled;
  sampled.sample_count = 5;
  sampled.rng = {17, 0};
  const UniformErrorReport sub = global_uniform_error(mdp, model, sampled);
  CHECK(sub.lower_bound_only);
  CHECK(sub.sup_error <= full.sup_error);
}

TEST_CASE("subset monotonicity of the sampled supremum") {
  Xoshiro256 gen({54, 0});
  const TabularMdp mdp = ot::random_mdp(3, 2, 3, gen);
  const EmpiricalModel model = fitted_model(mdp, 20, 9);
  double previous = 0.0;
  for (int m : {1, 4, 16, 64}) {
    PolicyClassSpec spec;
    spec.kind = PolicyClassKind::global_sampled;
    spec.sample_count = m;
    spec.rng = {99, 0};  // same stream, so smaller samples are prefixes
    const double sup = global_uniform_error(mdp, model, spec).sup_error;
    CHECK(sup >= previous);
    previous = sup;
  }
}

TEST_CASE("exhaustive mode rejects classes above the cap") {
  Xoshiro256 gen({55, 0});
  const TabularMdp mdp = ot::random_mdp(3, 2, 4, gen);
  const EmpiricalModel model = fitted_model(mdp, 10, 2);
  PolicyClassSpec spec;
  spec.enumeration_cap = 100;  // class size 2^12
  CHECK_THROWS_WITH_AS(global_uniform_error(mdp, model, spec),
                       doctest::Contains("sampled mode"), ValidationError);
}

TEST_CASE("empirical optimum dominates random policies on the empirical MDP") {
  Xoshiro256 gen({56, 0});
  const TabularMdp mdp = ot::random_mdp(3, 2, 4, gen);
  const EmpiricalModel model = fitted_model(mdp, 60, 13);
  const PlanResult opt = empirical_optimal(model);
  const TabularMdp model_mdp = to_mdp(model);
  CHECK(max_abs_diff(evaluate_policy(model_mdp, opt.policy).v, opt.values.v) <
        1e-12);
  for (int k = 0; k < 500; ++k) {
    const Policy sigma = ot::random_stochastic_policy(4, 3, 2, gen);
    const ValueTable got = evaluate_policy(model_mdp, sigma);
    for (int h = 0; h < 4; ++h)
      for (int s = 0; s < 3; ++s)
        CHECK(opt.values.value(h, s) >= got.value(h, s) - 1e-12);
  }
}

TEST_CASE("empirical optimum with the exact model achieves V*") {
  Xoshiro256 gen({57, 0});
  const TabularMdp mdp = ot::random_mdp(3, 2, 3, gen);
  const PlanResult opt = empirical_optimal(exact_model_for(mdp));
  CHECK(max_abs_diff(evaluate_policy(mdp, opt.policy).v,
                     plan_optimal(mdp).values.v) < 1e-12);
}

TEST_CASE("local class sampling: zero radius keeps only value-equivalents") {
  Xoshiro256 gen({58, 0});
  const TabularMdp mdp = ot::random_mdp(3, 2, 3, gen);
  const EmpiricalModel model = fitted_model(mdp, 40, 3);
  const TabularMdp model_mdp = to_mdp(model);
  const ValueTable opt_values = plan_optimal(model_mdp).values;
  const LocalClassSample sample = sample_local_class(model, 0.0, 20, {7, 0});
  CHECK(!sample.policies.empty());
  CHECK(sample.policies.front() == empirical_optimal(model).policy);
  for (const auto& pi : sample.policies) {
    const ValueTable values = evaluate_policy(model_mdp, pi);
    for (int h = 0; h < 3; ++h)
      CHECK(max_abs_diff(values.value_row(h), opt_values.value_row(h)) <= 1e-12);
  }
}

TEST_CASE("local class sampling: members verify and the max radius accepts all") {
  Xoshiro256 gen({59, 0});
  const TabularMdp mdp = ot::random_mdp(3, 2, 4, gen);
  const EmpiricalModel model = fitted_model(mdp, 50, 4);
  const double eps_max = mdp.horizon;  // values live in [0, H]
  const LocalClassSample sample = sample_local_class(model, eps_max, 40, {8, 0});
  CHECK_FALSE(sample.budget_exhausted);
  CHECK(static_cast<int>(sample.policies.size()) == 40);
  // Re-verification is idempotent: local_uniform_error accepts the batch.
  CHECK_NOTHROW(local_uniform_error(mdp, model, sample.policies, eps_max));
}

TEST_CASE("local class radius beyond sqrt(H/S) is flagged, not rejected") {
  Xoshiro256 gen({67, 0});
  const TabularMdp mdp = ot::random_mdp(4, 2, 3, gen);  // sqrt(H/S) ~ 0.87
  const EmpiricalModel model = fitted_model(mdp, 30, 8);
  const Policy pi_star = empirical_optimal(model).policy;
  CHECK_FALSE(local_uniform_error(mdp, model, {pi_star}, 0.5).eps_opt_beyond_theory);
  CHECK(local_uniform_error(mdp, model, {pi_star}, 1.0).eps_opt_beyond_theory);
}

TEST_CASE("local uniform error: singleton list and exact model") {
  Xoshiro256 gen({60, 0});
  const TabularMdp mdp = ot::random_mdp(3, 2, 3, gen);
  const EmpiricalModel model = fitted_model(mdp, 30, 5);
  const Policy pi_star = empirical_optimal(model).policy;
  const UniformErrorReport single =
      local_uniform_error(mdp, model, {pi_star}, 0.0);
  CHECK(single.sup_error ==
        policy_q1_error(mdp, to_mdp(model), pi_star));
  const EmpiricalModel exact = exact_model_for(mdp);
  const Policy exact_opt = empirical_optimal(exact).policy;
  CHECK(local_uniform_error(mdp, exact, {exact_opt}, 0.0).sup_error == 0.0);
}

TEST_CASE("local uniform error rejects non-members by index") {
  Xoshiro256 gen({61, 0});
  TabularMdp mdp = ot::random_mdp(3, 2, 3, gen);
  // Spread the rewards so some policy sits far from the optimum.
  for (int s = 0; s < 3; ++s)
    for (int a = 0; a < 2; ++a)
      mdp.reward[static_cast<std::size_t>(s) * 2 + a] = a == 0 ? 1.0 : 0.0;
  const EmpiricalModel model = fitted_model(mdp, 40, 6);
  const Policy worst = Policy::deterministic(3, 3, 2, std::vector<int>(9, 1));
  CHECK_THROWS_WITH_AS(
      local_uniform_error(mdp, model, {empirical_optimal(model).policy, worst},
                          1e-6),
      doctest::Contains("policy 1"), ValidationError);
}

TEST_CASE("learning_suboptimality: optimal policy and worst bandit arm") {
  Xoshiro256 gen({62, 0});
  const TabularMdp mdp = ot::random_mdp(3, 2, 4, gen);
  const auto zero = learning_suboptimality(mdp, plan_optimal(mdp).policy);
  for (const double v : zero) CHECK(std::abs(v) < 1e-12);

  TabularMdp bandit;
  bandit.num_states = 1;
  bandit.num_actions = 2;
  bandit.horizon = 1;
  bandit.transition = {1, 1};
  bandit.reward = {1, 0};
  bandit.initial = {1};
  bandit.validate();
  const Policy pick_worst = Policy::deterministic(1, 1, 2, std::vector<int>{1});
  CHECK(learning_suboptimality(bandit, pick_worst)[0] == 1.0);
}

TEST_CASE("binary_reward_sup: closed form against brute force") {
  const std::vector<double> p = {0.7, 0.3};
  const std::vector<double> q = {0.5, 0.5};
  CHECK(binary_reward_sup(p, q) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(binary_reward_sup(p, p) == 0.0);
  CHECK(ot::brute_force_binary_sup(p, q) == doctest::Approx(0.2).epsilon(1e-15));

  Xoshiro256 gen({63, 0});
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + gen.next_int(11);  // up to S = 12
    const auto a = ot::random_distribution(n, gen);
    const auto b = ot::random_distribution(n, gen);
    const double closed = binary_reward_sup(a, b);
    CHECK(std::abs(closed - ot::brute_force_binary_sup(a, b)) < 1e-12);
    double l1 = 0.0;
    for (int i = 0; i < n; ++i) l1 += std::abs(a[i] - b[i]);
    CHECK(closed >= 0.5 * l1 - 1e-12);
  }
}

TEST_CASE("lower_bound_demo verifies the reduction chain") {
  Xoshiro256 gen({64, 0});
  const TabularMdp mdp = ot::random_mdp(2, 2, 2, gen);
  SUBCASE("exact model gives zero on both sides") {
    const LowerBoundDemoReport report =
        lower_bound_demo(mdp, exact_model_for(mdp));
    CHECK(report.sup_exhaustive == 0.0);
    CHECK(report.max_half_l1 == 0.0);
    CHECK(report.chain_holds);
  }
  SUBCASE("hand-set empirical rows") {
    EmpiricalModel model = exact_model_for(mdp);
    model.p_hat = {0.9, 0.1, 0.2, 0.8, 0.6, 0.4, 0.3, 0.7};
    const LowerBoundDemoReport report = lower_bound_demo(mdp, model);
    CHECK(report.chain_holds);
    CHECK(report.sup_exhaustive >= report.max_half_l1 - 1e-15);
    CHECK(report.sup_exhaustive ==
          doctest::Approx(report.sup_binary_reward).epsilon(1e-12));
    // For distribution pairs the binary sup equals half the l1 distance.
    CHECK(report.sup_binary_reward ==
          doctest::Approx(report.max_half_l1).epsilon(1e-12));
  }
  SUBCASE("fitted models satisfy the chain across replicates") {
    for (std::uint64_t rep = 0; rep < 10; ++rep) {
      const EmpiricalModel model = fitted_model(mdp, 16, 100 + rep);
      CHECK(lower_bound_demo(mdp, model).chain_holds);
    }
  }
}

TEST_CASE("lower_bound_demo rejects horizons other than 2") {
  Xoshiro256 gen({65, 0});
  const TabularMdp mdp = ot::random_mdp(2, 2, 3, gen);
  CHECK_THROWS_WITH_AS(lower_bound_demo(mdp, exact_model_for(mdp)),
                       doctest::Contains("H = 2"), ValidationError);
}

TEST_CASE("sandwich: suboptimality is within twice the exhaustive sup error") {
  Xoshiro256 gen({66, 0});
  const TabularMdp mdp = ot::random_mdp(2, 2, 3, gen);
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    const EmpiricalModel model = fitted_model(mdp, 24, 300 + rep);
    const double sup = global_uniform_error(mdp, model, {}).sup_error;
    const Policy pi_hat = empirical_optimal(model).policy;
    double worst = 0.0;
    for (const double v : learning_suboptimality(mdp, pi_hat))
      worst = std::max(worst, v);
    CHECK(worst >= -1e-12);
    CHECK(worst <= 2.0 * sup + 1e-12);
  }
}
