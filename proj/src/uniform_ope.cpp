#include "offrl/uniform_ope.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace offrl {

namespace {

// Admission slack so that value-equivalent policies stay members at
// eps_opt = 0 despite rounding.
constexpr double kMembershipSlack = 1e-12;

bool is_local_member(const ValueTable& candidate, const ValueTable& opt,
                     double eps_opt) {
  const int H = opt.horizon;
  for (int h = 0; h < H; ++h) {
    if (max_abs_diff(candidate.value_row(h), opt.value_row(h)) >
        eps_opt + kMembershipSlack)
      return false;
  }
  return true;
}

}  // namespace

std::int64_t deterministic_policy_count(int horizon, int num_states,
                                        int num_actions, std::int64_t cap) {
  std::int64_t count = 1;
  const std::int64_t sites = static_cast<std::int64_t>(horizon) * num_states;
  for (std::int64_t i = 0; i < sites; ++i) {
    if (count > cap / num_actions) return cap + 1;
    count *= num_actions;
  }
  return count;
}

Policy nth_deterministic_policy(std::int64_t index, int horizon, int num_states,
                                int num_actions) {
  std::vector<int> actions(static_cast<std::size_t>(horizon) * num_states);
  for (auto& a : actions) {
    a = static_cast<int>(index % num_actions);
    index /= num_actions;
  }
  return Policy::deterministic(horizon, num_states, num_actions, actions);
}

double policy_q1_error(const TabularMdp& truth, const TabularMdp& model_mdp,
                       const Policy& pi) {
  const ValueTable on_truth = evaluate_policy(truth, pi);
  const ValueTable on_model = evaluate_policy(model_mdp, pi);
  const int S = truth.num_states, A = truth.num_actions;
  double sup = 0.0;
  for (int s = 0; s < S; ++s)
    for (int a = 0; a < A; ++a)
      sup = std::max(sup, std::abs(on_model.qvalue(0, s, a) -
                                   on_truth.qvalue(0, s, a)));
  return sup;
}

UniformErrorReport global_uniform_error(const TabularMdp& truth,
                                        const EmpiricalModel& model,
                                        const PolicyClassSpec& spec) {
  const TabularMdp model_mdp = to_mdp(model);
  const int S = truth.num_states, A = truth.num_actions, H = truth.horizon;
  UniformErrorReport report;
  if (spec.kind == PolicyClassKind::global_exhaustive) {
    const std::int64_t count =
        deterministic_policy_count(H, S, A, spec.enumeration_cap);
    if (count > spec.enumeration_cap)
      throw ValidationError(
          "global class size A^(S*H) exceeds enumeration cap " +
          std::to_string(spec.enumeration_cap) +
          "; use the sampled mode instead");
    const bool record = count <= 4096;
    if (record) report.per_policy_errors.reserve(count);
    for (std::int64_t i = 0; i < count; ++i) {
      const Policy pi = nth_deterministic_policy(i, H, S, A);
      const double err = policy_q1_error(truth, model_mdp, pi);
      if (record) report.per_policy_errors.push_back(err);
      if (i == 0 || err > report.sup_error) {
        report.sup_error = err;
        report.argmax_policy = pi;
      }
    }
    report.class_size_examined = count;
    report.exhaustive = true;
    return report;
  }
  if (spec.kind != PolicyClassKind::global_sampled)
    throw ValidationError("global_uniform_error: spec kind must be global");
  if (spec.sample_count < 1)
    throw ValidationError("sampled mode requires sample_count >= 1");
  Xoshiro256 gen(spec.rng);
  std::vector<int> actions(static_cast<std::size_t>(H) * S);
  for (int i = 0; i < spec.sample_count; ++i) {
    for (auto& a : actions) a = gen.next_int(A);
    const Policy pi = Policy::deterministic(H, S, A, actions);
    const double err = policy_q1_error(truth, model_mdp, pi);
    if (i == 0 || err > report.sup_error) {
      report.sup_error = err;
      report.argmax_policy = pi;
    }
  }
  report.class_size_examined = spec.sample_count;
  report.lower_bound_only = true;
  return report;
}

PlanResult empirical_optimal(const EmpiricalModel& model) {
  return plan_optimal(to_mdp(model));
}

LocalClassSample sample_local_class(const EmpiricalModel& model, double eps_opt,
                                    int count, RngStream rng) {
  if (eps_opt < 0.0) throw ValidationError("eps_opt must be >= 0");
  if (count < 1) throw ValidationError("count must be >= 1");
  const TabularMdp model_mdp = to_mdp(model);
  const PlanResult opt = plan_optimal(model_mdp);
  const int S = model.num_states, A = model.num_actions, H = model.horizon;

  LocalClassSample out;
  out.policies.push_back(opt.policy);
  std::set<std::vector<double>> seen;
  seen.insert(opt.policy.probs);

  Xoshiro256 gen(rng);
  const std::int64_t budget = 50ll * count;
  const int sites = H * S;
  for (std::int64_t draw = 0;
       draw < budget && static_cast<int>(out.policies.size()) < count; ++draw) {
    Policy candidate = opt.policy;
    // Perturb a geometric number of (h,s) sites with random actions.
    int k = 1;
    while (k < sites && gen.next_double() < 0.5) ++k;
    for (int j = 0; j < k; ++j) {
      const int site = gen.next_int(sites);
      candidate.set_action(site / S, site % S, gen.next_int(A));
    }
    // Half of the candidates are additionally mixed toward uniform, so the
    // sample also contains stochastic members of the class.
    if (gen.next_double() < 0.5) {
      const double beta = gen.next_double();
      for (auto& p : candidate.probs) p = (1.0 - beta) * p + beta / A;
    }
    if (!is_local_member(evaluate_policy(model_mdp, candidate), opt.values,
                         eps_opt))
      continue;
    if (seen.insert(candidate.probs).second)
      out.policies.push_back(std::move(candidate));
  }
  out.budget_exhausted = static_cast<int>(out.policies.size()) < count;
  return out;
}

UniformErrorReport local_uniform_error(const TabularMdp& truth,
                                       const EmpiricalModel& model,
                                       const std::vector<Policy>& policies,
                                       double eps_opt) {
  if (policies.empty())
    throw ValidationError("local_uniform_error: empty policy list");
  const TabularMdp model_mdp = to_mdp(model);
  const ValueTable opt_values = plan_optimal(model_mdp).values;
  UniformErrorReport report;
  for (std::size_t i = 0; i < policies.size(); ++i) {
    if (!is_local_member(evaluate_policy(model_mdp, policies[i]), opt_values,
                         eps_opt))
      throw ValidationError("policy " + std::to_string(i) +
                            " violates the local class inequality for eps_opt=" +
                            std::to_string(eps_opt));
    const double err = policy_q1_error(truth, model_mdp, policies[i]);
    if (i == 0 || err > report.sup_error) {
      report.sup_error = err;
      report.argmax_policy = policies[i];
    }
  }
  report.class_size_examined = static_cast<std::int64_t>(policies.size());
  report.lower_bound_only = true;  // a sampled witness set, not all of the class
  report.eps_opt_beyond_theory =
      eps_opt > std::sqrt(static_cast<double>(truth.horizon) / truth.num_states);
  return report;
}

std::vector<double> learning_suboptimality(const TabularMdp& truth,
                                           const Policy& pi_hat) {
  const ValueTable star = plan_optimal(truth).values;
  const ValueTable got = evaluate_policy(truth, pi_hat);
  std::vector<double> out(truth.num_states);
  for (int s = 0; s < truth.num_states; ++s)
    out[s] = star.value(0, s) - got.value(0, s);
  return out;
}

double binary_reward_sup(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size())
    throw ValidationError("binary_reward_sup: length mismatch");
  double pos = 0.0, neg = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = p[i] - q[i];
    if (d > 0.0)
      pos += d;
    else
      neg -= d;
  }
  return std::max(pos, neg);
}

LowerBoundDemoReport lower_bound_demo(const TabularMdp& truth,
                                      const EmpiricalModel& model) {
  if (truth.horizon != 2)
    throw ValidationError("lower_bound_demo requires H = 2");
  if (truth.num_actions < 2)
    throw ValidationError("lower_bound_demo requires A >= 2");
  // Install the binary reward family: action 0 pays 1, the rest pay 0, so a
  // step-H action choice sweeps the reward vector through {0,1}^S.
  std::vector<double> binary_reward(
      static_cast<std::size_t>(truth.num_states) * truth.num_actions, 0.0);
  for (int s = 0; s < truth.num_states; ++s)
    binary_reward[static_cast<std::size_t>(s) * truth.num_actions] = 1.0;
  const TabularMdp truth_br = with_reward(truth, binary_reward);
  EmpiricalModel model_br = model;
  model_br.reward = binary_reward;
  const TabularMdp model_mdp = to_mdp(model_br);

  LowerBoundDemoReport report;
  report.class_size = deterministic_policy_count(
      truth.horizon, truth.num_states, truth.num_actions, 10'000'000);
  for (std::int64_t i = 0; i < report.class_size; ++i) {
    const Policy pi = nth_deterministic_policy(i, truth.horizon,
                                               truth.num_states,
                                               truth.num_actions);
    report.sup_exhaustive = std::max(
        report.sup_exhaustive, policy_q1_error(truth_br, model_mdp, pi));
  }
  for (int s = 0; s < truth.num_states; ++s)
    for (int a = 0; a < truth.num_actions; ++a) {
      const auto est = model.p_hat_row(s, a);
      const auto tru = truth.row(s, a);
      report.sup_binary_reward =
          std::max(report.sup_binary_reward, binary_reward_sup(est, tru));
      double l1 = 0.0;
      for (int s2 = 0; s2 < truth.num_states; ++s2)
        l1 += std::abs(est[s2] - tru[s2]);
      report.max_half_l1 = std::max(report.max_half_l1, 0.5 * l1);
    }
  report.chain_holds =
      report.sup_exhaustive >= report.max_half_l1 - 1e-12 &&
      std::abs(report.sup_exhaustive - report.sup_binary_reward) <= 1e-12;
  return report;
}

}  // namespace offrl
