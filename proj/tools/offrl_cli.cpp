// Command-line front end: instance generation, dataset rollout, plug-in
// fitting, planning, uniform OPE reports, absorbing-identity verification,
// multi-task planning, anchor sweeps, Monte Carlo sweeps and rate fits.
//
// Exit codes: 0 success, 1 validation error, 2 acceptance-check failure.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "offrl/absorbing.hpp"
#include "offrl/anchor.hpp"
#include "offrl/harness.hpp"
#include "offrl/io.hpp"
#include "offrl/multitask.hpp"
#include "offrl/plugin.hpp"
#include "offrl/trajectory.hpp"
#include "offrl/uniform_ope.hpp"

using nlohmann::json;
using namespace offrl;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitCheckFailed = 2;

void emit(const std::optional<std::string>& out_path, const std::string& text) {
  if (out_path)
    write_file(*out_path, text);
  else
    std::cout << text << "\n";
}

json policy_json(const Policy& pi) {
  return json::parse(policy_to_json(pi));
}

// "random:K:seed" or a path to a JSON list of SxA tables.
RewardSet resolve_rewards(const std::string& spec, int S, int A) {
  if (spec.rfind("random:", 0) == 0) {
    const auto rest = spec.substr(7);
    const auto colon = rest.find(':');
    if (colon == std::string::npos)
      throw ValidationError("--rewards random spec must be random:K:seed");
    const int count = std::stoi(rest.substr(0, colon));
    const std::uint64_t seed = std::stoull(rest.substr(colon + 1));
    return RewardSet::random(count, S, A, {seed, 0});
  }
  RewardSet rewards = load_reward_set(spec);
  rewards.validate(S, A);
  return rewards;
}

AnchorInstance resolve_anchor_instance(const std::string& spec) {
  if (spec.rfind("random:", 0) == 0) {
    int vals[5] = {20, 3, 6, 5, 3};  // S, A, K, H, seed
    std::string rest = spec.substr(7);
    for (int i = 0; i < 5; ++i) {
      const auto colon = rest.find(':');
      vals[i] = std::stoi(rest.substr(0, colon));
      if (colon == std::string::npos) {
        if (i != 4)
          throw ValidationError(
              "--instance random spec must be random:S:A:K:H:seed");
        break;
      }
      rest = rest.substr(colon + 1);
    }
    return AnchorInstance::random(vals[0], vals[1], vals[2], vals[3],
                                  {static_cast<std::uint64_t>(vals[4]), 0});
  }
  return load_anchor_instance(spec);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"model-based offline RL workbench"};
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand("generate", "emit a seeded MDP instance");
  InstanceSpec gen_spec;
  std::optional<std::string> gen_out, gen_behavior_out;
  generate->add_option("--family", gen_spec.family,
                       "dirichlet_random | chain | near_uniform");
  generate->add_option("--S", gen_spec.num_states);
  generate->add_option("--A", gen_spec.num_actions);
  generate->add_option("--H", gen_spec.horizon);
  generate->add_option("--seed", gen_spec.seed);
  generate->add_option("--out", gen_out, "MDP JSON path");
  generate->add_option("--behavior-out", gen_behavior_out,
                       "also write the uniform behavior policy");

  // roll
  auto* roll = app.add_subcommand("roll", "sample an offline episode dataset");
  std::string roll_mdp;
  std::optional<std::string> roll_policy, roll_out;
  int roll_n = 1000;
  std::uint64_t roll_seed = 0;
  roll->add_option("--mdp", roll_mdp)->required();
  roll->add_option("--policy", roll_policy, "behavior policy file (default uniform)");
  roll->add_option("-n,--episodes", roll_n);
  roll->add_option("--seed", roll_seed);
  roll->add_option("--out", roll_out);

  // fit
  auto* fit = app.add_subcommand("fit", "fit the plug-in estimator");
  std::string fit_mdp, fit_dataset;
  std::optional<std::string> fit_dump;
  fit->add_option("--mdp", fit_mdp)->required();
  fit->add_option("--dataset", fit_dataset)->required();
  fit->add_option("--dump-model", fit_dump);

  // plan
  auto* plan = app.add_subcommand("plan", "optimal values and greedy policy");
  std::string plan_mdp;
  std::optional<std::string> plan_out;
  plan->add_option("--mdp", plan_mdp)->required();
  plan->add_option("--out", plan_out);

  // ope
  auto* ope = app.add_subcommand("ope", "uniform offline policy evaluation");
  ope->require_subcommand(1);
  std::string ope_mdp, ope_dataset;
  std::optional<std::string> ope_out;
  double ope_eps = 0.5;
  int ope_samples = 200;
  std::int64_t ope_cap = 10'000'000;
  std::uint64_t ope_seed = 0;
  auto add_ope_common = [&](CLI::App* sub) {
    sub->add_option("--mdp", ope_mdp)->required();
    sub->add_option("--dataset", ope_dataset)->required();
    sub->add_option("--out", ope_out);
    sub->add_option("--seed", ope_seed);
  };
  auto* ope_global = ope->add_subcommand("global", "sup over the global class");
  add_ope_common(ope_global);
  ope_global->add_option("--cap", ope_cap, "exhaustive enumeration cap");
  bool ope_sampled = false;
  ope_global->add_flag("--sampled", ope_sampled, "force the sampled mode");
  ope_global->add_option("--samples", ope_samples);
  auto* ope_local = ope->add_subcommand("local", "sup over a local class sample");
  add_ope_common(ope_local);
  ope_local->add_option("--eps-opt", ope_eps);
  ope_local->add_option("--samples", ope_samples);
  auto* ope_demo =
      ope->add_subcommand("lower-bound-demo", "the H=2 l1 reduction identity");
  add_ope_common(ope_demo);

  // absorbing
  auto* absorbing = app.add_subcommand("absorbing", "absorbing-MDP identities");
  absorbing->require_subcommand(1);
  auto* verify = absorbing->add_subcommand("verify", "singleton identity check");
  std::string verify_mdp;
  std::optional<std::string> verify_out, verify_dataset;
  std::optional<int> verify_state;
  bool verify_all = false;
  verify->add_option("--mdp", verify_mdp)->required();
  verify->add_option("--state", verify_state);
  verify->add_flag("--all-states", verify_all);
  verify->add_option("--dataset", verify_dataset,
                     "also verify the fitted empirical MDP and report "
                     "delta_s = max_t |u*_t(fitted) - u*_t(true)|");
  verify->add_option("--out", verify_out);

  // multitask
  auto* multitask = app.add_subcommand(
      "multitask", "plan a reward batch from one exploration dataset");
  std::string mt_dataset, mt_mdp, mt_rewards;
  std::optional<std::string> mt_out;
  multitask->add_option("--dataset", mt_dataset)->required();
  multitask->add_option("--mdp", mt_mdp, "truth, for scoring")->required();
  multitask->add_option("--rewards", mt_rewards, "file or random:K:seed")
      ->required();
  multitask->add_option("--out", mt_out);

  // anchor
  auto* anchor = app.add_subcommand("anchor", "anchor linear MDP experiments");
  anchor->require_subcommand(1);
  auto* anchor_sweep = anchor->add_subcommand("sweep", "N-grid suboptimality sweep");
  std::string anchor_instance_spec;
  std::vector<std::int64_t> anchor_grid = {256, 1024, 4096, 16384};
  int anchor_reps = 50;
  std::uint64_t anchor_seed = 1;
  std::optional<std::string> anchor_out;
  anchor_sweep->add_option("--instance", anchor_instance_spec,
                           "file or random:S:A:K:H:seed")->required();
  anchor_sweep->add_option("--N-grid", anchor_grid)->delimiter(',');
  anchor_sweep->add_option("--replicates", anchor_reps);
  anchor_sweep->add_option("--seed", anchor_seed);
  anchor_sweep->add_option("--out", anchor_out);
  auto* anchor_gen = anchor->add_subcommand("generate", "emit a random instance");
  std::string anchor_gen_spec = "random:20:3:6:5:10";
  std::optional<std::string> anchor_gen_out;
  anchor_gen->add_option("--instance", anchor_gen_spec, "random:S:A:K:H:seed");
  anchor_gen->add_option("--out", anchor_gen_out);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo metric sweep");
  std::string sweep_config;
  std::optional<std::string> sweep_out;
  std::optional<int> sweep_threads;
  std::optional<std::uint64_t> sweep_seed;
  sweep->add_option("--config", sweep_config, "SweepConfig JSON")->required();
  sweep->add_option("--out", sweep_out);
  sweep->add_option("--threads", sweep_threads);
  sweep->add_option("--seed", sweep_seed, "override base_seed");

  // rate
  auto* rate = app.add_subcommand("rate", "log-log slope fit over a sweep CSV");
  std::string rate_in, rate_metric;
  std::optional<std::string> rate_out;
  std::optional<std::vector<double>> rate_expect;
  rate->add_option("--in", rate_in)->required();
  rate->add_option("--metric", rate_metric)->required();
  rate->add_option("--out", rate_out);
  rate->add_option("--expect-slope", rate_expect,
                   "lo,hi bounds; exit 2 if the slope falls outside")
      ->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) {
      const GeneratedInstance inst = generate_instance(gen_spec);
      emit(gen_out, mdp_to_json(inst.mdp));
      if (gen_behavior_out) save_policy(inst.behavior, *gen_behavior_out);
      return kExitOk;
    }
    if (*roll) {
      const TabularMdp mdp = load_mdp(roll_mdp);
      const Policy mu = roll_policy
                            ? load_policy(*roll_policy)
                            : Policy::uniform(mdp.horizon, mdp.num_states,
                                              mdp.num_actions);
      const EpisodeDataset data = roll_episodes(mdp, mu, roll_n, {roll_seed, 0});
      emit(roll_out, dataset_to_text(data));
      return kExitOk;
    }
    if (*fit) {
      const TabularMdp mdp = load_mdp(fit_mdp);
      const EpisodeDataset data = load_dataset(fit_dataset);
      const EmpiricalModel model = fit_plugin(data, mdp);
      json summary;
      summary["episodes"] = model.num_episodes;
      summary["unvisited_rows"] = model.unvisited_rows();
      summary["max_row_l1_vs_truth"] = max_l1_row_error(model, mdp);
      if (fit_dump) save_model(model, *fit_dump);
      std::cout << summary.dump() << "\n";
      return kExitOk;
    }
    if (*plan) {
      const TabularMdp mdp = load_mdp(plan_mdp);
      const PlanResult result = plan_optimal(mdp);
      json doc;
      doc["V1"] = std::vector<double>(result.values.value_row(0).begin(),
                                      result.values.value_row(0).end());
      doc["policy"] = policy_json(result.policy)["probs"];
      emit(plan_out, doc.dump());
      return kExitOk;
    }
    if (*ope) {
      const TabularMdp truth = load_mdp(ope_mdp);
      const EpisodeDataset data = load_dataset(ope_dataset);
      const EmpiricalModel model = fit_plugin(data, truth);
      json report;
      int exit_code = kExitOk;
      if (*ope_global) {
        PolicyClassSpec spec;
        spec.enumeration_cap = ope_cap;
        if (ope_sampled) {
          spec.kind = PolicyClassKind::global_sampled;
          spec.sample_count = ope_samples;
          spec.rng = {ope_seed, 0};
        }
        const UniformErrorReport result = global_uniform_error(truth, model, spec);
        report["mode"] = ope_sampled ? "global_sampled" : "global_exhaustive";
        report["sup_error"] = result.sup_error;
        report["class_size_examined"] = result.class_size_examined;
        report["lower_bound_only"] = result.lower_bound_only;
        report["argmax_policy"] = policy_json(result.argmax_policy)["probs"];
      } else if (*ope_local) {
        const LocalClassSample sample =
            sample_local_class(model, ope_eps, ope_samples, {ope_seed, 0});
        const UniformErrorReport result =
            local_uniform_error(truth, model, sample.policies, ope_eps);
        report["mode"] = "local";
        report["eps_opt"] = ope_eps;
        report["sup_error"] = result.sup_error;
        report["class_size_examined"] = result.class_size_examined;
        report["budget_exhausted"] = sample.budget_exhausted;
        report["lower_bound_only"] = true;
        report["eps_opt_beyond_theory"] = result.eps_opt_beyond_theory;
      } else {
        const LowerBoundDemoReport demo = lower_bound_demo(truth, model);
        report["mode"] = "lower_bound_demo";
        report["sup_exhaustive"] = demo.sup_exhaustive;
        report["sup_binary_reward"] = demo.sup_binary_reward;
        report["max_half_l1"] = demo.max_half_l1;
        report["class_size"] = demo.class_size;
        report["chain_holds"] = demo.chain_holds;
        if (!demo.chain_holds) exit_code = kExitCheckFailed;
      }
      emit(ope_out, report.dump());
      return exit_code;
    }
    if (*absorbing) {
      const TabularMdp mdp = load_mdp(verify_mdp);
      if (!verify_all && !verify_state)
        throw ValidationError("absorbing verify: pass --state or --all-states");
      std::optional<TabularMdp> empirical;
      if (verify_dataset)
        empirical = to_mdp(fit_plugin(load_dataset(*verify_dataset), mdp));
      json states = json::array();
      bool all_pass = true;
      const int lo = verify_all ? 0 : *verify_state;
      const int hi = verify_all ? mdp.num_states - 1 : *verify_state;
      for (int s = lo; s <= hi; ++s) {
        const IdentityReport result = verify_singleton_identity(mdp, s);
        json entry = {{"state", s},
                      {"max_deviation", result.max_deviation},
                      {"pass", result.pass}};
        all_pass = all_pass && result.pass;
        if (empirical) {
          const IdentityReport fitted = verify_singleton_identity(*empirical, s);
          entry["empirical_max_deviation"] = fitted.max_deviation;
          all_pass = all_pass && fitted.pass;
          // Proof-intermediary diagnostic, no acceptance threshold.
          const auto u_true = singleton_u(mdp, s);
          const auto u_fit = singleton_u(*empirical, s);
          double delta_s = 0.0;
          for (int t = 0; t < mdp.horizon; ++t)
            delta_s = std::max(delta_s, std::abs(u_fit[t] - u_true[t]));
          entry["delta_s"] = delta_s;
        }
        states.push_back(std::move(entry));
      }
      json report;
      report["states"] = states;
      report["pass"] = all_pass;
      emit(verify_out, report.dump());
      return all_pass ? kExitOk : kExitCheckFailed;
    }
    if (*multitask) {
      const TabularMdp truth = load_mdp(mt_mdp);
      const EpisodeDataset data = load_dataset(mt_dataset);
      const RewardSet rewards =
          resolve_rewards(mt_rewards, truth.num_states, truth.num_actions);
      const auto results = task_agnostic_learn(data, rewards, truth);
      std::ostringstream csv;
      csv << "task,sup_suboptimality\n";
      char buf[64];
      for (std::size_t k = 0; k < results.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%.17g", results[k].sup_suboptimality);
        csv << k << ',' << buf << '\n';
      }
      emit(mt_out, csv.str());
      return kExitOk;
    }
    if (*anchor) {
      if (*anchor_gen) {
        const AnchorInstance inst = resolve_anchor_instance(anchor_gen_spec);
        emit(anchor_gen_out, anchor_instance_to_json(inst));
        return kExitOk;
      }
      const AnchorInstance inst = resolve_anchor_instance(anchor_instance_spec);
      const AnchorModel lambdas = exact_anchor_model(inst);
      std::vector<SweepRow> rows;
      for (std::size_t g = 0; g < anchor_grid.size(); ++g)
        for (int rep = 0; rep < anchor_reps; ++rep) {
          AnchorModel model = sample_anchors(
              inst, static_cast<int>(anchor_grid[g]),
              {mix_seed(anchor_seed, g, static_cast<std::uint64_t>(rep)), 0});
          model.lambda = lambdas.lambda;
          rows.push_back({"anchor", anchor_grid[g], rep,
                          anchor_plan(model, inst).q1_suboptimality, ""});
        }
      emit(anchor_out, rows_to_csv(rows));
      return kExitOk;
    }
    if (*sweep) {
      SweepConfig cfg = SweepConfig::from_json(read_file(sweep_config));
      if (sweep_threads) cfg.threads = *sweep_threads;
      if (sweep_seed) cfg.base_seed = *sweep_seed;
      emit(sweep_out, rows_to_csv(run_sweep(cfg)));
      return kExitOk;
    }
    if (*rate) {
      const RateFit fit_result = fit_rate(parse_csv(read_file(rate_in)), rate_metric);
      emit(rate_out, rate_fit_to_json(fit_result));
      if (rate_expect) {
        if (rate_expect->size() != 2)
          throw ValidationError("--expect-slope needs exactly lo,hi");
        if (fit_result.slope < (*rate_expect)[0] ||
            fit_result.slope > (*rate_expect)[1]) {
          std::cerr << "slope " << fit_result.slope << " outside ["
                    << (*rate_expect)[0] << ", " << (*rate_expect)[1] << "]\n";
          return kExitCheckFailed;
        }
      }
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}
