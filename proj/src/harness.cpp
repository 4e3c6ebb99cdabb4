#include "offrl/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "offrl/io.hpp"
#include "offrl/multitask.hpp"
#include "offrl/plugin.hpp"
#include "offrl/trajectory.hpp"
#include "offrl/uniform_ope.hpp"

namespace offrl {

using nlohmann::json;

namespace {

// Stream tags keep the per-cell dataset, local-class, task and reward-free
// draws on disjoint streams.
enum StreamTag : std::uint64_t {
  kTagDataset = 1,
  kTagLocalClass = 2,
  kTagTasks = 3,
  kTagRewardFree = 4,
  kTagAnchor = 5,
  kTagGlobalSample = 6,
};

std::vector<double> random_distribution(int size, Xoshiro256& gen) {
  std::vector<double> out(size);
  double sum = 0.0;
  for (auto& v : out) {
    v = -std::log(1.0 - gen.next_double());
    sum += v;
  }
  for (auto& v : out) v /= sum;
  return out;
}

// Dirichlet(alpha) row via Gamma(alpha) draws (Marsaglia-Tsang with the
// alpha < 1 boost). Small alpha gives heavy-tailed rows, which spreads the
// state occupancies across scales.
double gamma_draw(double alpha, Xoshiro256& gen) {
  if (alpha < 1.0) {
    const double u = gen.next_double();
    return gamma_draw(alpha + 1.0, gen) * std::pow(u, 1.0 / alpha);
  }
  const double d = alpha - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    // Box-Muller normal from two uniforms.
    const double u1 = 1.0 - gen.next_double();
    const double u2 = gen.next_double();
    const double x =
        std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    const double v = (1.0 + c * x) * (1.0 + c * x) * (1.0 + c * x);
    if (v <= 0.0) continue;
    const double u = 1.0 - gen.next_double();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v))
      return d * v;
  }
}

std::vector<double> dirichlet_row(int size, double alpha, Xoshiro256& gen) {
  std::vector<double> out(size);
  double sum = 0.0;
  for (auto& v : out) {
    v = gamma_draw(alpha, gen);
    sum += v;
  }
  for (auto& v : out) v /= sum;
  return out;
}

std::vector<double> perturbed_uniform(int size, double scale, Xoshiro256& gen) {
  std::vector<double> out(size);
  double sum = 0.0;
  for (auto& v : out) {
    v = 1.0 + scale * (2.0 * gen.next_double() - 1.0);
    sum += v;
  }
  for (auto& v : out) v /= sum;
  return out;
}

}  // namespace

GeneratedInstance generate_instance(const InstanceSpec& spec) {
  const int S = spec.num_states, A = spec.num_actions, H = spec.horizon;
  if (S <= 0 || A <= 0 || H <= 0)
    throw ValidationError("instance spec: S, A, H must be positive");
  TabularMdp mdp;
  mdp.num_states = S;
  mdp.num_actions = A;
  mdp.horizon = H;
  mdp.transition.resize(static_cast<std::size_t>(S) * A * S);
  mdp.reward.resize(static_cast<std::size_t>(S) * A);
  Xoshiro256 gen({spec.seed, 0});
  if (spec.family == "dirichlet_random") {
    // Dirichlet rows modulated by a geometric tier profile spanning [1, 0.02]
    // across the states, so the occupancies (and with them the per-row
    // estimation noise) cover several scales inside one instance. Each
    // state's action gap then targets its own noise window, giving the
    // sweep near-ties at every scale its n grid can resolve.
    std::vector<double> tier(S);
    for (int s = 0; s < S; ++s)
      tier[s] = S > 1 ? std::pow(0.02, static_cast<double>(s) / (S - 1)) : 1.0;
    // blend < 1 flattens the tier modulation, spreading the row across
    // states with diverse values (larger backup variance).
    const auto tiered_row = [&](double alpha, double blend) {
      auto row = dirichlet_row(S, alpha, gen);
      double sum = 0.0;
      for (int s = 0; s < S; ++s) {
        row[s] = (0.2 + row[s]) * (blend * tier[s] + (1.0 - blend));
        sum += row[s];
      }
      for (auto& v : row) v /= sum;
      return row;
    };
    for (int s = 0; s < S; ++s) {
      // Action gap sized so state s settles its empirical argmax about one
      // grid step later than state s-1: per-row noise grows like
      // tier^{-1/2} while the target death point advances like 2^{-s}.
      // Rarely visited states keep flatter outgoing rows so their backups
      // stay noisy deep into the grid.
      const double noise_scale =
          0.035 / std::sqrt(tier[s]) * std::pow(0.5, s);
      const double jitter = std::exp(0.35 * (gen.next_double() - 0.5));
      const double eps = std::clamp(noise_scale * jitter, 1e-4, 0.6);
      const double blend = s < (S + 1) / 2 ? 1.0 : 0.35;
      const auto base_row = tiered_row(0.5, blend);
      const double base_reward = 0.2 + 0.45 * gen.next_double();
      for (int a = 0; a < A; ++a) {
        const auto variation = tiered_row(0.5, blend);
        double* out = mdp.transition.data() + mdp.row_offset(s, a);
        for (int s2 = 0; s2 < S; ++s2)
          out[s2] = (1.0 - eps) * base_row[s2] + eps * variation[s2];
        mdp.reward[static_cast<std::size_t>(s) * A + a] = std::clamp(
            base_reward + eps * (gen.next_double() - 0.5), 0.0, 1.0);
      }
    }
    mdp.initial = tiered_row(0.5, 1.0);
  } else if (spec.family == "chain") {
    // Deterministic ring: every action advances to the next state; action 0
    // pays 1 everywhere, so V*_h = H - h + 1 in closed form.
    std::fill(mdp.transition.begin(), mdp.transition.end(), 0.0);
    for (int s = 0; s < S; ++s)
      for (int a = 0; a < A; ++a)
        mdp.transition[mdp.row_offset(s, a) + (s + 1) % S] = 1.0;
    for (int s = 0; s < S; ++s)
      for (int a = 0; a < A; ++a)
        mdp.reward[static_cast<std::size_t>(s) * A + a] = a == 0 ? 1.0 : 0.5;
    mdp.initial.assign(S, 0.0);
    mdp.initial[0] = 1.0;
  } else if (spec.family == "near_uniform") {
    for (int s = 0; s < S; ++s)
      for (int a = 0; a < A; ++a) {
        const auto row = perturbed_uniform(S, 0.4, gen);
        std::copy(row.begin(), row.end(),
                  mdp.transition.begin() + mdp.row_offset(s, a));
      }
    for (auto& rv : mdp.reward) rv = gen.next_double();
    mdp.initial = perturbed_uniform(S, 0.25, gen);
  } else {
    throw ValidationError("unknown instance family '" + spec.family + "'");
  }
  mdp.validate();
  return {std::move(mdp), Policy::uniform(H, S, A)};
}

void SweepConfig::validate() const {
  if (n_grid.empty()) throw ValidationError("sweep config: empty n_grid");
  for (std::size_t i = 0; i + 1 < n_grid.size(); ++i)
    if (n_grid[i] >= n_grid[i + 1])
      throw ValidationError("sweep config: n_grid must be strictly increasing");
  if (n_grid.front() < 1) throw ValidationError("sweep config: n must be >= 1");
  if (replicates < 1) throw ValidationError("sweep config: replicates must be >= 1");
  if (metrics.empty()) throw ValidationError("sweep config: no metrics requested");
  if (eps_opt < 0.0) throw ValidationError("sweep config: eps_opt must be >= 0");
  const std::set<std::string> known = {
      "global_ope",    "local_ope",   "suboptimality",
      "l1_row",        "task_agnostic", "reward_free",
      "reward_free_mean", "lower_bound_demo", "anchor"};
  for (const auto& m : metrics)
    if (!known.count(m))
      throw ValidationError("sweep config: unknown metric '" + m + "'");
}

SweepConfig SweepConfig::from_json(const std::string& json_text) {
  json doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded()) throw ValidationError("sweep config: not valid JSON");
  SweepConfig cfg;
  try {
    if (doc.contains("mdp_file")) cfg.mdp_file = doc["mdp_file"].get<std::string>();
    if (doc.contains("mdp")) {
      const json& g = doc["mdp"];
      if (g.contains("family")) cfg.generator.family = g["family"].get<std::string>();
      if (g.contains("S")) cfg.generator.num_states = g["S"].get<int>();
      if (g.contains("A")) cfg.generator.num_actions = g["A"].get<int>();
      if (g.contains("H")) cfg.generator.horizon = g["H"].get<int>();
      if (g.contains("seed")) cfg.generator.seed = g["seed"].get<std::uint64_t>();
    }
    if (doc.contains("behavior") && doc["behavior"].is_object())
      cfg.behavior_file = doc["behavior"].at("file").get<std::string>();
    if (doc.contains("n_grid"))
      cfg.n_grid = doc["n_grid"].get<std::vector<std::int64_t>>();
    if (doc.contains("h_grid")) cfg.h_grid = doc["h_grid"].get<std::vector<int>>();
    if (doc.contains("replicates")) cfg.replicates = doc["replicates"].get<int>();
    if (doc.contains("metrics"))
      cfg.metrics = doc["metrics"].get<std::vector<std::string>>();
    if (doc.contains("eps_opt")) cfg.eps_opt = doc["eps_opt"].get<double>();
    if (doc.contains("base_seed"))
      cfg.base_seed = doc["base_seed"].get<std::uint64_t>();
    if (doc.contains("threads")) cfg.threads = doc["threads"].get<int>();
    if (doc.contains("local_samples"))
      cfg.local_samples = doc["local_samples"].get<int>();
    if (doc.contains("global_samples"))
      cfg.global_samples = doc["global_samples"].get<int>();
    if (doc.contains("enumeration_cap"))
      cfg.enumeration_cap = doc["enumeration_cap"].get<std::int64_t>();
    if (doc.contains("task_count")) cfg.task_count = doc["task_count"].get<int>();
    if (doc.contains("reward_free_rewards"))
      cfg.reward_free_rewards = doc["reward_free_rewards"].get<int>();
    if (doc.contains("anchor")) {
      const json& a = doc["anchor"];
      if (a.contains("num_states")) cfg.anchor.num_states = a["num_states"].get<int>();
      if (a.contains("num_actions"))
        cfg.anchor.num_actions = a["num_actions"].get<int>();
      if (a.contains("num_anchors"))
        cfg.anchor.num_anchors = a["num_anchors"].get<int>();
      if (a.contains("H")) cfg.anchor.horizon = a["H"].get<int>();
      if (a.contains("seed")) cfg.anchor.seed = a["seed"].get<std::uint64_t>();
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("sweep config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

std::string SweepConfig::to_json() const {
  json doc;
  if (mdp_file) doc["mdp_file"] = *mdp_file;
  doc["mdp"] = {{"family", generator.family},
                {"S", generator.num_states},
                {"A", generator.num_actions},
                {"H", generator.horizon},
                {"seed", generator.seed}};
  if (behavior_file) doc["behavior"] = {{"file", *behavior_file}};
  doc["n_grid"] = n_grid;
  if (!h_grid.empty()) doc["h_grid"] = h_grid;
  doc["replicates"] = replicates;
  doc["metrics"] = metrics;
  doc["eps_opt"] = eps_opt;
  doc["base_seed"] = base_seed;
  doc["threads"] = threads;
  doc["local_samples"] = local_samples;
  doc["global_samples"] = global_samples;
  doc["enumeration_cap"] = enumeration_cap;
  doc["task_count"] = task_count;
  doc["reward_free_rewards"] = reward_free_rewards;
  doc["anchor"] = {{"num_states", anchor.num_states},
                   {"num_actions", anchor.num_actions},
                   {"num_anchors", anchor.num_anchors},
                   {"H", anchor.horizon},
                   {"seed", anchor.seed}};
  return doc.dump();
}

namespace {

struct CellResult {
  // One (value, flag) slot per metric, in config order.
  std::vector<std::pair<double, std::string>> per_metric;
};

struct SweepContext {
  const SweepConfig* config = nullptr;
  TabularMdp truth;
  Policy behavior;
  ValueTable truth_star;      // optimal values on the truth
  bool has_anchor = false;
  AnchorInstance anchor_instance;
  AnchorModel anchor_lambdas;  // lambda cache; rows are refreshed per cell
};

double metric_value(const SweepContext& ctx, const std::string& metric,
                    std::int64_t n_index, std::int64_t n, int replicate,
                    const EpisodeDataset& data, const EmpiricalModel& model,
                    std::string& flag) {
  const SweepConfig& cfg = *ctx.config;
  const std::uint64_t cell_seed =
      mix_seed(cfg.base_seed, static_cast<std::uint64_t>(n_index),
               static_cast<std::uint64_t>(replicate));
  if (metric == "global_ope") {
    PolicyClassSpec spec;
    const std::int64_t count =
        deterministic_policy_count(ctx.truth.horizon, ctx.truth.num_states,
                                   ctx.truth.num_actions, cfg.enumeration_cap);
    if (count > cfg.enumeration_cap) {
      spec.kind = PolicyClassKind::global_sampled;
      spec.sample_count = cfg.global_samples;
      spec.rng = {mix_seed(cell_seed, kTagGlobalSample), 0};
      flag = "lower_bound";
    } else {
      spec.kind = PolicyClassKind::global_exhaustive;
      spec.enumeration_cap = cfg.enumeration_cap;
    }
    return global_uniform_error(ctx.truth, model, spec).sup_error;
  }
  if (metric == "local_ope") {
    const LocalClassSample sample =
        sample_local_class(model, cfg.eps_opt, cfg.local_samples,
                           {mix_seed(cell_seed, kTagLocalClass), 0});
    if (sample.budget_exhausted) flag = "budget_exhausted";
    return local_uniform_error(ctx.truth, model, sample.policies, cfg.eps_opt)
        .sup_error;
  }
  if (metric == "suboptimality") {
    const Policy pi_hat = empirical_optimal(model).policy;
    const ValueTable got = evaluate_policy(ctx.truth, pi_hat);
    double sup = 0.0;
    for (int s = 0; s < ctx.truth.num_states; ++s)
      sup = std::max(sup, ctx.truth_star.value(0, s) - got.value(0, s));
    return sup;
  }
  if (metric == "l1_row") return max_l1_row_error(model, ctx.truth);
  if (metric == "task_agnostic") {
    const RewardSet tasks =
        RewardSet::random(cfg.task_count, ctx.truth.num_states,
                          ctx.truth.num_actions, {mix_seed(cell_seed, kTagTasks), 0});
    double worst = 0.0;
    for (const auto& task : task_agnostic_learn(data, tasks, ctx.truth))
      worst = std::max(worst, task.sup_suboptimality);
    return worst;
  }
  if (metric == "reward_free" || metric == "reward_free_mean") {
    // The max over the batch is what the reward-free guarantee bounds; the
    // mean is reported alongside as a diagnostic.
    const RewardSet batch = RewardSet::random(
        cfg.reward_free_rewards, ctx.truth.num_states, ctx.truth.num_actions,
        {mix_seed(cell_seed, kTagRewardFree), 0});
    double worst = 0.0, total = 0.0;
    for (const auto& reward : batch.rewards) {
      const Policy pi = reward_free_plan(model, reward);
      const TabularMdp task_truth = with_reward(ctx.truth, reward);
      double task_worst = 0.0;
      for (const double v : learning_suboptimality(task_truth, pi))
        task_worst = std::max(task_worst, v);
      worst = std::max(worst, task_worst);
      total += task_worst;
    }
    return metric == "reward_free" ? worst : total / batch.size();
  }
  if (metric == "lower_bound_demo")
    return lower_bound_demo(ctx.truth, model).sup_exhaustive;
  if (metric == "anchor") {
    AnchorModel anchor_model = sample_anchors(
        ctx.anchor_instance, static_cast<int>(n),
        {mix_seed(cell_seed, kTagAnchor), 0});
    anchor_model.lambda = ctx.anchor_lambdas.lambda;
    return anchor_plan(anchor_model, ctx.anchor_instance).q1_suboptimality;
  }
  throw ValidationError("unknown metric '" + metric + "'");
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
  config.validate();
  if (!config.h_grid.empty()) {
    if (config.mdp_file)
      throw ValidationError("h_grid sweeps need a generator source");
    std::vector<SweepRow> all;
    for (const int h : config.h_grid) {
      SweepConfig inner = config;
      inner.h_grid.clear();
      inner.generator.horizon = h;
      for (SweepRow row : run_sweep(inner)) {
        row.flag = row.flag.empty() ? "H=" + std::to_string(h)
                                    : "H=" + std::to_string(h) + ";" + row.flag;
        all.push_back(std::move(row));
      }
    }
    return all;
  }
  SweepContext ctx;
  ctx.config = &config;
  if (config.mdp_file) {
    ctx.truth = load_mdp(*config.mdp_file);
    ctx.behavior = config.behavior_file
                       ? load_policy(*config.behavior_file)
                       : Policy::uniform(ctx.truth.horizon, ctx.truth.num_states,
                                         ctx.truth.num_actions);
  } else {
    GeneratedInstance gen = generate_instance(config.generator);
    ctx.truth = std::move(gen.mdp);
    ctx.behavior = config.behavior_file ? load_policy(*config.behavior_file)
                                        : std::move(gen.behavior);
  }
  if (ctx.behavior.horizon != ctx.truth.horizon ||
      ctx.behavior.num_states != ctx.truth.num_states ||
      ctx.behavior.num_actions != ctx.truth.num_actions)
    throw ValidationError("behavior policy does not match the MDP shape");
  ctx.truth_star = plan_optimal(ctx.truth).values;
  ctx.has_anchor = std::find(config.metrics.begin(), config.metrics.end(),
                             "anchor") != config.metrics.end();
  if (ctx.has_anchor) {
    ctx.anchor_instance = AnchorInstance::random(
        config.anchor.num_states, config.anchor.num_actions,
        config.anchor.num_anchors, config.anchor.horizon,
        {config.anchor.seed, 0});
    // Lambda depends only on the features, so resolve it once per sweep.
    ctx.anchor_lambdas = exact_anchor_model(ctx.anchor_instance);
  }

  const std::size_t cells = config.n_grid.size() *
                            static_cast<std::size_t>(config.replicates);
  std::vector<CellResult> results(cells);
  std::atomic<std::size_t> next_cell{0};
  const auto worker = [&]() {
    for (;;) {
      const std::size_t cell = next_cell.fetch_add(1);
      if (cell >= cells) return;
      const std::size_t n_index = cell / config.replicates;
      const int replicate = static_cast<int>(cell % config.replicates);
      const std::int64_t n = config.n_grid[n_index];
      const std::uint64_t cell_seed =
          mix_seed(config.base_seed, static_cast<std::uint64_t>(n_index),
                   static_cast<std::uint64_t>(replicate));
      CellResult& out = results[cell];
      out.per_metric.resize(config.metrics.size());
      EpisodeDataset data;
      EmpiricalModel model;
      bool fitted = false;
      for (std::size_t m = 0; m < config.metrics.size(); ++m) {
        auto& [value, flag] = out.per_metric[m];
        try {
          if (!fitted && config.metrics[m] != "anchor") {
            data = roll_episodes(ctx.truth, ctx.behavior, static_cast<int>(n),
                                 {mix_seed(cell_seed, kTagDataset), 0});
            model = fit_plugin(data, ctx.truth);
            fitted = true;
          }
          value = metric_value(ctx, config.metrics[m], n_index, n, replicate,
                               data, model, flag);
        } catch (const std::exception& e) {
          value = 0.0;
          flag = std::string("error:") + e.what();
        }
      }
    }
  };
  int threads = config.threads > 0
                    ? config.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min<int>(threads, static_cast<int>(cells)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<SweepRow> rows;
  rows.reserve(cells * config.metrics.size());
  for (std::size_t m = 0; m < config.metrics.size(); ++m)
    for (std::size_t n_index = 0; n_index < config.n_grid.size(); ++n_index)
      for (int rep = 0; rep < config.replicates; ++rep) {
        const auto& slot =
            results[n_index * config.replicates + rep].per_metric[m];
        rows.push_back({config.metrics[m], config.n_grid[n_index], rep,
                        slot.first, slot.second});
      }
  return rows;
}

std::string rows_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "metric,n,replicate,value,flag\n";
  char buf[64];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%.17g", row.value);
    out << row.metric << ',' << row.n << ',' << row.replicate << ',' << buf
        << ',' << row.flag << '\n';
  }
  return out.str();
}

std::vector<SweepRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "metric,n,replicate,value,flag")
    throw ValidationError("csv: missing or unexpected header");
  std::vector<SweepRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    SweepRow row;
    std::size_t pos = 0;
    const auto next_field = [&](bool last) {
      const std::size_t comma = last ? std::string::npos : line.find(',', pos);
      if (!last && comma == std::string::npos)
        throw ValidationError("csv line " + std::to_string(lineno) +
                              ": expected 5 fields");
      std::string field = line.substr(pos, comma == std::string::npos
                                               ? std::string::npos
                                               : comma - pos);
      pos = comma == std::string::npos ? line.size() : comma + 1;
      return field;
    };
    row.metric = next_field(false);
    row.n = std::stoll(next_field(false));
    row.replicate = std::stoi(next_field(false));
    row.value = std::stod(next_field(false));
    row.flag = next_field(true);
    rows.push_back(std::move(row));
  }
  return rows;
}

RateFit fit_rate(const std::vector<SweepRow>& rows, const std::string& metric) {
  std::map<std::int64_t, std::pair<double, std::int64_t>> per_n;  // sum, count
  for (const auto& row : rows) {
    if (row.metric != metric) continue;
    if (row.flag.rfind("error:", 0) == 0)
      throw ValidationError("fit_rate: metric '" + metric +
                            "' contains error rows");
    auto& [sum, count] = per_n[row.n];
    sum += row.value;
    ++count;
  }
  if (per_n.size() < 3)
    throw ValidationError("fit_rate: need at least 3 distinct n values for '" +
                          metric + "', found " + std::to_string(per_n.size()));
  RateFit fit;
  for (const auto& [n, agg] : per_n) {
    const auto& [sum, count] = agg;
    if (count < 10)
      throw ValidationError("fit_rate: n=" + std::to_string(n) + " has only " +
                            std::to_string(count) + " replicates (need 10)");
    const double mean = sum / static_cast<double>(count);
    if (mean <= 0.0)
      throw ValidationError("fit_rate: per-n mean is not positive at n=" +
                            std::to_string(n) +
                            " (metric collapsed to exactness)");
    fit.points.emplace_back(std::log(static_cast<double>(n)), std::log(mean));
  }
  const double m = static_cast<double>(fit.points.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : fit.points) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double var_x = sxx - sx * sx / m;
  const double cov_xy = sxy - sx * sy / m;
  const double var_y = syy - sy * sy / m;
  fit.slope = cov_xy / var_x;
  fit.intercept = (sy - fit.slope * sx) / m;
  fit.r_squared = var_y > 0.0 ? (cov_xy * cov_xy) / (var_x * var_y) : 1.0;
  return fit;
}

std::string rate_fit_to_json(const RateFit& fit) {
  json doc;
  doc["slope"] = fit.slope;
  doc["intercept"] = fit.intercept;
  doc["r_squared"] = fit.r_squared;
  json pts = json::array();
  for (const auto& [x, y] : fit.points) pts.push_back(json::array({x, y}));
  doc["points"] = pts;
  return doc.dump();
}

}  // namespace offrl
