#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "offrl/anchor.hpp"
#include "offrl/mdp.hpp"
#include "offrl/rng.hpp"

namespace offrl {

struct InstanceSpec {
  std::string family = "near_uniform";  // dirichlet_random | chain | near_uniform
  int num_states = 4;
  int num_actions = 2;
  int horizon = 5;
  std::uint64_t seed = 0;
};

struct GeneratedInstance {
  TabularMdp mdp;
  Policy behavior;  // uniform unless a family dictates otherwise
};

// Seeded instance families. near_uniform keeps the occupancy of the uniform
// behavior policy within a constant factor of 1/(S*A), mirroring the
// near-uniform-but-not-exact design of the hardness construction.
GeneratedInstance generate_instance(const InstanceSpec& spec);

struct AnchorSweepSpec {
  int num_states = 20;
  int num_actions = 3;
  int num_anchors = 6;
  int horizon = 5;
  std::uint64_t seed = 10;
};

// Experiment configuration. All randomness is derived from base_seed, so
// (config -> CSV) is a pure function.
struct SweepConfig {
  std::optional<std::string> mdp_file;
  InstanceSpec generator;           // used when mdp_file is absent
  std::optional<std::string> behavior_file;  // uniform when absent
  std::vector<std::int64_t> n_grid = {256, 1024, 4096, 16384};
  // Optional horizon grid, for inspection only: the H-exponent is swamped by
  // constants at desk scale, so no acceptance check reads these rows. Each
  // row is tagged H=<h> in the flag column. Requires a generator source.
  std::vector<int> h_grid;
  int replicates = 100;
  // Subset of: global_ope, local_ope, suboptimality, l1_row, task_agnostic,
  // reward_free, lower_bound_demo, anchor.
  std::vector<std::string> metrics = {"local_ope", "suboptimality", "l1_row"};
  double eps_opt = 0.5;
  std::uint64_t base_seed = 1;
  int threads = 0;  // 0 = hardware concurrency

  int local_samples = 200;
  int global_samples = 128;
  std::int64_t enumeration_cap = 10'000'000;
  int task_count = 50;
  int reward_free_rewards = 200;
  AnchorSweepSpec anchor;  // the anchor metric reads n as samples-per-anchor

  void validate() const;
  static SweepConfig from_json(const std::string& json_text);
  std::string to_json() const;
};

struct SweepRow {
  std::string metric;
  std::int64_t n = 0;
  int replicate = 0;
  double value = 0.0;
  std::string flag;  // "", "lower_bound", "budget_exhausted", "error:..."
};

// Runs every requested metric for each (n, replicate) cell. One dataset is
// generated per cell with stream family mix(base_seed, n_index, replicate)
// and shared by all tabular metrics. Infeasible metrics produce one error
// row per cell and the sweep continues. Rerunning an identical config gives
// identical rows regardless of thread count.
std::vector<SweepRow> run_sweep(const SweepConfig& config);

// Header metric,n,replicate,value,flag; floats with 17 significant digits.
std::string rows_to_csv(const std::vector<SweepRow>& rows);
std::vector<SweepRow> parse_csv(const std::string& text);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<std::pair<double, double>> points;  // (log n, log mean value)
};

// Ordinary least squares of log per-n mean value against log n. Requires at
// least 3 distinct n with 10 replicates each and strictly positive means.
RateFit fit_rate(const std::vector<SweepRow>& rows, const std::string& metric);

std::string rate_fit_to_json(const RateFit& fit);

}  // namespace offrl
