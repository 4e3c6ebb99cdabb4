// Test-only oracles, kept independent of the library's dynamic-programming
// and closed-form code paths so they can act as ground truth.
#pragma once

#include <cmath>
#include <vector>

#include "offrl/mdp.hpp"
#include "offrl/rng.hpp"
#include "offrl/uniform_ope.hpp"

namespace offrl::testing {

// Expected return from (h, s) by exhaustive branching over every action and
// successor, weighted by path probability.
inline double enumerate_return(const TabularMdp& mdp, const Policy& pi, int h,
                               int s) {
  if (h == mdp.horizon) return 0.0;
  double total = 0.0;
  for (int a = 0; a < mdp.num_actions; ++a) {
    const double pa = pi.prob(h, s, a);
    if (pa == 0.0) continue;
    double downstream = 0.0;
    for (int s2 = 0; s2 < mdp.num_states; ++s2) {
      const double ps = mdp.p(s, a, s2);
      if (ps == 0.0) continue;
      downstream += ps * enumerate_return(mdp, pi, h + 1, s2);
    }
    total += pa * (mdp.r(s, a) + downstream);
  }
  return total;
}

// V*_1 by brute force over every deterministic non-stationary policy.
inline std::vector<double> enumerate_optimal_v1(const TabularMdp& mdp) {
  const std::int64_t count = deterministic_policy_count(
      mdp.horizon, mdp.num_states, mdp.num_actions, 1'000'000);
  std::vector<double> best(mdp.num_states, 0.0);
  for (std::int64_t i = 0; i < count; ++i) {
    const Policy pi = nth_deterministic_policy(i, mdp.horizon, mdp.num_states,
                                               mdp.num_actions);
    for (int s = 0; s < mdp.num_states; ++s)
      best[s] = std::max(best[s], enumerate_return(mdp, pi, 0, s));
  }
  return best;
}

// sup over binary vectors rho in {0,1}^S of |(p - q) . rho| by enumeration.
inline double brute_force_binary_sup(std::span<const double> p,
                                     std::span<const double> q) {
  const int n = static_cast<int>(p.size());
  double best = 0.0;
  for (int mask = 0; mask < (1 << n); ++mask) {
    double dot = 0.0;
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) dot += p[i] - q[i];
    best = std::max(best, std::abs(dot));
  }
  return best;
}

inline std::vector<double> random_distribution(int size, Xoshiro256& gen) {
  std::vector<double> out(size);
  double sum = 0.0;
  for (auto& v : out) {
    v = -std::log(1.0 - gen.next_double());
    sum += v;
  }
  for (auto& v : out) v /= sum;
  return out;
}

// Dirichlet-style random MDP used across the suites.
inline TabularMdp random_mdp(int S, int A, int H, Xoshiro256& gen) {
  TabularMdp mdp;
  mdp.num_states = S;
  mdp.num_actions = A;
  mdp.horizon = H;
  mdp.transition.resize(static_cast<std::size_t>(S) * A * S);
  for (int s = 0; s < S; ++s)
    for (int a = 0; a < A; ++a) {
      const auto row = random_distribution(S, gen);
      std::copy(row.begin(), row.end(),
                mdp.transition.begin() + mdp.row_offset(s, a));
    }
  mdp.reward.resize(static_cast<std::size_t>(S) * A);
  for (auto& rv : mdp.reward) rv = gen.next_double();
  mdp.initial = random_distribution(S, gen);
  mdp.validate();
  return mdp;
}

inline Policy random_stochastic_policy(int H, int S, int A, Xoshiro256& gen) {
  Policy pi{H, S, A, {}};
  pi.probs.reserve(static_cast<std::size_t>(H) * S * A);
  for (int h = 0; h < H; ++h)
    for (int s = 0; s < S; ++s) {
      const auto row = random_distribution(A, gen);
      pi.probs.insert(pi.probs.end(), row.begin(), row.end());
    }
  pi.validate();
  return pi;
}

}  // namespace offrl::testing
