#include "offrl/anchor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>
#include <json.hpp>

#include "offrl/io.hpp"

namespace offrl {

using nlohmann::json;

std::vector<double> AnchorInstance::transition_row(int s, int a) const {
  std::vector<double> row(num_states, 0.0);
  const auto f = feature(s, a);
  for (int k = 0; k < feature_dim; ++k) {
    const double w = f[k];
    if (w == 0.0) continue;
    const double* psi_k = psi.data() + static_cast<std::size_t>(k) * num_states;
    for (int s2 = 0; s2 < num_states; ++s2) row[s2] += w * psi_k[s2];
  }
  return row;
}

void AnchorInstance::validate() const {
  if (num_states <= 0 || num_actions <= 0 || feature_dim <= 0 || horizon <= 0)
    throw ValidationError("anchor instance: dimensions must be positive");
  const std::size_t pairs = static_cast<std::size_t>(num_states) * num_actions;
  if (phi.size() != pairs * feature_dim)
    throw ValidationError("anchor instance: phi has wrong size");
  if (psi.size() != static_cast<std::size_t>(feature_dim) * num_states)
    throw ValidationError("anchor instance: psi has wrong size");
  if (reward.size() != pairs)
    throw ValidationError("anchor instance: r has wrong size");
  if (anchors.empty())
    throw ValidationError("anchor instance: needs at least one anchor");
  for (const auto& [s, a] : anchors)
    if (s < 0 || s >= num_states || a < 0 || a >= num_actions)
      throw ValidationError("anchor instance: anchor pair out of range");
  for (const double rv : reward)
    if (rv < 0.0 || rv > 1.0)
      throw ValidationError("anchor instance: reward outside [0,1]");
  std::vector<std::vector<double>> anchor_phis;
  for (const auto& [s, a] : anchors) {
    const auto f = feature(s, a);
    anchor_phis.emplace_back(f.begin(), f.end());
  }
  for (int s = 0; s < num_states; ++s)
    for (int a = 0; a < num_actions; ++a) {
      const auto row = transition_row(s, a);
      double sum = 0.0;
      for (const double p : row) {
        if (p < -1e-10)
          throw ValidationError("anchor instance: P(.|" + std::to_string(s) +
                                "," + std::to_string(a) + ") has negative entry");
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-10)
        throw ValidationError("anchor instance: P(.|" + std::to_string(s) + "," +
                              std::to_string(a) + ") sums to " +
                              std::to_string(sum));
      // Throws if unrepresentable.
      (void)solve_lambda(anchor_phis, feature(s, a));
    }
}

AnchorInstance AnchorInstance::random(int num_states, int num_actions,
                                      int num_anchors, int horizon,
                                      RngStream rng) {
  if (num_anchors > num_states * num_actions)
    throw ValidationError("more anchors than state-action pairs");
  AnchorInstance inst;
  inst.num_states = num_states;
  inst.num_actions = num_actions;
  inst.feature_dim = num_anchors;
  inst.horizon = horizon;
  Xoshiro256 gen(rng);

  // psi rows: random positive distributions over next states.
  inst.psi.resize(static_cast<std::size_t>(num_anchors) * num_states);
  for (int k = 0; k < num_anchors; ++k) {
    double* row = inst.psi.data() + static_cast<std::size_t>(k) * num_states;
    double sum = 0.0;
    for (int s2 = 0; s2 < num_states; ++s2) {
      row[s2] = -std::log(1.0 - gen.next_double());
      sum += row[s2];
    }
    for (int s2 = 0; s2 < num_states; ++s2) row[s2] /= sum;
  }

  // Anchor features: basis vectors pulled slightly toward a random simplex
  // point, so they stay affinely independent and simplex-valued.
  const std::size_t pairs = static_cast<std::size_t>(num_states) * num_actions;
  inst.phi.assign(pairs * num_anchors, 0.0);
  std::vector<std::vector<double>> anchor_phis(num_anchors);
  for (int k = 0; k < num_anchors; ++k) {
    std::vector<double> mix(num_anchors);
    double sum = 0.0;
    for (auto& v : mix) {
      v = -std::log(1.0 - gen.next_double());
      sum += v;
    }
    auto& f = anchor_phis[k];
    f.resize(num_anchors);
    for (int j = 0; j < num_anchors; ++j)
      f[j] = 0.8 * (j == k ? 1.0 : 0.0) + 0.2 * mix[j] / sum;
    inst.anchors.emplace_back(k / num_actions, k % num_actions);
  }
  for (int k = 0; k < num_anchors; ++k) {
    const auto [s, a] = inst.anchors[k];
    std::copy(anchor_phis[k].begin(), anchor_phis[k].end(),
              inst.phi.begin() +
                  (static_cast<std::size_t>(s) * num_actions + a) * num_anchors);
  }

  // Remaining features start from one interior mixture per state; rewards
  // are constant per state so the action race is carried by the features.
  std::vector<std::vector<double>> base_mix(num_states,
                                            std::vector<double>(num_anchors));
  inst.reward.resize(pairs);
  for (int s = 0; s < num_states; ++s) {
    double sum = 0.0;
    for (auto& w : base_mix[s]) {
      w = -std::log(1.0 - gen.next_double());
      sum += w;
    }
    // Keep the mixture strictly interior so action perturbations below
    // cannot leave the simplex.
    for (auto& w : base_mix[s]) w = 0.6 * w / sum + 0.4 / num_anchors;
    const double base_reward = 0.15 + 0.7 * gen.next_double();
    for (int a = 0; a < num_actions; ++a) {
      const std::size_t slot = static_cast<std::size_t>(s) * num_actions + a;
      inst.reward[slot] = base_reward;
      if (slot < static_cast<std::size_t>(num_anchors)) {
        // Anchor-slot states carry decisive reward gaps so their argmax is
        // settled from the first grid point on; the churn below is owned
        // entirely by the engineered states.
        if (num_actions > 1)
          inst.reward[slot] = std::clamp(
              base_reward + 0.15 * (0.5 - static_cast<double>(a) /
                                              (num_actions - 1)),
              0.0, 1.0);
        continue;
      }
      double* f = inst.phi.data() + slot * num_anchors;
      for (int k = 0; k < num_anchors; ++k)
        for (int j = 0; j < num_anchors; ++j)
          f[j] += base_mix[s][k] * anchor_phis[k][j];
    }
  }

  // Action gaps are placed analytically: the mixture difference between the
  // two contending actions gets a component along the anchor-value vector m
  // (the true gap) and one orthogonal to it (pure estimation noise), sized
  // so state s settles its empirical argmax near N = 256 * 4^(ladder rank).
  // That keeps the sweep's argmax churn alive across the whole N grid
  // instead of collapsing at one point. Because every state's perturbation
  // shifts the values all gaps are measured against, the assignment is
  // iterated to a fixed point with the random draws frozen.
  const int first_free = (num_anchors + num_actions - 1) / num_actions;
  const int tied_states = num_states - first_free;
  const double beta = 0.12;  // fits inside the 0.4/K interior margin
  struct StateDraw {
    std::vector<double> noise_dir;
    double n_die = 0.0;
    double sign = 1.0;
  };
  std::vector<StateDraw> draws(std::max(tied_states, 0));
  for (int rank = 0; rank < tied_states; ++rank) {
    auto& draw = draws[rank];
    draw.noise_dir.resize(num_anchors);
    for (auto& w : draw.noise_dir) w = gen.next_double() - 0.5;
    const double ladder =
        tied_states > 1 ? 0.25 + 5.25 * rank / (tied_states - 1.0) : 1.0;
    draw.n_die = 256.0 * std::pow(4.0, ladder) *
                 std::exp(0.5 * (gen.next_double() - 0.5));
    draw.sign = gen.next_double() < 0.5 ? -1.0 : 1.0;
  }
  if (num_actions > 2)
    for (int s = first_free; s < num_states; ++s) {
      auto& r0 = inst.reward[static_cast<std::size_t>(s) * num_actions];
      r0 = std::max(r0 - 0.05 - 0.05 * gen.next_double(), 0.0);
    }

  for (int pass = 0; pass < 3; ++pass) {
    // Values of the current instance (greedy over all actions).
    TabularMdp current;
    current.num_states = num_states;
    current.num_actions = num_actions;
    current.horizon = horizon;
    current.initial.assign(num_states, 1.0 / num_states);
    current.reward = inst.reward;
    current.transition.resize(pairs * num_states);
    for (int s = 0; s < num_states; ++s)
      for (int a = 0; a < num_actions; ++a) {
        auto row = inst.transition_row(s, a);
        double sum = 0.0;
        for (double& p : row) {
          p = std::max(p, 0.0);
          sum += p;
        }
        for (double& p : row) p /= sum;
        std::copy(row.begin(), row.end(),
                  current.transition.begin() + current.row_offset(s, a));
      }
    const ValueTable star = plan_optimal(current).values;

    std::vector<double> m_tilde(num_anchors);
    double mean_value = 0.0, var_bar = 0.0;
    for (int k = 0; k < num_anchors; ++k) {
      const double* psi_k =
          inst.psi.data() + static_cast<std::size_t>(k) * num_states;
      double mean = 0.0, var = 0.0;
      for (int s2 = 0; s2 < num_states; ++s2)
        mean += psi_k[s2] * star.value(1, s2);
      for (int s2 = 0; s2 < num_states; ++s2) {
        const double centered = star.value(1, s2) - mean;
        var += psi_k[s2] * centered * centered;
      }
      m_tilde[k] = mean;
      mean_value += mean / num_anchors;
      var_bar += var / num_anchors;
    }
    double m_norm_sq = 0.0;
    for (int k = 0; k < num_anchors; ++k) {
      m_tilde[k] -= mean_value;
      m_norm_sq += m_tilde[k] * m_tilde[k];
    }

    for (int rank = 0; rank < tied_states; ++rank) {
      const int s = first_free + rank;
      const StateDraw& draw = draws[rank];
      // Zero-sum noise direction orthogonal to m.
      std::vector<double> dir = draw.noise_dir;
      double mean_w = 0.0, dot_m = 0.0;
      for (const double w : dir) mean_w += w / num_anchors;
      for (int k = 0; k < num_anchors; ++k) {
        dir[k] -= mean_w;
        dot_m += dir[k] * m_tilde[k];
      }
      double norm = 0.0;
      for (int k = 0; k < num_anchors; ++k) {
        dir[k] -= dot_m / std::max(m_norm_sq, 1e-12) * m_tilde[k];
        norm += dir[k] * dir[k];
      }
      norm = std::sqrt(std::max(norm, 1e-12));
      const double sigma_at_die = beta * std::sqrt(var_bar / draw.n_die);
      const double alpha =
          draw.sign * sigma_at_die / std::max(m_norm_sq, 1e-12);
      const std::size_t row0 = static_cast<std::size_t>(s) * num_actions;
      double* f1 = inst.phi.data() + (row0 + (1 % num_actions)) * num_anchors;
      double* f2 = inst.phi.data() +
                   (row0 + (num_actions > 2 ? 2 : 0)) * num_anchors;
      std::vector<double> lam1(num_anchors), lam2(num_anchors);
      double sum1 = 0.0, sum2 = 0.0;
      for (int k = 0; k < num_anchors; ++k) {
        const double half_delta =
            0.5 * (beta * dir[k] / norm + alpha * m_tilde[k]);
        lam1[k] = std::max(base_mix[s][k] + half_delta, 0.0);
        lam2[k] = std::max(base_mix[s][k] - half_delta, 0.0);
        sum1 += lam1[k];
        sum2 += lam2[k];
      }
      std::fill(f1, f1 + num_anchors, 0.0);
      std::fill(f2, f2 + num_anchors, 0.0);
      for (int k = 0; k < num_anchors; ++k)
        for (int j = 0; j < num_anchors; ++j) {
          f1[j] += lam1[k] / sum1 * anchor_phis[k][j];
          f2[j] += lam2[k] / sum2 * anchor_phis[k][j];
        }
    }
  }
  return inst;
}

std::vector<double> solve_lambda(
    const std::vector<std::vector<double>>& anchor_phis,
    std::span<const double> target_phi, double residual_tol) {
  const int num_anchors = static_cast<int>(anchor_phis.size());
  if (num_anchors < 1) throw ValidationError("solve_lambda: no anchors");
  const int dim = static_cast<int>(target_phi.size());
  for (const auto& f : anchor_phis)
    if (static_cast<int>(f.size()) != dim)
      throw ValidationError("solve_lambda: feature dimensions disagree");

  Eigen::MatrixXd basis(dim, num_anchors);
  for (int k = 0; k < num_anchors; ++k)
    for (int d = 0; d < dim; ++d) basis(d, k) = anchor_phis[k][d];
  Eigen::VectorXd target(dim);
  for (int d = 0; d < dim; ++d) target(d) = target_phi[d];

  // Start from the single closest anchor; that point is simplex-feasible.
  int start = 0;
  double best_dist = (basis.col(0) - target).squaredNorm();
  for (int k = 1; k < num_anchors; ++k) {
    const double dist = (basis.col(k) - target).squaredNorm();
    if (dist < best_dist) {
      best_dist = dist;
      start = k;
    }
  }
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(num_anchors);
  lambda(start) = 1.0;
  std::vector<bool> free_set(num_anchors, false);
  free_set[start] = true;

  // Equality-constrained solve on the free set via the bordered KKT system;
  // CompleteOrthogonalDecomposition tolerates rank-deficient anchor sets.
  const auto solve_on_free = [&](const std::vector<int>& free_idx) {
    const int m = static_cast<int>(free_idx.size());
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(m + 1, m + 1);
    Eigen::VectorXd rhs(m + 1);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j)
        kkt(i, j) = 2.0 * basis.col(free_idx[i]).dot(basis.col(free_idx[j]));
      kkt(i, m) = 1.0;
      kkt(m, i) = 1.0;
      rhs(i) = 2.0 * basis.col(free_idx[i]).dot(target);
    }
    rhs(m) = 1.0;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(kkt);
    return Eigen::VectorXd(cod.solve(rhs).head(m));
  };

  const int max_outer = 4 * num_anchors + 16;
  for (int outer = 0; outer < max_outer; ++outer) {
    // Inner loop: restore feasibility on the free set.
    for (int inner = 0; inner < 2 * num_anchors + 8; ++inner) {
      std::vector<int> free_idx;
      for (int k = 0; k < num_anchors; ++k)
        if (free_set[k]) free_idx.push_back(k);
      const Eigen::VectorXd sub = solve_on_free(free_idx);
      bool feasible = true;
      for (int i = 0; i < sub.size(); ++i)
        if (sub(i) < -1e-12) feasible = false;
      if (feasible) {
        lambda.setZero();
        for (int i = 0; i < sub.size(); ++i)
          lambda(free_idx[i]) = std::max(sub(i), 0.0);
        break;
      }
      // Step from lambda toward sub until the first free variable hits zero.
      double alpha = 1.0;
      for (int i = 0; i < sub.size(); ++i) {
        if (sub(i) >= 0.0) continue;
        const double cur = lambda(free_idx[i]);
        alpha = std::min(alpha, cur / (cur - sub(i)));
      }
      for (int i = 0; i < sub.size(); ++i) {
        const int k = free_idx[i];
        lambda(k) += alpha * (sub(i) - lambda(k));
        if (lambda(k) <= 1e-13) {
          lambda(k) = 0.0;
          free_set[k] = false;
        }
      }
      // Keep at least one variable free.
      if (std::none_of(free_set.begin(), free_set.end(), [](bool b) { return b; })) {
        int argmax = 0;
        for (int k = 1; k < num_anchors; ++k)
          if (lambda(k) > lambda(argmax)) argmax = k;
        free_set[argmax] = true;
      }
    }
    // Dual check: free the most violating active variable, if any.
    const Eigen::VectorXd grad = 2.0 * basis.transpose() * (basis * lambda - target);
    double mu = 0.0;
    int free_count = 0;
    for (int k = 0; k < num_anchors; ++k)
      if (free_set[k]) {
        mu += grad(k);
        ++free_count;
      }
    mu /= std::max(free_count, 1);
    int worst = -1;
    double worst_violation = 1e-11;
    for (int k = 0; k < num_anchors; ++k) {
      if (free_set[k]) continue;
      const double violation = mu - grad(k);
      if (violation > worst_violation) {
        worst_violation = violation;
        worst = k;
      }
    }
    if (worst < 0) break;
    free_set[worst] = true;
  }

  // Exact renormalization; the KKT solve already has the sum at 1 up to
  // rounding.
  const double total = lambda.sum();
  if (total > 0.0) lambda /= total;
  const double residual = (basis * lambda - target).norm();
  if (residual > residual_tol)
    throw ValidationError("target feature is not representable over the "
                          "anchors (residual " + std::to_string(residual) + ")");
  return {lambda.data(), lambda.data() + num_anchors};
}

AnchorModel sample_anchors(const AnchorInstance& instance, int num_samples,
                           RngStream rng) {
  if (num_samples < 1) throw ValidationError("num_samples must be >= 1");
  const int K = static_cast<int>(instance.anchors.size());
  AnchorModel model;
  model.num_samples = num_samples;
  model.anchor_rows.assign(static_cast<std::size_t>(K) * instance.num_states, 0.0);
  for (int k = 0; k < K; ++k) {
    const auto [s, a] = instance.anchors[k];
    const auto row = instance.transition_row(s, a);
    Xoshiro256 gen(rng.at(rng.stream_index + static_cast<std::uint64_t>(k)));
    std::vector<int> counts(instance.num_states, 0);
    for (int i = 0; i < num_samples; ++i)
      ++counts[gen.sample_categorical(row)];
    double* out = model.anchor_rows.data() +
                  static_cast<std::size_t>(k) * instance.num_states;
    for (int s2 = 0; s2 < instance.num_states; ++s2)
      out[s2] = static_cast<double>(counts[s2]) / num_samples;
  }
  return model;
}

void resolve_lambdas(AnchorModel& model, const AnchorInstance& instance) {
  const int K = static_cast<int>(instance.anchors.size());
  std::vector<std::vector<double>> anchor_phis;
  anchor_phis.reserve(K);
  for (const auto& [s, a] : instance.anchors) {
    const auto f = instance.feature(s, a);
    anchor_phis.emplace_back(f.begin(), f.end());
  }
  const std::size_t pairs =
      static_cast<std::size_t>(instance.num_states) * instance.num_actions;
  model.lambda.assign(pairs * K, 0.0);
  for (int s = 0; s < instance.num_states; ++s)
    for (int a = 0; a < instance.num_actions; ++a) {
      const auto lam = solve_lambda(anchor_phis, instance.feature(s, a));
      std::copy(lam.begin(), lam.end(),
                model.lambda.begin() +
                    (static_cast<std::size_t>(s) * instance.num_actions + a) * K);
    }
}

AnchorModel make_anchor_model(const AnchorInstance& instance, int num_samples,
                              RngStream rng) {
  AnchorModel model = sample_anchors(instance, num_samples, rng);
  resolve_lambdas(model, instance);
  return model;
}

AnchorModel exact_anchor_model(const AnchorInstance& instance) {
  AnchorModel model;
  model.num_samples = 0;
  const int K = static_cast<int>(instance.anchors.size());
  model.anchor_rows.reserve(static_cast<std::size_t>(K) * instance.num_states);
  for (const auto& [s, a] : instance.anchors) {
    const auto row = instance.transition_row(s, a);
    model.anchor_rows.insert(model.anchor_rows.end(), row.begin(), row.end());
  }
  resolve_lambdas(model, instance);
  return model;
}

std::vector<double> plugin_transition(const AnchorModel& model,
                                      const AnchorInstance& instance, int s,
                                      int a) {
  const int K = static_cast<int>(instance.anchors.size());
  if (model.lambda.empty())
    throw ValidationError("plugin_transition: lambda cache not resolved");
  std::vector<double> row(instance.num_states, 0.0);
  const double* lam =
      model.lambda.data() +
      (static_cast<std::size_t>(s) * instance.num_actions + a) * K;
  for (int k = 0; k < K; ++k) {
    if (lam[k] == 0.0) continue;
    const auto anchor_row = model.row(k, instance.num_states);
    for (int s2 = 0; s2 < instance.num_states; ++s2)
      row[s2] += lam[k] * anchor_row[s2];
  }
  return row;
}

namespace {

TabularMdp instance_as_tabular(const AnchorInstance& instance,
                               const AnchorModel* model) {
  const int S = instance.num_states, A = instance.num_actions;
  TabularMdp mdp;
  mdp.num_states = S;
  mdp.num_actions = A;
  mdp.horizon = instance.horizon;
  mdp.reward = instance.reward;
  // The generative setting has no data-collection initial distribution;
  // planning and Q gaps do not depend on it.
  mdp.initial.assign(S, 1.0 / S);
  mdp.transition.resize(static_cast<std::size_t>(S) * A * S);
  for (int s = 0; s < S; ++s)
    for (int a = 0; a < A; ++a) {
      std::vector<double> row = model ? plugin_transition(*model, instance, s, a)
                                      : instance.transition_row(s, a);
      // Rows carry ~1e-14 of factorization rounding; rescale so the strict
      // tabular invariants hold.
      double sum = 0.0;
      for (double& p : row) {
        p = std::max(p, 0.0);
        sum += p;
      }
      for (double& p : row) p /= sum;
      std::copy(row.begin(), row.end(),
                mdp.transition.begin() + mdp.row_offset(s, a));
    }
  mdp.validate();
  return mdp;
}

}  // namespace

AnchorPlanReport anchor_plan(const AnchorModel& model,
                             const AnchorInstance& instance) {
  const TabularMdp truth = instance_as_tabular(instance, nullptr);
  const TabularMdp fitted = instance_as_tabular(instance, &model);
  AnchorPlanReport report;
  report.policy = plan_optimal(fitted).policy;
  const ValueTable star = plan_optimal(truth).values;
  const ValueTable got = evaluate_policy(truth, report.policy);
  for (int s = 0; s < truth.num_states; ++s) {
    for (int a = 0; a < truth.num_actions; ++a)
      report.q1_suboptimality =
          std::max(report.q1_suboptimality,
                   std::abs(star.qvalue(0, s, a) - got.qvalue(0, s, a)));
    report.v1_suboptimality = std::max(
        report.v1_suboptimality, star.value(0, s) - got.value(0, s));
  }
  return report;
}

RecoverReport recover_lemma_check(const AnchorInstance& instance, int s, int a,
                                  std::span<const double> values) {
  if (static_cast<int>(values.size()) != instance.num_states)
    throw ValidationError("recover_lemma_check: V has wrong length");
  std::vector<std::vector<double>> anchor_phis;
  for (const auto& [as, aa] : instance.anchors) {
    const auto f = instance.feature(as, aa);
    anchor_phis.emplace_back(f.begin(), f.end());
  }
  const auto lam = solve_lambda(anchor_phis, instance.feature(s, a));
  // Shifted form of p.V^2 - (p.V)^2; identical in exact arithmetic and does
  // not cancel catastrophically for near-constant V.
  const auto variance = [&](const std::vector<double>& row) {
    double mean = 0.0;
    for (int s2 = 0; s2 < instance.num_states; ++s2)
      mean += row[s2] * values[s2];
    double var = 0.0;
    for (int s2 = 0; s2 < instance.num_states; ++s2) {
      const double centered = values[s2] - mean;
      var += row[s2] * centered * centered;
    }
    return var;
  };
  RecoverReport report;
  for (std::size_t k = 0; k < instance.anchors.size(); ++k) {
    const auto [as, aa] = instance.anchors[k];
    report.lhs += lam[k] * std::sqrt(variance(instance.transition_row(as, aa)));
  }
  report.rhs = std::sqrt(variance(instance.transition_row(s, a)));
  report.pass = report.lhs <= report.rhs + 1e-10;
  return report;
}

std::string anchor_instance_to_json(const AnchorInstance& instance) {
  json doc;
  doc["num_states"] = instance.num_states;
  doc["num_actions"] = instance.num_actions;
  doc["feature_dim"] = instance.feature_dim;
  doc["H"] = instance.horizon;
  doc["phi"] = instance.phi;
  doc["psi"] = instance.psi;
  json anchor_list = json::array();
  for (const auto& [s, a] : instance.anchors)
    anchor_list.push_back(json::array({s, a}));
  doc["anchors"] = anchor_list;
  doc["r"] = instance.reward;
  return doc.dump();
}

AnchorInstance parse_anchor_instance(const std::string& json_text) {
  json doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded())
    throw ValidationError("anchor instance file: not valid JSON");
  AnchorInstance inst;
  try {
    inst.num_states = doc.at("num_states").get<int>();
    inst.num_actions = doc.at("num_actions").get<int>();
    inst.feature_dim = doc.at("feature_dim").get<int>();
    inst.horizon = doc.at("H").get<int>();
    inst.phi = doc.at("phi").get<std::vector<double>>();
    inst.psi = doc.at("psi").get<std::vector<double>>();
    inst.reward = doc.at("r").get<std::vector<double>>();
    for (const auto& pair : doc.at("anchors"))
      inst.anchors.emplace_back(pair.at(0).get<int>(), pair.at(1).get<int>());
  } catch (const json::exception& e) {
    throw ValidationError(std::string("anchor instance file: ") + e.what());
  }
  inst.validate();
  return inst;
}

AnchorInstance load_anchor_instance(const std::string& path) {
  return parse_anchor_instance(read_file(path));
}

void save_anchor_instance(const AnchorInstance& instance,
                          const std::string& path) {
  write_file(path, anchor_instance_to_json(instance));
}

}  // namespace offrl
