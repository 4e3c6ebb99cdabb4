#include "offrl/absorbing.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace offrl {

void TimedRewardMdp::validate() const {
  if (num_states <= 0 || num_actions <= 0 || horizon <= 0)
    throw ValidationError("S, A, H must all be positive");
  const std::size_t s = num_states, a = num_actions, h = horizon;
  if (transition.size() != s * a * s || reward.size() != h * s * a ||
      initial.size() != s)
    throw ValidationError("timed MDP: tensor sizes inconsistent");
  for (int si = 0; si < num_states; ++si)
    for (int ai = 0; ai < num_actions; ++ai) {
      double sum = 0.0;
      for (const double p : row(si, ai)) {
        if (p < 0.0) throw ValidationError("timed MDP: negative probability");
        sum += p;
      }
      if (std::abs(sum - 1.0) > kProbTol)
        throw ValidationError("timed MDP: P[" + std::to_string(si) + "][" +
                              std::to_string(ai) + "] does not sum to 1");
    }
  for (const double rv : reward)
    if (rv < 0.0 || rv > horizon)
      throw ValidationError("timed MDP: reward " + std::to_string(rv) +
                            " outside [0, H]");
}

TimedRewardMdp widen(const TabularMdp& mdp) {
  TimedRewardMdp out{mdp.num_states, mdp.num_actions, mdp.horizon,
                     mdp.transition, {}, mdp.initial};
  out.reward.reserve(static_cast<std::size_t>(mdp.horizon) * mdp.reward.size());
  for (int h = 0; h < mdp.horizon; ++h)
    out.reward.insert(out.reward.end(), mdp.reward.begin(), mdp.reward.end());
  return out;
}

TimedRewardMdp build_absorbing(const AbsorbingSpec& spec) {
  const TabularMdp& base = spec.base;
  const int S = base.num_states, A = base.num_actions, H = base.horizon;
  if (spec.absorb_state < 0 || spec.absorb_state >= S)
    throw ValidationError("absorb_state out of range");
  if (static_cast<int>(spec.u.size()) != H)
    throw ValidationError("u must have one entry per step");
  for (const double ut : spec.u)
    if (ut < 0.0 || ut > static_cast<double>(H))
      throw ValidationError("u entry " + std::to_string(ut) +
                            " outside [0, H]");
  TimedRewardMdp out = widen(base);
  for (int a = 0; a < A; ++a) {
    double* prow = out.transition.data() + out.row_offset(spec.absorb_state, a);
    std::fill_n(prow, S, 0.0);
    prow[spec.absorb_state] = 1.0;
  }
  for (int h = 0; h < H; ++h)
    for (int a = 0; a < A; ++a)
      out.reward[(static_cast<std::size_t>(h) * S + spec.absorb_state) * A + a] =
          spec.u[h];
  return out;
}

PlanResult plan_optimal(const TimedRewardMdp& mdp) {
  const int S = mdp.num_states, A = mdp.num_actions, H = mdp.horizon;
  ValueTable values{H, S, A, {}, {}};
  values.v.assign(static_cast<std::size_t>(H + 1) * S, 0.0);
  values.q.assign(static_cast<std::size_t>(H + 1) * S * A, 0.0);
  Policy greedy{H, S, A, {}};
  greedy.probs.assign(static_cast<std::size_t>(H) * S * A, 0.0);
  for (int h = H - 1; h >= 0; --h) {
    const double* vnext = values.v.data() + static_cast<std::size_t>(h + 1) * S;
    for (int s = 0; s < S; ++s) {
      int best = 0;
      double best_q = 0.0;
      for (int a = 0; a < A; ++a) {
        const auto p = mdp.row(s, a);
        double backup = 0.0;
        for (int s2 = 0; s2 < S; ++s2) backup += p[s2] * vnext[s2];
        const double qv = mdp.r(h, s, a) + backup;
        values.q[(static_cast<std::size_t>(h) * S + s) * A + a] = qv;
        if (a == 0 || qv > best_q) {
          best_q = qv;
          best = a;
        }
      }
      values.v[static_cast<std::size_t>(h) * S + s] = best_q;
      greedy.probs[greedy.row_offset(h, s) + best] = 1.0;
    }
  }
  return {std::move(values), std::move(greedy)};
}

ValueTable evaluate_policy(const TimedRewardMdp& mdp, const Policy& pi) {
  if (pi.horizon != mdp.horizon || pi.num_states != mdp.num_states ||
      pi.num_actions != mdp.num_actions)
    throw ValidationError("policy dimensions do not match timed MDP");
  const int S = mdp.num_states, A = mdp.num_actions, H = mdp.horizon;
  ValueTable out{H, S, A, {}, {}};
  out.v.assign(static_cast<std::size_t>(H + 1) * S, 0.0);
  out.q.assign(static_cast<std::size_t>(H + 1) * S * A, 0.0);
  for (int h = H - 1; h >= 0; --h) {
    const double* vnext = out.v.data() + static_cast<std::size_t>(h + 1) * S;
    for (int s = 0; s < S; ++s) {
      double vs = 0.0;
      for (int a = 0; a < A; ++a) {
        const auto p = mdp.row(s, a);
        double backup = 0.0;
        for (int s2 = 0; s2 < S; ++s2) backup += p[s2] * vnext[s2];
        const double qv = mdp.r(h, s, a) + backup;
        out.q[(static_cast<std::size_t>(h) * S + s) * A + a] = qv;
        vs += pi.prob(h, s, a) * qv;
      }
      out.v[static_cast<std::size_t>(h) * S + s] = vs;
    }
  }
  return out;
}

std::vector<double> singleton_u(const TabularMdp& mdp, int state) {
  if (state < 0 || state >= mdp.num_states)
    throw ValidationError("state out of range");
  const ValueTable star = plan_optimal(mdp).values;
  std::vector<double> u(mdp.horizon);
  for (int t = 0; t < mdp.horizon; ++t) {
    const double diff = star.value(t, state) - star.value(t + 1, state);
    if (diff < -1e-12)
      throw ValidationError(
          "V*_t(s) - V*_{t+1}(s) = " + std::to_string(diff) +
          " < 0 at t=" + std::to_string(t) +
          "; monotonicity requires stationary P and r >= 0");
    u[t] = std::max(diff, 0.0);
  }
  return u;
}

IdentityReport verify_singleton_identity(const TabularMdp& mdp, int state,
                                         double tol) {
  const ValueTable base_star = plan_optimal(mdp).values;
  const TimedRewardMdp absorbing =
      build_absorbing({mdp, state, singleton_u(mdp, state)});
  const ValueTable abs_star = plan_optimal(absorbing).values;
  IdentityReport report;
  for (int h = 0; h < mdp.horizon; ++h)
    report.max_deviation = std::max(
        report.max_deviation,
        max_abs_diff(abs_star.value_row(h), base_star.value_row(h)));
  report.pass = report.max_deviation < tol;
  return report;
}

QDiffReport q_diff_bound_check(const TabularMdp& mdp, int state,
                               const std::vector<double>& u,
                               const std::vector<double>& u2) {
  const ValueTable a = plan_optimal(build_absorbing({mdp, state, u})).values;
  const ValueTable b = plan_optimal(build_absorbing({mdp, state, u2})).values;
  QDiffReport report;
  const std::size_t qcells = static_cast<std::size_t>(mdp.horizon) *
                             mdp.num_states * mdp.num_actions;
  for (std::size_t i = 0; i < qcells; ++i)
    report.lhs = std::max(report.lhs, std::abs(a.q[i] - b.q[i]));
  double max_du = 0.0;
  for (int t = 0; t < mdp.horizon; ++t)
    max_du = std::max(max_du, std::abs(u[t] - u2[t]));
  report.rhs = mdp.horizon * max_du;
  report.ratio = report.rhs > 0.0 ? report.lhs / report.rhs : 0.0;
  report.pass = report.lhs <= report.rhs + 1e-10;
  return report;
}

}  // namespace offrl
