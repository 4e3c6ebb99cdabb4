#include <doctest.h>

#include <cmath>

#include "offrl/anchor.hpp"
#include "support/oracles.hpp"

using namespace offrl;
namespace ot = offrl::testing;

namespace {

std::vector<std::vector<double>> basis_anchors(int k) {
  std::vector<std::vector<double>> out(k, std::vector<double>(k, 0.0));
  for (int i = 0; i < k; ++i) out[i][i] = 1.0;
  return out;
}

}  // namespace

TEST_CASE("solve_lambda: an anchor recovers itself") {
  const auto anchors = basis_anchors(4);
  const auto lam = solve_lambda(anchors, anchors[2]);
  for (int k = 0; k < 4; ++k) CHECK(lam[k] == doctest::Approx(k == 2 ? 1 : 0));
  double residual = 0.0;
  for (int d = 0; d < 4; ++d) {
    double coord = 0.0;
    for (int k = 0; k < 4; ++k) coord += lam[k] * anchors[k][d];
    residual += (coord - anchors[2][d]) * (coord - anchors[2][d]);
  }
  CHECK(std::sqrt(residual) < 1e-12);
}

TEST_CASE("solve_lambda: midpoint of two anchors splits evenly") {
  const auto anchors = basis_anchors(3);
  const std::vector<double> mid = {0.5, 0.5, 0.0};
  const auto lam = solve_lambda(anchors, mid);
  CHECK(lam[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(lam[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(lam[2] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("solve_lambda: round trip through a known convex combination") {
  Xoshiro256 gen({91, 0});
  for (int trial = 0; trial < 25; ++trial) {
    // Four anchors in general position inside the simplex.
    std::vector<std::vector<double>> anchors(4);
    for (auto& f : anchors) f = ot::random_distribution(4, gen);
    const auto weights = ot::random_distribution(4, gen);
    std::vector<double> target(4, 0.0);
    for (int k = 0; k < 4; ++k)
      for (int d = 0; d < 4; ++d) target[d] += weights[k] * anchors[k][d];
    const auto lam = solve_lambda(anchors, target);
    double sum = 0.0;
    std::vector<double> reproduced(4, 0.0);
    for (int k = 0; k < 4; ++k) {
      CHECK(lam[k] >= 0.0);
      sum += lam[k];
      for (int d = 0; d < 4; ++d) reproduced[d] += lam[k] * anchors[k][d];
    }
    CHECK(std::abs(sum - 1.0) < 1e-9);
    double residual = 0.0;
    for (int d = 0; d < 4; ++d)
      residual += (reproduced[d] - target[d]) * (reproduced[d] - target[d]);
    CHECK(std::sqrt(residual) < 1e-10);
  }
}

TEST_CASE("solve_lambda rejects targets outside the convex hull") {
  const auto anchors = basis_anchors(3);
  const std::vector<double> outside = {-1.0, 1.0, 1.0};
  CHECK_THROWS_WITH_AS(solve_lambda(anchors, outside),
                       doctest::Contains("not representable"), ValidationError);
}

TEST_CASE("random instances satisfy the anchor invariants") {
  const AnchorInstance inst = AnchorInstance::random(12, 2, 5, 4, {7, 0});
  CHECK_NOTHROW(inst.validate());
  // Round trip through JSON.
  const AnchorInstance back = parse_anchor_instance(anchor_instance_to_json(inst));
  CHECK(back.phi == inst.phi);
  CHECK(back.psi == inst.psi);
  CHECK(back.anchors == inst.anchors);
}

TEST_CASE("sample_anchors: deterministic rows stay point masses") {
  AnchorInstance inst;
  inst.num_states = 3;
  inst.num_actions = 1;
  inst.feature_dim = 2;
  inst.horizon = 2;
  // psi rows are point masses, anchors are the basis features.
  inst.psi = {0, 1, 0, 0, 0, 1};
  inst.phi = {1, 0, 0, 1, 0.5, 0.5};
  inst.anchors = {{0, 0}, {1, 0}};
  inst.reward = {0.1, 0.2, 0.3};
  const AnchorModel model = sample_anchors(inst, 500, {3, 0});
  CHECK(model.row(0, 3)[1] == 1.0);
  CHECK(model.row(1, 3)[2] == 1.0);
}

TEST_CASE("sampled anchor rows sum to one and converge in l1") {
  const AnchorInstance inst = AnchorInstance::random(20, 2, 6, 4, {11, 0});
  const AnchorModel model = sample_anchors(inst, 100'000, {5, 0});
  for (std::size_t k = 0; k < inst.anchors.size(); ++k) {
    const auto row = model.row(static_cast<int>(k), 20);
    double sum = 0.0;
    for (const double p : row) sum += p;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    const auto [s, a] = inst.anchors[k];
    const auto truth = inst.transition_row(s, a);
    double l1 = 0.0;
    for (int s2 = 0; s2 < 20; ++s2) l1 += std::abs(row[s2] - truth[s2]);
    CHECK(l1 < 0.05);
  }
}

TEST_CASE("plugin_transition: anchors map to their own empirical rows") {
  const AnchorInstance inst = AnchorInstance::random(10, 2, 4, 3, {13, 0});
  const AnchorModel model = make_anchor_model(inst, 200, {9, 0});
  for (std::size_t k = 0; k < inst.anchors.size(); ++k) {
    const auto [s, a] = inst.anchors[k];
    const auto row = plugin_transition(model, inst, s, a);
    const auto expected = model.row(static_cast<int>(k), 10);
    for (int s2 = 0; s2 < 10; ++s2)
      CHECK(std::abs(row[s2] - expected[s2]) < 1e-9);
  }
}

TEST_CASE("plugin_transition: equal weights average the anchor rows") {
  AnchorInstance inst;
  inst.num_states = 4;
  inst.num_actions = 1;
  inst.feature_dim = 2;
  inst.horizon = 2;
  inst.psi = {0.4, 0.6, 0, 0, 0, 0, 0.5, 0.5};
  inst.phi = {1, 0, 0, 1, 0.5, 0.5, 0.25, 0.75};
  inst.anchors = {{0, 0}, {1, 0}};
  inst.reward = {0.1, 0.2, 0.3, 0.4};
  AnchorModel model = sample_anchors(inst, 1000, {1, 0});
  resolve_lambdas(model, inst);
  const auto row = plugin_transition(model, inst, 2, 0);
  const auto r0 = model.row(0, 4);
  const auto r1 = model.row(1, 4);
  for (int s2 = 0; s2 < 4; ++s2)
    CHECK(row[s2] == doctest::Approx(0.5 * (r0[s2] + r1[s2])).epsilon(1e-9));
  // Rows and lambda are both simplex-valued, so the plugin row is one too.
  double sum = 0.0;
  for (const double p : row) {
    CHECK(p >= 0.0);
    sum += p;
  }
  CHECK(std::abs(sum - 1.0) < 1e-9);
}

TEST_CASE("plugin rows obey the triangle-inequality error budget") {
  const AnchorInstance inst = AnchorInstance::random(20, 2, 6, 4, {17, 0});
  const AnchorModel model = make_anchor_model(inst, 2'000, {21, 0});
  const int K = static_cast<int>(inst.anchors.size());
  std::vector<double> anchor_errors(K, 0.0);
  for (int k = 0; k < K; ++k) {
    const auto [s, a] = inst.anchors[k];
    const auto truth = inst.transition_row(s, a);
    const auto row = model.row(k, 20);
    for (int s2 = 0; s2 < 20; ++s2)
      anchor_errors[k] += std::abs(row[s2] - truth[s2]);
  }
  Xoshiro256 gen({23, 0});
  for (int trial = 0; trial < 30; ++trial) {
    const int s = gen.next_int(20);
    const int a = gen.next_int(2);
    const auto row = plugin_transition(model, inst, s, a);
    const auto truth = inst.transition_row(s, a);
    double l1 = 0.0;
    for (int s2 = 0; s2 < 20; ++s2) l1 += std::abs(row[s2] - truth[s2]);
    const double* lam = model.lambda.data() + (static_cast<std::size_t>(s) * 2 + a) * K;
    double budget = 1e-9;
    for (int k = 0; k < K; ++k) budget += lam[k] * anchor_errors[k];
    CHECK(l1 <= budget);
  }
}

TEST_CASE("anchor_plan: exact rows give zero suboptimality") {
  const AnchorInstance inst = AnchorInstance::random(12, 2, 4, 4, {29, 0});
  const AnchorModel exact = exact_anchor_model(inst);
  const AnchorPlanReport report = anchor_plan(exact, inst);
  CHECK(report.q1_suboptimality < 1e-9);
  CHECK(report.v1_suboptimality < 1e-9);
}

TEST_CASE("single-anchor degenerate instance: every plugin row is the same") {
  AnchorInstance inst;
  inst.num_states = 5;
  inst.num_actions = 2;
  inst.feature_dim = 1;
  inst.horizon = 3;
  inst.psi = {0.2, 0.2, 0.2, 0.2, 0.2};
  inst.phi.assign(10, 1.0);
  inst.anchors = {{0, 0}};
  inst.reward.assign(10, 0.5);
  const AnchorModel model = make_anchor_model(inst, 300, {31, 0});
  const auto first = plugin_transition(model, inst, 0, 0);
  for (int s = 0; s < 5; ++s)
    for (int a = 0; a < 2; ++a) CHECK(plugin_transition(model, inst, s, a) == first);
}

TEST_CASE("recover lemma: indicator weights and constant values") {
  const AnchorInstance inst = AnchorInstance::random(10, 2, 4, 3, {37, 0});
  const auto [s0, a0] = inst.anchors[1];
  Xoshiro256 gen({39, 0});
  std::vector<double> values(10);
  for (auto& v : values) v = gen.next_double() * 3;
  const RecoverReport at_anchor = recover_lemma_check(inst, s0, a0, values);
  CHECK(at_anchor.pass);
  CHECK(at_anchor.lhs == doctest::Approx(at_anchor.rhs).epsilon(1e-9));
  const std::vector<double> constant(10, 1.7);
  const RecoverReport flat = recover_lemma_check(inst, 3, 1, constant);
  CHECK(flat.lhs == doctest::Approx(0.0));
  CHECK(flat.rhs == doctest::Approx(0.0));
  CHECK(flat.pass);
}

TEST_CASE("recover lemma holds on random draws") {
  const AnchorInstance inst = AnchorInstance::random(15, 2, 5, 4, {41, 0});
  Xoshiro256 gen({43, 0});
  for (int trial = 0; trial < 100; ++trial) {
    const int s = gen.next_int(15);
    const int a = gen.next_int(2);
    std::vector<double> values(15);
    for (auto& v : values) v = gen.next_double() * 4;
    CHECK(recover_lemma_check(inst, s, a, values).pass);
  }
}
