// Copyright 2026 The krselect Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "krselect/metrics.h"
#include "krselect/transport.h"
#include "test_util.h"

namespace krselect {
namespace {

using testing::CodeOf;

TEST(SolveTransportTest, HandPlanOnLine) {
  auto s = MakeLinePointSet({0.0, 1.0, 3.0});
  const AtomicMeasure m1(s, {0.5, 0.5, 0.0});
  const AtomicMeasure m2(s, {0.0, 0.0, 1.0});
  const auto c = CostMatrix(Metric::Line(), *s, *s);
  const auto sol = SolveTransport(m1, m2, c);
  EXPECT_NEAR(sol.cost, 2.5, 1e-12);
  ASSERT_EQ(sol.plan.size(), 2u);
  EXPECT_EQ(sol.plan[0].from, 0u);
  EXPECT_EQ(sol.plan[0].to, 2u);
  EXPECT_NEAR(sol.plan[0].flow, 0.5, 1e-15);
  EXPECT_TRUE(VerifyOptimality(sol, c, m1, m2).optimal);
}

TEST(SolveTransportTest, IdenticalMeasuresCostNothing) {
  auto s = MakeLinePointSet({0.0, 1.0, 3.0});
  const AtomicMeasure m(s, {0.2, 0.3, 0.5});
  const auto sol = SolveTransport(m, m, CostMatrix(Metric::Line(), *s, *s));
  EXPECT_EQ(sol.cost, 0.0);
  for (const auto& e : sol.plan) EXPECT_EQ(e.from, e.to);
}

TEST(SolveTransportTest, ErrorContract) {
  auto s = MakeLinePointSet({0.0, 1.0});
  const auto c = CostMatrix(Metric::Line(), *s, *s);
  const AtomicMeasure a(s, {1.0, 0.0});
  EXPECT_EQ(CodeOf([&] { SolveTransport(a, AtomicMeasure(s, {1.0, 1.0}), c); }),
            ErrorCode::kMassMismatch);
  EXPECT_EQ(CodeOf([&] {
              SolveTransport(AtomicMeasure(s, {0.0, 0.0}), AtomicMeasure(s, {0.0, 0.0}), c);
            }),
            ErrorCode::kDegenerate);
  EXPECT_EQ(CodeOf([&] { SolveTransport(a, a, DenseMatrix(3, 3, 0.0)); }),
            ErrorCode::kDimensionMismatch);
  DenseMatrix inf = c;
  inf(0, 1) = std::numeric_limits<double>::infinity();
  EXPECT_EQ(CodeOf([&] { SolveTransport(a, a, inf); }), ErrorCode::kNonFiniteCost);
  const AtomicMeasure other(MakeLinePointSet({0.0, 2.0}), {1.0, 0.0});
  EXPECT_EQ(CodeOf([&] { SolveTransport(a, other, c); }), ErrorCode::kSupportMismatch);
}

TEST(SolveTransportTest, MetricOverloadUsesUnionSupport) {
  const AtomicMeasure a(MakeLinePointSet({0.0}), {1.0});
  const AtomicMeasure b(MakeLinePointSet({2.0}), {1.0});
  const auto sol = SolveTransport(a, b, Metric::Line());
  EXPECT_NEAR(sol.cost, 2.0, 1e-12);
  EXPECT_EQ(sol.potential.size(), 2u);
}

// Random symmetric costs from random points under several metrics, checked
// against an independent certificate.
TEST(SolveTransportTest, IndependentCertificateOnRandomInstances) {
  std::mt19937_64 rng(2024);
  const Metric metrics[] = {Metric::Line(), Metric::Circle(1.0), Metric::Discrete(1.0),
                            Metric::Product({Metric::Line(), Metric::Line()})};
  for (int t = 0; t < 200; ++t) {
    const Metric& d = metrics[t % 4];
    const std::size_t n = testing::RandomSize(rng, 1, 25);
    PointSetPtr s;
    if (d.kind() == MetricKind::kProduct) {
      s = MakePointSet(testing::RandomGridPoints(rng, n, 2, 6), 2);
    } else {
      s = MakeLinePointSet(testing::DistinctValues(rng, n, 0.0, 1.0));
    }
    const double mass = std::uniform_real_distribution<double>(0.1, 3.0)(rng);
    const AtomicMeasure m1(s, testing::RandomWeights(rng, n, 0.3, mass));
    std::vector<double> w2 = testing::RandomWeights(rng, n, 0.3, 1.0);
    for (double& w : w2) w *= m1.total_mass();
    const AtomicMeasure m2(s, w2);
    const auto c = CostMatrix(d, *s, *s);
    const auto sol = SolveTransport(m1, m2, c);
    const auto chk = testing::IndependentCertificate(sol, c, m1.weights(), m2.weights());
    EXPECT_LE(chk.marginal, 1e-9 * std::max(1.0, mass));
    EXPECT_LE(chk.dual, 1e-9);
    EXPECT_LE(chk.gap, 1e-9 * std::max(1.0, sol.cost));
    EXPECT_LE(chk.slackness, 1e-7);
    EXPECT_NEAR(chk.primal, sol.cost, 1e-9 * std::max(1.0, sol.cost));
    const double min_f = *std::min_element(sol.potential.begin(), sol.potential.end());
    EXPECT_EQ(min_f, 0.0);
    EXPECT_TRUE(VerifyOptimality(sol, c, m1, m2).optimal);
  }
}

TEST(VerifyOptimalityTest, FlagsBrokenSolutions) {
  auto s = MakeLinePointSet({0.0, 1.0, 3.0});
  const AtomicMeasure m1(s, {0.5, 0.5, 0.0});
  const AtomicMeasure m2(s, {0.0, 0.0, 1.0});
  const auto c = CostMatrix(Metric::Line(), *s, *s);
  auto sol = SolveTransport(m1, m2, c);

  auto bad_flow = sol;
  bad_flow.plan[0].flow += 0.1;
  EXPECT_FALSE(VerifyOptimality(bad_flow, c, m1, m2).optimal);

  auto bad_potential = sol;
  bad_potential.potential[0] += 5.0;
  const auto cert = VerifyOptimality(bad_potential, c, m1, m2);
  EXPECT_FALSE(cert.optimal);
  EXPECT_GT(cert.lipschitz_violation, 1.0);

  // Feasible but suboptimal: crossing paths.
  const AtomicMeasure n2(s, {0.5, 0.0, 0.5});
  auto crossing = SolveTransport(m1, n2, c);
  EXPECT_NEAR(crossing.cost, 1.0, 1e-12);
  crossing.plan = {{0, 2, 0.5}, {1, 0, 0.5}};
  const auto cc = VerifyOptimality(crossing, c, m1, n2);
  EXPECT_FALSE(cc.optimal);
  EXPECT_LE(cc.marginal_violation, 1e-12);

  auto truncated = sol;
  truncated.potential.pop_back();
  const auto t = VerifyOptimality(truncated, c, m1, m2);
  EXPECT_FALSE(t.optimal);
  EXPECT_TRUE(std::isinf(t.max_violation));
}

}  // namespace
}  // namespace krselect
