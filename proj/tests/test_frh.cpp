#include <gtest/gtest.h>

#include <random>

#include "lotflow/frh.hpp"
#include "lotflow/instance_gen.hpp"
#include "support/random_instance.hpp"

using namespace lotflow;

namespace {

int setups(const Trajectory& tr) {
  int n = 0;
  for (int x : tr.x) n += x;
  return n;
}

int lp_budget(const Instance& inst) {
  const int tri = inst.T * (inst.T + 1) / 2;
  return inst.beta == 0.0 ? tri : 9 * tri;
}

}  // namespace

// Reference optima below come from a big-M MILP of the full model solved
// with an external solver. The whole-unit checks use values rounded to the
// nearest unit.
TEST(Frh, ShowcaseCapitalPoints) {
  EXPECT_NEAR(solve_frh(gen_table1(50)).objective, 0.0, 1.0);
  EXPECT_NEAR(solve_frh(gen_table1(200)).objective, 1891.0, 1.0);
  EXPECT_NEAR(solve_frh(gen_table1(400)).objective, 2360.0, 1.0);
  EXPECT_NEAR(solve_frh(gen_table1(200)).objective, 1891.3077, 1e-3);
  EXPECT_NEAR(solve_frh(gen_table1(250)).objective, 2300.7692, 1e-3);
}

TEST(Frh, ShowcaseTightCapitalLaunchesTwice) {
  const auto sol = solve_frh(gen_table1(150));
  EXPECT_NEAR(sol.objective, 70.0, 1.0);
  EXPECT_EQ(setups(sol.trajectory), 2);
}

TEST(Frh, ShowcaseLoanPoints) {
  EXPECT_NEAR(solve_frh(gen_table1(200, 300, 3, 0.10)).objective, 1971.0, 1.0);
  EXPECT_NEAR(solve_frh(gen_table1(200, 300, 3, 0.30)).objective, 1710.0, 1.0);
}

TEST(Frh, UnprofitableSinglePeriodStaysIdle) {
  Instance inst;
  inst.T = 1;
  inst.d = {10};
  inst.p = {2};
  inst.c = {1};
  inst.h = {0};
  inst.s = {100};
  inst.Bc = 200;
  const auto sol = solve_frh(inst);
  EXPECT_DOUBLE_EQ(sol.objective, 0.0);
  EXPECT_EQ(setups(sol.trajectory), 0);
  EXPECT_FALSE(sol.degenerate);
}

TEST(Frh, UnaffordableRepaymentReportsDegenerateNullPlan) {
  Instance inst;
  inst.T = 2;
  inst.d = {0, 0};
  inst.p = {1, 1};
  inst.c = {1, 1};
  inst.h = {0, 0};
  inst.s = {0, 0};
  inst.Bc = 0;
  inst.BL = 100;
  inst.TL = 1;
  inst.r = 0.5;
  const auto sol = solve_frh(inst);
  EXPECT_TRUE(sol.degenerate);
  EXPECT_NEAR(sol.objective, -150.0, 1e-9);
}

TEST(Frh, RecursionPicksBestRoundPerPeriod) {
  // Two independent profitable periods with expensive holding: each period
  // is its own round.
  Instance inst;
  inst.T = 2;
  inst.d = {10, 10};
  inst.p = {10, 10};
  inst.c = {2, 2};
  inst.h = {50, 50};
  inst.s = {5, 5};
  inst.Bc = 100;
  const auto st = recurse(inst);
  EXPECT_NEAR(st.B_star[1], 100 + 80 - 5, 1e-9);
  EXPECT_NEAR(st.B_star[2], 100 + 2 * 75, 1e-9);
  EXPECT_EQ(st.prefix[2].round_starts, std::vector<int>{2});
  EXPECT_NEAR(st.BB_table[1][1], 75, 1e-9);
  EXPECT_EQ(st.lp_count, 3);
}

TEST(Frh, NoAdjustmentWithoutGoodwillLoss) {
  auto inst = gen_table1(200);
  inst.beta = 0.0;
  auto st = make_recursion_state(inst);
  for (int n = 1; n <= inst.T; ++n) {
    recurse_step(inst, st, n);
    EXPECT_FALSE(adjust_plan(inst, st, n));
  }
  EXPECT_TRUE(st.adjustments.empty());
}

TEST(Frh, AcceptedAdjustmentsStrictlyImprove) {
  int accepted = 0;
  std::mt19937_64 rng(31);
  for (int i = 0; i < 60; ++i) {
    lotflow::testing::InstanceShape shape;
    shape.T_min = 3;
    shape.T_max = 7;
    auto inst = i == 0 ? gen_table1(200) : lotflow::testing::random_instance(rng, shape);
    if (inst.beta == 0.0) inst.beta = 0.5;
    auto st = make_recursion_state(inst);
    for (int n = 1; n <= inst.T; ++n) {
      recurse_step(inst, st, n);
      const auto& pre = st.prefix[static_cast<std::size_t>(n)];
      if (!pre.valid) continue;
      const double B0 = st.B_star[static_cast<std::size_t>(n)];
      const double w0 = pre.tr.w[static_cast<std::size_t>(n - 1)];
      if (adjust_plan(inst, st, n)) {
        ++accepted;
        const auto& post = st.prefix[static_cast<std::size_t>(n)];
        const double B1 = st.B_star[static_cast<std::size_t>(n)];
        const double w1 = post.tr.w[static_cast<std::size_t>(n - 1)];
        EXPECT_TRUE(B1 > B0 + 1e-9 || (std::abs(B1 - B0) <= 1e-9 * std::max(1.0, std::abs(B0)) && w1 < w0))
            << "B " << B0 << " -> " << B1 << ", w " << w0 << " -> " << w1;
        EXPECT_TRUE(check_feasibility(inst, post.tr).feasible);
      }
    }
  }
  EXPECT_GT(accepted, 0);
}

TEST(Corollary2, PullsProductionToCheaperPeriod) {
  // Slack 100 at period 1 buys 20 more units at c=5; period 2 needs 10 at
  // c=13; carrying costs 1. Gain (13 - 5 - 1) * 10 = 70.
  Instance inst;
  inst.T = 2;
  inst.d = {10, 10};
  inst.p = {10, 20};
  inst.c = {5, 13};
  inst.h = {1, 0};
  inst.s = {0, 0};
  inst.Bc = 150;
  Solution sol;
  sol.trajectory = evaluate_plan(inst, Plan{{10, 10}, {10, 10}});
  sol.objective = sol.trajectory.objective;
  const auto out = corollary2_postpass(inst, sol);
  EXPECT_NEAR(out.objective - sol.objective, 70.0, 1e-9);
  EXPECT_NEAR(out.trajectory.plan.y[0], 20.0, 1e-9);
  EXPECT_EQ(out.trajectory.x[1], 0);
  ASSERT_EQ(out.adjustments.size(), 1u);
  EXPECT_EQ(out.adjustments[0].kind, "Cor2");
  EXPECT_TRUE(check_feasibility(inst, out.trajectory).feasible);
}

TEST(Corollary2, CapitalLimitsTheMove) {
  Instance inst;
  inst.T = 2;
  inst.d = {10, 10};
  inst.p = {10, 20};
  inst.c = {5, 13};
  inst.h = {1, 0};
  inst.s = {0, 0};
  inst.Bc = 75;  // room for 5 extra units only
  Solution sol;
  sol.trajectory = evaluate_plan(inst, Plan{{10, 10}, {10, 10}});
  sol.objective = sol.trajectory.objective;
  const auto out = corollary2_postpass(inst, sol);
  EXPECT_NEAR(out.trajectory.plan.y[0], 15.0, 1e-9);
  EXPECT_NEAR(out.objective - sol.objective, 35.0, 1e-9);
  EXPECT_TRUE(check_feasibility(inst, out.trajectory).feasible);
}

TEST(Corollary2, ConstantCostIsNoOp) {
  std::mt19937_64 rng(32);
  lotflow::testing::InstanceShape shape;
  shape.constant_c = true;
  for (int i = 0; i < 50; ++i) {
    const auto inst = lotflow::testing::random_instance(rng, shape);
    auto st = recurse(inst);
    if (!st.prefix.back().valid) continue;
    Solution sol;
    sol.trajectory = st.prefix.back().tr;
    sol.objective = sol.trajectory.objective;
    const auto out = corollary2_postpass(inst, sol);
    EXPECT_TRUE(out.adjustments.empty());
    EXPECT_EQ(out.objective, sol.objective);
  }
}

TEST(FrhProperty, FeasibleAndWithinLpBudget) {
  std::mt19937_64 rng(33);
  lotflow::testing::InstanceShape shape;
  shape.T_max = 8;
  for (int i = 0; i < 150; ++i) {
    const auto inst = lotflow::testing::random_instance(rng, shape);
    const auto sol = solve_frh(inst);
    EXPECT_TRUE(check_feasibility(inst, sol.trajectory).feasible) << "case " << i;
    EXPECT_DOUBLE_EQ(sol.objective, sol.trajectory.objective);
    EXPECT_LE(sol.lp_count, lp_budget(inst)) << "case " << i;
  }
}

TEST(FrhProperty, ZeroInventoryOrderingAtConstantCost) {
  std::mt19937_64 rng(34);
  lotflow::testing::InstanceShape shape;
  shape.constant_c = true;
  shape.allow_beta = false;
  shape.T_max = 8;
  for (int i = 0; i < 150; ++i) {
    const auto inst = lotflow::testing::random_instance(rng, shape);
    const auto tr = solve_frh(inst).trajectory;
    for (int t = 1; t < inst.T; ++t) {
      EXPECT_LE(tr.I[static_cast<std::size_t>(t)] * tr.plan.y[static_cast<std::size_t>(t)], tol::zero);
    }
  }
}

TEST(FrhProperty, PostPassNeverLowersObjective) {
  std::mt19937_64 rng(35);
  for (int i = 0; i < 100; ++i) {
    const auto inst = lotflow::testing::random_instance(rng);
    auto st = make_recursion_state(inst);
    for (int n = 1; n <= inst.T; ++n) {
      recurse_step(inst, st, n);
      const double before = st.B_star[static_cast<std::size_t>(n)];
      adjust_plan(inst, st, n);
      EXPECT_GE(st.B_star[static_cast<std::size_t>(n)], before);
    }
    if (!st.prefix.back().valid) continue;
    Solution sol;
    sol.trajectory = st.prefix.back().tr;
    sol.objective = sol.trajectory.objective;
    EXPECT_GE(corollary2_postpass(inst, sol).objective, sol.objective);
  }
}
