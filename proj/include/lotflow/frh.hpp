#pragma once

// Forward recursion over production rounds with heuristic plan adjustments.
//
// The recursion keeps, for every n, the best plan prefix S_n covering periods
// 1..n. S_n either idles in period n or ends with a production round [m, n]
// appended to S_{m-1}. Prefixes are stored as full trajectories, so round
// values never go stale when an earlier prefix is adjusted.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "lotflow/core_model.hpp"
#include "lotflow/round_subproblems.hpp"
#include "lotflow/solution.hpp"

namespace lotflow {

struct PrefixState {
  bool valid = false;
  Trajectory tr;                  // evaluated through period n
  int round_m = 0;                // first period of the final round, 0 if period n idles
  std::vector<int> round_starts;  // cycle starts of the final round
};

struct RecursionState {
  std::vector<double> B_star;       // B_star[n] = capital at the end of n under S_n
  std::vector<PrefixState> prefix;  // prefix[0] is the empty plan
  // BB_table[m][n]: increment of the round whose last cycle starts at m.
  std::vector<std::vector<double>> BB_table;
  int lp_count = 0;
  int rounds_solved = 0;
  int rounds_this_step = 0;  // rounds solved by the latest recursion step
  std::vector<Adjustment> adjustments;
};

namespace frh_detail {

inline double B_at(const Trajectory& tr, int t) { return tr.B[static_cast<std::size_t>(t)]; }
inline double w_at(const Trajectory& tr, int t) { return t >= 1 ? tr.w[static_cast<std::size_t>(t - 1)] : 0.0; }

// Lost sales can come back from the LP a hair below zero.
inline EntryState entry(const Trajectory& tr, int start) {
  return {B_at(tr, start - 1), std::max(0.0, w_at(tr, start - 1))};
}

inline int last_setup_before(const Trajectory& tr, int m) {
  for (int t = m - 1; t >= 1; --t) {
    if (tr.x[static_cast<std::size_t>(t - 1)] == 1) return t;
  }
  return 0;
}

inline bool close(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}); }

// Strict improvement: more end capital, or equal capital and fewer lost sales.
inline bool improves(double B, double w, double B_ref, double w_ref) {
  if (close(B, B_ref)) return w < w_ref - 1e-9;
  return B > B_ref;
}

// Keeps `base` before the round, writes the round, leaves later periods zero.
inline std::optional<Trajectory> compose(const Instance& inst, const Plan& base, const RoundSpec& spec,
                                         const RoundSolution& sol) {
  Plan plan = Plan::zeros(inst.T);
  for (int t = 1; t < spec.m; ++t) {
    const auto u = static_cast<std::size_t>(t - 1);
    plan.y[u] = base.y[u];
    plan.v[u] = base.v[u];
  }
  for (std::size_t j = 0; j < sol.v.size(); ++j) {
    plan.y[static_cast<std::size_t>(spec.m - 1) + j] = sol.y[j];
    plan.v[static_cast<std::size_t>(spec.m - 1) + j] = sol.v[j];
  }
  auto tr = evaluate_prefix(inst, plan, spec.n);
  if (!check_feasibility(inst, tr).feasible) return std::nullopt;
  return tr;
}

inline void record_round(RecursionState& st, const RoundSolution& sol, int last_start, int n) {
  st.lp_count += sol.lp_count;
  ++st.rounds_solved;
  if (sol.feasible) st.BB_table[static_cast<std::size_t>(last_start)][static_cast<std::size_t>(n)] = sol.BB;
}

}  // namespace frh_detail

inline RecursionState make_recursion_state(const Instance& inst) {
  validate(inst);
  const auto N = static_cast<std::size_t>(inst.T) + 1;
  RecursionState st;
  st.B_star.assign(N, -std::numeric_limits<double>::infinity());
  st.prefix.assign(N, PrefixState{});
  st.BB_table.assign(N, std::vector<double>(N, std::numeric_limits<double>::quiet_NaN()));
  st.prefix[0].valid = true;
  st.prefix[0].tr = evaluate_prefix(inst, Plan::zeros(inst.T), 0);
  st.B_star[0] = inst.initial_capital();
  return st;
}

/// One recursion step: picks S_n among the idle extension of S_{n-1} and
/// every round ending at n. Ties go to the larger round start, idling last
/// counting as start n+1.
inline void recurse_step(const Instance& inst, RecursionState& st, int n) {
  using namespace frh_detail;
  const int rounds_before = st.rounds_solved;
  PrefixState best;
  double best_B = 0.0, best_w = 0.0;
  auto offer = [&](Trajectory tr, int round_m, std::vector<int> starts) {
    const double B = B_at(tr, n), w = w_at(tr, n);
    // Candidates arrive in increasing tie key, so equal ones replace.
    if (!best.valid || improves(B, w, best_B, best_w) || (close(B, best_B) && !(w > best_w + 1e-9))) {
      best = PrefixState{true, std::move(tr), round_m, std::move(starts)};
      best_B = B;
      best_w = w;
    }
  };

  for (int m = 1; m <= n; ++m) {
    const PrefixState& base = st.prefix[static_cast<std::size_t>(m - 1)];
    if (!base.valid) continue;
    std::optional<PreviousCycle> prev;
    if (const int p = last_setup_before(base.tr, m); p > 0) prev = PreviousCycle{p, entry(base.tr, p)};
    for (const auto& spec : enumerate_round_specs(inst, m, n, entry(base.tr, m), prev)) {
      const auto sol = solve_round(inst, spec);
      record_round(st, sol, m, n);
      if (!sol.feasible) continue;
      if (auto tr = compose(inst, base.tr.plan, spec, sol)) offer(std::move(*tr), spec.m, spec.cycle_starts);
    }
  }
  if (const PrefixState& prev = st.prefix[static_cast<std::size_t>(n - 1)]; prev.valid) {
    auto tr = evaluate_prefix(inst, prev.tr.plan, n);
    if (check_feasibility(inst, tr).feasible) offer(std::move(tr), 0, {});
  }
  st.rounds_this_step = st.rounds_solved - rounds_before;
  st.prefix[static_cast<std::size_t>(n)] = best;
  st.B_star[static_cast<std::size_t>(n)] = best.valid ? best_B : -std::numeric_limits<double>::infinity();
}

/// Pure forward recursion without adjustments.
inline RecursionState recurse(const Instance& inst) {
  auto st = make_recursion_state(inst);
  for (int n = 1; n <= inst.T; ++n) recurse_step(inst, st, n);
  return st;
}

/// Tries the three adjustment families on S_n when its final round launches
/// its last cycle at t+1. Every re-solved round must not lose more sales at
/// n than the current plan. Returns true if S_n changed.
inline bool adjust_plan(const Instance& inst, RecursionState& st, int n) {
  using namespace frh_detail;
  if (inst.beta == 0.0) return false;
  PrefixState& cur = st.prefix[static_cast<std::size_t>(n)];
  if (!cur.valid || cur.round_m == 0) return false;

  // Recursion plus adjustments may solve at most 3n rounds for this n.
  int budget_left = std::max(0, 3 * n - st.rounds_this_step);

  const Plan idle = Plan::zeros(inst.T);
  const Trajectory idle_tr = evaluate_prefix(inst, idle, n);
  bool changed = false;

  auto run_family = [&](const char* kind, const std::vector<RoundSpec>& specs, const Plan& base) {
    std::optional<PrefixState> pick;
    double pick_B = B_at(cur.tr, n), pick_w = w_at(cur.tr, n);
    RoundOptions opts;
    opts.w_cap = w_at(cur.tr, n);
    for (const auto& spec : specs) {
      if (budget_left == 0) break;
      --budget_left;
      const auto sol = solve_round(inst, spec, opts);
      record_round(st, sol, spec.cycle_starts.back(), n);
      if (!sol.feasible) continue;
      auto tr = compose(inst, base, spec, sol);
      if (!tr) continue;
      const double B = B_at(*tr, n), w = w_at(*tr, n);
      if (improves(B, w, pick_B, pick_w)) {
        pick = PrefixState{true, std::move(*tr), spec.m, spec.cycle_starts};
        pick_B = B;
        pick_w = w;
      }
    }
    if (pick) {
      st.adjustments.push_back({kind, pick->round_starts});
      cur = std::move(*pick);
      st.B_star[static_cast<std::size_t>(n)] = pick_B;
      changed = true;
    }
  };

  // (a) split the first cycle of a two-cycle round.
  if (cur.round_starts.size() == 2) {
    const int m = cur.round_starts[0], t1 = cur.round_starts[1];
    std::vector<RoundSpec> specs;
    const EntryState e = entry(cur.tr, m);
    for (int k = m + 1; k < t1; ++k) specs.push_back(RoundSpec{m, n, {m, k, t1}, e.B, e.w});
    run_family("Adj1", specs, cur.tr.plan);
  }
  // (b) a lone cycle with no production before it gets an earlier partner.
  if (cur.round_starts.size() == 1 && last_setup_before(cur.tr, cur.round_starts[0]) == 0) {
    const int t1 = cur.round_starts[0];
    std::vector<RoundSpec> specs;
    for (int mp = 1; mp < t1; ++mp) {
      const EntryState e = entry(idle_tr, mp);
      specs.push_back(RoundSpec{mp, n, {mp, t1}, e.B, e.w});
    }
    run_family("Adj2", specs, idle);
  }
  // (c) delay a first cycle that starts in period 1.
  if (cur.round_starts.size() == 2 && cur.round_starts[0] == 1) {
    const int t1 = cur.round_starts[1];
    std::vector<RoundSpec> specs;
    for (int mp = 2; mp < t1; ++mp) {
      const EntryState e = entry(idle_tr, mp);
      specs.push_back(RoundSpec{mp, n, {mp, t1}, e.B, e.w});
    }
    run_family("Adj3", specs, idle);
  }
  return changed;
}

/// Moves production from a later launch t2 to the previous launch t1 while
/// t1 has spare capital and producing early plus holding is cheaper.
inline Solution corollary2_postpass(const Instance& inst, Solution sol) {
  const int T = inst.T;
  const int max_moves = 4 * T + 4;
  for (int iter = 0; iter < max_moves; ++iter) {
    const Trajectory& tr = sol.trajectory;
    std::vector<int> starts;
    for (int t = 1; t <= T; ++t) {
      if (tr.x[static_cast<std::size_t>(t - 1)] == 1) starts.push_back(t);
    }
    bool moved = false;
    for (std::size_t i = starts.size(); i-- > 1 && !moved;) {
      const int t1 = starts[i - 1], t2 = starts[i];
      const auto u1 = static_cast<std::size_t>(t1 - 1), u2 = static_cast<std::size_t>(t2 - 1);
      const double c1 = inst.c[u1], s1 = inst.s[u1];
      const double slack = tr.B[u1] - s1 - c1 * tr.plan.y[u1];
      double hold = 0.0;
      for (int t = t1; t < t2; ++t) hold += inst.h[static_cast<std::size_t>(t - 1)];
      if (!(slack > tol::feas) || !(c1 + hold < inst.c[u2] - 1e-12)) continue;

      double dy = std::min((tr.B[u1] - s1) / c1 - tr.plan.y[u1], tr.plan.y[u2]);
      // Capital between the two launches must stay nonnegative.
      double unit_cost = c1;
      for (int t = t1; t < t2; ++t) {
        unit_cost += inst.h[static_cast<std::size_t>(t - 1)];
        dy = std::min(dy, tr.B[static_cast<std::size_t>(t)] / unit_cost);
      }
      if (!(dy > 1e-9)) continue;

      Plan plan = tr.plan;
      plan.y[u1] += dy;
      plan.y[u2] -= dy;
      if (plan.y[u2] <= tol::zero) {
        plan.y[u1] += plan.y[u2];
        plan.y[u2] = 0.0;
      }
      auto next = evaluate_plan(inst, plan);
      if (!check_feasibility(inst, next).feasible || next.objective <= tr.objective + 1e-12) continue;
      sol.trajectory = std::move(next);
      sol.objective = sol.trajectory.objective;
      sol.adjustments.push_back({"Cor2", {t1, t2}});
      moved = true;
    }
    if (!moved) break;
  }
  return sol;
}

inline Solution null_solution(const Instance& inst, int lp_count) {
  Solution sol;
  sol.trajectory = evaluate_plan(inst, Plan::zeros(inst.T));
  sol.objective = sol.trajectory.objective;
  sol.lp_count = lp_count;
  sol.degenerate = true;
  return sol;
}

/// Recursion with per-period adjustments, then the production-shift pass.
inline Solution solve_frh(const Instance& inst) {
  auto st = make_recursion_state(inst);
  for (int n = 1; n <= inst.T; ++n) {
    recurse_step(inst, st, n);
    adjust_plan(inst, st, n);
  }
  const PrefixState& fin = st.prefix[static_cast<std::size_t>(inst.T)];
  if (!fin.valid) return null_solution(inst, st.lp_count);
  Solution sol;
  sol.trajectory = fin.tr;
  sol.objective = fin.tr.objective;
  sol.lp_count = st.lp_count;
  sol.adjustments = st.adjustments;
  return corollary2_postpass(inst, std::move(sol));
}

}  // namespace lotflow
