#pragma once

// Exact solver for small horizons. Every setup pattern x and goodwill pattern
// delta fixes all binary decisions of the model, leaving an LP in
// (y, v, w, Ed, I, B). The best LP over all patterns is the optimum.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "lotflow/core_model.hpp"
#include "lotflow/frh.hpp"
#include "lotflow/lp_solver.hpp"
#include "lotflow/solution.hpp"

namespace lotflow {

struct OracleConfig {
  int max_T = 8;
};

struct ExactResult {
  Solution solution;
  std::vector<int> x;      // argmax setup pattern (empty when degenerate)
  std::vector<int> delta;  // argmax goodwill pattern
};

struct CombinationResult {
  bool feasible = false;
  double objective = 0.0;  // B_T - B_0 of the LP optimum
  Plan plan;
};

namespace oracle_detail {

enum Field { kY = 0, kV, kW, kEd, kI, kB, kFields };

inline int var(int t0, Field f) { return t0 * kFields + f; }

// Goodwill patterns in lexicographic order. delta_t = 0 needs
// d_t <= beta * w_{t-1}, and w_{t-1} <= Ed_{t-1} <= d_{t-1} (or 0 when the
// previous period was itself wiped out).
inline void delta_patterns(const Instance& inst, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  const auto k = cur.size();
  if (k == static_cast<std::size_t>(inst.T)) {
    out.push_back(cur);
    return;
  }
  const double w_cap = (k == 0 || cur[k - 1] == 0) ? 0.0 : inst.d[k - 1];
  if (inst.beta > 0.0 && inst.d[k] <= inst.beta * w_cap) {
    cur.push_back(0);
    delta_patterns(inst, cur, out);
    cur.pop_back();
  }
  cur.push_back(1);
  delta_patterns(inst, cur, out);
  cur.pop_back();
}

}  // namespace oracle_detail

/// Builds the LP for one (x, delta) pattern. With zero_inventory_ordering
/// set, launching in t+1 additionally forces I_t = 0.
inline LpProblem build_combination_lp(const Instance& inst, const std::vector<int>& x, const std::vector<int>& delta,
                                      bool zero_inventory_ordering = false) {
  using namespace oracle_detail;
  const int T = inst.T;
  LpProblem lp(T * kFields);
  const auto W = static_cast<std::size_t>(lp.n_vars);
  auto row = [&]() { return std::vector<double>(W, 0.0); };
  auto at = [](std::vector<double>& r, int j) -> double& { return r[static_cast<std::size_t>(j)]; };
  const double B0 = inst.initial_capital();

  for (int k = 0; k < T; ++k) {
    const auto u = static_cast<std::size_t>(k);
    const double sx = inst.s[u] * x[u];
    // v + w = Ed
    auto r = row();
    at(r, var(k, kV)) = 1.0;
    at(r, var(k, kW)) = 1.0;
    at(r, var(k, kEd)) = -1.0;
    lp.add(std::move(r), Relation::Equal, 0.0);
    // I_k = I_{k-1} + y - v
    r = row();
    at(r, var(k, kI)) = 1.0;
    if (k > 0) at(r, var(k - 1, kI)) = -1.0;
    at(r, var(k, kY)) = -1.0;
    at(r, var(k, kV)) = 1.0;
    lp.add(std::move(r), Relation::Equal, 0.0);
    // B_k = B_{k-1} + p v - h I - s x - c y - repayment
    r = row();
    at(r, var(k, kB)) = 1.0;
    if (k > 0) at(r, var(k - 1, kB)) = -1.0;
    at(r, var(k, kV)) = -inst.p[u];
    at(r, var(k, kI)) = inst.h[u];
    at(r, var(k, kY)) = inst.c[u];
    lp.add(std::move(r), Relation::Equal, (k == 0 ? B0 : 0.0) - sx - inst.repayment_at(k + 1));
    // s x + c y <= B_{k-1}
    r = row();
    at(r, var(k, kY)) = inst.c[u];
    if (k > 0) at(r, var(k - 1, kB)) = -1.0;
    lp.add(std::move(r), Relation::LessEq, (k == 0 ? B0 : 0.0) - sx);
    if (x[u] == 0) lp.set_bounds(var(k, kY), 0.0, 0.0);
    // Effective demand.
    if (delta[u] == 1) {
      r = row();
      at(r, var(k, kEd)) = 1.0;
      if (k > 0) at(r, var(k - 1, kW)) = inst.beta;
      lp.add(std::move(r), Relation::Equal, inst.d[u]);
    } else {
      lp.set_bounds(var(k, kEd), 0.0, 0.0);
      r = row();
      if (k > 0) at(r, var(k - 1, kW)) = inst.beta;
      lp.add(std::move(r), Relation::GreaterEq, inst.d[u]);
    }
    if (zero_inventory_ordering && k > 0 && x[u] == 1) lp.set_bounds(var(k - 1, kI), 0.0, 0.0);
  }
  lp.objective[static_cast<std::size_t>(var(T - 1, kB))] = 1.0;
  return lp;
}

inline CombinationResult solve_combination(const Instance& inst, const std::vector<int>& x,
                                           const std::vector<int>& delta, bool zero_inventory_ordering = false) {
  using namespace oracle_detail;
  const auto sol = lp_solve(build_combination_lp(inst, x, delta, zero_inventory_ordering));
  if (sol.status == LpStatus::NumericalFailure) throw NumericalFailure("oracle LP failed\n" + sol.debug_dump);
  if (sol.status == LpStatus::Unbounded) throw NumericalFailure("oracle LP reported unbounded");
  CombinationResult res;
  if (sol.status != LpStatus::Optimal) return res;
  res.feasible = true;
  res.objective = sol.objective_value - inst.initial_capital();
  res.plan = Plan::zeros(inst.T);
  for (int k = 0; k < inst.T; ++k) {
    const auto u = static_cast<std::size_t>(k);
    res.plan.y[u] = std::max(0.0, sol.x[static_cast<std::size_t>(var(k, kY))]);
    res.plan.v[u] = std::max(0.0, sol.x[static_cast<std::size_t>(var(k, kV))]);
  }
  return res;
}

inline ExactResult solve_exact_detailed(const Instance& inst, const OracleConfig& cfg = {}) {
  validate(inst);
  if (inst.T > cfg.max_T) {
    throw GuardError("horizon T=" + std::to_string(inst.T) + " exceeds the oracle limit " + std::to_string(cfg.max_T));
  }
  std::vector<std::vector<int>> deltas;
  std::vector<int> scratch;
  oracle_detail::delta_patterns(inst, scratch, deltas);

  ExactResult best;
  bool found = false;
  int lp_count = 0;
  const auto T = static_cast<std::size_t>(inst.T);
  std::vector<int> x(T);
  for (unsigned long code = 0; code < (1UL << T); ++code) {
    // Period 1 is the most significant bit, so codes run in lexicographic order.
    for (std::size_t k = 0; k < T; ++k) x[k] = static_cast<int>((code >> (T - 1 - k)) & 1UL);
    for (const auto& delta : deltas) {
      ++lp_count;
      const auto res = solve_combination(inst, x, delta);
      if (!res.feasible) continue;
      const double ref = best.solution.objective;
      if (found && res.objective <= ref + 1e-9 * std::max(1.0, std::abs(ref))) continue;
      found = true;
      best.x = x;
      best.delta = delta;
      best.solution.trajectory = evaluate_plan(inst, res.plan);
      best.solution.objective = res.objective;
    }
  }
  if (!found) {
    best.solution.trajectory = evaluate_plan(inst, Plan::zeros(inst.T));
    best.solution.objective = -inst.repayment();
    best.solution.degenerate = true;
  } else {
    // x follows y in the replay, which can only drop idle setups.
    best.solution.objective = best.solution.trajectory.objective;
  }
  best.solution.lp_count = lp_count;
  return best;
}

inline Solution solve_exact(const Instance& inst, const OracleConfig& cfg = {}) {
  return solve_exact_detailed(inst, cfg).solution;
}

/// Relative optimality gap of a heuristic objective, clamped at zero.
inline double deviation(double oracle_objective, double heuristic_objective) {
  const double gap = (oracle_objective - heuristic_objective) / std::max(std::abs(oracle_objective), 1e-9);
  return std::max(0.0, gap);
}

inline double deviation(const Instance& inst, const OracleConfig& cfg = {}) {
  const double exact = solve_exact(inst, cfg).objective;
  return deviation(exact, solve_frh(inst).objective);
}

}  // namespace lotflow
