#pragma once

// Domain model of the capital-flow constrained lot-sizing problem:
// instance data, production plans, forward evaluation of inventory and
// capital, and constraint-by-constraint feasibility checking.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "lotflow/errors.hpp"

namespace lotflow {

namespace tol {
inline constexpr double zero = 1e-7;  // y above this counts as a setup
inline constexpr double feas = 1e-6;  // absolute slack for constraint checks
inline constexpr double eval = 1e-9;  // relative slack for objective identities
}  // namespace tol

// Exogenous data. Vectors are 0-based: d[0] is the demand of period 1.
struct Instance {
  int T = 0;
  std::vector<double> d, p, c, h, s;
  double Bc = 0.0;    // self-owned initial capital
  double BL = 0.0;    // loan received at the start of period 1
  int TL = 0;         // loan repaid at the end of period TL
  double r = 0.0;     // interest rate per period
  double beta = 0.0;  // goodwill loss rate

  double initial_capital() const { return Bc + BL; }
  bool has_loan() const { return BL > 0.0; }
  // One-time repayment B_L (1+r)^{T_L}; zero without a loan.
  double repayment() const {
    return has_loan() ? BL * std::pow(1.0 + r, TL) : 0.0;
  }
  // Repayment charged at the end of 1-based period t.
  double repayment_at(int t) const {
    return (has_loan() && t == TL) ? repayment() : 0.0;
  }
};

inline void validate(const Instance& inst) {
  if (inst.T < 1) throw InputError("T must be >= 1");
  const auto n = static_cast<std::size_t>(inst.T);
  auto check_vec = [&](const std::vector<double>& v, const char* name, bool positive) {
    if (v.size() != n) {
      throw InputError(std::string("vector '") + name + "' must have T entries");
    }
    for (double x : v) {
      if (!std::isfinite(x)) throw InputError(std::string("non-finite entry in '") + name + "'");
      if (positive ? x <= 0.0 : x < 0.0) {
        throw InputError(std::string("entry out of range in '") + name + "'");
      }
    }
  };
  check_vec(inst.d, "d", false);
  check_vec(inst.p, "p", false);
  check_vec(inst.c, "c", true);
  check_vec(inst.h, "h", false);
  check_vec(inst.s, "s", false);
  for (double x : {inst.Bc, inst.BL, inst.r}) {
    if (!std::isfinite(x) || x < 0.0) throw InputError("Bc, BL and r must be finite and nonnegative");
  }
  if (!(inst.beta >= 0.0 && inst.beta <= 1.0)) throw InputError("beta must lie in [0, 1]");
  if (inst.has_loan() && (inst.TL < 1 || inst.TL > inst.T)) {
    throw InputError("a loan requires 1 <= TL <= T");
  }
  if (inst.TL < 0 || inst.TL > inst.T) throw InputError("TL must lie in [0, T]");
}

// Decision vectors; x is derived from y.
struct Plan {
  std::vector<double> y;  // production quantity
  std::vector<double> v;  // realized demand

  static Plan zeros(int T) {
    return Plan{std::vector<double>(static_cast<std::size_t>(T), 0.0),
                std::vector<double>(static_cast<std::size_t>(T), 0.0)};
  }
};

// I and B carry the period-0 value at index 0; the per-period vectors are
// 0-based like the instance.
struct Trajectory {
  Plan plan;
  std::vector<int> x;
  std::vector<double> Ed, w;
  std::vector<double> I;  // size T+1, I[0] = 0
  std::vector<double> B;  // size T+1, B[0] = Bc + BL
  double objective = 0.0;
  int horizon = 0;  // number of evaluated periods (T for a full evaluation)
};

/// Effective demand after goodwill shrink, max(0, d - beta * w_prev).
inline double effective_demand(double d_t, double w_prev, double beta) {
  return std::max(0.0, d_t - beta * w_prev);
}

/// Largest affordable production quantity given entry capital.
inline double production_upper_bound(double B_prev, double s_t, double c_t) {
  if (!(c_t > 0.0)) throw InputError("unit production cost must be positive");
  return std::max(0.0, (B_prev - s_t) / c_t);
}

// Evaluates the first `periods` periods of a plan. Realized demand is not
// clamped to Ed; excess shows up as a C5 violation in check_feasibility.
inline Trajectory evaluate_prefix(const Instance& inst, const Plan& plan, int periods) {
  const auto T = static_cast<std::size_t>(inst.T);
  if (plan.y.size() != T || plan.v.size() != T) {
    throw InputError("plan dimension does not match instance horizon");
  }
  if (periods < 0 || periods > inst.T) throw InputError("evaluation horizon out of range");
  Trajectory tr;
  tr.plan = plan;
  tr.horizon = periods;
  tr.x.assign(T, 0);
  tr.Ed.assign(T, 0.0);
  tr.w.assign(T, 0.0);
  tr.I.assign(T + 1, 0.0);
  tr.B.assign(T + 1, 0.0);
  tr.B[0] = inst.initial_capital();
  double w_prev = 0.0;
  for (int k = 0; k < periods; ++k) {
    const auto t = static_cast<std::size_t>(k);
    const double y = plan.y[t];
    const double v = plan.v[t];
    tr.x[t] = y > tol::zero ? 1 : 0;
    tr.Ed[t] = effective_demand(inst.d[t], w_prev, inst.beta);
    tr.w[t] = tr.Ed[t] - v;
    tr.I[t + 1] = tr.I[t] + y - v;
    tr.B[t + 1] = tr.B[t] + inst.p[t] * v - inst.h[t] * tr.I[t + 1] -
                  inst.s[t] * tr.x[t] - inst.c[t] * y - inst.repayment_at(k + 1);
    w_prev = tr.w[t];
  }
  tr.objective = tr.B[static_cast<std::size_t>(periods)] - inst.initial_capital();
  return tr;
}

inline Trajectory evaluate_plan(const Instance& inst, const Plan& plan) {
  return evaluate_prefix(inst, plan, inst.T);
}

struct Violation {
  std::string constraint;  // "C3" .. "C16"
  int period = 0;          // 1-based; 0 for horizon-level checks
  double magnitude = 0.0;
};

struct FeasibilityReport {
  bool feasible = true;
  std::vector<Violation> violations;
};

// Re-derives every Model P relation from the trajectory's own numbers. Only
// the evaluated horizon is checked.
inline FeasibilityReport check_feasibility(const Instance& inst, const Trajectory& tr) {
  FeasibilityReport rep;
  auto flag = [&](const char* id, int t, double magnitude) {
    if (magnitude > tol::feas) rep.violations.push_back({id, t, magnitude});
  };
  const int n = tr.horizon;
  flag("C6", 0, std::abs(tr.I[0]));  // I_0 = 0
  flag("C7", 0, std::abs(tr.B[0] - inst.initial_capital()));
  double w_prev = 0.0;
  for (int k = 0; k < n; ++k) {
    const auto t = static_cast<std::size_t>(k);
    const int period = k + 1;
    const double y = tr.plan.y[t];
    const double v = tr.plan.v[t];
    const int x = tr.x[t];
    // C3 in logical form: no production without a setup.
    if (x == 0) flag("C3", period, y);
    // C4 capital sufficiency, also implying B_{t-1} >= 0.
    flag("C4", period, inst.s[t] * x + inst.c[t] * y - tr.B[t]);
    // C5 lost sales within [0, Ed], i.e. realized demand within [0, Ed].
    flag("C5", period, std::max(tr.w[t] - tr.Ed[t], -tr.w[t]));
    // C6 inventory balance.
    flag("C6", period, std::abs(tr.I[t + 1] - (tr.I[t] + y - tr.Ed[t] + tr.w[t])));
    // C8 capital balance, repayment at TL.
    const double expected_B = tr.B[t] + inst.p[t] * (tr.Ed[t] - tr.w[t]) - inst.h[t] * tr.I[t + 1] -
                              inst.s[t] * x - inst.c[t] * y - inst.repayment_at(period);
    const double balance_gap = std::abs(tr.B[t + 1] - expected_B);
    if (balance_gap > tol::feas * std::max(1.0, std::abs(expected_B))) {
      rep.violations.push_back({"C8", period, balance_gap});
    }
    // End-of-period capital stays nonnegative.
    flag("B>=0", period, -tr.B[t + 1]);
    // C9-C13 via the closed form of effective demand.
    flag("C9-13", period, std::abs(tr.Ed[t] - effective_demand(inst.d[t], w_prev, inst.beta)));
    // C14 nonnegative inventory.
    flag("C14", period, -tr.I[t + 1]);
    // C15: effective demand and both decisions stay nonnegative.
    flag("C15", period, std::max({-tr.Ed[t], -y, -v}));
    // C16 binary setup flag.
    if (x != 0 && x != 1) rep.violations.push_back({"C16", period, 1.0});
    w_prev = tr.w[t];
  }
  rep.feasible = rep.violations.empty();
  return rep;
}

}  // namespace lotflow
