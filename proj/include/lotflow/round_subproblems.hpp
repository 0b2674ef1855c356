#pragma once

// Production-round sub-problems. A round spans periods m..n, starts and ends
// with zero inventory and contains one or more production cycles launched at
// cycle_starts. Inside a round the only decision variables are the realized
// demands v_m..v_n; every other round quantity is affine in v, so the
// maximum capital increment BB(m,n) of the round is a single LP.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lotflow/core_model.hpp"
#include "lotflow/lp_solver.hpp"

namespace lotflow {

inline constexpr double kStrictGap = 1e-9;  // closes the strict side of delta_t = 0

// Periods are 1-based throughout this header.
struct RoundSpec {
  int m = 1;
  int n = 1;
  std::vector<int> cycle_starts;  // t_1 = m < t_2 < ... <= n
  double B_in = 0.0;              // capital B_{m-1}
  double w_in = 0.0;              // lost sales w_{m-1}
};

enum class SubModel { Sub1, Sub2Sub3, None };

inline const char* to_string(SubModel s) {
  switch (s) {
    case SubModel::Sub1: return "Sub1";
    case SubModel::Sub2Sub3: return "Sub2+Sub3";
    case SubModel::None: return "None";
  }
  return "?";
}

struct RoundSolution {
  bool feasible = false;
  double BB = 0.0;       // B_n - B_{m-1}
  std::vector<double> v; // v_m..v_n
  std::vector<double> y; // y_m..y_n, nonzero only at cycle starts
  double w_out = 0.0;    // w_n
  double B_out = 0.0;    // B_n
  SubModel which_model = SubModel::None;
  int lp_count = 0;
};

// Extra restriction used by plan adjustments: w_n must not exceed w_cap.
struct RoundOptions {
  std::optional<double> w_cap;
};

namespace detail {

// a'v + c over the round's variables.
struct Affine {
  std::vector<double> a;
  double c = 0.0;

  explicit Affine(std::size_t n, double constant = 0.0) : a(n, 0.0), c(constant) {}
  Affine& operator+=(const Affine& o) {
    for (std::size_t j = 0; j < a.size(); ++j) a[j] += o.a[j];
    c += o.c;
    return *this;
  }
  Affine& scale(double f) {
    for (double& x : a) x *= f;
    c *= f;
    return *this;
  }
  bool is_constant() const {
    return std::all_of(a.begin(), a.end(), [](double x) { return x == 0.0; });
  }
  double eval(const std::vector<double>& v) const {
    double r = c;
    for (std::size_t j = 0; j < a.size(); ++j) r += a[j] * v[j];
    return r;
  }
};

inline void validate_spec(const Instance& inst, const RoundSpec& spec) {
  if (spec.m < 1 || spec.n > inst.T || spec.m > spec.n) throw InputError("round window out of range");
  if (spec.cycle_starts.empty() || spec.cycle_starts.front() != spec.m) {
    throw InputError("first cycle must start at m");
  }
  for (std::size_t i = 1; i < spec.cycle_starts.size(); ++i) {
    if (spec.cycle_starts[i] <= spec.cycle_starts[i - 1] || spec.cycle_starts[i] > spec.n) {
      throw InputError("cycle starts must increase within [m, n]");
    }
  }
  if (spec.w_in < 0.0) throw InputError("entry lost sales must be nonnegative");
}

// Shared structure of P-sub1/2/3: capital sufficiency at each launch,
// nonnegative capital, zero inventory at cycle boundaries, objective B_n.
struct RoundModel {
  LpProblem lp;
  Affine B_n{0};
  std::optional<Affine> w_n;  // only when effective demand is linked to v
};

enum class EdLink { Relaxed, ByDelta };

inline RoundModel build_round_model(const Instance& inst, const RoundSpec& spec, EdLink link,
                                    const std::vector<int>* deltas, const RoundOptions& opts) {
  validate_spec(inst, spec);
  const int k = spec.n - spec.m + 1;
  const auto K = static_cast<std::size_t>(k);
  RoundModel model{LpProblem(k), Affine(K), std::nullopt};
  auto& lp = model.lp;
  auto idx = [&](int t) { return static_cast<std::size_t>(t - spec.m); };
  auto dat = [&](const std::vector<double>& vec, int t) { return vec[static_cast<std::size_t>(t - 1)]; };

  // Cycle membership and the launch period serving each t.
  std::vector<int> cycle_end(spec.cycle_starts.size());
  for (std::size_t i = 0; i < spec.cycle_starts.size(); ++i) {
    cycle_end[i] = i + 1 < spec.cycle_starts.size() ? spec.cycle_starts[i + 1] - 1 : spec.n;
  }
  auto cycle_of = [&](int t) {
    std::size_t i = 0;
    while (i + 1 < spec.cycle_starts.size() && spec.cycle_starts[i + 1] <= t) ++i;
    return i;
  };

  Affine B(K, spec.B_in);
  for (int t = spec.m; t <= spec.n; ++t) {
    const std::size_t ci = cycle_of(t);
    const bool launch = spec.cycle_starts[ci] == t;
    if (launch) {
      Affine y(K);
      for (int j = t; j <= cycle_end[ci]; ++j) y.a[idx(j)] = 1.0;
      // Capital sufficiency at launch: s + c*y <= B_{t-1}.
      std::vector<double> row(K);
      for (std::size_t j = 0; j < K; ++j) row[j] = dat(inst.c, t) * y.a[j] - B.a[j];
      lp.add(std::move(row), Relation::LessEq, B.c - dat(inst.s, t));
      Affine cost = y;
      cost.scale(-dat(inst.c, t));
      cost.c -= dat(inst.s, t);
      B += cost;
    }
    // Inventory carried out of t: demand of the rest of the cycle.
    Affine I(K);
    for (int j = t + 1; j <= cycle_end[ci]; ++j) I.a[idx(j)] = 1.0;
    B.a[idx(t)] += dat(inst.p, t);
    I.scale(-dat(inst.h, t));
    B += I;
    B.c -= inst.repayment_at(t);
    // End-of-period capital stays nonnegative.
    std::vector<double> row(B.a);
    for (double& x : row) x = -x;
    lp.add(std::move(row), Relation::LessEq, B.c);
  }
  model.B_n = B;
  lp.objective = B.a;

  // Realized demand bounds.
  const double Ed_m = effective_demand(dat(inst.d, spec.m), spec.w_in, inst.beta);
  lp.set_bounds(0, 0.0, Ed_m);
  if (link == EdLink::Relaxed) {
    for (int t = spec.m + 1; t <= spec.n; ++t) {
      lp.set_bounds(static_cast<int>(idx(t)), 0.0, dat(inst.d, t));
    }
    return model;
  }

  Affine Ed(K, Ed_m);
  for (int t = spec.m + 1; t <= spec.n; ++t) {
    const int j = static_cast<int>(idx(t));
    // Unclamped recursion d_t - beta * (Ed_{t-1} - v_{t-1}).
    Affine raw = Ed;
    raw.a[idx(t - 1)] -= 1.0;
    raw.scale(-inst.beta);
    raw.c += dat(inst.d, t);
    const int delta = (*deltas)[idx(t)];
    if (delta == 1) {
      Ed = raw;
      if (Ed.is_constant()) {
        lp.set_bounds(j, 0.0, Ed.c);  // an empty box when Ed.c < 0 makes the LP infeasible
      } else {
        std::vector<double> row(K);
        for (std::size_t q = 0; q < K; ++q) row[q] = -Ed.a[q];
        row[idx(t)] += 1.0;
        lp.add(std::move(row), Relation::LessEq, Ed.c);  // v_t - Ed_t <= 0
        lp.set_bounds(j, 0.0, dat(inst.d, t));
      }
    } else {
      // Goodwill loss wipes out demand: raw <= -gap, Ed_t = 0, v_t = 0.
      std::vector<double> row(raw.a);
      lp.add(std::move(row), Relation::LessEq, -kStrictGap - raw.c);
      lp.set_bounds(j, 0.0, 0.0);
      Ed = Affine(K, 0.0);
    }
  }
  Affine w = Ed;
  w.a[idx(spec.n)] -= 1.0;
  model.w_n = w;
  if (opts.w_cap) {
    lp.add(w.a, Relation::LessEq, *opts.w_cap - w.c);
  }
  return model;
}

inline std::vector<int> all_ones(const RoundSpec& spec) {
  return std::vector<int>(static_cast<std::size_t>(spec.n - spec.m + 1), 1);
}

}  // namespace detail

/// P-sub1: every period of the round keeps positive effective demand.
inline LpProblem build_psub1(const Instance& inst, const RoundSpec& spec, const RoundOptions& opts = {}) {
  const auto ones = detail::all_ones(spec);
  return detail::build_round_model(inst, spec, detail::EdLink::ByDelta, &ones, opts).lp;
}

/// P-sub2: goodwill recursion dropped, v_t <= d_t after the first period.
inline LpProblem build_psub2(const Instance& inst, const RoundSpec& spec) {
  return detail::build_round_model(inst, spec, detail::EdLink::Relaxed, nullptr, {}).lp;
}

/// Rolls lost sales forward from a candidate v and marks the periods whose
/// demand is wiped out by goodwill loss (delta = 0).
inline std::vector<int> infer_deltas(const Instance& inst, const RoundSpec& spec, const std::vector<double>& v) {
  detail::validate_spec(inst, spec);
  if (v.size() != static_cast<std::size_t>(spec.n - spec.m + 1)) throw InputError("v length mismatch");
  std::vector<int> delta(v.size(), 1);
  double w_prev = spec.w_in;
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double raw = inst.d[static_cast<std::size_t>(spec.m - 1) + j] - inst.beta * w_prev;
    delta[j] = raw < 0.0 ? 0 : 1;
    const double Ed = std::max(0.0, raw);
    w_prev = std::max(0.0, Ed - v[j]);
  }
  return delta;
}

/// P-sub3: effective demand fixed per delta; delta = 0 periods carry no demand.
inline LpProblem build_psub3(const Instance& inst, const RoundSpec& spec, const std::vector<int>& deltas,
                             const RoundOptions& opts = {}) {
  if (deltas.size() != static_cast<std::size_t>(spec.n - spec.m + 1)) throw InputError("delta length mismatch");
  return detail::build_round_model(inst, spec, detail::EdLink::ByDelta, &deltas, opts).lp;
}

namespace detail {

inline LpSolution solve_checked(const LpProblem& lp, int& lp_count) {
  ++lp_count;
  auto sol = lp_solve(lp);
  if (sol.status == LpStatus::NumericalFailure) {
    throw NumericalFailure("round sub-problem failed\n" + sol.debug_dump);
  }
  if (sol.status == LpStatus::Unbounded) {
    throw NumericalFailure("round sub-problem reported unbounded\n" + to_lp_text(lp));
  }
  return sol;
}

inline RoundSolution finish_round(const Instance& inst, const RoundSpec& spec, const RoundModel& model,
                                  const LpSolution& sol, SubModel which, int lp_count) {
  RoundSolution out;
  out.feasible = true;
  out.which_model = which;
  out.lp_count = lp_count;
  out.v = sol.x;
  for (double& x : out.v) x = std::max(0.0, x);
  const auto K = out.v.size();
  out.y.assign(K, 0.0);
  for (std::size_t i = 0; i < spec.cycle_starts.size(); ++i) {
    const int start = spec.cycle_starts[i];
    const int end = i + 1 < spec.cycle_starts.size() ? spec.cycle_starts[i + 1] - 1 : spec.n;
    double total = 0.0;
    for (int t = start; t <= end; ++t) total += out.v[static_cast<std::size_t>(t - spec.m)];
    out.y[static_cast<std::size_t>(start - spec.m)] = total;
  }
  double w_prev = spec.w_in;
  for (std::size_t j = 0; j < K; ++j) {
    const double Ed = effective_demand(inst.d[static_cast<std::size_t>(spec.m - 1) + j], w_prev, inst.beta);
    w_prev = Ed - out.v[j];
  }
  out.w_out = w_prev;
  out.B_out = model.B_n.eval(out.v);
  out.BB = out.B_out - spec.B_in;
  return out;
}

}  // namespace detail

/// BB(m,n) via the P-sub1 -> P-sub2 -> P-sub3 cascade. With beta = 0 the
/// second and third models coincide with the first and are skipped.
inline RoundSolution solve_round(const Instance& inst, const RoundSpec& spec, const RoundOptions& opts = {}) {
  int lp_count = 0;
  const auto ones = detail::all_ones(spec);
  const auto m1 = detail::build_round_model(inst, spec, detail::EdLink::ByDelta, &ones, opts);
  const auto s1 = detail::solve_checked(m1.lp, lp_count);
  if (s1.status == LpStatus::Optimal) return detail::finish_round(inst, spec, m1, s1, SubModel::Sub1, lp_count);

  RoundSolution none;
  none.v.assign(static_cast<std::size_t>(spec.n - spec.m + 1), 0.0);
  none.y = none.v;
  none.which_model = SubModel::None;
  if (inst.beta == 0.0) {
    none.lp_count = lp_count;
    return none;
  }
  const auto m2 = detail::build_round_model(inst, spec, detail::EdLink::Relaxed, nullptr, {});
  const auto s2 = detail::solve_checked(m2.lp, lp_count);
  if (s2.status == LpStatus::Optimal) {
    const auto deltas = infer_deltas(inst, spec, s2.x);
    const auto m3 = detail::build_round_model(inst, spec, detail::EdLink::ByDelta, &deltas, opts);
    const auto s3 = detail::solve_checked(m3.lp, lp_count);
    if (s3.status == LpStatus::Optimal) {
      return detail::finish_round(inst, spec, m3, s3, SubModel::Sub2Sub3, lp_count);
    }
  }
  none.lp_count = lp_count;
  return none;
}

struct EntryState {
  double B = 0.0;
  double w = 0.0;
};

struct PreviousCycle {
  int start = 1;
  EntryState entry;  // state at the end of period start-1
};

/// Rounds whose last cycle launches at `start` and ends at n. Without
/// goodwill loss a round is a single cycle; with goodwill loss the nearest
/// previous cycle is re-optimized jointly with the new one.
inline std::vector<RoundSpec> enumerate_round_specs(const Instance& inst, int start, int n, EntryState at_start,
                                                    const std::optional<PreviousCycle>& prev) {
  if (start > n) throw InputError("round start after its end");
  if (inst.beta > 0.0 && prev && prev->start < start) {
    return {RoundSpec{prev->start, n, {prev->start, start}, prev->entry.B, prev->entry.w}};
  }
  return {RoundSpec{start, n, {start}, at_start.B, at_start.w}};
}

}  // namespace lotflow
