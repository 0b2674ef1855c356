#pragma once

// Dense two-phase primal simplex for small linear programs
//
//   maximize  c'x
//   s.t.      a_i'x {<=, =, >=} b_i
//             lower <= x <= upper
//
// Bland's rule (lowest index enters, lowest basic index leaves on ratio
// ties) guarantees termination on degenerate problems. The sub-problems in
// this project have at most a few hundred rows, where a dense tableau is
// both simple and accurate enough.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "lotflow/errors.hpp"

namespace lotflow {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Relation { LessEq, Equal, GreaterEq };

struct LpConstraint {
  std::vector<double> coeffs;
  Relation rel = Relation::LessEq;
  double rhs = 0.0;
};

struct LpProblem {
  int n_vars = 0;
  std::vector<double> objective;  // maximized
  std::vector<LpConstraint> constraints;
  std::vector<double> lower, upper;

  LpProblem() = default;
  explicit LpProblem(int n)
      : n_vars(n),
        objective(static_cast<std::size_t>(n), 0.0),
        lower(static_cast<std::size_t>(n), 0.0),
        upper(static_cast<std::size_t>(n), kInf) {}

  void add(std::vector<double> coeffs, Relation rel, double rhs) {
    if (coeffs.size() != static_cast<std::size_t>(n_vars)) {
      throw InputError("constraint width does not match n_vars");
    }
    constraints.push_back({std::move(coeffs), rel, rhs});
  }
  void set_bounds(int j, double lo, double up) {
    lower.at(static_cast<std::size_t>(j)) = lo;
    upper.at(static_cast<std::size_t>(j)) = up;
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, NumericalFailure };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "Optimal";
    case LpStatus::Infeasible: return "Infeasible";
    case LpStatus::Unbounded: return "Unbounded";
    case LpStatus::NumericalFailure: return "NumericalFailure";
  }
  return "?";
}

struct LpSolution {
  LpStatus status = LpStatus::NumericalFailure;
  std::vector<double> x;
  double objective_value = 0.0;
  int iterations = 0;
  std::string debug_dump;  // tableau listing, filled on NumericalFailure only
};

namespace lp_tol {
inline constexpr double feas = 1e-7;   // primal residual (scaled by row magnitude)
inline constexpr double pivot = 1e-9;  // smallest usable pivot / reduced cost
}  // namespace lp_tol

// Plain-text listing of an LP, one constraint per line.
inline std::string to_lp_text(const LpProblem& prob) {
  std::ostringstream os;
  os.precision(17);
  auto term_list = [&](const std::vector<double>& a) {
    bool any = false;
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (a[j] == 0.0) continue;
      os << (a[j] < 0 ? " - " : (any ? " + " : " ")) << std::abs(a[j]) << " x" << j;
      any = true;
    }
    if (!any) os << " 0";
  };
  os << "maximize\n obj:";
  term_list(prob.objective);
  os << "\nsubject to\n";
  for (std::size_t i = 0; i < prob.constraints.size(); ++i) {
    const auto& row = prob.constraints[i];
    os << " c" << i << ":";
    term_list(row.coeffs);
    os << (row.rel == Relation::LessEq ? " <= " : row.rel == Relation::Equal ? " = " : " >= ")
       << row.rhs << "\n";
  }
  os << "bounds\n";
  for (int j = 0; j < prob.n_vars; ++j) {
    os << " " << prob.lower[static_cast<std::size_t>(j)] << " <= x" << j
       << " <= " << prob.upper[static_cast<std::size_t>(j)] << "\n";
  }
  os << "end\n";
  return os.str();
}

// Holds per-solve scratch; one solve per instance at a time.
class SimplexSolver {
 public:
  SimplexSolver() = default;
  // Overrides the default cap of 50 * (n_vars + n_constraints) pivots.
  explicit SimplexSolver(int iteration_cap) : cap_override_(iteration_cap) {}

  LpSolution solve(const LpProblem& prob) {
    check(prob);
    build(prob);
    LpSolution out;
    iteration_cap_ = cap_override_ > 0 ? cap_override_
                                       : 50 * (prob.n_vars + static_cast<int>(prob.constraints.size()));
    iterations_ = 0;

    // Phase 1: maximize -(sum of artificials).
    if (n_art_ > 0) {
      set_phase1_objective();
      const Outcome o1 = iterate(/*allow_artificial=*/true);
      if (o1 == Outcome::IterationCap) return failure(prob, "iteration cap in phase 1");
      // Phase 1 is bounded above by zero, so Unbounded cannot happen here.
      const double infeasibility = -obj(rhs_col());
      if (infeasibility > lp_tol::feas * rhs_scale_) {
        out.status = LpStatus::Infeasible;
        out.iterations = iterations_;
        return out;
      }
      drive_out_artificials();
    }

    set_phase2_objective();
    const Outcome o2 = iterate(/*allow_artificial=*/false);
    out.iterations = iterations_;
    if (o2 == Outcome::IterationCap) return failure(prob, "iteration cap in phase 2");
    if (o2 == Outcome::Unbounded) {
      out.status = LpStatus::Unbounded;
      return out;
    }

    out.x = extract(prob);
    out.objective_value = 0.0;
    for (int j = 0; j < prob.n_vars; ++j) {
      out.objective_value += prob.objective[static_cast<std::size_t>(j)] * out.x[static_cast<std::size_t>(j)];
    }
    if (!residual_ok(prob, out.x)) return failure(prob, "primal residual above tolerance");
    out.status = LpStatus::Optimal;
    return out;
  }

 private:
  enum class Outcome { Optimal, Unbounded, IterationCap };
  enum class VarKind { Shift, Mirror, Free };

  struct ColumnMap {
    VarKind kind = VarKind::Shift;
    int col = 0;      // first tableau column
    double offset = 0.0;
  };

  static void check(const LpProblem& prob) {
    const auto n = static_cast<std::size_t>(prob.n_vars);
    if (prob.n_vars < 0 || prob.objective.size() != n || prob.lower.size() != n ||
        prob.upper.size() != n) {
      throw InputError("malformed LpProblem dimensions");
    }
    for (const auto& row : prob.constraints) {
      if (row.coeffs.size() != n || !std::isfinite(row.rhs)) {
        throw InputError("malformed LpProblem constraint");
      }
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (std::isnan(prob.lower[j]) || std::isnan(prob.upper[j]) || prob.lower[j] == kInf ||
          prob.upper[j] == -kInf || !std::isfinite(prob.objective[j])) {
        throw InputError("malformed LpProblem bounds or objective");
      }
    }
  }

  double& at(int i, int j) { return tab_[static_cast<std::size_t>(i) * width_ + static_cast<std::size_t>(j)]; }
  double& obj(int j) { return at(m_, j); }
  int rhs_col() const { return n_cols_; }

  void build(const LpProblem& prob) {
    // Column layout: structural | slack/surplus | artificial | rhs.
    maps_.assign(static_cast<std::size_t>(prob.n_vars), {});
    int n_struct = 0;
    struct RawRow {
      std::vector<std::pair<int, double>> terms;
      Relation rel;
      double rhs;
    };
    std::vector<RawRow> rows;
    std::vector<RawRow> bound_rows;
    for (int j = 0; j < prob.n_vars; ++j) {
      const double lo = prob.lower[static_cast<std::size_t>(j)];
      const double up = prob.upper[static_cast<std::size_t>(j)];
      auto& mp = maps_[static_cast<std::size_t>(j)];
      if (std::isfinite(lo)) {
        mp = {VarKind::Shift, n_struct, lo};
        if (std::isfinite(up)) bound_rows.push_back({{{n_struct, 1.0}}, Relation::LessEq, up - lo});
        ++n_struct;
      } else if (std::isfinite(up)) {
        mp = {VarKind::Mirror, n_struct, up};
        ++n_struct;
      } else {
        mp = {VarKind::Free, n_struct, 0.0};
        n_struct += 2;
      }
    }
    for (const auto& con : prob.constraints) {
      RawRow row{{}, con.rel, con.rhs};
      for (int j = 0; j < prob.n_vars; ++j) {
        const double a = con.coeffs[static_cast<std::size_t>(j)];
        if (a == 0.0) continue;
        const auto& mp = maps_[static_cast<std::size_t>(j)];
        switch (mp.kind) {
          case VarKind::Shift:
            row.terms.push_back({mp.col, a});
            row.rhs -= a * mp.offset;
            break;
          case VarKind::Mirror:
            row.terms.push_back({mp.col, -a});
            row.rhs -= a * mp.offset;
            break;
          case VarKind::Free:
            row.terms.push_back({mp.col, a});
            row.terms.push_back({mp.col + 1, -a});
            break;
        }
      }
      rows.push_back(std::move(row));
    }
    for (auto& br : bound_rows) rows.push_back(std::move(br));

    // Normalize to nonnegative right-hand sides.
    rhs_scale_ = 1.0;
    int n_slack = 0;
    n_art_ = 0;
    for (auto& row : rows) {
      if (row.rhs < 0.0) {
        row.rhs = -row.rhs;
        for (auto& t : row.terms) t.second = -t.second;
        if (row.rel == Relation::LessEq) row.rel = Relation::GreaterEq;
        else if (row.rel == Relation::GreaterEq) row.rel = Relation::LessEq;
      }
      rhs_scale_ = std::max(rhs_scale_, row.rhs);
      if (row.rel != Relation::Equal) ++n_slack;
      if (row.rel != Relation::LessEq) ++n_art_;
    }

    m_ = static_cast<int>(rows.size());
    n_struct_ = n_struct;
    art_begin_ = n_struct + n_slack;
    n_cols_ = art_begin_ + n_art_;
    width_ = static_cast<std::size_t>(n_cols_ + 1);
    tab_.assign(static_cast<std::size_t>(m_ + 1) * width_, 0.0);
    basis_.assign(static_cast<std::size_t>(m_), -1);

    int slack = n_struct;
    int art = art_begin_;
    for (int i = 0; i < m_; ++i) {
      const auto& row = rows[static_cast<std::size_t>(i)];
      for (const auto& [col, a] : row.terms) at(i, col) += a;
      at(i, rhs_col()) = row.rhs;
      switch (row.rel) {
        case Relation::LessEq:
          at(i, slack) = 1.0;
          basis_[static_cast<std::size_t>(i)] = slack++;
          break;
        case Relation::GreaterEq:
          at(i, slack++) = -1.0;
          at(i, art) = 1.0;
          basis_[static_cast<std::size_t>(i)] = art++;
          break;
        case Relation::Equal:
          at(i, art) = 1.0;
          basis_[static_cast<std::size_t>(i)] = art++;
          break;
      }
    }
    cost_.assign(static_cast<std::size_t>(n_cols_), 0.0);
    for (int j = 0; j < static_cast<int>(maps_.size()); ++j) {
      const auto& mp = maps_[static_cast<std::size_t>(j)];
      const double c = prob.objective[static_cast<std::size_t>(j)];
      switch (mp.kind) {
        case VarKind::Shift: cost_[static_cast<std::size_t>(mp.col)] = c; break;
        case VarKind::Mirror: cost_[static_cast<std::size_t>(mp.col)] = -c; break;
        case VarKind::Free:
          cost_[static_cast<std::size_t>(mp.col)] = c;
          cost_[static_cast<std::size_t>(mp.col + 1)] = -c;
          break;
      }
    }
  }

  void load_objective(const std::vector<double>& costs) {
    for (int j = 0; j <= n_cols_; ++j) obj(j) = 0.0;
    for (int j = 0; j < n_cols_; ++j) obj(j) = -costs[static_cast<std::size_t>(j)];
    for (int i = 0; i < m_; ++i) {
      const double f = obj(basis_[static_cast<std::size_t>(i)]);
      if (f == 0.0) continue;
      for (int j = 0; j <= n_cols_; ++j) obj(j) -= f * at(i, j);
    }
  }

  void set_phase1_objective() {
    std::vector<double> costs(static_cast<std::size_t>(n_cols_), 0.0);
    for (int j = art_begin_; j < n_cols_; ++j) costs[static_cast<std::size_t>(j)] = -1.0;
    load_objective(costs);
  }

  void set_phase2_objective() { load_objective(cost_); }

  void pivot(int r, int c) {
    const double inv = 1.0 / at(r, c);
    for (int j = 0; j <= n_cols_; ++j) at(r, j) *= inv;
    at(r, c) = 1.0;
    for (int i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const double f = at(i, c);
      if (f == 0.0) continue;
      double* dst = &at(i, 0);
      const double* src = &at(r, 0);
      for (int j = 0; j <= n_cols_; ++j) dst[j] -= f * src[j];
      dst[c] = 0.0;
    }
    basis_[static_cast<std::size_t>(r)] = c;
  }

  Outcome iterate(bool allow_artificial) {
    const int limit = allow_artificial ? n_cols_ : art_begin_;
    while (true) {
      int enter = -1;
      for (int j = 0; j < limit; ++j) {
        if (obj(j) < -lp_tol::pivot) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return Outcome::Optimal;
      if (iterations_ >= iteration_cap_) return Outcome::IterationCap;
      int leave = -1;
      double best_ratio = kInf;
      for (int i = 0; i < m_; ++i) {
        const double a = at(i, enter);
        if (a <= lp_tol::pivot) continue;
        const double ratio = at(i, rhs_col()) / a;
        if (leave < 0) {
          best_ratio = ratio;
          leave = i;
          continue;
        }
        const double slack = 1e-12 * std::max(1.0, std::abs(best_ratio));
        const bool better = ratio < best_ratio - slack;
        const bool tie = !better && ratio <= best_ratio + slack;
        if (better || (tie && basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
          best_ratio = ratio;
          leave = i;
        }
      }
      if (leave < 0) return Outcome::Unbounded;
      pivot(leave, enter);
      ++iterations_;
    }
  }

  void drive_out_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] < art_begin_) continue;
      int best = -1;
      double best_mag = lp_tol::pivot;
      for (int j = 0; j < art_begin_; ++j) {
        if (std::abs(at(i, j)) > best_mag) {
          best_mag = std::abs(at(i, j));
          best = j;
        }
      }
      // A row with no usable entry is redundant; its artificial stays basic at zero.
      if (best >= 0) pivot(i, best);
    }
  }

  std::vector<double> extract(const LpProblem& prob) {
    std::vector<double> xs(static_cast<std::size_t>(n_cols_), 0.0);
    for (int i = 0; i < m_; ++i) {
      const int b = basis_[static_cast<std::size_t>(i)];
      xs[static_cast<std::size_t>(b)] = std::max(0.0, at(i, rhs_col()));
    }
    std::vector<double> x(static_cast<std::size_t>(prob.n_vars), 0.0);
    for (int j = 0; j < prob.n_vars; ++j) {
      const auto& mp = maps_[static_cast<std::size_t>(j)];
      const double a = xs[static_cast<std::size_t>(mp.col)];
      switch (mp.kind) {
        case VarKind::Shift: x[static_cast<std::size_t>(j)] = mp.offset + a; break;
        case VarKind::Mirror: x[static_cast<std::size_t>(j)] = mp.offset - a; break;
        case VarKind::Free: x[static_cast<std::size_t>(j)] = a - xs[static_cast<std::size_t>(mp.col + 1)]; break;
      }
    }
    return x;
  }

  static bool residual_ok(const LpProblem& prob, const std::vector<double>& x) {
    for (const auto& row : prob.constraints) {
      double lhs = 0.0, mag = std::abs(row.rhs);
      for (std::size_t j = 0; j < x.size(); ++j) {
        lhs += row.coeffs[j] * x[j];
        mag = std::max(mag, std::abs(row.coeffs[j] * x[j]));
      }
      const double slack = lp_tol::feas * std::max(1.0, mag);
      if (row.rel != Relation::GreaterEq && lhs > row.rhs + slack) return false;
      if (row.rel != Relation::LessEq && lhs < row.rhs - slack) return false;
    }
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double slack = lp_tol::feas * std::max(1.0, std::abs(x[j]));
      if (x[j] < prob.lower[j] - slack || x[j] > prob.upper[j] + slack) return false;
    }
    return true;
  }

  LpSolution failure(const LpProblem& prob, const std::string& why) {
    LpSolution out;
    out.status = LpStatus::NumericalFailure;
    out.iterations = iterations_;
    std::ostringstream os;
    os << "# " << why << " after " << iterations_ << " iterations\n" << to_lp_text(prob);
    out.debug_dump = os.str();
    return out;
  }

  std::vector<ColumnMap> maps_;
  std::vector<double> tab_;
  std::vector<double> cost_;
  std::vector<int> basis_;
  std::size_t width_ = 0;
  int m_ = 0, n_struct_ = 0, n_cols_ = 0, art_begin_ = 0, n_art_ = 0;
  int iterations_ = 0, iteration_cap_ = 0, cap_override_ = 0;
  double rhs_scale_ = 1.0;
};

/// Solves `prob` with a fresh solver.
inline LpSolution lp_solve(const LpProblem& prob) {
  SimplexSolver solver;
  return solver.solve(prob);
}

}  // namespace lotflow
