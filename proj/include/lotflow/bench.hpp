#pragma once

// Parameter sweeps on the showcase instance and benchmark runs over the two
// generated grids, with per-row results and pivot aggregates.

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "lotflow/exact_oracle.hpp"
#include "lotflow/frh.hpp"
#include "lotflow/instance_gen.hpp"
#include "lotflow/io.hpp"

namespace lotflow {

// ------------------------------------------------------------------ sweeps

inline constexpr std::array<double, 7> kCapitalSweep{50, 150, 200, 250, 300, 350, 400};
inline constexpr std::array<double, 7> kInterestSweep{0.01, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30};

struct SweepPoint {
  double x = 0.0;
  Instance instance;
  Solution solution;
};

struct SweepResult {
  std::string kind;
  std::vector<SweepPoint> points;
  std::optional<double> no_loan_objective;  // interest sweep only
};

inline SweepResult run_sweep(const std::string& kind) {
  SweepResult res;
  res.kind = kind;
  if (kind == "capital") {
    for (double Bc : kCapitalSweep) {
      auto inst = gen_table1(Bc);
      res.points.push_back({Bc, inst, solve_frh(inst)});
    }
  } else if (kind == "interest") {
    for (double r : kInterestSweep) {
      auto inst = gen_table1(200, 300, 3, r);
      res.points.push_back({r, inst, solve_frh(inst)});
    }
    res.no_loan_objective = solve_frh(gen_table1(200)).objective;
  } else {
    throw InputError("sweep kind must be 'capital' or 'interest'");
  }
  return res;
}

inline std::string sweep_csv(const SweepResult& res) {
  std::ostringstream os;
  os << "x,objective" << (res.no_loan_objective ? ",no_loan_objective" : "") << "\r\n";
  for (const auto& p : res.points) {
    os << format_number(p.x) << ',' << format_number(p.solution.objective);
    if (res.no_loan_objective) os << ',' << format_number(*res.no_loan_objective);
    os << "\r\n";
  }
  return os.str();
}

// ------------------------------------------------------------------- bench

enum class Scheme { Table2, Table5 };

inline const char* to_string(Scheme s) { return s == Scheme::Table2 ? "table2" : "table5"; }

inline Scheme parse_scheme(const std::string& s) {
  if (s == "table2") return Scheme::Table2;
  if (s == "table5") return Scheme::Table5;
  throw InputError("scheme must be 'table2' or 'table5'");
}

struct BenchOptions {
  Scheme scheme = Scheme::Table2;
  std::uint64_t seed = 0;
  bool oracle = false;
  int oracle_max_T = 8;
  std::optional<std::size_t> limit;  // run only the first rows of the grid
  int threads = 0;                   // 0 picks hardware concurrency
};

struct BenchRow {
  std::size_t index = 0;
  std::string id;
  int T = 0;
  double beta = 0.0;
  std::vector<std::string> levels;  // one entry per factor of the scheme
  double frh_objective = 0.0;
  double frh_seconds = 0.0;
  int lp_count = 0;
  std::optional<double> oracle_objective;
  std::optional<double> oracle_seconds;
  std::optional<double> deviation;  // relative, clamped at zero
  std::string error;
};

struct PivotCell {
  std::string factor;
  std::string level;
  int count = 0;        // rows without errors
  int compared = 0;     // rows with an oracle value
  int non_optimal = 0;  // compared rows with deviation above 1e-6
  double mean_deviation = 0.0;
  double max_deviation = 0.0;
  double mean_frh_seconds = 0.0;
  std::optional<double> mean_oracle_seconds;
};

struct RunReport {
  Scheme scheme = Scheme::Table2;
  std::uint64_t seed = 0;
  std::size_t grid_size = 0;
  std::vector<std::string> factors;
  std::vector<BenchRow> rows;
  std::vector<PivotCell> pivot;
};

inline constexpr double kNonOptimalTol = 1e-6;

namespace bench_detail {

struct Job {
  Instance instance;
  BenchRow row;
};

inline std::vector<std::string> factors(Scheme s) {
  if (s == Scheme::Table2) return {"T", "demand", "cost", "price", "capital", "loan", "beta"};
  return {"demand", "cost", "holding", "price", "capital", "rate", "beta"};
}

inline std::vector<Job> make_jobs(const BenchOptions& opt, std::size_t& grid_size) {
  std::vector<Job> jobs;
  const std::string prefix = std::string(to_string(opt.scheme)) + "-";
  const std::string suffix = "-" + std::to_string(opt.seed);
  if (opt.scheme == Scheme::Table2) {
    const auto grid = table2_grid(opt.seed);
    grid_size = grid.size();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto& g = grid[i];
      BenchRow row;
      row.levels = {std::to_string(g.T), to_string(g.demand), to_string(g.cost), to_string(g.price),
                    to_string(g.capital), to_string(g.loan), format_number(g.beta)};
      jobs.push_back({gen_table2(g), std::move(row)});
    }
  } else {
    const auto grid = table5_grid(opt.seed);
    grid_size = grid.size();
    for (const auto& g : grid) {
      BenchRow row;
      for (bool b : {g.demand_high, g.cost_high, g.holding_high, g.price_high, g.capital_high, g.rate_high, g.beta_high}) {
        row.levels.push_back(b ? "high" : "low");
      }
      jobs.push_back({gen_table5(g), std::move(row)});
    }
  }
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    auto& row = jobs[i].row;
    row.index = i;
    row.id = prefix + std::to_string(i) + suffix;
    row.T = jobs[i].instance.T;
    row.beta = jobs[i].instance.beta;
  }
  if (opt.limit && *opt.limit < jobs.size()) jobs.resize(*opt.limit);
  return jobs;
}

inline void run_job(Job& job, const BenchOptions& opt) {
  using clock = std::chrono::steady_clock;
  auto& row = job.row;
  try {
    auto t0 = clock::now();
    const auto sol = solve_frh(job.instance);
    row.frh_seconds = std::chrono::duration<double>(clock::now() - t0).count();
    row.frh_objective = sol.objective;
    row.lp_count = sol.lp_count;
    if (opt.oracle && job.instance.T <= opt.oracle_max_T) {
      OracleConfig cfg;
      cfg.max_T = opt.oracle_max_T;
      t0 = clock::now();
      const auto exact = solve_exact(job.instance, cfg);
      row.oracle_seconds = std::chrono::duration<double>(clock::now() - t0).count();
      row.oracle_objective = exact.objective;
      row.deviation = deviation(exact.objective, sol.objective);
    }
  } catch (const std::exception& e) {
    row.error = e.what();
  }
}

inline int worker_count(const BenchOptions& opt, std::size_t jobs) {
  int n = opt.threads;
  if (n <= 0) n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("LOTFLOW_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || cap < 1) throw InputError("LOTFLOW_THREADS must be a positive integer");
    n = std::min(n, static_cast<int>(std::min(cap, 4096L)));
  }
  return std::max(1, std::min(n, static_cast<int>(jobs)));
}

}  // namespace bench_detail

/// Aggregates rows into one cell per level of the pivot factors: the horizon
/// for table2, every two-level factor for table5.
inline std::vector<PivotCell> build_pivot(Scheme scheme, const std::vector<BenchRow>& rows) {
  const auto names = bench_detail::factors(scheme);
  std::vector<std::size_t> pivot_factors;
  if (scheme == Scheme::Table2) {
    pivot_factors = {0};
  } else {
    for (std::size_t k = 0; k < names.size(); ++k) pivot_factors.push_back(k);
  }
  std::vector<PivotCell> cells;
  for (std::size_t k : pivot_factors) {
    std::vector<std::string> levels;
    for (const auto& r : rows) {
      if (std::find(levels.begin(), levels.end(), r.levels[k]) == levels.end()) levels.push_back(r.levels[k]);
    }
    if (scheme == Scheme::Table5) std::sort(levels.begin(), levels.end(), std::greater<>());  // low before high
    for (const auto& level : levels) {
      PivotCell cell;
      cell.factor = names[k];
      cell.level = level;
      double dev_sum = 0.0, frh_sum = 0.0, oracle_sum = 0.0;
      for (const auto& r : rows) {
        if (r.levels[k] != level || !r.error.empty()) continue;
        ++cell.count;
        frh_sum += r.frh_seconds;
        if (!r.deviation) continue;
        ++cell.compared;
        dev_sum += *r.deviation;
        oracle_sum += r.oracle_seconds.value_or(0.0);
        cell.max_deviation = std::max(cell.max_deviation, *r.deviation);
        if (*r.deviation > kNonOptimalTol) ++cell.non_optimal;
      }
      if (cell.count > 0) cell.mean_frh_seconds = frh_sum / cell.count;
      if (cell.compared > 0) {
        cell.mean_deviation = dev_sum / cell.compared;
        cell.mean_oracle_seconds = oracle_sum / cell.compared;
      }
      cells.push_back(cell);
    }
  }
  return cells;
}

inline RunReport run_bench(const BenchOptions& opt) {
  RunReport report;
  report.scheme = opt.scheme;
  report.seed = opt.seed;
  report.factors = bench_detail::factors(opt.scheme);
  auto jobs = bench_detail::make_jobs(opt, report.grid_size);

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) bench_detail::run_job(jobs[i], opt);
  };
  {
    std::vector<std::jthread> pool;
    const int n = bench_detail::worker_count(opt, jobs.size());
    for (int k = 0; k < n; ++k) pool.emplace_back(work);
  }
  for (auto& j : jobs) report.rows.push_back(std::move(j.row));
  report.pivot = build_pivot(report.scheme, report.rows);
  return report;
}

// ----------------------------------------------------------------- writers

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline std::string percent2(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * fraction);
  return buf;
}

inline std::string rows_csv(const RunReport& rep) {
  std::ostringstream os;
  os << "index,id";
  for (const auto& f : rep.factors) os << ',' << f;
  os << ",frh_objective,oracle_objective,deviation_pct,lp_count,frh_seconds,oracle_seconds,error\r\n";
  for (const auto& r : rep.rows) {
    os << r.index << ',' << r.id;
    for (const auto& l : r.levels) os << ',' << csv_field(l);
    os << ',' << (r.error.empty() ? format_number(r.frh_objective) : "") << ','
       << (r.oracle_objective ? format_number(*r.oracle_objective) : "") << ','
       << (r.deviation ? percent2(*r.deviation) : "") << ',' << r.lp_count << ',' << format_number(r.frh_seconds) << ','
       << (r.oracle_seconds ? format_number(*r.oracle_seconds) : "") << ',' << csv_field(r.error) << "\r\n";
  }
  return os.str();
}

inline std::string pivot_csv(const RunReport& rep) {
  std::ostringstream os;
  os << "factor,level,count,compared,non_optimal,mean_deviation_pct,max_deviation_pct,mean_frh_seconds,mean_oracle_seconds\r\n";
  for (const auto& c : rep.pivot) {
    os << c.factor << ',' << c.level << ',' << c.count << ',' << c.compared << ',' << c.non_optimal << ','
       << (c.compared ? percent2(c.mean_deviation) : "") << ',' << (c.compared ? percent2(c.max_deviation) : "") << ','
       << format_number(c.mean_frh_seconds) << ','
       << (c.mean_oracle_seconds ? format_number(*c.mean_oracle_seconds) : "") << "\r\n";
  }
  return os.str();
}

inline nlohmann::ordered_json report_json(const RunReport& rep) {
  using json = nlohmann::ordered_json;
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json j;
  j["scheme"] = to_string(rep.scheme);
  j["seed"] = rep.seed;
  j["grid_size"] = rep.grid_size;
  j["row_count"] = rep.rows.size();
  j["factors"] = rep.factors;
  auto rows = json::array();
  for (const auto& r : rep.rows) {
    json jr;
    jr["index"] = r.index;
    jr["id"] = r.id;
    jr["T"] = r.T;
    jr["beta"] = r.beta;
    jr["levels"] = r.levels;
    jr["frh_objective"] = r.error.empty() ? json(r.frh_objective) : json(nullptr);
    jr["oracle_objective"] = opt(r.oracle_objective);
    jr["deviation"] = opt(r.deviation);
    jr["lp_count"] = r.lp_count;
    jr["frh_seconds"] = r.frh_seconds;
    jr["oracle_seconds"] = opt(r.oracle_seconds);
    jr["error"] = r.error.empty() ? json(nullptr) : json(r.error);
    rows.push_back(jr);
  }
  j["rows"] = rows;
  auto pivot = json::array();
  for (const auto& c : rep.pivot) {
    pivot.push_back({{"factor", c.factor},
                     {"level", c.level},
                     {"count", c.count},
                     {"compared", c.compared},
                     {"non_optimal", c.non_optimal},
                     {"mean_deviation", c.compared ? json(c.mean_deviation) : json(nullptr)},
                     {"max_deviation", c.compared ? json(c.max_deviation) : json(nullptr)},
                     {"mean_frh_seconds", c.mean_frh_seconds},
                     {"mean_oracle_seconds", opt(c.mean_oracle_seconds)}});
  }
  j["pivot"] = pivot;
  return j;
}

}  // namespace lotflow
