// Acceptance checks. Prints one PASS/FAIL line per criterion; with
// `--criterion N` only that criterion is evaluated and decides the exit code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lotflow/cli.hpp"
#include "support/random_instance.hpp"
#include "support/random_lp.hpp"
#include "support/vertex_oracle.hpp"

using namespace lotflow;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Solved {
  std::string label;
  Instance inst;
  Solution sol;
  bool heuristic = true;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

fs::path work_dir() {
  auto dir = fs::temp_directory_path() / "lotflow-acceptance";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

// Runs the sweep through the command-line front end and parses its CSV.
std::vector<std::vector<double>> cli_sweep(const std::string& kind, double& elapsed) {
  const auto path = (work_dir() / (kind + ".csv")).string();
  std::vector<std::string> args{"lotflow", "sweep", "--kind", kind, "--out", path};
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const auto t0 = std::chrono::steady_clock::now();
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  elapsed = seconds_since(t0);
  if (code != 0) throw std::runtime_error("sweep exited with " + std::to_string(code) + ": " + err.str());
  std::vector<std::vector<double>> rows;
  std::istringstream in(slurp(path));
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

// Small instances drawn the way the benchmark grid cells are, with horizons
// 3 to 6.
Instance benchmark_like(std::mt19937_64& rng, std::uint64_t seed) {
  Table2Config cfg;
  cfg.T = 3 + static_cast<int>(rng() % 4);
  cfg.demand = static_cast<DemandMode>(rng() % 3);
  cfg.cost = static_cast<CostMode>(rng() % 2);
  cfg.price = static_cast<PriceMode>(rng() % 2);
  cfg.capital = static_cast<CapitalMode>(rng() % 2);
  cfg.loan = static_cast<LoanMode>(rng() % 2);
  cfg.beta = kTable2Betas[rng() % 3];
  cfg.seed = seed;
  return gen_table2(cfg);
}

class Acceptance {
 public:
  Outcome criterion1() {
    const std::vector<double> expect{0, 70, 1891, 2300, 2360, 2360, 2360};
    double elapsed = 0.0;
    const auto rows = cli_sweep("capital", elapsed);
    Outcome o;
    std::string misses;
    if (rows.size() != expect.size()) return {false, "expected 7 sweep rows"};
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (std::abs(rows[i][1] - expect[i]) > 1.0) {
        o.pass = false;
        misses += " Bc=" + fmt(rows[i][0], 0) + " got " + fmt(rows[i][1]) + " want " + fmt(expect[i], 0) + ";";
      }
    }
    if (elapsed >= 10.0) o.pass = false;
    o.detail = "objectives [";
    for (std::size_t i = 0; i < rows.size(); ++i) o.detail += (i ? ", " : "") + fmt(rows[i][1], 2);
    o.detail += "], runtime " + fmt(elapsed, 3) + " s" + (misses.empty() ? "" : "; off by more than 1:" + misses);
    return o;
  }

  Outcome criterion2() {
    const std::vector<double> expect{2060, 2023, 1971, 1913, 1851, 1784, 1710};
    double elapsed = 0.0;
    const auto rows = cli_sweep("interest", elapsed);
    Outcome o;
    if (rows.size() != expect.size()) return {false, "expected 7 sweep rows"};
    std::string misses;
    bool decreasing = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (std::abs(rows[i][1] - expect[i]) > 1.0) {
        o.pass = false;
        misses += " r=" + fmt(rows[i][0], 2) + " got " + fmt(rows[i][1]) + ";";
      }
      if (i > 0 && !(rows[i][1] < rows[i - 1][1])) {
        o.pass = decreasing = false;
      }
      if (std::abs(rows[i][2] - 1891.0) > 1.0) {
        o.pass = false;
        misses += " no-loan reference " + fmt(rows[i][2]) + ";";
      }
    }
    if (elapsed >= 10.0) o.pass = false;
    o.detail = "objectives [";
    for (std::size_t i = 0; i < rows.size(); ++i) o.detail += (i ? ", " : "") + fmt(rows[i][1], 2);
    o.detail += "], no-loan reference " + fmt(rows[0][2], 2);
    o.detail += decreasing ? ", strictly decreasing" : ", NOT strictly decreasing";
    o.detail += ", runtime " + fmt(elapsed, 3) + " s" + (misses.empty() ? "" : "; failures:" + misses);
    return o;
  }

  Outcome criterion3() {
    const auto& set = constant_cost_set();
    int mismatches = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < set.size(); i += 2) {
      const double f = set[i].sol.objective, e = set[i + 1].sol.objective;
      const double rel = std::abs(f - e) / std::max(1.0, std::abs(e));
      worst = std::max(worst, rel);
      if (rel > 1e-6) ++mismatches;
    }
    const bool pass = mismatches == 0 && constant_cost_seconds_ < 300.0;
    return {pass, std::to_string(set.size() / 2) + " instances, " + std::to_string(mismatches) +
                      " mismatches, worst relative gap " + fmt(worst, 12) + ", runtime " + fmt(constant_cost_seconds_, 2) + " s"};
  }

  Outcome criterion4() {
    const auto& set = dominance_set();
    int violations = 0;
    double sum = 0.0, worst = 0.0;
    int nonzero = 0, profitable = 0, with_goodwill = 0;
    for (std::size_t i = 0; i < set.size(); i += 2) {
      const double f = set[i].sol.objective, e = set[i + 1].sol.objective;
      profitable += e > 1e-6;
      with_goodwill += set[i].inst.beta > 0.0;
      if (f > e + 1e-6) ++violations;
      const double dev = deviation(e, f);
      sum += dev;
      worst = std::max(worst, dev);
      nonzero += dev > 1e-6;
    }
    const std::size_t n = set.size() / 2;
    const double mean = sum / static_cast<double>(n);
    const bool pass = violations == 0 && mean <= 0.01 && worst <= 0.08;
    return {pass, std::to_string(n) + " instances, " + std::to_string(violations) +
                      " dominance violations, mean deviation " + fmt(100 * mean, 4) + "%, max " + fmt(100 * worst, 4) +
                      "%, " + std::to_string(nonzero) + " non-optimal; " + std::to_string(profitable) +
                      " with a profitable optimum, " + std::to_string(with_goodwill) + " with goodwill loss"};
  }

  Outcome criterion5() {
    int bad = 0, total = 0;
    std::string first;
    for (const auto* s : all_solutions()) {
      ++total;
      const auto rep = check_feasibility(s->inst, s->sol.trajectory);
      if (!rep.feasible) {
        if (first.empty()) first = s->label + " violates " + rep.violations.front().constraint;
        ++bad;
      }
    }
    return {bad == 0, std::to_string(total) + " solutions checked, " + std::to_string(bad) + " infeasible" +
                          (first.empty() ? "" : " (first: " + first + ")")};
  }

  Outcome criterion6() {
    int bad = 0, plans = 0;
    double worst = 0.0;
    for (const auto& s : constant_cost_set()) {
      if (!s.heuristic) continue;
      ++plans;
      const auto& tr = s.sol.trajectory;
      for (int t = 1; t < s.inst.T; ++t) {
        const double prod = tr.I[static_cast<std::size_t>(t)] * tr.plan.y[static_cast<std::size_t>(t)];
        worst = std::max(worst, prod);
        if (prod > 1e-7) {
          ++bad;
          break;
        }
      }
    }
    return {bad == 0, std::to_string(plans) + " heuristic plans, " + std::to_string(bad) +
                          " with I_t*y_{t+1} above 1e-7, worst product " + fmt(worst, 10)};
  }

  Outcome criterion7() {
    int bad = 0, total = 0, worst_used = 0, worst_budget = 0;
    double worst_ratio = 0.0;
    for (const auto* s : all_solutions()) {
      if (!s->heuristic) continue;
      ++total;
      const int T = s->inst.T, tri = T * (T + 1) / 2;
      const int budget = s->inst.beta == 0.0 ? tri : 9 * tri;
      if (s->sol.lp_count > budget) ++bad;
      const double ratio = static_cast<double>(s->sol.lp_count) / budget;
      if (ratio > worst_ratio) {
        worst_ratio = ratio;
        worst_used = s->sol.lp_count;
        worst_budget = budget;
      }
    }
    return {bad == 0, std::to_string(total) + " heuristic solves, " + std::to_string(bad) + " over budget, tightest " +
                          std::to_string(worst_used) + "/" + std::to_string(worst_budget) + " LPs"};
  }

  Outcome criterion8() {
    using testing::OracleStatus;
    int value_misses = 0, status_misses = 0;
    int by_status[3] = {0, 0, 0};
    std::mt19937_64 rng(8080);
    for (int k = 0; k < 500; ++k) {
      const auto lp = k % 2 == 0 ? testing::random_bounded_lp(rng) : testing::random_mixed_lp(rng);
      const auto want = testing::vertex_oracle(lp);
      const auto got = lp_solve(lp);
      LpStatus expect = LpStatus::Optimal;
      if (want.status == OracleStatus::Infeasible) expect = LpStatus::Infeasible;
      if (want.status == OracleStatus::Unbounded) expect = LpStatus::Unbounded;
      ++by_status[static_cast<int>(want.status)];
      if (got.status != expect) {
        ++status_misses;
        continue;
      }
      if (expect == LpStatus::Optimal &&
          std::abs(got.objective_value - want.value) > 1e-6 * std::max(1.0, std::abs(want.value))) {
        ++value_misses;
      }
    }
    return {value_misses == 0 && status_misses == 0,
            "500 LPs (" + std::to_string(by_status[static_cast<int>(OracleStatus::Optimal)]) + " optimal, " +
                std::to_string(by_status[static_cast<int>(OracleStatus::Infeasible)]) + " infeasible, " +
                std::to_string(by_status[static_cast<int>(OracleStatus::Unbounded)]) + " unbounded), " +
                std::to_string(status_misses) + " status mismatches, " + std::to_string(value_misses) + " value mismatches"};
  }

  Outcome criterion9() {
    const auto dir = work_dir() / "grids";
    fs::remove_all(dir);
    auto gen = [&](const std::string& scheme, const std::string& seed, const fs::path& out) {
      std::vector<std::string> args{"lotflow", "gen", "--scheme", scheme, "--grid", "--seed", seed, "--out", out.string()};
      std::vector<const char*> argv;
      for (const auto& a : args) argv.push_back(a.c_str());
      std::ostringstream o, e;
      if (run_cli(static_cast<int>(argv.size()), argv.data(), o, e) != 0) throw std::runtime_error(e.str());
      std::map<std::string, std::string> files;
      for (const auto& f : fs::directory_iterator(out)) files[f.path().filename().string()] = slurp(f.path());
      return files;
    };
    const auto t2a = gen("table2", "17", dir / "t2a"), t2b = gen("table2", "17", dir / "t2b");
    const auto t5a = gen("table5", "17", dir / "t5a"), t5b = gen("table5", "17", dir / "t5b");
    const auto t5c = gen("table5", "18", dir / "t5c");
    fs::remove_all(dir);
    const bool sizes = t2a.size() == 864 && t5a.size() == 1280 && table2_grid(0).size() == 864 && table5_grid(0).size() == 1280;
    const bool identical = t2a == t2b && t5a == t5b;
    std::size_t changed = 0;
    auto a = t5a.begin();
    for (auto c = t5c.begin(); a != t5a.end() && c != t5c.end(); ++a, ++c) changed += a->second != c->second;
    return {sizes && identical && changed > 0,
            "table2 " + std::to_string(t2a.size()) + " files, table5 " + std::to_string(t5a.size()) +
                " files, reruns " + (identical ? "byte-identical" : "DIFFER") + ", " + std::to_string(changed) +
                " table5 files change with the seed"};
  }

 private:
  // Heuristic and oracle solutions stored in pairs.
  const std::vector<Solved>& constant_cost_set() {
    if (!constant_cost_.empty()) return constant_cost_;
    std::mt19937_64 rng(3003);
    testing::InstanceShape shape;
    shape.T_min = 3;
    shape.T_max = 6;
    shape.constant_c = true;
    shape.allow_beta = false;
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < 200; ++i) {
      const auto inst = testing::random_instance(rng, shape);
      const auto label = "constant-cost#" + std::to_string(i);
      constant_cost_.push_back({label, inst, solve_frh(inst), true});
      constant_cost_.push_back({label, inst, solve_exact(inst), false});
    }
    constant_cost_seconds_ = seconds_since(t0);
    return constant_cost_;
  }

  const std::vector<Solved>& dominance_set() {
    if (!dominance_.empty()) return dominance_;
    std::mt19937_64 rng(4004);
    for (int i = 0; i < 300; ++i) {
      const auto inst = benchmark_like(rng, static_cast<std::uint64_t>(i) + 1);
      const auto label = "dominance#" + std::to_string(i);
      dominance_.push_back({label, inst, solve_frh(inst), true});
      dominance_.push_back({label, inst, solve_exact(inst), false});
    }
    return dominance_;
  }

  std::vector<const Solved*> all_solutions() {
    if (sweeps_.empty()) {
      for (const char* kind : {"capital", "interest"}) {
        for (auto& p : run_sweep(kind).points) {
          sweeps_.push_back({std::string(kind) + "@" + fmt(p.x, 2), p.instance, p.solution, true});
        }
      }
    }
    std::vector<const Solved*> out;
    for (const std::vector<Solved>* set : {&std::as_const(sweeps_), &constant_cost_set(), &dominance_set()}) {
      for (const auto& s : *set) out.push_back(&s);
    }
    return out;
  }

  std::vector<Solved> constant_cost_, dominance_, sweeps_;
  double constant_cost_seconds_ = 0.0;
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc == 3 && std::string(argv[1]) == "--criterion") only = std::atoi(argv[2]);
  if (argc != 1 && (only < 1 || only > 9)) {
    std::cerr << "usage: acceptance [--criterion 1..9]\n";
    return 2;
  }
  Acceptance acc;
  const std::vector<std::function<Outcome()>> criteria{
      [&] { return acc.criterion1(); }, [&] { return acc.criterion2(); }, [&] { return acc.criterion3(); },
      [&] { return acc.criterion4(); }, [&] { return acc.criterion5(); }, [&] { return acc.criterion6(); },
      [&] { return acc.criterion7(); }, [&] { return acc.criterion8(); }, [&] { return acc.criterion9(); }};
  bool all = true;
  for (int k = 1; k <= 9; ++k) {
    if (only != 0 && k != only) continue;
    Outcome o;
    try {
      o = criteria[static_cast<std::size_t>(k - 1)]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << k << ": " << (o.pass ? "PASS" : "FAIL") << " - " << o.detail << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
