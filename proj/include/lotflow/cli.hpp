#pragma once

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lotflow/bench.hpp"

namespace lotflow {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int other = 1;
inline constexpr int input = 2;
inline constexpr int guard = 3;
inline constexpr int numerical = 4;
}  // namespace exit_code

namespace cli_detail {

inline void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError("cannot create directory '" + dir + "': " + ec.message());
}

inline std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

struct SolveArgs {
  std::string engine = "frh", in, out;
  int max_T = OracleConfig{}.max_T;
};

inline int solve(const SolveArgs& a, std::ostream& out) {
  const auto inst = read_instance(a.in);
  Solution sol;
  if (a.engine == "oracle") {
    OracleConfig cfg;
    cfg.max_T = a.max_T;
    sol = solve_exact(inst, cfg);
  } else {
    sol = solve_frh(inst);
  }
  ensure_dir(a.out);
  write_text(join(a.out, "trajectory.csv"), trajectory_csv(sol.trajectory));
  auto diag = diagnostics_json(sol);
  diag["engine"] = a.engine;
  write_text(join(a.out, "diagnostics.json"), diag.dump(2) + "\n");
  out << "objective " << format_number(sol.objective) << " lp_count " << sol.lp_count << "\n";
  return exit_code::ok;
}

inline int sweep(const std::string& kind, const std::string& path, std::ostream& out) {
  const auto res = run_sweep(kind);
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) ensure_dir(parent.string());
  write_text(path, sweep_csv(res));
  for (const auto& p : res.points) out << format_number(p.x) << " " << format_number(p.solution.objective) << "\n";
  return exit_code::ok;
}

inline int bench(const BenchOptions& opt, const std::string& dir, std::ostream& out) {
  const auto rep = run_bench(opt);
  ensure_dir(dir);
  write_text(join(dir, "rows.csv"), rows_csv(rep));
  write_text(join(dir, "pivot.csv"), pivot_csv(rep));
  write_text(join(dir, "report.json"), report_json(rep).dump(2) + "\n");
  std::size_t failed = 0;
  for (const auto& r : rep.rows) failed += r.error.empty() ? 0 : 1;
  out << "scheme " << to_string(rep.scheme) << " grid_size " << rep.grid_size << " rows " << rep.rows.size()
      << " failed " << failed << "\n";
  return exit_code::ok;
}

struct GenArgs {
  std::string scheme, out;
  bool grid = false;
  std::size_t index = 0;
  std::uint64_t seed = 0;
  double Bc = 200, BL = 0, r = 0;
  int TL = 0;
};

inline int gen(const GenArgs& a, std::ostream& out) {
  std::vector<Instance> instances;
  if (a.scheme == "table1") {
    instances.push_back(gen_table1(a.Bc, a.BL, a.TL, a.r));
  } else if (a.scheme == "table2") {
    for (const auto& c : table2_grid(a.seed)) instances.push_back(gen_table2(c));
  } else {
    for (const auto& c : table5_grid(a.seed)) instances.push_back(gen_table5(c));
  }
  std::size_t first = 0, last = instances.size();
  if (!a.grid) {
    if (a.index >= instances.size()) {
      throw InputError("--index must be below the grid size " + std::to_string(instances.size()));
    }
    first = a.index;
    last = a.index + 1;
  }
  ensure_dir(a.out);
  for (std::size_t i = first; i < last; ++i) {
    validate(instances[i]);
    const auto name = a.scheme + "-" + std::to_string(i) + "-" + std::to_string(a.seed) + ".json";
    write_text(join(a.out, name), instance_to_string(instances[i]));
  }
  out << "wrote " << (last - first) << " instance file(s) to " << a.out << "\n";
  return exit_code::ok;
}

}  // namespace cli_detail

/// Entry point of the command-line tool. Returns the process exit code:
/// 2 for unusable input, 3 for the oracle horizon guard, 4 for LP failures.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Capital-flow constrained lot sizing: heuristic, exact oracle and benchmarks", "lotflow"};
  app.require_subcommand(1);

  cli_detail::SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one instance file");
  solve_cmd->add_option("--engine", solve.engine, "Solver")->check(CLI::IsMember({"frh", "oracle"}));
  solve_cmd->add_option("--in", solve.in, "Instance JSON")->required();
  solve_cmd->add_option("--out", solve.out, "Output directory")->required();
  solve_cmd->add_option("--max-T", solve.max_T, "Oracle horizon limit")->check(CLI::PositiveNumber);

  std::string sweep_kind, sweep_out;
  auto* sweep_cmd = app.add_subcommand("sweep", "Capital or interest sweep on the showcase instance");
  sweep_cmd->add_option("--kind", sweep_kind)->required()->check(CLI::IsMember({"capital", "interest"}));
  sweep_cmd->add_option("--out", sweep_out, "CSV file")->required();

  BenchOptions bench;
  std::string bench_scheme, bench_out;
  std::optional<std::size_t> bench_limit;
  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark grid");
  bench_cmd->add_option("--scheme", bench_scheme)->required()->check(CLI::IsMember({"table2", "table5"}));
  bench_cmd->add_option("--seed", bench.seed)->required();
  bench_cmd->add_flag("--oracle", bench.oracle, "Compare against the exact oracle where T is small enough");
  bench_cmd->add_option("--oracle-max-T", bench.oracle_max_T)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--limit", bench_limit, "Only run the first N grid rows");
  bench_cmd->add_option("--threads", bench.threads, "Worker count (LOTFLOW_THREADS caps it)")->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--out", bench_out, "Output directory")->required();

  cli_detail::GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Write generated instance files");
  gen_cmd->add_option("--scheme", gen.scheme)->required()->check(CLI::IsMember({"table1", "table2", "table5"}));
  gen_cmd->add_flag("--grid", gen.grid, "Write every grid cell");
  gen_cmd->add_option("--index", gen.index, "Grid cell to write without --grid");
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();
  gen_cmd->add_option("--Bc", gen.Bc, "table1 own capital")->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--BL", gen.BL, "table1 loan")->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--TL", gen.TL, "table1 loan term")->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--r", gen.r, "table1 interest rate")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_code::ok : exit_code::input;
  }

  try {
    if (*solve_cmd) return cli_detail::solve(solve, out);
    if (*sweep_cmd) return cli_detail::sweep(sweep_kind, sweep_out, out);
    if (*bench_cmd) {
      bench.scheme = parse_scheme(bench_scheme);
      bench.limit = bench_limit;
      return cli_detail::bench(bench, bench_out, out);
    }
    return cli_detail::gen(gen, out);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return exit_code::input;
  } catch (const GuardError& e) {
    err << "guard: " << e.what() << "\n";
    return exit_code::guard;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return exit_code::numerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::other;
  }
}

}  // namespace lotflow
