#pragma once

// Command-line front end. Exit codes: 10 sat, 20 unsat, 0 for generation,
// benchmarking and undetermined fast checks, 1 usage or parse errors,
// 2 internal contract violations.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mixsimplex/bench.hpp"
#include "mixsimplex/constraints.hpp"
#include "mixsimplex/driver.hpp"
#include "mixsimplex/generator.hpp"
#include "mixsimplex/witness.hpp"

namespace mixsimplex {

inline constexpr int kExitSat = 10;
inline constexpr int kExitUnsat = 20;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInternal = 2;

namespace detail {

inline void append_stats(const std::string& path, const BenchRow& row) {
  bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot write " + path);
  if (fresh) out << kBenchHeader << '\n';
  write_bench_row(out, row, false);
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact linear-arithmetic feasibility with floating-point warm start"};
  std::string input;
  std::string mode_name = "mixed";
  bool certify = false;
  std::string stats_path;
  std::vector<std::int64_t> gen;
  std::uint64_t seed = 0;
  std::string bench_dir;
  std::vector<std::string> bench_modes{"rational", "mixed"};
  std::string float_algo = "dual";
  DriverOptions opts;

  app.add_option("file", input, "Constraint file ('-' or omitted: standard input)");
  app.add_option("--mode", mode_name, "Decision mode")
      ->check(CLI::IsMember({"rational", "mixed", "fast"}));
  app.add_flag("--certify", certify, "Print the witness point or Farkas certificate");
  app.add_option("--stats", stats_path, "Append a CSV statistics line to this file");
  auto* gen_opt = app.add_option("--gen", gen, "Generate an instance: ROWS COLS RANGE")
                      ->expected(3);
  app.add_option("--seed", seed, "Generator seed");
  app.add_option("--bench", bench_dir, "Run every *.lra file in a directory, CSV to stdout");
  app.add_option("--modes", bench_modes, "Modes for --bench")
      ->delimiter(',')
      ->check(CLI::IsMember({"rational", "mixed"}));
  app.add_option("--tol-feas", opts.float_options.feasibility_tol, "Float feasibility tolerance");
  app.add_option("--tol-pivot", opts.float_options.pivot_tol, "Float pivot tolerance");
  app.add_option("--iter-cap", opts.float_options.iteration_cap,
                 "Float iteration cap (0: 20 * (rows + columns))");
  app.add_option("--float-algo", float_algo, "Float simplex variant")
      ->check(CLI::IsMember({"primal", "dual"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitUsage;
  }
  opts.float_options.algorithm =
      float_algo == "primal" ? FloatAlgorithm::PrimalPhase1 : FloatAlgorithm::BoundedDual;

  try {
    if (*gen_opt) {
      if (gen[0] <= 0 || gen[1] <= 0 || gen[2] <= 0) {
        err << "--gen: sizes and range must be positive\n";
        return kExitUsage;
      }
      out << generate({static_cast<std::size_t>(gen[0]), static_cast<std::size_t>(gen[1]), gen[2],
                       seed});
      return 0;
    }
    if (!bench_dir.empty()) {
      std::vector<Mode> modes;
      for (const auto& m : bench_modes) modes.push_back(m == "rational" ? Mode::Rational : Mode::Mixed);
      auto rows = run_bench(bench_dir, modes, opts);
      write_bench_csv(out, rows, modes);
      return 0;
    }

    std::string text;
    if (input.empty() || input == "-") {
      std::ostringstream ss;
      ss << std::cin.rdbuf();
      text = ss.str();
    } else {
      text = read_file(input);
    }
    ConstraintSystem sys = parse(text);
    Problem problem = build_problem(sys);
    std::string label = input.empty() ? "-" : input;

    if (mode_name == "fast") {
      FastDecision f = fast_check(problem, opts);
      if (f.result == FastResult::UnsatCertified) {
        if (certify)
          write_verdict(out, *f.verdict, sys.var_names);
        else
          out << "unsat\n";
        return kExitUnsat;
      }
      out << (f.result == FastResult::LikelySat ? "likely-sat\n" : "unknown\n");
      return 0;
    }

    Mode mode = mode_name == "rational" ? Mode::Rational : Mode::Mixed;
    Decision d = decide(problem, mode, opts);
    if (certify)
      write_verdict(out, d.verdict, sys.var_names);
    else
      out << (d.verdict.sat() ? "sat\n" : "unsat\n");
    if (!stats_path.empty()) {
      BenchRow row;
      row.file = label;
      row.mode = mode;
      row.verdict = d.verdict.sat() ? "sat" : "unsat";
      row.stats = d.stats;
      detail::append_stats(stats_path, row);
    }
    return d.verdict.sat() ? kExitSat : kExitUnsat;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ContractViolation& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace mixsimplex
